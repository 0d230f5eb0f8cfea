"""Speech-translation triples and manifest / frame-file I/O.

A corpus item bundles a feature-frame sequence with its transcription
(tokens + UPOS tags), translation tokens, per-token frame intervals, and
a source-target word alignment.  Manifests are JSON Lines, one record per
item; frames live in a plain-text numeric format so round trips are
bit-exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .alignio import WordAlignment, parse_pharaoh, format_pharaoh
from .errors import FormatError, ValidationError

MANIFEST_FIELDS = (
    "id",
    "speaker",
    "frames",
    "frames_path",
    "src_tokens",
    "src_pos",
    "tgt_tokens",
    "time_align",
    "word_align",
)


class FrameSeq:
    """A T x D sequence of finite feature frames (read-only float64)."""

    __slots__ = ("data",)

    def __init__(self, data) -> None:
        try:
            arr = np.asarray(data, dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"non-rectangular frames: {exc}") from None
        if arr.ndim != 2:
            raise ValidationError(
                f"frames must be a T x D matrix, got {arr.ndim} dimension(s)"
            )
        if arr.shape[1] < 1:
            raise ValidationError("frame dimension D must be >= 1")
        if not np.isfinite(arr).all():
            raise ValidationError("non-finite frame value")
        arr = arr.copy()
        arr.flags.writeable = False
        self.data = arr

    @property
    def dim(self) -> int:
        return self.data.shape[1]

    def __len__(self) -> int:
        return self.data.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, FrameSeq):
            return NotImplemented
        return self.data.shape == other.data.shape and bool(
            (self.data == other.data).all()
        )

    def __repr__(self) -> str:
        return f"FrameSeq(T={len(self)}, D={self.dim})"

    def rows(self) -> list[list[float]]:
        """Frames as nested lists, for JSON serialization."""
        return [list(row) for row in self.data]


@dataclass(frozen=True)
class Triple:
    """One corpus item: frames, transcription, translation, alignments."""

    id: str
    speaker: str
    frames: FrameSeq
    src_tokens: tuple[str, ...]
    src_pos: tuple[str, ...]
    tgt_tokens: tuple[str, ...]
    time_align: tuple[tuple[int, int], ...]
    word_align: WordAlignment
    frames_path: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "src_tokens", tuple(self.src_tokens))
        object.__setattr__(self, "src_pos", tuple(self.src_pos))
        object.__setattr__(self, "tgt_tokens", tuple(self.tgt_tokens))
        object.__setattr__(
            self, "time_align", tuple((int(s), int(e)) for s, e in self.time_align)
        )

    @property
    def num_frames(self) -> int:
        return len(self.frames)

    @property
    def num_src(self) -> int:
        return len(self.src_tokens)

    @property
    def num_tgt(self) -> int:
        return len(self.tgt_tokens)


@dataclass(frozen=True)
class Corpus:
    """An ordered, id-indexed collection of triples."""

    items: tuple[Triple, ...]
    _index: dict[str, Triple] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "items", tuple(self.items))
        index: dict[str, Triple] = {}
        for t in self.items:
            if t.id in index:
                raise ValidationError(f"duplicate id: {t.id!r}")
            index[t.id] = t
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self.items)

    def __getitem__(self, key: str) -> Triple:
        return self._index[key]

    def __contains__(self, key: str) -> bool:
        return key in self._index

    @property
    def frame_dim(self) -> int:
        """Common frame dimension; raises if items disagree."""
        dims = {t.frames.dim for t in self.items}
        if len(dims) != 1:
            raise ValidationError(f"frame dimension not uniform across corpus: {sorted(dims)}")
        return dims.pop()


def validate_triple(t: Triple) -> list[str]:
    """Check every Triple invariant; returns one message per violation.

    Violations are data, not faults: an empty list means the triple is
    consistent.
    """
    out: list[str] = []
    n, m, nframes = t.num_src, t.num_tgt, t.num_frames
    if nframes < 1:
        out.append("frames: empty (T must be >= 1)")
    if n < 1:
        out.append("src_tokens: empty (N must be >= 1)")
    if m < 1:
        out.append("tgt_tokens: empty (M must be >= 1)")
    if len(t.src_pos) != n:
        out.append(f"src_pos: length {len(t.src_pos)} != |src_tokens| {n}")
    if len(t.time_align) != n:
        out.append(f"time_align: length {len(t.time_align)} != |src_tokens| {n}")
    for k, (s, e) in enumerate(t.time_align):
        if s > e:
            out.append(f"time_align: interval {k} start {s} exceeds end {e}")
        if s < 0 or e > nframes:
            out.append(f"time_align: interval {k} [{s},{e}) outside [0,{nframes}]")
    for k in range(1, len(t.time_align)):
        s0, e0 = t.time_align[k - 1]
        s1, e1 = t.time_align[k]
        if s1 < s0 or e1 < e0:
            out.append(f"time_align: intervals {k - 1} and {k} not monotonic")
    spans = [(k, s, e) for k, (s, e) in enumerate(t.time_align) if s < e]
    for a in range(len(spans)):
        for b in range(a + 1, len(spans)):
            ka, sa, ea = spans[a]
            kb, sb, eb = spans[b]
            if sa < eb and sb < ea:
                out.append(f"time_align overlap: intervals {ka} and {kb}")
    for i, j in sorted(t.word_align.pairs):
        if i >= n:
            out.append(f"word_align: src index out of range: ({i},{j}) with N={n}")
        if j >= m:
            out.append(f"word_align: tgt index out of range: ({i},{j}) with M={m}")
    return out


def read_frames(path: str | Path) -> FrameSeq:
    """Read a frame file: header line ``T D`` then T rows of D floats."""
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines:
        raise FormatError(f"{path}: empty frame file")
    header = lines[0].split()
    if len(header) != 2:
        raise FormatError(f"{path}: header must be 'T D', got {lines[0]!r}")
    try:
        t, d = int(header[0]), int(header[1])
    except ValueError:
        raise FormatError(f"{path}: non-integer header {lines[0]!r}") from None
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != t:
        raise FormatError(f"{path}: row count mismatch: header says {t}, found {len(body)}")
    rows: list[list[float]] = []
    for lineno, ln in enumerate(body, start=2):
        cells = ln.split()
        if len(cells) != d:
            raise FormatError(
                f"{path}:{lineno}: expected {d} values per row, found {len(cells)}"
            )
        try:
            row = [float(c) for c in cells]
        except ValueError as exc:
            raise FormatError(f"{path}:{lineno}: non-numeric cell: {exc}") from None
        if not all(np.isfinite(row)):
            raise FormatError(f"{path}:{lineno}: non-finite frame value")
        rows.append(row)
    if t == 0:
        return FrameSeq(np.zeros((0, d)))
    return FrameSeq(rows)


def write_frames(frames: FrameSeq, path: str | Path) -> None:
    """Write a frame file in the exact format read_frames accepts."""
    path = Path(path)
    lines = [f"{len(frames)} {frames.dim}"]
    for row in frames.data:
        lines.append(" ".join(repr(float(v)) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _triple_from_record(rec: dict, base_dir: Path) -> Triple:
    missing = [
        k
        for k in ("id", "speaker", "src_tokens", "src_pos", "tgt_tokens", "time_align", "word_align")
        if k not in rec
    ]
    if missing:
        raise FormatError(f"missing field(s): {', '.join(missing)}")
    unknown = [k for k in rec if k not in MANIFEST_FIELDS]
    if unknown:
        raise FormatError(f"unknown field(s): {', '.join(unknown)}")
    frames_path = rec.get("frames_path")
    if frames_path is not None:
        frames = read_frames(base_dir / frames_path)
    elif "frames" in rec:
        frames = FrameSeq(rec["frames"])
    else:
        raise FormatError("record needs 'frames' or 'frames_path'")
    try:
        time_align = tuple((int(s), int(e)) for s, e in rec["time_align"])
    except (TypeError, ValueError):
        raise FormatError("time_align must be a list of [start, end] integer pairs") from None
    return Triple(
        id=str(rec["id"]),
        speaker=str(rec["speaker"]),
        frames=frames,
        src_tokens=tuple(str(w) for w in rec["src_tokens"]),
        src_pos=tuple(str(p) for p in rec["src_pos"]),
        tgt_tokens=tuple(str(w) for w in rec["tgt_tokens"]),
        time_align=time_align,
        word_align=parse_pharaoh(str(rec["word_align"])),
        frames_path=frames_path,
    )


def iter_manifest_records(path: str | Path) -> Iterator[tuple[int, dict]]:
    """Yield (line_number, raw_record) for each non-blank manifest line."""
    path = Path(path)
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{path}:{lineno}: malformed record: {exc.msg}") from None
            if not isinstance(rec, dict):
                raise FormatError(f"{path}:{lineno}: record must be an object")
            yield lineno, rec


def load_manifest(path: str | Path) -> Corpus:
    """Load and validate a manifest; every returned triple is consistent.

    Raises FormatError for malformed records (with line numbers) and
    ValidationError for invariant violations (naming the id and field).
    """
    path = Path(path)
    base_dir = path.parent
    items: list[Triple] = []
    seen: set[str] = set()
    for lineno, rec in iter_manifest_records(path):
        try:
            triple = _triple_from_record(rec, base_dir)
        except FormatError as exc:
            raise FormatError(f"{path}:{lineno}: {exc}") from None
        except ValidationError as exc:
            raise ValidationError(f"{path}:{lineno}: {rec.get('id', '?')}: {exc}") from None
        if triple.id in seen:
            raise FormatError(f"{path}:{lineno}: duplicate id: {triple.id!r}")
        seen.add(triple.id)
        violations = validate_triple(triple)
        if violations:
            raise ValidationError(f"{path}:{lineno}: {triple.id}: {violations[0]}")
        items.append(triple)
    return Corpus(tuple(items))


def triple_to_record(t: Triple) -> dict:
    """Canonical manifest record for a triple (fixed key order)."""
    rec: dict = {"id": t.id, "speaker": t.speaker}
    if t.frames_path is not None:
        rec["frames_path"] = t.frames_path
    else:
        rec["frames"] = t.frames.rows()
    rec["src_tokens"] = list(t.src_tokens)
    rec["src_pos"] = list(t.src_pos)
    rec["tgt_tokens"] = list(t.tgt_tokens)
    rec["time_align"] = [[s, e] for s, e in t.time_align]
    rec["word_align"] = format_pharaoh(t.word_align)
    return rec


def write_manifest(corpus: Corpus | Iterable[Triple], path: str | Path) -> None:
    """Write a manifest in canonical form (load -> write round-trips)."""
    lines = [json.dumps(triple_to_record(t)) for t in corpus]
    Path(path).write_text("".join(ln + "\n" for ln in lines))

"""Parsers for source-target word alignments and word-vector files.

Pharaoh alignments are whitespace-separated ``i-j`` index pairs (the
standard aligner output format).  Word vectors use the common text
layout: a ``V D`` header followed by one ``word f1 .. fD`` line per word.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .errors import FormatError, ValidationError

_PAIR_RE = re.compile(r"^(\d+)-(\d+)$")


@dataclass(frozen=True)
class WordAlignment:
    """A set of (src_index, tgt_index) pairs with set semantics."""

    pairs: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "pairs", frozenset((int(i), int(j)) for i, j in self.pairs)
        )
        for i, j in self.pairs:
            if i < 0 or j < 0:
                raise ValidationError(f"negative alignment index: ({i},{j})")

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self.pairs))

    def __contains__(self, pair: tuple[int, int]) -> bool:
        return pair in self.pairs

    def tgt_for_src(self, i: int) -> tuple[int, ...]:
        """Target indices aligned to source position i, ascending."""
        return tuple(sorted(j for u, j in self.pairs if u == i))

    def shifted(self, d_src: int, d_tgt: int) -> "WordAlignment":
        return WordAlignment(frozenset((i + d_src, j + d_tgt) for i, j in self.pairs))


def parse_pharaoh(text: str) -> WordAlignment:
    """Parse whitespace-separated ``i-j`` tokens into a WordAlignment."""
    pairs = set()
    for tok in text.split():
        m = _PAIR_RE.match(tok)
        if m is None:
            raise FormatError(f"malformed alignment token: {tok!r}")
        pairs.add((int(m.group(1)), int(m.group(2))))
    return WordAlignment(frozenset(pairs))


def format_pharaoh(a: WordAlignment) -> str:
    """Canonical Pharaoh string: pairs sorted, single-space separated."""
    return " ".join(f"{i}-{j}" for i, j in sorted(a.pairs))


@dataclass(frozen=True)
class EmbeddingTable:
    """Word vectors of a common dimension, insertion-ordered."""

    dim: int
    vectors: dict[str, np.ndarray]

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValidationError("embedding dimension must be >= 1")
        for word, vec in self.vectors.items():
            if vec.shape != (self.dim,):
                raise ValidationError(
                    f"dimension mismatch for {word!r}: {vec.shape[0]} != {self.dim}"
                )
            if not np.isfinite(vec).all():
                raise ValidationError(f"non-finite embedding value for {word!r}")

    def __contains__(self, word: str) -> bool:
        return word in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)

    @property
    def words(self) -> tuple[str, ...]:
        return tuple(self.vectors)

    def vector(self, word: str) -> np.ndarray:
        if word not in self.vectors:
            raise KeyError(word)
        return self.vectors[word]


def parse_embeddings(path: str | Path) -> EmbeddingTable:
    """Read a word2vec-style text vector file."""
    path = Path(path)
    lines = [ln for ln in path.read_text().splitlines() if ln.strip()]
    if not lines:
        raise FormatError(f"{path}: empty embedding file")
    header = lines[0].split()
    if len(header) != 2:
        raise FormatError(f"{path}: header must be 'V D', got {lines[0]!r}")
    try:
        v, d = int(header[0]), int(header[1])
    except ValueError:
        raise FormatError(f"{path}: non-integer header {lines[0]!r}") from None
    body = lines[1:]
    if len(body) != v:
        raise FormatError(f"{path}: header mismatch: expected {v} entries, found {len(body)}")
    vectors: dict[str, np.ndarray] = {}
    for lineno, ln in enumerate(body, start=2):
        cells = ln.split()
        if len(cells) != d + 1:
            raise FormatError(
                f"{path}:{lineno}: dimension mismatch: expected {d} floats, found {len(cells) - 1}"
            )
        word = cells[0]
        if word in vectors:
            raise FormatError(f"{path}:{lineno}: duplicate embedding for {word!r}")
        try:
            vec = np.array([float(c) for c in cells[1:]], dtype=np.float64)
        except ValueError as exc:
            raise FormatError(f"{path}:{lineno}: non-numeric value: {exc}") from None
        if not np.isfinite(vec).all():
            raise FormatError(f"{path}:{lineno}: non-finite embedding value")
        vec.flags.writeable = False
        vectors[word] = vec
    return EmbeddingTable(dim=d, vectors=vectors)


def write_embeddings(table: EmbeddingTable, path: str | Path) -> None:
    """Write the vector file back out (parse -> write round-trips)."""
    lines = [f"{len(table)} {table.dim}"]
    for word, vec in table.vectors.items():
        lines.append(word + " " + " ".join(repr(float(x)) for x in vec))
    Path(path).write_text("\n".join(lines) + "\n")

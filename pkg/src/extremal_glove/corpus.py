"""Corpus pipeline: vocabulary construction and co-occurrence counting.

Tokenization is plain whitespace splitting with no case folding or
punctuation stripping; pre-clean the text before feeding it in.

Co-occurrence masses are accumulated exactly.  Each position pair at
distance d contributes 1/d, which is an awkward float to sum, so the
counter instead accumulates the integer numerator ``lcm(1..window) / d``
per cell and performs a single correctly rounded division at the end.
The emitted values are therefore independent of chunking and of
accumulation order, and equal the mathematically exact mass rounded once
to float64.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from .errors import ParseError

# Tokens per encoding chunk and pending entries before a merge pass.
_CHUNK_TOKENS = 1_000_000
_MERGE_LIMIT = 24_000_000
# Total integer mass allowed before int64 cell sums could overflow.
_WEIGHT_LIMIT = 2**62

COOC_DTYPE = np.dtype([("i", "<u4"), ("j", "<u4"), ("x", "<f8")])


class CoocRecord(NamedTuple):
    """One sparse co-occurrence cell: word indices and accumulated mass."""

    i: int
    j: int
    x: float


@dataclass
class VocabTable:
    """Ranked vocabulary: tokens sorted by count descending.

    Rank of a token is its 1-based position; ties are broken by first
    appearance in the corpus, so ranks are deterministic.
    """

    tokens: list[str]
    counts: np.ndarray
    index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if len(self.tokens) != len(self.counts):
            raise ValueError("tokens and counts length mismatch")
        if self.counts.size:
            if not (self.counts > 0).all():
                raise ValueError("all counts must be positive")
            if (np.diff(self.counts) > 0).any():
                raise ValueError("counts must be sorted descending")
        self.index = {t: r for r, t in enumerate(self.tokens)}
        if len(self.index) != len(self.tokens):
            raise ValueError("tokens must be unique")

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def entries(self) -> list[tuple[str, int]]:
        return [(t, int(c)) for t, c in zip(self.tokens, self.counts)]

    @property
    def max_count(self) -> int:
        return int(self.counts[0]) if len(self) else 0

    def encode(self, tokens: Iterable[str]) -> np.ndarray:
        """Map tokens to ranks (0-based); out-of-vocabulary becomes -1."""
        idx = self.index
        return np.fromiter((idx.get(t, -1) for t in tokens), dtype=np.int32)

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for tok, cnt in zip(self.tokens, self.counts):
                fh.write(f"{tok} {int(cnt)}\n")

    @classmethod
    def load(cls, path: str | Path) -> "VocabTable":
        tokens: list[str] = []
        counts: list[int] = []
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                parts = line.split()
                if len(parts) != 2:
                    raise ParseError(f"{path}:{lineno}: expected 'token count'")
                try:
                    cnt = int(parts[1])
                except ValueError:
                    raise ParseError(f"{path}:{lineno}: bad count {parts[1]!r}") from None
                tokens.append(parts[0])
                counts.append(cnt)
        return cls(tokens, np.asarray(counts, dtype=np.int64))


class CoocRecords:
    """Sparse co-occurrence cells held as parallel arrays.

    Iterating yields :class:`CoocRecord` tuples; the arrays themselves are
    what the trainer consumes.
    """

    def __init__(self, i: np.ndarray, j: np.ndarray, x: np.ndarray) -> None:
        self.i = np.ascontiguousarray(i, dtype=np.uint32)
        self.j = np.ascontiguousarray(j, dtype=np.uint32)
        self.x = np.ascontiguousarray(x, dtype=np.float64)
        if not (self.i.shape == self.j.shape == self.x.shape):
            raise ValueError("index and value arrays must have equal length")
        if self.x.size and not (self.x > 0).all():
            raise ValueError("all co-occurrence masses must be positive")

    def __len__(self) -> int:
        return self.x.size

    def __iter__(self) -> Iterator[CoocRecord]:
        for i, j, x in zip(self.i, self.j, self.x):
            yield CoocRecord(int(i), int(j), float(x))

    def __getitem__(self, idx: int) -> CoocRecord:
        return CoocRecord(int(self.i[idx]), int(self.j[idx]), float(self.x[idx]))

    def to_dict(self) -> dict[tuple[int, int], float]:
        return {(int(i), int(j)): float(x) for i, j, x in zip(self.i, self.j, self.x)}

    @classmethod
    def from_records(cls, records: Iterable[tuple[int, int, float]]) -> "CoocRecords":
        rows = list(records)
        if not rows:
            return cls(np.empty(0, np.uint32), np.empty(0, np.uint32), np.empty(0, np.float64))
        i, j, x = zip(*rows)
        return cls(np.asarray(i), np.asarray(j), np.asarray(x))

    def save(self, path: str | Path) -> None:
        """Write the little-endian (u32 i, u32 j, f64 x) binary format.

        Indices are 0-based (the classic tool chain writes 1-based ones).
        """
        out = np.empty(len(self), dtype=COOC_DTYPE)
        out["i"] = self.i
        out["j"] = self.j
        out["x"] = self.x
        out.tofile(str(path))

    @classmethod
    def load(cls, path: str | Path) -> "CoocRecords":
        raw = np.fromfile(str(path), dtype=COOC_DTYPE)
        return cls(raw["i"].copy(), raw["j"].copy(), raw["x"].copy())


def tokens_from_file(path: str | Path, chunk_chars: int = 1 << 22) -> Iterator[str]:
    """Stream whitespace-separated tokens without loading the whole file."""
    carry = ""
    with open(path, encoding="utf-8") as fh:
        while True:
            block = fh.read(chunk_chars)
            if not block:
                break
            block = carry + block
            parts = block.split()
            if block[-1].isspace():
                carry = ""
            else:
                carry = parts.pop() if parts else ""
            yield from parts
    if carry:
        yield carry


def build_vocab(tokens: Iterable[str], min_count: int) -> VocabTable:
    """Count tokens and keep those occurring at least ``min_count`` times.

    Entries are ordered by count descending, ties by first appearance.
    """
    if min_count < 1:
        raise ValueError("min_count must be a positive integer")
    counter: Counter[str] = Counter()
    chunk: list[str] = []
    for tok in tokens:
        chunk.append(tok)
        if len(chunk) >= _CHUNK_TOKENS:
            counter.update(chunk)
            chunk.clear()
    counter.update(chunk)
    # Counter preserves first-appearance order; the sort is stable.
    kept = [(t, c) for t, c in counter.items() if c >= min_count]
    kept.sort(key=lambda tc: tc[1], reverse=True)
    return VocabTable([t for t, _ in kept], np.asarray([c for _, c in kept], dtype=np.int64))


def _token_chunks(tokens: Iterable[str], size: int) -> Iterator[list[str]]:
    chunk: list[str] = []
    for tok in tokens:
        chunk.append(tok)
        if len(chunk) >= size:
            yield chunk
            chunk = []
    if chunk:
        yield chunk


def _reduce_cells(keys: np.ndarray, vals: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Group-sum integer values by key; exact for int64 inputs."""
    order = np.argsort(keys)
    keys = keys[order]
    vals = vals[order]
    starts = np.ones(keys.size, dtype=bool)
    starts[1:] = keys[1:] != keys[:-1]
    idx = np.flatnonzero(starts)
    return keys[idx], np.add.reduceat(vals, idx)


class _CellAccumulator:
    """Buffered exact accumulation of (cell key, integer numerator) pairs."""

    def __init__(self) -> None:
        self._keys: list[np.ndarray] = []
        self._vals: list[np.ndarray] = []
        self._pending = 0

    def add(self, keys: np.ndarray, vals: np.ndarray) -> None:
        if keys.size == 0:
            return
        self._keys.append(keys)
        self._vals.append(vals)
        self._pending += keys.size
        if self._pending > _MERGE_LIMIT:
            self._merge()

    def _merge(self) -> None:
        keys, vals = _reduce_cells(np.concatenate(self._keys), np.concatenate(self._vals))
        self._keys = [keys]
        self._vals = [vals]
        self._pending = keys.size

    def result(self) -> tuple[np.ndarray, np.ndarray]:
        if not self._keys:
            return np.empty(0, np.int64), np.empty(0, np.int64)
        self._merge()
        return self._keys[0], self._vals[0]


def count_cooccurrences(tokens: Iterable[str], vocab: VocabTable, window: int) -> CoocRecords:
    """Accumulate symmetric 1/distance co-occurrence masses.

    For every ordered pair of in-vocabulary tokens at positions p < q with
    q - p <= window, mass 1/(q - p) is added to both (i, j) and (j, i).
    Out-of-vocabulary tokens occupy positions but contribute nothing.
    Cells come back sorted by (i, j) with strictly positive mass.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    n_words = len(vocab)
    lcm = math.lcm(*range(1, window + 1))
    numer = [lcm // d for d in range(1, window + 1)]

    acc = _CellAccumulator()
    tail = np.empty(0, dtype=np.int32)
    total_weight = 0  # Python int: overflow guard for the int64 cell sums
    for chunk in _token_chunks(tokens, _CHUNK_TOKENS):
        ids = vocab.encode(chunk)
        ext = np.concatenate([tail, ids]) if tail.size else ids
        t = tail.size
        for dist in range(1, window + 1):
            stop = ext.size - dist
            if stop <= 0:
                break
            start = max(0, t - dist)
            if start >= stop:
                continue
            left = ext[start:stop]
            right = ext[start + dist :]
            valid = (left >= 0) & (right >= 0)
            n_valid = int(np.count_nonzero(valid))
            if n_valid == 0:
                continue
            keys = left[valid].astype(np.int64) * n_words + right[valid]
            acc.add(keys, np.full(n_valid, numer[dist - 1], dtype=np.int64))
            total_weight += n_valid * numer[dist - 1]
            if total_weight >= _WEIGHT_LIMIT:
                raise OverflowError("window too large for exact counting on a corpus this size")
        tail = ext[max(0, ext.size - window) :]

    fwd_keys, fwd_vals = acc.result()
    if fwd_keys.size == 0:
        return CoocRecords(np.empty(0, np.uint32), np.empty(0, np.uint32), np.empty(0, np.float64))
    # Symmetric context: every forward cell also feeds its transpose.
    rev_keys = (fwd_keys % n_words) * n_words + fwd_keys // n_words
    keys, vals = _reduce_cells(
        np.concatenate([fwd_keys, rev_keys]), np.concatenate([fwd_vals, fwd_vals])
    )
    x = vals.astype(np.float64) / lcm
    return CoocRecords((keys // n_words).astype(np.uint32), (keys % n_words).astype(np.uint32), x)


def shuffle_records(records: CoocRecords, seed: int) -> CoocRecords:
    """Seeded permutation of the records; same seed, same order."""
    perm = np.random.default_rng(seed).permutation(len(records))
    return CoocRecords(records.i[perm], records.j[perm], records.x[perm])

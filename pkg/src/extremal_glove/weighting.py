"""Loss weighting schemes for co-occurrence records.

Two schemes share one interface:

* ``ClassicGlove``: f(x) = (x / x_max)^alpha capped at 1.0.
* ``ExtremalProduct``: f(x_i, x_j) = (x_i / m)^alpha * (x_j / m)^alpha where
  x_i, x_j are the occurrence counts of the pair's words and m is the
  largest count in the vocabulary.  No cap: the product form stays below
  1.0 on its own whenever x_i * x_j < m^2, and the two schemes agree
  through classic(x_i * x_j, m^2) on that range.

``record_weight`` dispatches on the scheme type so the trainer stays
agnostic; ``batch_weights`` is the vectorized form used to precompute the
per-record weight column once before training.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .corpus import CoocRecords, VocabTable
from .errors import NonPositiveInputError, OutOfRangeError


@dataclass(frozen=True)
class ClassicGlove:
    """Capped power weighting on the co-occurrence value itself."""

    alpha: float = 0.75
    x_max: float = 100.0

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise OutOfRangeError(f"alpha must be > 0, got {self.alpha}")
        if not self.x_max > 0:
            raise OutOfRangeError(f"x_max must be > 0, got {self.x_max}")


@dataclass(frozen=True)
class ExtremalProduct:
    """Product of two Zipf terms over the pair's word counts."""

    alpha: float
    counts: np.ndarray
    max_count: float

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise OutOfRangeError(f"alpha must be > 0, got {self.alpha}")
        counts = np.asarray(self.counts, dtype=np.float64)
        if counts.size == 0:
            raise NonPositiveInputError("counts array is empty")
        if not (counts > 0).all():
            raise NonPositiveInputError("word counts must be > 0")
        object.__setattr__(self, "counts", counts)
        if self.max_count != counts.max():
            raise OutOfRangeError(
                f"max_count {self.max_count} does not match counts.max() {counts.max()}"
            )

    @classmethod
    def from_vocab(cls, vocab: VocabTable, alpha: float) -> "ExtremalProduct":
        counts = vocab.counts.astype(np.float64)
        return cls(alpha=alpha, counts=counts, max_count=float(counts[0]))


WeightingScheme = Union[ClassicGlove, ExtremalProduct]


def classic_weight(x: float, x_max: float, alpha: float) -> float:
    """(x / x_max)^alpha below the cap, 1.0 at or above it."""
    if not x > 0:
        raise NonPositiveInputError(f"co-occurrence value must be > 0, got {x}")
    if x < x_max:
        return float((x / x_max) ** alpha)
    return 1.0


def extremal_weight(x_i: float, x_j: float, max_count: float, alpha: float) -> float:
    """(x_i / m)^alpha * (x_j / m)^alpha for counts in (0, m]."""
    if not (x_i > 0 and x_j > 0):
        raise NonPositiveInputError(f"word counts must be > 0, got {x_i}, {x_j}")
    if x_i > max_count or x_j > max_count:
        raise OutOfRangeError(
            f"word count above the maximum {max_count}: got {x_i}, {x_j}"
        )
    return float((x_i / max_count) ** alpha * (x_j / max_count) ** alpha)


def record_weight(scheme: WeightingScheme, record) -> float:
    """Loss weight of one (i, j, x) record under the given scheme."""
    i, j, x = record
    if isinstance(scheme, ClassicGlove):
        return classic_weight(x, scheme.x_max, scheme.alpha)
    if isinstance(scheme, ExtremalProduct):
        counts = scheme.counts
        if not (0 <= i < counts.size and 0 <= j < counts.size):
            raise OutOfRangeError(f"word index out of range: ({i}, {j}) with V={counts.size}")
        return extremal_weight(counts[i], counts[j], scheme.max_count, scheme.alpha)
    raise TypeError(f"unknown weighting scheme {type(scheme).__name__}")


def batch_weights(scheme: WeightingScheme, records: CoocRecords) -> np.ndarray:
    """Per-record weight column for a whole record set."""
    if isinstance(scheme, ClassicGlove):
        x = records.x
        w = (x / scheme.x_max) ** scheme.alpha
        np.minimum(w, 1.0, out=w)
        return w
    if isinstance(scheme, ExtremalProduct):
        counts = scheme.counts
        hi = max(int(records.i.max()), int(records.j.max())) if len(records) else -1
        if hi >= counts.size:
            raise OutOfRangeError(f"word index {hi} out of range for V={counts.size}")
        scaled = counts / scheme.max_count
        return (scaled[records.i] ** scheme.alpha) * (scaled[records.j] ** scheme.alpha)
    raise TypeError(f"unknown weighting scheme {type(scheme).__name__}")

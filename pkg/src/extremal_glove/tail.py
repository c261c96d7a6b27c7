"""Tail-index estimation from order statistics.

Six classical extreme-value estimators, each operating on the descending
order statistics x[0] >= x[1] >= ... of a positive sample.  All formulas
use only log spacings or spacing ratios, so every estimate is invariant
under positive rescaling of the sample.

The estimated exponent feeds the weighting module as the Zipf power
``alpha``; :func:`estimate_alpha` wires a vocabulary's count column (or
its rank sequence) into any of the estimators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import VocabTable
from .errors import (
    DegenerateSampleError,
    EmptyVocabError,
    InsufficientSampleError,
    NonPositiveInputError,
)

_LN2 = float(np.log(2.0))


class TailSample:
    """A positive sample with cached descending order statistics."""

    def __init__(self, values) -> None:
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim != 1:
            raise ValueError("sample must be one-dimensional")
        if arr.size == 0:
            raise InsufficientSampleError("sample is empty")
        if not np.isfinite(arr).all() or not (arr > 0).all():
            raise NonPositiveInputError("sample values must be finite and > 0")
        self.values = arr
        self.order_stats = np.sort(arr)[::-1].copy()
        self._logs = np.log(self.order_stats)

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class TailEstimate:
    """Result of one estimator run.

    ``k`` is the number of top order statistics used (the block size M for
    the pickands method).
    """

    method: str
    n: int
    k: int
    p: float


def _check_k(sample: TailSample, k: int, need: int) -> None:
    if k < 1:
        raise InsufficientSampleError(f"k must be >= 1, got {k}")
    if need > len(sample):
        raise InsufficientSampleError(
            f"need {need} order statistics but sample has only {len(sample)}"
        )


def pickands(sample: TailSample, M: int) -> float:
    """Spacing-ratio estimate (1/ln 2) * ln((x_M - x_2M) / (x_2M - x_4M))."""
    _check_k(sample, M, 4 * M)
    x = sample.order_stats
    num = x[M - 1] - x[2 * M - 1]
    den = x[2 * M - 1] - x[4 * M - 1]
    if den == 0.0 or num <= 0.0:
        raise DegenerateSampleError("tied order statistics make the spacing ratio undefined")
    return float(np.log(num / den) / _LN2)

def hill(sample: TailSample, k: int) -> float:
    """Mean log spacing above the (k+1)-th order statistic."""
    _check_k(sample, k, k + 1)
    logs = sample._logs
    return float(np.mean(logs[:k]) - logs[k])


def adapted_hill(sample: TailSample, k: int) -> float:
    """Hill applied to the UH series x_{i+1} * (mean log spacing over i)."""
    _check_k(sample, k, k + 2)
    x = sample.order_stats
    logs = sample._logs
    i = np.arange(1, k + 2)
    uh = x[i] * (np.cumsum(logs[: k + 1]) / i - logs[i])
    if not (uh > 0).all():
        raise DegenerateSampleError("non-positive UH value; sample has no usable tail spread")
    log_uh = np.log(uh)
    return float(np.mean(log_uh[:k]) - log_uh[k])


def log_moments(sample: TailSample, k: int, j: int) -> float:
    """j-th empirical moment of the log spacings over the top k statistics."""
    if j < 1:
        raise ValueError(f"moment order must be >= 1, got {j}")
    _check_k(sample, k, k + 1)
    logs = sample._logs
    return float(np.mean((logs[:k] - logs[k]) ** j))


def _m1_m2(sample: TailSample, k: int) -> tuple[float, float]:
    m1 = log_moments(sample, k, 1)
    m2 = log_moments(sample, k, 2)
    if m2 == 0.0:
        raise DegenerateSampleError("second log moment is zero (constant sample)")
    if m1 * m1 == m2:
        raise DegenerateSampleError("M1^2 equals M2; correction term undefined")
    return m1, m2


def moment_estimator(sample: TailSample, k: int) -> float:
    """M1 + 1 - (1/2) / (1 - M1^2 / M2)."""
    m1, m2 = _m1_m2(sample, k)
    return float(m1 + 1.0 - 0.5 / (1.0 - m1 * m1 / m2))


def qq_estimator(sample: TailSample, k: int) -> float:
    """Least-squares slope of the log order statistics against log(i/(k+1))."""
    if k < 2 or k > len(sample):
        raise InsufficientSampleError(f"qq estimator needs 2 <= k <= n, got k={k}, n={len(sample)}")
    logs = sample._logs[:k]
    li = np.log(np.arange(1, k + 1) / (k + 1))
    num = np.sum(li * (np.sum(logs) - k * logs))
    den = k * np.sum(li * li) - np.sum(li) ** 2
    return float(num / den)


def peng_estimator(sample: TailSample, k: int) -> float:
    """M2 / (2 M1) + 1 - (1/2) / (1 - M1^2 / M2)."""
    m1, m2 = _m1_m2(sample, k)
    if m1 == 0.0:
        raise DegenerateSampleError("first log moment is zero")
    return float(m2 / (2.0 * m1) + 1.0 - 0.5 / (1.0 - m1 * m1 / m2))


ESTIMATORS = {
    "pickands": pickands,
    "hill": hill,
    "adapted-hill": adapted_hill,
    "moment": moment_estimator,
    "qq": qq_estimator,
    "peng": peng_estimator,
}

INPUT_MODES = ("counts", "ranks")


def estimate_alpha(
    vocab: VocabTable,
    method: str,
    k_fraction: float = 0.2,
    input_mode: str = "counts",
) -> TailEstimate:
    """Run a tail estimator over vocabulary statistics.

    ``input_mode="counts"`` feeds the per-word occurrence counts;
    ``"ranks"`` feeds the rank sequence 1..V instead.  The number of order
    statistics is k = max(2, floor(k_fraction * V)); the pickands method
    uses the block size M = max(1, k // 4) so that its deepest order
    statistic (4M) matches the k convention of the other estimators.
    """
    if method not in ESTIMATORS:
        raise ValueError(f"unknown estimator {method!r}; choose from {sorted(ESTIMATORS)}")
    if input_mode not in INPUT_MODES:
        raise ValueError(f"unknown input mode {input_mode!r}; choose from {INPUT_MODES}")
    if not 0.0 < k_fraction <= 1.0:
        raise ValueError(f"k_fraction must be in (0, 1], got {k_fraction}")
    n_words = len(vocab)
    if n_words == 0:
        raise EmptyVocabError("cannot estimate a tail index from an empty vocabulary")
    if input_mode == "counts":
        values = vocab.counts.astype(np.float64)
    else:
        values = np.arange(1, n_words + 1, dtype=np.float64)
    sample = TailSample(values)
    k = max(2, int(k_fraction * n_words))
    if method == "pickands":
        k = max(1, k // 4)
        p = pickands(sample, k)
    else:
        p = ESTIMATORS[method](sample, k)
    return TailEstimate(method=method, n=n_words, k=k, p=p)

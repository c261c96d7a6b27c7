"""Tail-index estimators: frozen hand values, invariances, vocab wiring."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extremal_glove import (
    DegenerateSampleError,
    EmptyVocabError,
    InsufficientSampleError,
    NonPositiveInputError,
    TailSample,
    VocabTable,
    adapted_hill,
    estimate_alpha,
    hill,
    log_moments,
    moment_estimator,
    peng_estimator,
    pickands,
    qq_estimator,
)
from extremal_glove.tail import ESTIMATORS

E = math.e


def pareto_quantiles(n: int, gamma: float) -> TailSample:
    """Analytic Pareto order statistics X_i = (i/(n+1))^-gamma, descending."""
    i = np.arange(1, n + 1, dtype=np.float64)
    return TailSample((i / (n + 1)) ** -gamma)


def random_sample(seed: int, n: int = 200) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return (1.0 - rng.random(n)) ** -1.2


class TestTailSample:
    def test_orders_descending(self):
        s = TailSample([3.0, 7.0, 1.0])
        assert list(s.order_stats) == [7.0, 3.0, 1.0]
        assert len(s) == 3

    def test_rejects_nonpositive(self):
        with pytest.raises(NonPositiveInputError):
            TailSample([1.0, 0.0])
        with pytest.raises(NonPositiveInputError):
            TailSample([1.0, -2.0])
        with pytest.raises(NonPositiveInputError):
            TailSample([1.0, float("inf")])

    def test_rejects_empty(self):
        with pytest.raises(InsufficientSampleError):
            TailSample([])


class TestPickands:
    def test_hand_value(self):
        assert pickands(TailSample([8, 4, 3, 2]), 1) == pytest.approx(1.0, abs=1e-12)

    def test_scale_invariance_hand_case(self):
        assert pickands(TailSample([80, 40, 30, 20]), 1) == pytest.approx(1.0, abs=1e-12)

    def test_all_ties_degenerate(self):
        with pytest.raises(DegenerateSampleError):
            pickands(TailSample([8, 8, 8, 8]), 1)

    def test_needs_4m_order_statistics(self):
        with pytest.raises(InsufficientSampleError):
            pickands(TailSample([3, 2, 1]), 1)


class TestHill:
    def test_hand_value(self):
        s = TailSample([E**3, E**2, E, 1.0])
        assert hill(s, 3) == pytest.approx(2.0, abs=1e-12)

    def test_constant_sample_is_zero(self):
        assert hill(TailSample([5.0] * 4), 3) == 0.0

    def test_pareto_consistency(self):
        assert hill(pareto_quantiles(10_000, 0.5), 1000) == pytest.approx(0.5, abs=0.02)

    def test_needs_k_plus_one(self):
        with pytest.raises(InsufficientSampleError):
            hill(TailSample([2.0, 1.0]), 2)


class TestAdaptedHill:
    def test_frozen_oracle_value(self):
        # UH_1, UH_2, UH_3 evaluated by hand for [e^6, e^3, e, 1, e^-2]
        expected = 0.5 * (math.log(3 * E**3) + math.log(3.5 * E)) - math.log(10 / 3)
        s = TailSample([E**6, E**3, E, 1.0, E**-2])
        assert adapted_hill(s, 2) == pytest.approx(expected, abs=1e-12)

    def test_constant_sample_degenerate(self):
        with pytest.raises(DegenerateSampleError):
            adapted_hill(TailSample([4.0] * 6), 2)

    def test_needs_k_plus_two(self):
        with pytest.raises(InsufficientSampleError):
            adapted_hill(TailSample([3.0, 2.0, 1.0]), 2)


class TestLogMoments:
    def test_first_moment(self):
        s = TailSample([E**2, E, 1.0])
        assert log_moments(s, 2, 1) == pytest.approx(1.5, abs=1e-12)

    def test_second_moment(self):
        s = TailSample([E**2, E, 1.0])
        assert log_moments(s, 2, 2) == pytest.approx(2.5, abs=1e-12)

    def test_constant_sample_all_zero(self):
        s = TailSample([3.0] * 5)
        assert log_moments(s, 3, 1) == 0.0
        assert log_moments(s, 3, 2) == 0.0

    def test_moment_order_validated(self):
        with pytest.raises(ValueError):
            log_moments(TailSample([2.0, 1.0]), 1, 0)


class TestMomentEstimator:
    def test_hand_value(self):
        s = TailSample([E**2, E, 1.0])
        assert moment_estimator(s, 2) == pytest.approx(-2.5, abs=1e-12)

    def test_constant_sample_degenerate(self):
        with pytest.raises(DegenerateSampleError):
            moment_estimator(TailSample([2.0] * 4), 2)

    def test_matches_log_moment_formula(self):
        s = TailSample(random_sample(7))
        m1, m2 = log_moments(s, 40, 1), log_moments(s, 40, 2)
        expected = m1 + 1 - 0.5 / (1 - m1 * m1 / m2)
        assert moment_estimator(s, 40) == pytest.approx(expected, rel=1e-15)


class TestQQEstimator:
    def test_frozen_oracle_value(self):
        # brute-force evaluation of the four sums gives exactly 1/ln 2
        s = TailSample([E**2, E])
        assert qq_estimator(s, 2) == pytest.approx(1.0 / math.log(2.0), abs=1e-12)

    def test_constant_sample_is_zero(self):
        assert qq_estimator(TailSample([3.0] * 6), 5) == pytest.approx(0.0, abs=1e-15)

    def test_pareto_consistency(self):
        assert qq_estimator(pareto_quantiles(10_000, 2.0), 1000) == pytest.approx(2.0, abs=0.02)

    def test_needs_k_of_at_least_two(self):
        with pytest.raises(InsufficientSampleError):
            qq_estimator(TailSample([2.0, 1.0]), 1)
        with pytest.raises(InsufficientSampleError):
            qq_estimator(TailSample([2.0, 1.0]), 3)


class TestPengEstimator:
    def test_hand_value(self):
        s = TailSample([E**2, E, 1.0])
        assert peng_estimator(s, 2) == pytest.approx(-19.0 / 6.0, abs=1e-12)

    def test_constant_sample_degenerate(self):
        with pytest.raises(DegenerateSampleError):
            peng_estimator(TailSample([2.0] * 4), 2)

    def test_matches_log_moment_formula(self):
        s = TailSample(random_sample(8))
        m1, m2 = log_moments(s, 40, 1), log_moments(s, 40, 2)
        expected = m2 / (2 * m1) + 1 - 0.5 / (1 - m1 * m1 / m2)
        assert peng_estimator(s, 40) == pytest.approx(expected, rel=1e-15)


def _run(method: str, values: np.ndarray, k: int) -> float:
    sample = TailSample(values)
    if method == "pickands":
        return ESTIMATORS[method](sample, max(1, k // 4))
    return ESTIMATORS[method](sample, k)


class TestSharedProperties:
    @pytest.mark.parametrize("method", sorted(ESTIMATORS))
    @given(seed=st.integers(0, 10_000), scale=st.floats(1e-8, 1e8))
    @settings(max_examples=25, deadline=None)
    def test_scale_invariance(self, method, seed, scale):
        values = random_sample(seed)
        base = _run(method, values, 40)
        scaled = _run(method, values * scale, 40)
        assert scaled == pytest.approx(base, rel=1e-12, abs=1e-12)

    @pytest.mark.parametrize("method", sorted(ESTIMATORS))
    @given(seed=st.integers(0, 10_000))
    @settings(max_examples=25, deadline=None)
    def test_order_independence(self, method, seed):
        values = random_sample(seed)
        shuffled = np.random.default_rng(seed + 1).permutation(values)
        assert _run(method, shuffled, 40) == _run(method, values, 40)

    @pytest.mark.parametrize("method", sorted(ESTIMATORS))
    def test_preconditions_reject_rather_than_return_nan(self, method):
        with pytest.raises(InsufficientSampleError):
            _run(method, np.array([2.0, 1.0]), 200)


class TestEstimateAlpha:
    def zipf_vocab(self, n: int) -> VocabTable:
        counts = (1e9 / np.arange(1, n + 1)).astype(np.int64)
        return VocabTable([f"w{i}" for i in range(n)], counts)

    def test_returns_estimate_with_k_convention(self):
        vocab = self.zipf_vocab(100)
        est = estimate_alpha(vocab, "hill", k_fraction=0.2)
        assert (est.method, est.n, est.k) == ("hill", 100, 20)

    def test_k_floor_is_two(self):
        vocab = self.zipf_vocab(6)
        est = estimate_alpha(vocab, "hill", k_fraction=0.1)
        assert est.k == 2

    def test_pickands_uses_quarter_k(self):
        vocab = self.zipf_vocab(100)
        est = estimate_alpha(vocab, "pickands", k_fraction=0.2)
        assert est.k == 5  # max(1, floor(20 / 4))

    def test_zipf_counts_give_hill_near_one(self):
        vocab = self.zipf_vocab(10_000)
        est = estimate_alpha(vocab, "hill", k_fraction=0.1)
        assert est.p == pytest.approx(1.0, abs=0.05)

    def test_single_word_vocab_insufficient(self):
        vocab = VocabTable(["a"], np.array([10]))
        for method in sorted(ESTIMATORS):
            with pytest.raises(InsufficientSampleError):
                estimate_alpha(vocab, method)

    def test_empty_vocab_rejected(self):
        vocab = VocabTable([], np.array([], dtype=np.int64))
        with pytest.raises(EmptyVocabError):
            estimate_alpha(vocab, "hill")

    def test_ranks_mode_ignores_counts(self):
        a = VocabTable(["a", "b", "c", "d", "e", "f"], np.array([60, 50, 40, 30, 20, 10]))
        b = VocabTable(["a", "b", "c", "d", "e", "f"], np.array([7, 6, 5, 4, 3, 2]))
        pa = estimate_alpha(a, "hill", k_fraction=0.5, input_mode="ranks").p
        pb = estimate_alpha(b, "hill", k_fraction=0.5, input_mode="ranks").p
        assert pa == pb

    def test_counts_mode_is_default_and_differs_from_ranks(self):
        vocab = self.zipf_vocab(50)
        p_counts = estimate_alpha(vocab, "hill", k_fraction=0.5).p
        p_ranks = estimate_alpha(vocab, "hill", k_fraction=0.5, input_mode="ranks").p
        assert p_counts != p_ranks

    def test_unknown_method_and_mode_rejected(self):
        vocab = self.zipf_vocab(10)
        with pytest.raises(ValueError):
            estimate_alpha(vocab, "kernel")
        with pytest.raises(ValueError):
            estimate_alpha(vocab, "hill", input_mode="percentiles")
        with pytest.raises(ValueError):
            estimate_alpha(vocab, "hill", k_fraction=0.0)
        with pytest.raises(ValueError):
            estimate_alpha(vocab, "hill", k_fraction=1.5)

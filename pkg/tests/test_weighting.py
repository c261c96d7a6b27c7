"""Weighting schemes: hand values, the product identity, scheme dispatch."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extremal_glove import (
    ClassicGlove,
    CoocRecords,
    ExtremalProduct,
    NonPositiveInputError,
    OutOfRangeError,
    VocabTable,
    batch_weights,
    classic_weight,
    extremal_weight,
    record_weight,
)

positive = st.floats(min_value=1e-6, max_value=1e6, allow_nan=False)


class TestClassicWeight:
    def test_cap_at_x_max(self):
        assert classic_weight(100.0, 100.0, 0.75) == 1.0

    def test_cap_above_x_max(self):
        assert classic_weight(250.0, 100.0, 0.75) == 1.0

    def test_power_below_cap(self):
        assert classic_weight(1.0, 100.0, 0.75) == pytest.approx(10.0**-1.5, rel=1e-12)

    def test_rejects_nonpositive(self):
        with pytest.raises(NonPositiveInputError):
            classic_weight(0.0, 100.0, 0.75)

    @given(x=positive, x_max=positive, alpha=st.floats(0.05, 5.0))
    @settings(max_examples=100, deadline=None)
    def test_range_zero_one(self, x, x_max, alpha):
        w = classic_weight(x, x_max, alpha)
        assert 0.0 < w <= 1.0

    @given(x=positive, bump=positive, x_max=positive, alpha=st.floats(0.05, 5.0))
    @settings(max_examples=100, deadline=None)
    def test_nondecreasing_in_x(self, x, bump, x_max, alpha):
        assert classic_weight(x + bump, x_max, alpha) >= classic_weight(x, x_max, alpha)


class TestExtremalWeight:
    def test_max_count_pair_is_one(self):
        assert extremal_weight(7.0, 7.0, 7.0, 0.375) == 1.0

    def test_half_pair_hand_value(self):
        # alpha 0.375 is the halved classic default
        assert extremal_weight(50.0, 50.0, 100.0, 0.375) == pytest.approx(
            0.25**0.375, rel=1e-12
        )

    def test_identity_with_classic_on_product(self, rng):
        for _ in range(200):
            m = float(rng.uniform(10.0, 1e4))
            x_i = float(rng.uniform(0.1, m))
            x_j = float(rng.uniform(0.1, m))
            alpha = float(rng.uniform(0.05, 3.0))
            lhs = extremal_weight(x_i, x_j, m, alpha)
            rhs = classic_weight(x_i * x_j, m * m, alpha)
            assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_rejects_count_above_max(self):
        with pytest.raises(OutOfRangeError):
            extremal_weight(101.0, 5.0, 100.0, 1.0)

    def test_rejects_nonpositive(self):
        with pytest.raises(NonPositiveInputError):
            extremal_weight(0.0, 5.0, 100.0, 1.0)

    @given(x=positive, bump=st.floats(1e-6, 1.0))
    @settings(max_examples=100, deadline=None)
    def test_strictly_increasing_below_cap(self, x, bump):
        m = 2e6
        w1 = extremal_weight(x, 1.0, m, 0.75)
        w2 = extremal_weight(min(x * (1 + bump), m), 1.0, m, 0.75)
        assert w2 > w1


class TestSchemeConstruction:
    def test_classic_rejects_bad_alpha(self):
        with pytest.raises(OutOfRangeError):
            ClassicGlove(alpha=0.0)
        with pytest.raises(OutOfRangeError):
            ClassicGlove(alpha=-0.5)

    def test_classic_rejects_bad_x_max(self):
        with pytest.raises(OutOfRangeError):
            ClassicGlove(x_max=0.0)

    def test_extremal_rejects_bad_alpha(self):
        with pytest.raises(OutOfRangeError):
            ExtremalProduct(alpha=-1.0, counts=np.array([3.0, 2.0]), max_count=3.0)

    def test_extremal_checks_max_count(self):
        with pytest.raises(OutOfRangeError):
            ExtremalProduct(alpha=1.0, counts=np.array([3.0, 2.0]), max_count=4.0)

    def test_extremal_rejects_nonpositive_counts(self):
        with pytest.raises(NonPositiveInputError):
            ExtremalProduct(alpha=1.0, counts=np.array([3.0, 0.0]), max_count=3.0)

    def test_from_vocab(self):
        vocab = VocabTable(["a", "b", "c"], np.array([3, 2, 1]))
        scheme = ExtremalProduct.from_vocab(vocab, alpha=1.0)
        assert scheme.max_count == 3.0
        assert list(scheme.counts) == [3.0, 2.0, 1.0]


class TestRecordWeight:
    def vocab_scheme(self, alpha=1.0):
        vocab = VocabTable(["a", "b", "c"], np.array([3, 2, 1]))
        return ExtremalProduct.from_vocab(vocab, alpha=alpha)

    def test_classic_dispatch(self):
        scheme = ClassicGlove(alpha=0.75, x_max=100.0)
        assert record_weight(scheme, (0, 1, 100.0)) == 1.0

    def test_extremal_hand_value(self):
        # words b (count 2) and c (count 1) against max count 3
        assert record_weight(self.vocab_scheme(), (1, 2, 9.9)) == pytest.approx(
            2.0 / 9.0, rel=1e-12
        )

    def test_extremal_max_word_pair(self):
        assert record_weight(self.vocab_scheme(), (0, 0, 1.0)) == 1.0

    def test_extremal_weight_ignores_record_mass(self):
        scheme = self.vocab_scheme(alpha=0.7)
        assert record_weight(scheme, (1, 2, 0.1)) == record_weight(scheme, (1, 2, 1e5))

    def test_index_out_of_range(self):
        with pytest.raises(OutOfRangeError):
            record_weight(self.vocab_scheme(), (0, 3, 1.0))


class TestBatchWeights:
    def test_matches_scalar_route_classic(self, rng):
        scheme = ClassicGlove(alpha=0.75, x_max=50.0)
        recs = CoocRecords.from_records(
            [(0, 1, float(x)) for x in rng.uniform(0.1, 200.0, size=300)]
        )
        batch = batch_weights(scheme, recs)
        scalar = [record_weight(scheme, r) for r in recs]
        np.testing.assert_allclose(batch, scalar, rtol=1e-15)

    def test_matches_scalar_route_extremal(self, rng):
        counts = np.sort(rng.integers(1, 1000, size=40))[::-1].astype(np.float64)
        scheme = ExtremalProduct(alpha=0.8, counts=counts, max_count=float(counts[0]))
        recs = CoocRecords.from_records(
            [
                (int(rng.integers(0, 40)), int(rng.integers(0, 40)), 1.0)
                for _ in range(300)
            ]
        )
        batch = batch_weights(scheme, recs)
        scalar = [record_weight(scheme, r) for r in recs]
        np.testing.assert_allclose(batch, scalar, rtol=1e-15)

    def test_extremal_batch_checks_indices(self):
        scheme = ExtremalProduct(alpha=1.0, counts=np.array([3.0, 2.0]), max_count=3.0)
        recs = CoocRecords.from_records([(0, 5, 1.0)])
        with pytest.raises(OutOfRangeError):
            batch_weights(scheme, recs)

    def test_empty_records(self):
        scheme = ClassicGlove()
        recs = CoocRecords.from_records([])
        assert batch_weights(scheme, recs).size == 0

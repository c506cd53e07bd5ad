"""Minimum-error oracle: closed-form axis, gap, and success probability."""

import math

import numpy as np
import pytest

from povmlearn.errors import ContractViolation, DegenerateEnsemble
from povmlearn.helstrom import (
    detector_probabilities,
    equal_count_condition,
    helstrom,
    success_equal_priors,
)

INV_SQRT2 = 0.7071067811865476


class TestHelstrom:
    def test_orthogonal_pure_states(self):
        res = helstrom([0, 0, 1], [0, 0, -1])
        assert np.allclose(res.p0_axis, [0, 0, 1], atol=1e-15)
        assert res.lam == pytest.approx(1.0, abs=1e-12)
        assert res.success == pytest.approx(1.0, abs=1e-12)

    def test_reference_instance(self):
        res = helstrom([INV_SQRT2, 0, INV_SQRT2], [INV_SQRT2, 0, -INV_SQRT2])
        assert np.allclose(res.p0_axis, [0, 0, 1], atol=1e-12)
        assert res.lam == pytest.approx(INV_SQRT2, abs=1e-12)
        assert res.success == pytest.approx(0.8535533905932737, abs=1e-12)

    def test_indistinguishable_limit(self):
        res = helstrom([0.3, 0, 0.2], [0.3, 0, 0.2 + 5e-5])
        assert res.success == pytest.approx(0.5, abs=1e-4)

    def test_degenerate_is_error_for_direct_calls(self):
        with pytest.raises(DegenerateEnsemble):
            helstrom([0.3, 0, 0.2], [0.3, 0, 0.2])

    def test_degenerate_flagged_when_allowed(self):
        res = helstrom([0.3, 0, 0.2], [0.3, 0, 0.2], allow_degenerate=True)
        assert res.degenerate
        assert res.success == 0.5
        assert abs(np.linalg.norm(res.p0_axis) - 1.0) <= 1e-12

    def test_success_equal_priors_shortcut(self):
        assert success_equal_priors([0, 0, 1], [0, 0, -1]) == pytest.approx(1.0, abs=1e-12)
        assert success_equal_priors([0.1, 0, 0], [0.1, 0, 0]) == 0.5

    def test_monotone_in_separation(self):
        base = np.array([0.2, 0.0, 0.1])
        last = 0.5
        for gap in np.linspace(0.01, 0.6, 20):
            s = helstrom(base + [0, 0, gap], base - [0, 0, gap]).success
            assert s >= last - 1e-15
            last = s


class TestEqualCountCondition:
    def test_equal_norms_balance(self):
        assert equal_count_condition([0.6, 0, 0.3], [0.3, 0, 0.6]) == pytest.approx(0.0, abs=1e-15)

    def test_reference_difference(self):
        assert equal_count_condition([0.9, 0, 0], [0.1, 0, 0]) == pytest.approx(0.80, abs=1e-12)

    def test_purity_extremes(self):
        assert equal_count_condition([1, 0, 0], [0, 0, 0]) == pytest.approx(1.0, abs=1e-15)


class TestDetectorProbabilities:
    def test_balanced_at_equal_purity(self):
        m0 = np.array([INV_SQRT2, 0, INV_SQRT2])
        m1 = np.array([INV_SQRT2, 0, -INV_SQRT2])
        axis = helstrom(m0, m1).p0_axis
        p0, p1 = detector_probabilities(axis, m0, m1)
        assert p0 == pytest.approx(p1, abs=1e-12)

    def test_reference_value(self):
        p0, p1 = detector_probabilities([0, 0, 1], [0, 0, 0.4], [0, 0, 0.4])
        assert p0 == pytest.approx(0.7, abs=1e-12)
        assert p0 + p1 == pytest.approx(1.0, abs=1e-15)

    def test_vanishing_ensemble_vector(self):
        p0, _ = detector_probabilities([1, 0, 0], [0, 0.5, 0.5], [0, -0.5, -0.5])
        assert p0 == pytest.approx(0.5, abs=1e-12)

    def test_nonunit_axis_rejected(self):
        with pytest.raises(ContractViolation):
            detector_probabilities([0, 0, 0.9], [0, 0, 0.4], [0, 0, 0.4])

"""Minimum-error measurement for two equiprobable qubit states, in Bloch form.

For qubits the optimal two-outcome POVM is projective and diagonalizes the
difference of the two density matrices.  With Bloch vectors m0, m1 that
difference is (m0 - m1).sigma / 2, so the detector-0 projector points along
the unit vector (m0 - m1)/|m0 - m1| and the achievable success probability
is 1/2 + |m0 - m1|/4.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from povmlearn.bloch import EPS_DEGENERATE, UNIT_X, check_unit, norm
from povmlearn.errors import DegenerateEnsemble


@dataclass(frozen=True)
class HelstromResult:
    """Optimal projector axis, gap eigenvalue, and success probability."""

    p0_axis: np.ndarray
    lam: float
    success: float
    degenerate: bool = False


def helstrom(m0, m1, allow_degenerate: bool = False) -> HelstromResult:
    """Optimal equal-prior discrimination of Bloch vectors m0 and m1.

    Indistinguishable inputs (|m0 - m1| below the degeneracy tolerance) are
    an error for direct callers; evaluation pipelines pass allow_degenerate
    to get a flagged chance-level result with a fixed placeholder axis.
    """
    m0 = np.asarray(m0, dtype=float)
    m1 = np.asarray(m1, dtype=float)
    diff = m0 - m1
    dist = norm(diff)
    if dist <= EPS_DEGENERATE:
        if not allow_degenerate:
            raise DegenerateEnsemble(
                f"states are indistinguishable: |m0 - m1| = {dist:.3g}"
            )
        lam = 0.5 * dist
        return HelstromResult(p0_axis=UNIT_X.copy(), lam=lam, success=0.5 + 0.5 * lam, degenerate=True)
    lam = 0.5 * dist
    return HelstromResult(p0_axis=diff / dist, lam=lam, success=0.5 + 0.5 * lam)


def success_equal_priors(m0, m1) -> float:
    """Best achievable success probability for a 50/50 mixture of m0 and m1."""
    return helstrom(m0, m1, allow_degenerate=True).success


def equal_count_condition(m0, m1) -> float:
    """Purity imbalance |m0|^2 - |m1|^2.

    Zero exactly when the optimal measurement fires both detectors equally
    often on the 50/50 mixture, since the axis along m0 - m1 satisfies
    axis.(m0 + m1) = |m0|^2 - |m1|^2 up to the |m0 - m1| factor.
    """
    m0 = np.asarray(m0, dtype=float)
    m1 = np.asarray(m1, dtype=float)
    return float(np.dot(m0, m0) - np.dot(m1, m1))


def detector_probabilities(axis, m0, m1) -> tuple[float, float]:
    """Detector firing rates (p0, p1) of a unit axis on the 50/50 mixture."""
    axis = check_unit(axis, "measurement axis")
    m0 = np.asarray(m0, dtype=float)
    m1 = np.asarray(m1, dtype=float)
    p0 = 0.5 * (1.0 + float(np.dot(axis, 0.5 * (m0 + m1))))
    return p0, 1.0 - p0

"""Two-branch decomposition of an x-z plane qubit ensemble with known priors.

With unequal priors (eta0, eta1) the ensemble Bloch vector n no longer
determines the two pure states.  The separation angle theta follows from
|n| alone, but there are exactly two unit-vector pairs reproducing n:
branch A puts state 1 at angle -theta from state 0, branch B at +theta,
mirror images of each other about n.  No measurement distinguishes the
branches, so the operational targets are the branch-averaged mixtures
m0 (state 0 of branch A averaged with state 1 of branch B) and m1 (the
complement).  These straddle n symmetrically with equal purity, and the
in-plane axis perpendicular to n, which fires both detectors equally
often, is the minimum-error measurement for that pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from povmlearn.bloch import EPS_DEGENERATE, EPS_PHYS, Plane, perp_in_plane
from povmlearn.ensemble import EnsembleSpec, estimate_pauli
from povmlearn.errors import (
    ContractViolation,
    CosThetaOutOfRange,
    DegenerateEnsemble,
    InvalidPriors,
)

# Estimated separation cosines may be driven off [-1, 1] by shot noise;
# values within this slack are clamped, anything beyond is an error.
EPS_CLAMP = 0.02

CASES = ("A", "B")

_PLANE_XZ = Plane.xz()


@dataclass(frozen=True)
class DecompositionPair:
    """The two pure states of one decomposition branch."""

    n0: np.ndarray
    n1: np.ndarray
    case: str


@dataclass(frozen=True)
class MixtureTargets:
    """Branch-averaged mixtures the measurement actually discriminates."""

    m0: np.ndarray
    m1: np.ndarray
    theta: float


def _check_priors(eta0: float, eta1: float) -> None:
    if abs(eta0 + eta1 - 1.0) > 1e-12 or not (0.0 < eta0 < 1.0):
        raise InvalidPriors(f"priors must be interior and sum to 1, got ({eta0}, {eta1})")


def _check_theta(theta: float) -> None:
    if not (-1e-12 <= theta <= math.pi + 1e-12):
        raise ContractViolation(f"separation angle must lie in [0, pi], got {theta}")


def _check_case(case: str) -> float:
    if case == "A":
        return 1.0
    if case == "B":
        return -1.0
    raise ContractViolation(f"decomposition branch must be 'A' or 'B', got {case!r}")


def _clamp_cosine(c: float, tol: float) -> float:
    if c > 1.0 + tol or c < -1.0 - tol:
        raise CosThetaOutOfRange(
            f"separation cosine {c:.6g} outside [-1, 1] beyond tolerance {tol:g}"
        )
    return min(1.0, max(-1.0, c))


def cos_theta(n_norm: float, eta0: float, eta1: float, tol: float = EPS_PHYS) -> float:
    """Separation cosine between the two pure states, from |n| and the priors.

    |n|^2 = eta0^2 + eta1^2 + 2 eta0 eta1 cos(theta), inverted for cos(theta).
    Pass tol=EPS_CLAMP for shot-noise estimates of |n|.
    """
    _check_priors(eta0, eta1)
    n_norm = float(n_norm)
    # Written as 1 + (|n|^2 - 1)/(2 eta0 eta1), which equals the direct
    # inversion because the priors sum to 1, so a coincident ensemble
    # (|n| = 1) yields exactly 1.0 with no rounding residue.
    c = 1.0 + (n_norm * n_norm - 1.0) / (2.0 * eta0 * eta1)
    return _clamp_cosine(c, tol)


def _decompose_plane_coords(u, theta, eta0, eta1, case, prefactor):
    """Apply the branch matrices to plane coordinates u with a given prefactor.

    Solving n = eta0*n0 + eta1*n1 with n1 rotated by -theta (branch A) or
    +theta (branch B) from n0 inverts to a rotation-scaling of n for each
    state.  Shared by the x-z and constant-z decompositions so that the
    nz = 0 limit reproduces the x-z arithmetic bit for bit.
    """
    sgn = _check_case(case)
    ct, st = math.cos(theta), math.sin(theta)
    a0, b1 = eta0 + eta1 * ct, eta1 * st
    a1, b0 = eta1 + eta0 * ct, eta0 * st
    u0 = prefactor * np.array([a0 * u[0] - sgn * b1 * u[1], sgn * b1 * u[0] + a0 * u[1]])
    u1 = prefactor * np.array([a1 * u[0] + sgn * b0 * u[1], -sgn * b0 * u[0] + a1 * u[1]])
    return u0, u1


def decompose(n, theta: float, eta0: float, eta1: float, case: str) -> DecompositionPair:
    """Recover the pure-state pair of one branch from (n, theta, priors).

    For inputs with |n| consistent with (theta, eta0, eta1) the outputs are
    unit vectors recombining to n under the priors.
    """
    _check_priors(eta0, eta1)
    _check_theta(theta)
    u = _PLANE_XZ.coords(n)
    nn = float(u @ u)
    if math.sqrt(nn) <= EPS_DEGENERATE:
        raise DegenerateEnsemble(f"|n| = {math.sqrt(nn):.3g} is too small to decompose")
    u0, u1 = _decompose_plane_coords(u, theta, eta0, eta1, case, 1.0 / nn)
    return DecompositionPair(
        n0=_PLANE_XZ.embed(u0), n1=_PLANE_XZ.embed(u1), case=case
    )


def mixture_targets(n, theta: float, eta0: float, eta1: float) -> MixtureTargets:
    """Branch-averaged mixtures m0, m1 = n +- (2 eta0 eta1 sin(theta)/|n|) n_perp."""
    _check_priors(eta0, eta1)
    _check_theta(theta)
    u = _PLANE_XZ.coords(n)
    nn = float(u @ u)
    if math.sqrt(nn) <= EPS_DEGENERATE:
        raise DegenerateEnsemble(f"|n| = {math.sqrt(nn):.3g} is too small to split")
    shift = 2.0 * eta0 * eta1 * math.sin(theta)
    m0u = np.array([(u[0] * nn - shift * u[1]) / nn, (shift * u[0] + u[1] * nn) / nn])
    m1u = np.array([(u[0] * nn + shift * u[1]) / nn, (-shift * u[0] + u[1] * nn) / nn])
    # Cross-check the component form against the symmetric perp form.
    perp_u = _PLANE_XZ.coords(perp_in_plane(_PLANE_XZ.embed(u), _PLANE_XZ))
    off = (shift / math.sqrt(nn)) * perp_u
    assert float(np.max(np.abs(m0u - (u + off)))) <= 1e-12
    assert float(np.max(np.abs(m1u - (u - off)))) <= 1e-12
    return MixtureTargets(m0=_PLANE_XZ.embed(m0u), m1=_PLANE_XZ.embed(m1u), theta=theta)


def success_prob(eta0: float, eta1: float, theta: float, n_norm: float) -> float:
    """Optimal success probability 1/2 + eta0 eta1 sin(theta)/|n| of the axis rule."""
    _check_priors(eta0, eta1)
    _check_theta(theta)
    n_norm = float(n_norm)
    if n_norm <= EPS_DEGENERATE:
        raise DegenerateEnsemble(f"|n| = {n_norm:.3g} is too small for a success target")
    ps = 0.5 + eta0 * eta1 * math.sin(theta) / n_norm
    if ps > 1.0 + EPS_PHYS:
        raise ContractViolation(
            f"inconsistent inputs: success probability {ps:.6g} exceeds 1"
        )
    return min(ps, 1.0)


def learn_axis_equal_counts(
    spec: EnsembleSpec,
    shots_per_axis: int,
    rng: np.random.Generator | Sequence[np.random.Generator],
) -> np.ndarray:
    """Estimate the ensemble Bloch vector and return the in-plane unit axis
    perpendicular to it, the setting on which both detectors fire equally."""
    if spec.plane.kind != "xz":
        raise ContractViolation("the equal-count axis learner requires an x-z plane ensemble")
    est = estimate_pauli(spec, shots_per_axis, rng)
    return perp_in_plane(est.n_hat, spec.plane)

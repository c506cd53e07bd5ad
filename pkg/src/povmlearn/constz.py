"""Decomposition and axis learning for ensembles with a common z component.

When both pure states share a known z component nz, each splits into an
in-plane part r_j of radius sqrt(1 - nz^2) plus nz along z, and the whole
x-z plane construction replays inside the x-y slice: the separation cosine
comes from |r| rescaled by the slice radius, the branch matrices act on r
with prefactor (1 - nz^2)/|r|^2, and the learned measurement axis is the
in-plane perpendicular of r, with zero z component.  At nz = 0 everything
reduces to the x-z plane case with axes relabeled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from povmlearn.bloch import EPS_DEGENERATE, EPS_PHYS, Plane, perp_in_plane
from povmlearn.decomposition import (
    EPS_CLAMP,
    DecompositionPair,
    MixtureTargets,
    _check_priors,
    _check_theta,
    _clamp_cosine,
    _decompose_plane_coords,
)
from povmlearn.ensemble import EnsembleSpec, estimate_pauli
from povmlearn.errors import ContractViolation, DegenerateEnsemble


@dataclass(frozen=True)
class ConstZFrame:
    """An ensemble Bloch vector split as r + nz * z_hat.

    r is the in-plane part (zero z component); r_radius is the in-plane
    radius sqrt(1 - nz^2) shared by every pure state of the slice.
    """

    nz: float
    r: np.ndarray
    r_radius: float = field(init=False)

    def __post_init__(self):
        if not -1.0 < self.nz < 1.0:
            raise ContractViolation(f"constant-z frame needs |nz| < 1, got {self.nz}")
        r = np.asarray(self.r, dtype=float)
        if abs(r[2]) > EPS_PHYS:
            raise ContractViolation(f"in-plane part must have zero z component, got {r}")
        object.__setattr__(self, "r", r)
        radius = math.sqrt(1.0 - self.nz * self.nz)
        object.__setattr__(self, "r_radius", radius)
        if float(np.hypot(r[0], r[1])) > radius * (1.0 + EPS_CLAMP):
            raise ContractViolation(
                f"|r| = {float(np.hypot(r[0], r[1])):.6g} exceeds the slice radius {radius:.6g}"
            )

    @classmethod
    def from_bloch(cls, n) -> "ConstZFrame":
        n = np.asarray(n, dtype=float)
        return cls(nz=float(n[2]), r=np.array([n[0], n[1], 0.0]))


def cos_theta_z(r_norm: float, nz: float, eta0: float, eta1: float, tol: float = EPS_PHYS) -> float:
    """Separation cosine of a constant-z ensemble from |r|, nz, and the priors.

    |r|^2 = (1 - nz^2)(eta0^2 + eta1^2 + 2 eta0 eta1 cos(theta)), inverted
    for cos(theta); with both states coincident this evaluates to exactly 1.
    Pass tol=EPS_CLAMP for shot-noise estimates of |r|.
    """
    _check_priors(eta0, eta1)
    if not -1.0 < nz < 1.0:
        raise ContractViolation(f"constant-z slice needs |nz| < 1, got {nz}")
    r_norm = float(r_norm)
    # Rescale |r| by the slice radius before squaring so that a coincident
    # ensemble (|r| equal to the radius, however it was rounded) gives a
    # ratio of exactly 1; the 1 + (...)/(2 eta0 eta1) form then returns
    # exactly 1.0, and at nz = 0 the arithmetic matches cos_theta bit for
    # bit because the two divisions by 1.0 are exact.
    u = r_norm / math.sqrt(1.0 - nz * nz)
    c = 1.0 + (u * u - 1.0) / (2.0 * eta0 * eta1)
    return _clamp_cosine(c, tol)


def decompose_constz(
    frame: ConstZFrame, theta: float, eta0: float, eta1: float, case: str
) -> DecompositionPair:
    """Recover the pure-state pair of one branch inside the constant-z slice."""
    _check_priors(eta0, eta1)
    _check_theta(theta)
    u = frame.r[:2]
    rr = float(u @ u)
    if math.sqrt(rr) <= EPS_DEGENERATE:
        raise DegenerateEnsemble(f"|r| = {math.sqrt(rr):.3g} is too small to decompose")
    prefactor = (1.0 - frame.nz * frame.nz) / rr
    u0, u1 = _decompose_plane_coords(u, theta, eta0, eta1, case, prefactor)
    n0 = np.array([u0[0], u0[1], frame.nz])
    n1 = np.array([u1[0], u1[1], frame.nz])
    return DecompositionPair(n0=n0, n1=n1, case=case)


def mixture_targets_constz(
    frame: ConstZFrame, theta: float, eta0: float, eta1: float
) -> MixtureTargets:
    """Branch-averaged mixtures of the slice, built from the branch states.

    m0 averages branch A's state 0 with branch B's state 1 (m1 the
    complement); both reduce to r +- c * r_perp + nz * z_hat with
    c = 2 eta0 eta1 sin(theta) (1 - nz^2)/|r|, which is cross-checked.
    """
    pair_a = decompose_constz(frame, theta, eta0, eta1, "A")
    pair_b = decompose_constz(frame, theta, eta0, eta1, "B")
    m0 = eta0 * pair_a.n0 + eta1 * pair_b.n1
    m1 = eta1 * pair_a.n1 + eta0 * pair_b.n0
    r_norm = float(np.hypot(frame.r[0], frame.r[1]))
    c = 2.0 * eta0 * eta1 * math.sin(theta) * (1.0 - frame.nz * frame.nz) / r_norm
    r_perp = perp_in_plane(frame.r, Plane.const_z(frame.nz))
    zhat = np.array([0.0, 0.0, 1.0])
    assert float(np.max(np.abs(m0 - (frame.r + c * r_perp + frame.nz * zhat)))) <= 1e-12
    assert float(np.max(np.abs(m1 - (frame.r - c * r_perp + frame.nz * zhat)))) <= 1e-12
    return MixtureTargets(m0=m0, m1=m1, theta=theta)


def success_prob_constz(
    eta0: float, eta1: float, theta: float, r_norm: float, nz: float
) -> float:
    """Optimal success probability of the slice axis rule.

    Follows from the mixture construction: the gap between m0 and m1 gives
    1/2 + eta0 eta1 sin(theta) (1 - nz^2)/|r|, reducing to the x-z plane
    value at nz = 0.
    """
    _check_priors(eta0, eta1)
    _check_theta(theta)
    if not -1.0 < nz < 1.0:
        raise ContractViolation(f"constant-z slice needs |nz| < 1, got {nz}")
    r_norm = float(r_norm)
    if r_norm <= EPS_DEGENERATE:
        raise DegenerateEnsemble(f"|r| = {r_norm:.3g} is too small for a success target")
    ps = 0.5 + eta0 * eta1 * math.sin(theta) * (1.0 - nz * nz) / r_norm
    if ps > 1.0 + EPS_PHYS:
        raise ContractViolation(f"inconsistent inputs: success probability {ps:.6g} exceeds 1")
    return min(ps, 1.0)


def learn_axis_constz(
    spec: EnsembleSpec,
    shots_per_axis: int,
    rng: np.random.Generator | Sequence[np.random.Generator],
) -> np.ndarray:
    """Estimate all three Pauli expectations and return the in-plane unit
    axis perpendicular to the estimated r, with zero z component."""
    if spec.plane.kind != "constz":
        raise ContractViolation("the slice axis learner requires a constant-z ensemble")
    est = estimate_pauli(spec, shots_per_axis, rng)
    return perp_in_plane(est.n_hat, spec.plane)

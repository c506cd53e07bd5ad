"""Measurement-angle learner for two equally likely pure x-z plane states.

The candidate POVM is a projector pair parameterized by an angle phi: the
+1 outcome projects onto cos(phi)|0> + sin(phi)|1>, whose Bloch vector is
(sin 2 phi, 0, cos 2 phi).  Write the two hidden states at state angles
alpha +- beta from +z.  On the 50/50 ensemble the detector-count difference
is

    Delta(phi) = p_plus - p_minus = cos(alpha - 2 phi) * cos(beta),

so two settings a quarter turn apart read off cos and sin of the same
argument, and the two-argument arctangent recovers alpha with its quadrant
intact (a scalar ratio tan(alpha - 2 phi0) would lose the sign information).
The minimum-error setting phi* = alpha/2 + pi/4 makes both detectors fire
equally often; beta is never needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from povmlearn.bloch import bloch_from_state_angle, wrap_angle
from povmlearn.ensemble import EnsembleSpec, _as_rng_list, measure_shots
from povmlearn.errors import ContractViolation, InvalidPriors, WeakSignal


def weak_signal_threshold(shots: int) -> float:
    """Default three-sigma noise floor for a detector difference at this budget."""
    return 3.0 / math.sqrt(shots)


@dataclass(frozen=True)
class EqualPriorEstimate:
    """Learned orientation angle and optimal measurement setting."""

    alpha_hat: float
    phi_star: float
    delta0: float
    delta1: float
    shots_used: int


def delta_analytic(alpha: float, beta: float, phi: float) -> float:
    """Noise-free detector difference cos(alpha - 2 phi) * cos(beta)."""
    return math.cos(alpha - 2.0 * phi) * math.cos(beta)


def povm_axis_from_phi(phi: float) -> np.ndarray:
    """Bloch axis (sin 2 phi, 0, cos 2 phi) of the +1 projector at setting phi."""
    return bloch_from_state_angle(2.0 * phi)


def estimate_delta(
    spec: EnsembleSpec, phi: float, shots: int, rng: np.random.Generator
) -> float:
    """Empirical detector difference at setting phi, consuming `shots` qubits."""
    batch = measure_shots(spec, povm_axis_from_phi(phi), shots, rng)
    return batch.mean


def solve_alpha(delta0: float, delta1: float, phi0: float, tau_weak: float = 0.0) -> float:
    """Invert two quarter-turn-separated detector differences to alpha.

    delta0 is the reading at phi0 and delta1 at phi0 + pi/4; these are
    proportional to cos and sin of (alpha - 2 phi0) with a common positive
    factor, so alpha = 2 phi0 + atan2(delta1, delta0), wrapped to [0, 2 pi).
    Raises WeakSignal when both readings sit at or below tau_weak in
    magnitude, since the quadrant is then unresolvable.
    """
    if max(abs(delta0), abs(delta1)) <= tau_weak:
        raise WeakSignal(
            f"detector differences ({delta0:.4g}, {delta1:.4g}) are below the "
            f"noise floor {tau_weak:.4g}"
        )
    return wrap_angle(2.0 * phi0 + math.atan2(delta1, delta0))


def learn_equal_prior(
    spec: EnsembleSpec,
    phi0: float,
    shots_per_setting: int,
    rng: np.random.Generator | Sequence[np.random.Generator],
    tau_weak: float | None = None,
) -> EqualPriorEstimate:
    """Measure at phi0 and phi0 + pi/4, then invert to the optimal setting.

    Requires a 50/50 x-z plane ensemble and consumes 2 * shots_per_setting
    qubits.  `rng` may be one generator or a pair, one per setting.  The
    returned phi_star = alpha_hat/2 + pi/4 is reported modulo pi; the
    projector pair is invariant under phi -> phi + pi.
    """
    if spec.plane.kind != "xz":
        raise ContractViolation("the angle learner requires an x-z plane ensemble")
    if abs(spec.eta0 - 0.5) > 1e-12:
        raise InvalidPriors(f"the angle learner requires equal priors, got eta0 = {spec.eta0}")
    if tau_weak is None:
        tau_weak = weak_signal_threshold(shots_per_setting)
    g0, g1 = _as_rng_list(rng, 2)
    delta0 = estimate_delta(spec, phi0, shots_per_setting, g0)
    delta1 = estimate_delta(spec, phi0 + 0.25 * math.pi, shots_per_setting, g1)
    alpha_hat = solve_alpha(delta0, delta1, phi0, tau_weak=tau_weak)
    phi_star = math.fmod(0.5 * alpha_hat + 0.25 * math.pi, math.pi)
    return EqualPriorEstimate(
        alpha_hat=alpha_hat,
        phi_star=phi_star,
        delta0=delta0,
        delta1=delta1,
        shots_used=2 * shots_per_setting,
    )

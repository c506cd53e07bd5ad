"""Seeded experiment harness: scenario setup, trial pipeline, result rows.

Each trial runs generate -> learn -> classify -> score.  Randomness is
addressed by (seed, trial, role): every trial owns a block of stream ids,
one per role (branch draw, each measurement axis or setting in order,
holdout), so trials are independent, reruns are byte-identical, and the
constant-z pipeline at nz = 0 consumes exactly the streams the x-z
pipeline does for the corresponding measurements.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import sys
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from povmlearn.bloch import Plane, bloch_from_state_angle, norm, plane_angle, perp_in_plane
from povmlearn.constz import (
    ConstZFrame,
    cos_theta_z,
    decompose_constz,
    mixture_targets_constz,
    success_prob_constz,
)
from povmlearn.decomposition import (
    EPS_CLAMP,
    cos_theta,
    decompose,
    mixture_targets,
    success_prob,
)
from povmlearn.ensemble import EnsembleSpec, RngStream, estimate_pauli
from povmlearn.equal_prior import learn_equal_prior, povm_axis_from_phi
from povmlearn.errors import (
    ContractViolation,
    CosThetaOutOfRange,
    DegenerateEnsemble,
    WeakSignal,
)
from povmlearn.evaluate import classify_holdout, score
from povmlearn.helstrom import success_equal_priors

SCENARIOS = ("equal-prior-xz", "unequal-prior-xz", "const-z")

FORMATS = ("csv", "json")

CSV_COLUMNS = (
    "trial",
    "scenario",
    "case",
    "eta0",
    "theta_true",
    "alpha_true",
    "beta_true",
    "n_z",
    "axis_x",
    "axis_y",
    "axis_z",
    "alpha_hat",
    "success_emp",
    "success_analytic",
    "success_oracle",
    "z_score",
    "shots_learn",
    "shots_holdout",
    "status",
)

# Stream roles within a trial's block of ids.  AXIS0/AXIS1 are the first and
# second plane measurements (or the two angle settings); AXIS2 is the extra
# z measurement of the constant-z pipeline; keeping the roles aligned makes
# the nz = 0 reduction exact shot for shot.
_SLOT_CASE = 0
_SLOT_AXIS0 = 1
_SLOT_AXIS1 = 2
_SLOT_AXIS2 = 3
_SLOT_HOLDOUT = 4
_SLOTS_PER_TRIAL = 8

_STATUS_OK = "ok"
_STATUS_OF = {
    WeakSignal: "weak_signal",
    DegenerateEnsemble: "degenerate_ensemble",
    CosThetaOutOfRange: "cos_theta_out_of_range",
}


def _status_of(exc: Exception) -> str:
    for cls, tag in _STATUS_OF.items():
        if isinstance(exc, cls):
            return tag
    raise exc


@dataclass
class ExperimentConfig:
    """One experiment cell: a scenario, its ground-truth parameters, budgets.

    alpha is the scenario's primary direction parameter: the midpoint state
    angle from +z for the equal-prior scenario, the in-plane direction angle
    of the ensemble Bloch vector otherwise.  shots_learn is the budget per
    measurement setting or Pauli axis; shots_holdout is the classification
    budget per trial.
    """

    scenario: str = "equal-prior-xz"
    alpha: float = math.pi / 3
    beta: float = math.pi / 6
    eta0: float = 0.5
    theta: float = math.pi / 2
    nz: float = 0.0
    phi0: float = 0.0
    shots_learn: int = 100_000
    shots_holdout: int = 10_000
    trials: int = 10
    seed: int = 0
    fmt: str = "csv"
    out: str | None = None

    def validate(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ContractViolation(f"scenario must be one of {SCENARIOS}, got {self.scenario!r}")
        if self.fmt not in FORMATS:
            raise ContractViolation(f"format must be one of {FORMATS}, got {self.fmt!r}")
        for name in ("shots_learn", "shots_holdout", "trials"):
            value = getattr(self, name)
            if int(value) < 1:
                raise ContractViolation(f"{name} must be >= 1, got {value}")
        if int(self.seed) < 0:
            raise ContractViolation(f"seed must be a nonnegative integer, got {self.seed}")
        # Field domains hold regardless of which scenario consumes the field,
        # so an out-of-range value never passes silently as an unused flag.
        if not 0.0 < self.eta0 < 1.0:
            raise ContractViolation(f"eta0 must lie in (0, 1), got {self.eta0}")
        if not 0.0 <= self.beta <= math.pi / 2 + 1e-12:
            raise ContractViolation(f"beta must lie in [0, pi/2], got {self.beta}")
        if not 0.0 <= self.theta <= math.pi + 1e-12:
            raise ContractViolation(f"theta must lie in [0, pi], got {self.theta}")
        if not -1.0 < self.nz < 1.0:
            raise ContractViolation(f"nz must lie in (-1, 1), got {self.nz}")
        if self.scenario == "equal-prior-xz" and abs(self.eta0 - 0.5) > 1e-12:
            raise ContractViolation("the equal-prior scenario requires eta0 = 0.5")

    @property
    def eta1(self) -> float:
        return 1.0 - self.eta0


@dataclass
class TrialResult:
    """One trial's emitted row plus diagnostics kept for tests and summaries."""

    trial: int
    scenario: str
    case: str | None
    eta0: float
    theta_true: float | None
    alpha_true: float | None
    beta_true: float | None
    n_z: float | None
    axis: np.ndarray | None
    alpha_hat: float | None
    success_emp: float | None
    success_analytic: float | None
    success_oracle: float | None
    z_score: float | None
    shots_learn: int
    shots_holdout: int
    status: str
    # Diagnostics, not serialized.
    theta_hat: float | None = None
    n_hat: np.ndarray | None = None
    swapped: bool | None = None
    holdout_correct: int | None = None
    qubits_used: int = 0


def _gen(cfg: ExperimentConfig, trial: int, slot: int) -> np.random.Generator:
    return RngStream(cfg.seed, trial * _SLOTS_PER_TRIAL + slot).generator()


def equal_prior_ensemble(alpha: float, beta: float) -> EnsembleSpec:
    """50/50 ensemble of the pure states at state angles alpha +- beta from +z."""
    return EnsembleSpec(
        eta0=0.5,
        eta1=0.5,
        psi0=bloch_from_state_angle(alpha + beta),
        psi1=bloch_from_state_angle(alpha - beta),
        plane=Plane.xz(),
    )


def _mixed_norm(eta0: float, eta1: float, theta: float) -> float:
    return math.sqrt(eta0 * eta0 + eta1 * eta1 + 2.0 * eta0 * eta1 * math.cos(theta))


def two_fold_ensemble(eta0: float, theta: float, direction: float, case: str) -> EnsembleSpec:
    """x-z plane ensemble whose Bloch vector points along `direction` with the
    norm implied by (eta0, theta); the hidden pair is the requested branch."""
    eta1 = 1.0 - eta0
    q = _mixed_norm(eta0, eta1, theta)
    n = np.array([q * math.cos(direction), 0.0, q * math.sin(direction)])
    pair = decompose(n, theta, eta0, eta1, case)
    return EnsembleSpec(eta0=eta0, eta1=eta1, psi0=pair.n0, psi1=pair.n1, plane=Plane.xz(), case_tag=case)


def constz_ensemble(
    eta0: float, theta: float, direction: float, nz: float, case: str
) -> EnsembleSpec:
    """Constant-z ensemble whose in-plane part points along `direction`."""
    eta1 = 1.0 - eta0
    r_norm = math.sqrt(1.0 - nz * nz) * _mixed_norm(eta0, eta1, theta)
    frame = ConstZFrame(
        nz=nz, r=np.array([r_norm * math.cos(direction), r_norm * math.sin(direction), 0.0])
    )
    pair = decompose_constz(frame, theta, eta0, eta1, case)
    return EnsembleSpec(
        eta0=eta0, eta1=eta1, psi0=pair.n0, psi1=pair.n1, plane=Plane.const_z(nz), case_tag=case
    )


def _equal_prior_trial(cfg: ExperimentConfig, trial: int) -> TrialResult:
    spec = equal_prior_ensemble(cfg.alpha, cfg.beta)
    analytic = 0.5 * (1.0 + math.sin(cfg.beta))
    oracle = success_equal_priors(spec.psi0, spec.psi1)
    row = TrialResult(
        trial=trial,
        scenario=cfg.scenario,
        case=None,
        eta0=0.5,
        theta_true=2.0 * cfg.beta,
        alpha_true=cfg.alpha,
        beta_true=cfg.beta,
        n_z=0.0,
        axis=None,
        alpha_hat=None,
        success_emp=None,
        success_analytic=analytic,
        success_oracle=oracle,
        z_score=None,
        shots_learn=0,
        shots_holdout=0,
        status=_STATUS_OK,
    )
    try:
        est = learn_equal_prior(
            spec,
            cfg.phi0,
            cfg.shots_learn,
            (_gen(cfg, trial, _SLOT_AXIS0), _gen(cfg, trial, _SLOT_AXIS1)),
        )
    except (WeakSignal, DegenerateEnsemble) as exc:
        row.status = _status_of(exc)
        row.shots_learn = 2 * cfg.shots_learn
        row.qubits_used = row.shots_learn
        return row
    row.shots_learn = est.shots_used
    row.alpha_hat = est.alpha_hat
    row.axis = povm_axis_from_phi(est.phi_star)
    _classify_into(row, cfg, spec, trial, analytic)
    return row


def _two_fold_truth(cfg: ExperimentConfig, case: str):
    eta1 = cfg.eta1
    if cfg.scenario == "const-z":
        spec = constz_ensemble(cfg.eta0, cfg.theta, cfg.alpha, cfg.nz, case)
        r_norm = math.sqrt(1.0 - cfg.nz * cfg.nz) * _mixed_norm(cfg.eta0, eta1, cfg.theta)
        frame = ConstZFrame(
            nz=cfg.nz,
            r=np.array(
                [r_norm * math.cos(cfg.alpha), r_norm * math.sin(cfg.alpha), 0.0]
            ),
        )
        targets = mixture_targets_constz(frame, cfg.theta, cfg.eta0, eta1)
        analytic = success_prob_constz(cfg.eta0, eta1, cfg.theta, r_norm, cfg.nz)
    else:
        spec = two_fold_ensemble(cfg.eta0, cfg.theta, cfg.alpha, case)
        q = _mixed_norm(cfg.eta0, eta1, cfg.theta)
        n = np.array([q * math.cos(cfg.alpha), 0.0, q * math.sin(cfg.alpha)])
        targets = mixture_targets(n, cfg.theta, cfg.eta0, eta1)
        analytic = success_prob(cfg.eta0, eta1, cfg.theta, q)
    oracle = success_equal_priors(targets.m0, targets.m1)
    return spec, analytic, oracle


def _two_fold_trial(cfg: ExperimentConfig, trial: int) -> TrialResult:
    case = "A" if _gen(cfg, trial, _SLOT_CASE).random() < 0.5 else "B"
    is_constz = cfg.scenario == "const-z"
    row = TrialResult(
        trial=trial,
        scenario=cfg.scenario,
        case=case,
        eta0=cfg.eta0,
        theta_true=cfg.theta,
        alpha_true=cfg.alpha,
        beta_true=None,
        n_z=cfg.nz if is_constz else 0.0,
        axis=None,
        alpha_hat=None,
        success_emp=None,
        success_analytic=None,
        success_oracle=None,
        z_score=None,
        shots_learn=0,
        shots_holdout=0,
        status=_STATUS_OK,
    )
    try:
        spec, analytic, oracle = _two_fold_truth(cfg, case)
    except DegenerateEnsemble as exc:
        row.status = _status_of(exc)
        return row
    row.success_analytic = analytic
    row.success_oracle = oracle
    slots = (_SLOT_AXIS0, _SLOT_AXIS1, _SLOT_AXIS2) if is_constz else (_SLOT_AXIS0, _SLOT_AXIS1)
    gens = [_gen(cfg, trial, s) for s in slots]
    est = estimate_pauli(spec, cfg.shots_learn, gens)
    row.shots_learn = est.shots_used
    row.n_hat = est.n_hat
    try:
        axis = perp_in_plane(est.n_hat, spec.plane)
    except DegenerateEnsemble as exc:
        row.status = _status_of(exc)
        row.qubits_used = row.shots_learn
        return row
    row.axis = axis
    row.alpha_hat = plane_angle(est.n_hat, spec.plane)
    try:
        if is_constz:
            in_plane = norm(np.array([est.n_hat[0], est.n_hat[1], 0.0]))
            c = cos_theta_z(in_plane, cfg.nz, cfg.eta0, cfg.eta1, tol=EPS_CLAMP)
        else:
            c = cos_theta(norm(est.n_hat), cfg.eta0, cfg.eta1, tol=EPS_CLAMP)
        row.theta_hat = math.acos(c)
    except CosThetaOutOfRange as exc:
        # Diagnostic only; the learned axis is still usable.
        row.status = _status_of(exc)
    _classify_into(row, cfg, spec, trial, analytic)
    return row


def _classify_into(row, cfg, spec, trial, analytic) -> None:
    confusion = classify_holdout(spec, row.axis, cfg.shots_holdout, _gen(cfg, trial, _SLOT_HOLDOUT))
    report = score(confusion, analytic)
    row.shots_holdout = cfg.shots_holdout
    row.success_emp = report.empirical_success
    row.z_score = report.z_score
    row.swapped = report.swapped
    row.holdout_correct = max(confusion.correct, confusion.total - confusion.correct)
    row.qubits_used = row.shots_learn + row.shots_holdout


def run_experiment(config: ExperimentConfig, trial_offset: int = 0) -> list[TrialResult]:
    """Run config.trials independent trials; recoverable per-trial errors are
    recorded in the row status, never raised."""
    config.validate()
    rows = []
    for i in range(int(config.trials)):
        trial = trial_offset + i
        if config.scenario == "equal-prior-xz":
            rows.append(_equal_prior_trial(config, trial))
        else:
            rows.append(_two_fold_trial(config, trial))
    return rows


def sweep(base: ExperimentConfig, grid: dict[str, Sequence[float]]) -> list[TrialResult]:
    """Cartesian sweep over parameter value lists, with globally unique trial
    indices so every row draws from its own random streams."""
    keys = [k for k in ("eta0", "theta", "alpha", "beta", "nz") if k in grid]
    unknown = set(grid) - set(keys)
    if unknown:
        raise ContractViolation(f"cannot sweep over {sorted(unknown)}")
    rows: list[TrialResult] = []
    offset = 0
    for combo in itertools.product(*(grid[k] for k in keys)):
        cfg = replace(base, **{k: float(v) for k, v in zip(keys, combo)})
        rows.extend(run_experiment(cfg, trial_offset=offset))
        offset += int(cfg.trials)
    return rows


def summarize(rows: Sequence[TrialResult]) -> dict:
    """Aggregate counts and pooled success over the ok rows."""
    statuses: dict[str, int] = {}
    for r in rows:
        statuses[r.status] = statuses.get(r.status, 0) + 1
    scored = [r for r in rows if r.success_emp is not None]
    pooled_correct = sum(r.holdout_correct for r in scored)
    pooled_total = sum(r.shots_holdout for r in scored)
    return {
        "trials": len(rows),
        "statuses": statuses,
        "pooled_success": (pooled_correct / pooled_total) if pooled_total else None,
        "mean_analytic": (
            sum(r.success_analytic for r in scored) / len(scored) if scored else None
        ),
        "max_abs_z": max((abs(r.z_score) for r in scored), default=None),
        "qubits_used": sum(r.qubits_used for r in rows),
    }


def _fmt_float(x: float) -> str:
    return f"{float(x):.12g}"


def _row_record(r: TrialResult) -> dict:
    axis = r.axis if r.axis is not None else (None, None, None)
    return {
        "trial": r.trial,
        "scenario": r.scenario,
        "case": r.case,
        "eta0": r.eta0,
        "theta_true": r.theta_true,
        "alpha_true": r.alpha_true,
        "beta_true": r.beta_true,
        "n_z": r.n_z,
        "axis_x": axis[0],
        "axis_y": axis[1],
        "axis_z": axis[2],
        "alpha_hat": r.alpha_hat,
        "success_emp": r.success_emp,
        "success_analytic": r.success_analytic,
        "success_oracle": r.success_oracle,
        "z_score": r.z_score,
        "shots_learn": r.shots_learn,
        "shots_holdout": r.shots_holdout,
        "status": r.status,
    }


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return _fmt_float(value)


def _json_value(value):
    if value is None or isinstance(value, (str, int, np.integer)):
        return int(value) if isinstance(value, np.integer) else value
    return float(_fmt_float(value))


def render_results(rows: Sequence[TrialResult], fmt: str = "csv") -> str:
    """Render result rows to CSV or JSON text; both carry the same fields,
    floats at 12 significant digits, empty/null for inapplicable values."""
    if not rows:
        raise ContractViolation("no result rows to emit")
    if fmt not in FORMATS:
        raise ContractViolation(f"format must be one of {FORMATS}, got {fmt!r}")
    records = [_row_record(r) for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            writer.writerow([_csv_cell(rec[k]) for k in CSV_COLUMNS])
        return buf.getvalue()
    payload = [{k: _json_value(rec[k]) for k in CSV_COLUMNS} for rec in records]
    return json.dumps(payload, indent=2) + "\n"


def emit_results(rows: Sequence[TrialResult], fmt: str = "csv", path: str | None = None) -> None:
    """Write rendered results to a file, or stdout when path is None.

    Identical rows and format produce byte-identical files.
    """
    text = render_results(rows, fmt)
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write results to {path!r}: {exc}") from exc

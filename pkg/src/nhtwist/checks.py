"""Verification suites run over deformation configurations.

Each suite samples random points from a seeded generator, so reports are
reproducible. A suite returns a :class:`CheckReport` with one entry per
configuration.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from . import constant_force as cf
from . import oscillator as osc
from .deformations import DeformationSpec, Variant, all_configurations, eval_f, galilean_limit_of
from .integrator import IntegrationConfig, integrate
from .phase_space import CanonicalState, verify_deformed_brackets, verify_jacobi

__all__ = [
    "SUITES",
    "CheckReport",
    "random_state",
    "check_brackets",
    "check_jacobi",
    "check_curl",
    "check_limits",
    "check_oracle",
    "run_suite",
]

SUITES = ("brackets", "jacobi", "curl", "limits", "oracle")


@dataclass
class CheckReport:
    suite: str
    entries: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e["passed"] for e in self.entries)

    @property
    def max_residual(self) -> float:
        return max((e["max_residual"] for e in self.entries), default=0.0)

    def to_dict(self) -> dict:
        return {"suite": self.suite, "passed": self.passed,
                "max_residual": self.max_residual, "configurations": self.entries}


def _entry(spec, max_residual, passed, **extra):
    return {"deformation": spec.to_dict(), "label": spec.label,
            "max_residual": float(max_residual), "passed": bool(passed), **extra}


def random_state(rng, t_range=(0.0, 3.0)) -> CanonicalState:
    return CanonicalState(rng.uniform(*t_range), rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3))


def _specs(specs):
    return list(specs) if specs is not None else all_configurations()


def check_brackets(specs: Optional[Iterable[DeformationSpec]] = None, n_states: int = 50,
                   tol: float = 1e-6, seed: int = 0) -> CheckReport:
    rng = np.random.default_rng(seed)
    report = CheckReport("brackets")
    for spec in _specs(specs):
        worst = max(verify_deformed_brackets(spec, random_state(rng), tol).max_residual
                    for _ in range(n_states))
        report.entries.append(_entry(spec, worst, worst <= tol))
    return report


def check_jacobi(specs: Optional[Iterable[DeformationSpec]] = None, n_states: int = 50,
                 tol: float = 1e-6, seed: int = 0) -> CheckReport:
    rng = np.random.default_rng(seed)
    report = CheckReport("jacobi")
    for spec in _specs(specs):
        worst = max(verify_jacobi(spec, random_state(rng), tol).max_residual
                    for _ in range(n_states))
        report.entries.append(_entry(spec, worst, worst <= tol))
    return report


def check_curl(model: str = "constant_force", specs: Optional[Iterable[DeformationSpec]] = None,
               n_points: int = 100, tol: float = 1e-9, seed: int = 0,
               params=None) -> CheckReport:
    """Finite-difference curl of the generated force.

    An entry passes when the sampled curl stays below ``tol``, i.e. when the
    force is conservative. Every constant-force configuration should pass;
    for the oscillator only the constant-f ones do. Oscillator entries also
    report whether the numerical curl agrees with the analytic formula
    (relative 1e-6) and whether the structural classification is confirmed.
    """
    rng = np.random.default_rng(seed)
    report = CheckReport(f"curl:{model}")
    for spec in _specs(specs):
        if model == "constant_force":
            p = params or cf.ConstantForceParams(1.0, rng.uniform(-1, 1, 3))
            worst = 0.0
            for _ in range(n_points):
                t = rng.uniform(0, 3)
                worst = max(worst, float(np.linalg.norm(cf.curl_G(t, p, spec, rng.uniform(-1, 1, 3)))))
            report.entries.append(_entry(spec, worst, worst <= tol, conservative=worst <= tol,
                                         expected_conservative=True))
        elif model == "oscillator":
            p = params or osc.OscillatorParams(1.0, 1.0)
            expected = osc.classify_conservative(spec)
            mismatch = 0.0
            largest = 0.0
            for _ in range(n_points):
                t = rng.uniform(0, 3)
                x, v = rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3)
                numeric = osc.curl_H_numeric(x, v, t, p, spec)
                analytic = osc.curl_H_analytic(t, p, spec)
                scale = max(1.0, float(np.linalg.norm(analytic)))
                mismatch = max(mismatch, float(np.linalg.norm(numeric - analytic)) / scale)
                largest = max(largest, float(np.linalg.norm(numeric)))
            conservative = largest <= tol
            report.entries.append(_entry(
                spec, largest, conservative, conservative=conservative,
                expected_conservative=expected, classification_agrees=conservative == expected,
                analytic_mismatch=mismatch, matches_analytic=mismatch <= 1e-6))
        else:
            raise ValueError(f"unknown model {model!r}")
    return report


def check_limits(specs: Optional[Iterable[DeformationSpec]] = None, tau: float = 1e6,
                 tol: float = 1e-4, n_times: int = 61) -> CheckReport:
    """Compare Newton-Hooke deformations at large tau with their Galilean limits."""
    times = np.linspace(0.0, 3.0, n_times)
    report = CheckReport("limits")
    for spec in _specs(specs):
        if spec.variant is Variant.LIMIT:
            continue
        big = DeformationSpec(spec.family, spec.variant, spec.kappa, tau)
        f_nh = eval_f(big, times)
        f_lim = eval_f(galilean_limit_of(big), times)
        worst = float(np.max(np.abs(f_nh - f_lim) / (1.0 + np.abs(f_lim))))
        report.entries.append(_entry(big, worst, worst <= tol))
    return report


def oracle_error(spec, params, init, t_end=10.0, step=1e-3) -> float:
    """Max position error of RK4 against the closed form, relative to max(1, |x|)."""
    start = cf.initial_state(init, params, spec)
    traj = integrate(cf.make_rhs(params, spec), start, IntegrationConfig(0.0, t_end, step))
    exact = cf.analytic_solution(traj.t, params, spec, init)
    return float(np.max(np.abs(traj.x - exact)) / max(1.0, float(np.max(np.abs(exact)))))


def check_oracle(specs: Optional[Iterable[DeformationSpec]] = None, t_end: float = 10.0,
                 step: float = 1e-3, tol: float = 1e-6, seed: int = 0) -> CheckReport:
    rng = np.random.default_rng(seed)
    report = CheckReport("oracle")
    for spec in _specs(specs):
        params = cf.ConstantForceParams(rng.uniform(0.5, 2), rng.uniform(-1, 1, 3))
        init = cf.InitialData(rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3))
        err = oracle_error(spec, params, init, t_end, step)
        report.entries.append(_entry(spec, err, err <= tol))
    return report


def run_suite(suite: str, specs=None, model: str = "constant_force", tau: float = 1e6) -> CheckReport:
    if suite == "brackets":
        return check_brackets(specs)
    if suite == "jacobi":
        return check_jacobi(specs)
    if suite == "curl":
        return check_curl(model, specs)
    if suite == "limits":
        return check_limits(specs, tau=tau)
    if suite == "oracle":
        return check_oracle(specs)
    raise ValueError(f"unknown suite {suite!r}")

"""Canonical phase space, the noncommutative representation map and bracket checks.

The deformed coordinates are realised on an ordinary canonical phase space by

    xbar1 = x1 - f(t) p2 / 2,   xbar2 = x2 + f(t) p1 / 2,   xbar3 = x3,   pbar = p

so that ``{xbar1, xbar2} = f(t)`` while every other pair keeps its classical
bracket. Brackets are taken at fixed ``t``: time is a parameter that commutes
with everything. All derivatives here are central finite differences.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .deformations import DeformationSpec, eval_f
from .errors import EvaluationError

__all__ = [
    "CanonicalState",
    "NoncommutativeCoords",
    "BracketReport",
    "COORDINATE_LABELS",
    "to_noncommutative",
    "to_canonical",
    "noncommutative_observables",
    "poisson_bracket",
    "bracket_matrix",
    "verify_deformed_brackets",
    "verify_jacobi",
]

COORDINATE_LABELS = ("xbar1", "xbar2", "xbar3", "pbar1", "pbar2", "pbar3")

Observable = Callable[["CanonicalState"], float]

# symplectic form for the ordering (x1, x2, x3, p1, p2, p3)
_OMEGA = np.block([[np.zeros((3, 3)), np.eye(3)], [-np.eye(3), np.zeros((3, 3))]])


def _vec3(v, name):
    arr = np.array(v, dtype=float).reshape(-1)
    if arr.shape != (3,):
        raise ValueError(f"{name} must have 3 components, got shape {np.shape(v)}")
    return arr


@dataclass
class CanonicalState:
    """A point (x, p) of canonical phase space at time t."""

    t: float
    x: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        self.t = float(self.t)
        self.x = _vec3(self.x, "x")
        self.p = _vec3(self.p, "p")

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.x, self.p])

    @classmethod
    def from_array(cls, t, y) -> "CanonicalState":
        y = np.asarray(y, dtype=float)
        return cls(t, y[:3], y[3:6])

    def is_finite(self) -> bool:
        return bool(np.isfinite(self.t) and np.all(np.isfinite(self.x)) and np.all(np.isfinite(self.p)))


@dataclass
class NoncommutativeCoords:
    xbar: np.ndarray
    pbar: np.ndarray

    def __post_init__(self):
        self.xbar = _vec3(self.xbar, "xbar")
        self.pbar = _vec3(self.pbar, "pbar")

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.xbar, self.pbar])


@dataclass
class BracketReport:
    """Residuals of a set of bracket identities evaluated at one point."""

    residuals: dict[str, float]
    tolerance: float
    max_residual: float = field(init=False)
    passed: bool = field(init=False)

    def __post_init__(self):
        self.max_residual = max(self.residuals.values(), default=0.0)
        self.passed = bool(self.max_residual <= self.tolerance)

    def to_dict(self) -> dict:
        return {
            "checks": [{"name": k, "residual": v} for k, v in self.residuals.items()],
            "max_residual": self.max_residual,
            "passed": self.passed,
        }


def _shifted_p(f, p):
    return np.array([-f * p[1] / 2.0, f * p[0] / 2.0, 0.0])


def to_noncommutative(state: CanonicalState, spec: DeformationSpec) -> NoncommutativeCoords:
    f = eval_f(spec, state.t)
    return NoncommutativeCoords(state.x + _shifted_p(f, state.p), state.p.copy())


def to_canonical(coords: NoncommutativeCoords, t: float, spec: DeformationSpec) -> CanonicalState:
    """Inverse of :func:`to_noncommutative` at time ``t``."""
    f = eval_f(spec, t)
    return CanonicalState(t, coords.xbar - _shifted_p(f, coords.pbar), coords.pbar.copy())


def noncommutative_observables(spec: DeformationSpec) -> dict[str, Observable]:
    """The six deformed coordinates as functions on canonical phase space."""

    def component(i):
        return lambda s: float(to_noncommutative(s, spec).as_array()[i])

    return {label: component(i) for i, label in enumerate(COORDINATE_LABELS)}


def _steps(y, h):
    if h is not None:
        if h <= 0:
            raise ValueError("finite-difference step must be positive")
        return np.full(y.shape, float(h))
    return 1e-5 * (1.0 + np.abs(y))


def _gradient(fn, state: CanonicalState, h):
    """Central-difference gradient of ``fn`` over (x, p).

    ``fn`` may return a scalar or an array; the result has the phase-space
    index last.
    """
    y0 = state.as_array()
    steps = _steps(y0, h)
    columns = []
    for i in range(6):
        yp = y0.copy()
        ym = y0.copy()
        yp[i] += steps[i]
        ym[i] -= steps[i]
        fp = np.asarray(fn(CanonicalState.from_array(state.t, yp)), dtype=float)
        fm = np.asarray(fn(CanonicalState.from_array(state.t, ym)), dtype=float)
        if not (np.all(np.isfinite(fp)) and np.all(np.isfinite(fm))):
            raise EvaluationError(f"observable is not finite near t={state.t}")
        columns.append((fp - fm) / (yp[i] - ym[i]))
    return np.stack(columns, axis=-1)


def poisson_bracket(A: Observable, B: Observable, at: CanonicalState, h: Optional[float] = None) -> float:
    """{A, B} = sum_i dA/dx_i dB/dp_i - dA/dp_i dB/dx_i, by central differences.

    ``h`` defaults to ``1e-5 * (1 + |coordinate|)`` per coordinate.
    """
    dA = _gradient(A, at, h)
    dB = _gradient(B, at, h)
    return float(dA @ _OMEGA @ dB)


def bracket_matrix(fn: Callable[[CanonicalState], np.ndarray], at: CanonicalState,
                   h: Optional[float] = None) -> np.ndarray:
    """Matrix of brackets {fn_a, fn_b} for a vector of observables."""
    J = _gradient(fn, at, h)
    return J @ _OMEGA @ J.T


def _expected_brackets(f):
    E = np.zeros((6, 6))
    E[0, 1], E[1, 0] = f, -f
    E[:3, 3:] = np.eye(3)
    E[3:, :3] = -np.eye(3)
    return E


def verify_deformed_brackets(spec: DeformationSpec, at: CanonicalState, tol: float = 1e-6,
                             h: Optional[float] = None) -> BracketReport:
    """Check the deformed bracket algebra of the six coordinates at ``at``.

    Residuals are ``|computed - expected| / max(1, |expected|)``, so that
    {xbar1, xbar2} = f(t) is tested relatively when f is large.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    B = bracket_matrix(lambda s: to_noncommutative(s, spec).as_array(), at, h)
    E = _expected_brackets(eval_f(spec, at.t))
    residuals = {}
    for a, b in itertools.combinations(range(6), 2):
        name = "{%s,%s}" % (COORDINATE_LABELS[a], COORDINATE_LABELS[b])
        residuals[name] = float(abs(B[a, b] - E[a, b]) / max(1.0, abs(E[a, b])))
    return BracketReport(residuals, tol)


def verify_jacobi(spec: DeformationSpec, at: CanonicalState, tol: float = 1e-6,
                  h: float = 1e-3) -> BracketReport:
    """Jacobi identity for all 20 triples of deformed coordinates.

    The inner brackets are themselves finite-difference brackets, differentiated
    once more, so the step is larger than for single brackets to keep the
    nested roundoff down. Residuals are scaled by ``1 + max |{a, b}|``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")

    def coords(s):
        return to_noncommutative(s, spec).as_array()

    def inner(s):
        return bracket_matrix(coords, s, h)

    J = _gradient(coords, at, h)            # J[a, i]
    B = J @ _OMEGA @ J.T
    dB = _gradient(inner, at, h)            # dB[b, c, i]
    # nested[a, b, c] = {a, {b, c}}
    nested = np.einsum("ai,ij,bcj->abc", J, _OMEGA, dB)
    scale = 1.0 + float(np.max(np.abs(B)))
    residuals = {}
    for a, b, c in itertools.combinations(range(6), 3):
        cyclic = nested[a, b, c] + nested[b, c, a] + nested[c, a, b]
        name = "(%s,%s,%s)" % (COORDINATE_LABELS[a], COORDINATE_LABELS[b], COORDINATE_LABELS[c])
        residuals[name] = float(abs(cyclic) / scale)
    return BracketReport(residuals, tol)

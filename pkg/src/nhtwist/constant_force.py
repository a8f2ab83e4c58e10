"""Particle in a constant external force on the deformed space.

In canonical variables the Hamiltonian picks up the cross terms
``F1 f(t) p2 / 2 - F2 f(t) p1 / 2``; eliminating the momenta gives the Newton
equation ``m xddot = G(t)`` with the position-independent force

    G = (F1 - m fdot F2 / 2,  F2 + m fdot F1 / 2,  F3).

Initial velocities are velocities (``xdot(0)``), not ``p(0) / m``; the two
differ by ``f(0) F / 2`` terms whenever ``f(0) != 0``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _fd
from .deformations import DeformationSpec, eval_f, eval_f_antiderivative, eval_f_dot
from .errors import ConfigurationError
from .phase_space import CanonicalState, NoncommutativeCoords

__all__ = [
    "ConstantForceParams",
    "InitialData",
    "hamiltonian",
    "hamiltonian_noncommutative",
    "eom_rhs",
    "make_rhs",
    "initial_state",
    "force_G",
    "analytic_solution",
    "analytic_velocity",
    "curl_G",
    "potential_V",
]


def _finite_vec3(v, name):
    arr = np.array(v, dtype=float).reshape(-1)
    if arr.shape != (3,) or not np.all(np.isfinite(arr)):
        raise ConfigurationError(f"{name} must be 3 finite numbers, got {v!r}")
    return arr


@dataclass
class ConstantForceParams:
    m: float
    F: np.ndarray

    def __post_init__(self):
        self.m = float(self.m)
        if not (np.isfinite(self.m) and self.m > 0):
            raise ConfigurationError(f"mass must be positive, got {self.m!r}")
        self.F = _finite_vec3(self.F, "F")

    def to_dict(self) -> dict:
        return {"m": self.m, "F": self.F.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "ConstantForceParams":
        try:
            return cls(data["m"], data["F"])
        except KeyError as exc:
            raise ConfigurationError(f"params missing field {exc.args[0]!r}") from None


@dataclass
class InitialData:
    """Initial position and velocity (``xdot``, not ``p / m``)."""

    x0: np.ndarray
    v0: np.ndarray

    def __post_init__(self):
        self.x0 = _finite_vec3(self.x0, "x0")
        self.v0 = _finite_vec3(self.v0, "v0")

    def to_dict(self) -> dict:
        return {"x0": self.x0.tolist(), "v0": self.v0.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "InitialData":
        return cls(data.get("x0", [0.0, 0.0, 0.0]), data.get("v0", [0.0, 0.0, 0.0]))


def hamiltonian(state: CanonicalState, params: ConstantForceParams, spec: DeformationSpec) -> float:
    m, F = params.m, params.F
    x, p = state.x, state.p
    f = eval_f(spec, state.t)
    return float(p @ p / (2 * m) - F @ x + F[0] * f * p[1] / 2 - F[1] * f * p[0] / 2)


def hamiltonian_noncommutative(coords: NoncommutativeCoords, params: ConstantForceParams) -> float:
    """The undeformed-looking Hamiltonian written in the deformed coordinates."""
    return float(coords.pbar @ coords.pbar / (2 * params.m) - params.F @ coords.xbar)


def _velocity(p, f, params):
    m, F = params.m, params.F
    return np.array([p[0] / m - f * F[1] / 2, p[1] / m + f * F[0] / 2, p[2] / m])


def eom_rhs(state: CanonicalState, params: ConstantForceParams, spec: DeformationSpec) -> np.ndarray:
    """(xdot, pdot) stacked into one 6-vector."""
    f = eval_f(spec, state.t)
    return np.concatenate([_velocity(state.p, f, params), params.F])


def make_rhs(params: ConstantForceParams, spec: DeformationSpec):
    """Right-hand side ``rhs(t, y)`` on flat (x, p) arrays, for the integrator."""
    F = params.F.copy()

    def rhs(t, y):
        return np.concatenate([_velocity(y[3:], eval_f(spec, t), params), F])

    return rhs


def initial_state(init: InitialData, params: ConstantForceParams, spec: DeformationSpec,
                  t0: float = 0.0) -> CanonicalState:
    """Canonical state whose velocity at ``t0`` equals ``init.v0``."""
    m, F = params.m, params.F
    f0 = eval_f(spec, t0)
    v = init.v0
    p = m * np.array([v[0] + f0 * F[1] / 2, v[1] - f0 * F[0] / 2, v[2]])
    return CanonicalState(t0, init.x0, p)


def force_G(t: float, params: ConstantForceParams, spec: DeformationSpec) -> np.ndarray:
    m, F = params.m, params.F
    fdot = eval_f_dot(spec, t)
    return np.array([F[0] - m * fdot * F[1] / 2, F[1] + m * fdot * F[0] / 2, F[2]])


def analytic_solution(t, params: ConstantForceParams, spec: DeformationSpec,
                      init: InitialData) -> np.ndarray:
    """Closed-form position for data given at t = 0.

    Returns shape ``(3,)`` for scalar ``t`` and ``(len(t), 3)`` for arrays.
    """
    t_arr = np.asarray(t, dtype=float)
    m, F = params.m, params.F
    # integral of f(t') - f(0): the f(0) part is absorbed by the initial momentum
    drift = eval_f_antiderivative(spec, t_arr) - eval_f(spec, 0.0) * t_arr
    base = (init.x0[:, None] + init.v0[:, None] * t_arr.reshape(1, -1)
            + F[:, None] * t_arr.reshape(1, -1) ** 2 / (2 * m))
    shift = np.vstack([-F[1] / 2 * np.ravel(drift), F[0] / 2 * np.ravel(drift),
                       np.zeros(t_arr.size)])
    out = (base + shift).T
    return out[0] if t_arr.ndim == 0 else out


def analytic_velocity(t, params: ConstantForceParams, spec: DeformationSpec,
                      init: InitialData) -> np.ndarray:
    t_arr = np.asarray(t, dtype=float)
    m, F = params.m, params.F
    df = np.ravel(eval_f(spec, t_arr) - eval_f(spec, 0.0))
    tt = t_arr.reshape(-1)
    out = (init.v0[:, None] + F[:, None] * tt / m
           + np.vstack([-F[1] / 2 * df, F[0] / 2 * df, np.zeros(tt.size)])).T
    return out[0] if t_arr.ndim == 0 else out


def curl_G(t: float, params: ConstantForceParams, spec: DeformationSpec, at, h: float = 1e-5) -> np.ndarray:
    """Finite-difference curl of G with respect to position."""
    if h <= 0:
        raise ValueError("h must be positive")
    return _fd.curl(lambda x: force_G(t, params, spec), at, h)


def potential_V(x, t: float, params: ConstantForceParams, spec: DeformationSpec,
                mass_factor: bool = True) -> float:
    """Time-dependent potential with ``G = -grad V``.

    ``mass_factor=False`` drops the mass from the fdot term; that variant
    only reproduces G when m = 1 and is kept for comparison.
    """
    x = np.asarray(x, dtype=float)
    F = params.F
    fdot = eval_f_dot(spec, t)
    coeff = params.m * fdot / 2 if mass_factor else fdot / 2
    return float(-F @ x - coeff * (F[0] * x[1] - F[1] * x[0]))

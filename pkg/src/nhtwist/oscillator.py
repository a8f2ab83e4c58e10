"""Isotropic harmonic oscillator on the deformed space.

Substituting the representation map into ``pbar**2 / 2m + m w**2 xbar**2 / 2``
gives, in canonical variables,

    H_f = (p1**2 + p2**2) / (2 M_f) + m w**2 (x1**2 + x2**2) / 2
          - f m w**2 L3 / 2 + p3**2 / (2m) + m w**2 x3**2 / 2

with effective mass ``M_f = m / (1 + m**2 w**2 f**2 / 4)`` and
``L3 = x1 p2 - x2 p1``. The minus sign on the ``L3`` coupling is what the
substitution produces, and it is the sign for which the Newton-form force
:func:`force_H` (and its canonical limit ``-m w**2 x1 + m**2 w**2 theta x2dot``)
matches the Hamiltonian flow. The Hamiltonian flow is what gets integrated;
:func:`force_H` is kept as an independent check.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _fd
from .constant_force import InitialData
from .deformations import DeformationSpec, eval_f, eval_f_dot, has_constant_f
from .errors import ConfigurationError
from .phase_space import CanonicalState, NoncommutativeCoords

__all__ = [
    "OscillatorParams",
    "EffectiveMassSample",
    "effective_mass",
    "angular_momentum",
    "effective_mass_sample",
    "hamiltonian_osc",
    "hamiltonian_osc_noncommutative",
    "hamiltonian_osc_time_partial",
    "eom_rhs_osc",
    "make_rhs_osc",
    "initial_state_osc",
    "force_H",
    "curl_H_analytic",
    "curl_H_numeric",
    "classify_conservative",
]


@dataclass
class OscillatorParams:
    m: float
    omega: float

    def __post_init__(self):
        self.m = float(self.m)
        self.omega = float(self.omega)
        for name, value in (("mass", self.m), ("omega", self.omega)):
            if not (np.isfinite(value) and value > 0):
                raise ConfigurationError(f"{name} must be positive, got {value!r}")

    def to_dict(self) -> dict:
        return {"m": self.m, "omega": self.omega}

    @classmethod
    def from_dict(cls, data: dict) -> "OscillatorParams":
        try:
            return cls(data["m"], data["omega"])
        except KeyError as exc:
            raise ConfigurationError(f"params missing field {exc.args[0]!r}") from None


@dataclass(frozen=True)
class EffectiveMassSample:
    t: float
    M: float
    L3: float


def _mass_from_f(f, params):
    m, w = params.m, params.omega
    return m / (1.0 + (m * w * f) ** 2 / 4.0)


def effective_mass(t, params: OscillatorParams, spec: DeformationSpec):
    """M_f(t) = m / (1 + m**2 omega**2 f(t)**2 / 4)."""
    return _mass_from_f(eval_f(spec, t), params)


def angular_momentum(state: CanonicalState) -> float:
    x, p = state.x, state.p
    return float(x[0] * p[1] - x[1] * p[0])


def effective_mass_sample(state: CanonicalState, params: OscillatorParams,
                          spec: DeformationSpec) -> EffectiveMassSample:
    return EffectiveMassSample(state.t, effective_mass(state.t, params, spec), angular_momentum(state))


def _energy(t, y, f, params):
    m, w = params.m, params.omega
    x, p = y[:3], y[3:]
    M = _mass_from_f(f, params)
    L3 = x[0] * p[1] - x[1] * p[0]
    k = m * w * w
    return ((p[0] ** 2 + p[1] ** 2) / (2 * M) + k * (x[0] ** 2 + x[1] ** 2) / 2
            - f * k * L3 / 2 + p[2] ** 2 / (2 * m) + k * x[2] ** 2 / 2)


def hamiltonian_osc(state: CanonicalState, params: OscillatorParams, spec: DeformationSpec) -> float:
    return float(_energy(state.t, state.as_array(), eval_f(spec, state.t), params))


def hamiltonian_osc_noncommutative(coords: NoncommutativeCoords, params: OscillatorParams) -> float:
    m, w = params.m, params.omega
    return float(coords.pbar @ coords.pbar / (2 * m) + m * w * w * (coords.xbar @ coords.xbar) / 2)


def hamiltonian_osc_time_partial(state: CanonicalState, params: OscillatorParams,
                                 spec: DeformationSpec) -> float:
    """Explicit time derivative of H_f at a frozen phase-space point."""
    m, w = params.m, params.omega
    f = eval_f(spec, state.t)
    fdot = eval_f_dot(spec, state.t)
    p = state.p
    k = m * w * w
    # d/dt [1 / 2M] = m w^2 f fdot / 4
    return float((p[0] ** 2 + p[1] ** 2) * k * f * fdot / 4 - fdot * k * angular_momentum(state) / 2)


def _flow(y, f, params):
    m, w = params.m, params.omega
    k = m * w * w
    M = _mass_from_f(f, params)
    x1, x2, x3, p1, p2, p3 = y
    return np.array([
        p1 / M + f * k * x2 / 2,
        p2 / M - f * k * x1 / 2,
        p3 / m,
        -k * x1 + f * k * p2 / 2,
        -k * x2 - f * k * p1 / 2,
        -k * x3,
    ])


def eom_rhs_osc(state: CanonicalState, params: OscillatorParams, spec: DeformationSpec) -> np.ndarray:
    """Hamilton's equations for H_f, as the 6-vector (xdot, pdot)."""
    return _flow(state.as_array(), eval_f(spec, state.t), params)


def make_rhs_osc(params: OscillatorParams, spec: DeformationSpec):
    def rhs(t, y):
        return _flow(y, eval_f(spec, t), params)

    return rhs


def initial_state_osc(init: InitialData, params: OscillatorParams, spec: DeformationSpec,
                      t0: float = 0.0) -> CanonicalState:
    """Canonical state at ``t0`` with position ``init.x0`` and velocity ``init.v0``."""
    m, w = params.m, params.omega
    f = eval_f(spec, t0)
    M = _mass_from_f(f, params)
    k = m * w * w
    x, v = init.x0, init.v0
    p = np.array([M * (v[0] - f * k * x[1] / 2), M * (v[1] + f * k * x[0] / 2), m * v[2]])
    return CanonicalState(t0, x, p)


def force_H(x, xdot, t: float, params: OscillatorParams, spec: DeformationSpec) -> np.ndarray:
    """Velocity-dependent Newton force: m xddot = H(x, xdot, t)."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(xdot, dtype=float)
    m, w = params.m, params.omega
    f = eval_f(spec, t)
    fdot = eval_f_dot(spec, t)
    M = _mass_from_f(f, params)
    a = m * m * w * w / 2
    c = 1 - m * w * w * M * f * f / 2
    H1 = a * f * (fdot * M * v[0] + 2 * v[1]) + a * fdot * c * x[1] - m * w * w * x[0]
    H2 = a * f * (fdot * M * v[1] - 2 * v[0]) - a * fdot * c * x[0] - m * w * w * x[1]
    H3 = -m * w * w * x[2]
    return np.array([H1, H2, H3])


def curl_H_analytic(t: float, params: OscillatorParams, spec: DeformationSpec) -> np.ndarray:
    """Position-curl of H at frozen velocity; only the third component survives."""
    m, w = params.m, params.omega
    f = eval_f(spec, t)
    fdot = eval_f_dot(spec, t)
    M = _mass_from_f(f, params)
    return np.array([0.0, 0.0, m * m * w * w * fdot * (m * w * w * M * f * f / 2 - 1)])


def curl_H_numeric(x, xdot, t: float, params: OscillatorParams, spec: DeformationSpec,
                   h: float = 1e-5) -> np.ndarray:
    return _fd.curl(lambda xx: force_H(xx, xdot, t, params, spec), x, h)


def classify_conservative(spec: DeformationSpec) -> bool:
    """Whether the oscillator force stays curl-free: exactly when f is constant."""
    return has_constant_f(spec)

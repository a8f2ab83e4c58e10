"""Time-dependent deformation functions f(t) of the twisted Newton-Hooke spaces.

Every family is a function of ``u = t / tau`` built from ``C`` and ``S``,
which are ``cosh``/``sinh`` for the expanding (``nh+``) variant and
``cos``/``sin`` for the oscillating (``nh-``) variant::

    k1:  kappa            C(u)**2
    k2:  kappa tau        C(u) S(u)
    k3:  kappa tau**2     S(u)**2
    k4:  4 kappa tau**4   (C(u) - 1)**2
    k5:  +/- kappa tau**2 (C(u) - 1) C(u)
    k6:  +/- kappa tau**3 (C(u) - 1) S(u)

The ``limit`` variant holds the ``tau -> oo`` polynomials
``kappa, kappa t, kappa t**2, kappa t**4, kappa t**2 / 2, kappa t**3 / 2``.

For ``|u| <= 1`` the functions are summed from their Taylor series; the
closed forms suffer cancellation there (``C - 1``, ``S(2u)/4 - u/2``, ...),
and large ``tau`` would otherwise destroy the Galilean limit numerically.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import ConfigurationError

__all__ = [
    "Family",
    "Variant",
    "DeformationSpec",
    "eval_f",
    "eval_f_dot",
    "eval_f_antiderivative",
    "galilean_limit_of",
    "all_configurations",
    "has_constant_f",
]


class Family(str, enum.Enum):
    K1 = "k1"
    K2 = "k2"
    K3 = "k3"
    K4 = "k4"
    K5 = "k5"
    K6 = "k6"


class Variant(str, enum.Enum):
    NH_PLUS = "nh+"
    NH_MINUS = "nh-"
    LIMIT = "limit"


# power of tau multiplying the dimensionless profile g(u)
_TAU_POWER = {Family.K1: 0, Family.K2: 1, Family.K3: 2,
              Family.K4: 4, Family.K5: 2, Family.K6: 3}

# Galilean limit: f = kappa * coeff * t**power
_LIMIT_POLY = {Family.K1: (1.0, 0), Family.K2: (1.0, 1), Family.K3: (1.0, 2),
               Family.K4: (1.0, 4), Family.K5: (0.5, 2), Family.K6: (0.5, 3)}

_SERIES_DEGREE = 28
_SERIES_RADIUS = 1.0


@dataclass(frozen=True)
class DeformationSpec:
    """Which deformation family is active, and with which parameters.

    ``tau`` is required for the Newton-Hooke variants; for ``Variant.LIMIT``
    it is discarded (stored as None). Strings such as ``"k3"`` or ``"nh-"`` are accepted
    for ``family`` and ``variant``.
    """

    family: Family
    variant: Variant
    kappa: float
    tau: Optional[float] = None

    def __post_init__(self):
        try:
            family = Family(self.family)
            variant = Variant(self.variant)
        except ValueError as exc:
            raise ConfigurationError(str(exc)) from None
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "variant", variant)
        kappa = float(self.kappa)
        if not math.isfinite(kappa):
            raise ConfigurationError(f"kappa must be finite, got {self.kappa!r}")
        object.__setattr__(self, "kappa", kappa)
        if variant is Variant.LIMIT:
            object.__setattr__(self, "tau", None)
            return
        if self.tau is None:
            raise ConfigurationError(f"tau is required for variant {variant.value!r}")
        tau = float(self.tau)
        if not (math.isfinite(tau) and tau > 0):
            raise ConfigurationError(f"tau must be a positive finite number, got {self.tau!r}")
        object.__setattr__(self, "tau", tau)

    @property
    def sign(self) -> int:
        """+1 for the hyperbolic variant, -1 for the trigonometric one."""
        return -1 if self.variant is Variant.NH_MINUS else 1

    @property
    def label(self) -> str:
        return f"{self.family.value}/{self.variant.value}"

    def to_dict(self) -> dict:
        out = {"family": self.family.value, "variant": self.variant.value,
               "kappa": self.kappa}
        if self.variant is not Variant.LIMIT:
            out["tau"] = self.tau
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "DeformationSpec":
        try:
            return cls(data["family"], data["variant"], data["kappa"], data.get("tau"))
        except KeyError as exc:
            raise ConfigurationError(f"deformation is missing field {exc.args[0]!r}") from None
        except TypeError as exc:
            raise ConfigurationError(str(exc)) from None


def all_configurations(kappa: float = 0.5, tau: float = 2.0) -> list[DeformationSpec]:
    """The 18 family x variant combinations sharing one ``kappa`` and ``tau``."""
    return [DeformationSpec(fam, var, kappa, tau) for fam in Family for var in Variant]


def has_constant_f(spec: DeformationSpec) -> bool:
    """True iff f does not depend on time (canonical limit or kappa = 0)."""
    return spec.kappa == 0.0 or (spec.family is Family.K1 and spec.variant is Variant.LIMIT)


def galilean_limit_of(spec: DeformationSpec) -> DeformationSpec:
    """Return the ``tau -> oo`` counterpart of a Newton-Hooke deformation."""
    if spec.variant is Variant.LIMIT:
        raise ConfigurationError(f"{spec.label} is already a Galilean-limit deformation")
    return DeformationSpec(spec.family, Variant.LIMIT, spec.kappa)


# ---------------------------------------------------------------------------
# dimensionless profiles g(u), g'(u) and G(u) = int_0^u g

def _trig_pair(sign, u):
    if isinstance(u, float):
        if sign < 0:
            return math.cos(u), math.sin(u)
        if abs(u) < 700.0:
            return math.cosh(u), math.sinh(u)
    if sign > 0:
        return np.cosh(u), np.sinh(u)
    return np.cos(u), np.sin(u)


def _closed_form(family, sign, u):
    s = sign
    C, S = _trig_pair(s, u)
    S2 = _trig_pair(s, 2.0 * u)[1]
    if family is Family.K1:
        return C * C, 2 * s * C * S, u / 2 + S2 / 4
    if family is Family.K2:
        return C * S, C * C + s * S * S, S * S / 2
    if family is Family.K3:
        return S * S, 2 * S * C, s * (S2 / 4 - u / 2)
    if family is Family.K4:
        return 4 * (C - 1) ** 2, 8 * s * (C - 1) * S, 4 * (1.5 * u + S2 / 4 - 2 * S)
    if family is Family.K5:
        return s * (C - 1) * C, (2 * C - 1) * S, s * (u / 2 + S2 / 4 - S)
    # K6
    return s * (C - 1) * S, s * (s * S * S + C * C - C), s * S * S / 2 - (C - 1)


@lru_cache(maxsize=None)
def _series(family, sign):
    """Taylor coefficients (ascending) of g, g' and G about u = 0."""
    n = _SERIES_DEGREE
    C = np.zeros(n + 1)
    S = np.zeros(n + 1)
    for k in range(n + 1):
        coeff = 1.0 / math.factorial(k)
        if k % 2 == 0:
            C[k] = coeff * (sign ** (k // 2))
        else:
            S[k] = coeff * (sign ** (k // 2))
    one = np.array([1.0])
    Cm1 = P.polysub(C, one)

    def mul(a, b):
        return P.polymul(a, b)[: n + 1]

    if family is Family.K1:
        g = mul(C, C)
    elif family is Family.K2:
        g = mul(C, S)
    elif family is Family.K3:
        g = mul(S, S)
    elif family is Family.K4:
        g = 4.0 * mul(Cm1, Cm1)
    elif family is Family.K5:
        g = sign * mul(Cm1, C)
    else:
        g = sign * mul(Cm1, S)
    return g, P.polyder(g), P.polyint(g)


def _profile(spec, u, which):
    """Evaluate g (which=0), g' (1) or G (2) at the array ``u``."""
    coeffs = _series(spec.family, spec.sign)[which]
    small = np.abs(u) <= _SERIES_RADIUS
    out = P.polyval(u, coeffs)
    if not np.all(small):
        with np.errstate(over="ignore", invalid="ignore"):
            closed = _closed_form(spec.family, spec.sign, u)[which]
        out = np.where(small, out, closed)
    return out


def _horner(coeffs, u):
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * u + c
    return acc


@lru_cache(maxsize=None)
def _series_list(family, sign, which):
    return tuple(float(c) for c in _series(family, sign)[which])


def _evaluate_scalar(spec, t, which):
    # hot path for integrators: plain floats, no array allocation
    if spec.kappa == 0.0:
        return 0.0
    if spec.variant is Variant.LIMIT:
        coeff, n = _LIMIT_POLY[spec.family]
        if which == 0:
            return spec.kappa * coeff * t ** n
        if which == 1:
            return spec.kappa * coeff * n * t ** (n - 1) if n else 0.0
        return spec.kappa * coeff * t ** (n + 1) / (n + 1)
    tau = spec.tau
    u = t / tau
    power = _TAU_POWER[spec.family] + (0, -1, 1)[which]
    if abs(u) <= _SERIES_RADIUS:
        prof = _horner(_series_list(spec.family, spec.sign, which), u)
    else:
        with np.errstate(over="ignore", invalid="ignore"):
            prof = float(_closed_form(spec.family, spec.sign, u)[which])
    return spec.kappa * tau ** power * prof


def _evaluate(spec: DeformationSpec, t, which: int):
    if isinstance(t, (float, int)) and not isinstance(t, bool):
        return _evaluate_scalar(spec, float(t), which)
    t_arr = np.asarray(t, dtype=float)
    if spec.kappa == 0.0:
        out = np.zeros_like(t_arr)
    elif spec.variant is Variant.LIMIT:
        coeff, n = _LIMIT_POLY[spec.family]
        if which == 0:
            out = spec.kappa * coeff * t_arr ** n
        elif which == 1:
            out = spec.kappa * coeff * n * t_arr ** (n - 1) if n else np.zeros_like(t_arr)
        else:
            out = spec.kappa * coeff * t_arr ** (n + 1) / (n + 1)
    else:
        tau = spec.tau
        k = _TAU_POWER[spec.family]
        # d/dt brings 1/tau, integrating over t brings tau
        power = k + {0: 0, 1: -1, 2: 1}[which]
        out = spec.kappa * tau ** power * _profile(spec, t_arr / tau, which)
    if np.ndim(out) == 0:
        return float(out)
    return out


def eval_f(spec: DeformationSpec, t):
    """Deformation function f(t); accepts scalars or arrays of times."""
    return _evaluate(spec, t, 0)


def eval_f_dot(spec: DeformationSpec, t):
    """Exact time derivative df/dt."""
    return _evaluate(spec, t, 1)


def eval_f_antiderivative(spec: DeformationSpec, t):
    """Integral of f from 0 to t."""
    return _evaluate(spec, t, 2)

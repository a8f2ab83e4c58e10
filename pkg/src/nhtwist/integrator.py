"""Fixed-step classical Runge-Kutta integration with trajectory recording."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ConfigurationError, IntegrationError
from .phase_space import CanonicalState

__all__ = [
    "Method",
    "IntegrationConfig",
    "Trajectory",
    "OrderEstimate",
    "rk4_step",
    "integrate",
    "estimate_order",
]

RHS = Callable[[float, np.ndarray], np.ndarray]


class Method(str, enum.Enum):
    RK4 = "rk4"
    RK4_HALVED = "rk4_halved"


@dataclass
class IntegrationConfig:
    t0: float = 0.0
    t_end: float = 10.0
    step: float = 1e-3
    method: Method = Method.RK4
    record_every: int = 1

    def __post_init__(self):
        try:
            self.method = Method(self.method)
        except ValueError:
            raise ConfigurationError(f"unknown integration method {self.method!r}") from None
        self.t0, self.t_end, self.step = float(self.t0), float(self.t_end), float(self.step)
        if not all(map(math.isfinite, (self.t0, self.t_end, self.step))):
            raise ConfigurationError("integration times and step must be finite")
        if self.t_end <= self.t0:
            raise ConfigurationError(f"t_end ({self.t_end}) must exceed t0 ({self.t0})")
        if self.step <= 0 or self.step > self.t_end - self.t0:
            raise ConfigurationError(f"step must lie in (0, t_end - t0], got {self.step}")
        if int(self.record_every) != self.record_every or self.record_every < 1:
            raise ConfigurationError("record_every must be a positive integer")
        self.record_every = int(self.record_every)

    @property
    def n_steps(self) -> int:
        # tolerate t_end being a float multiple of step
        return max(1, math.ceil((self.t_end - self.t0) / self.step - 1e-9))

    def to_dict(self) -> dict:
        return {"t0": self.t0, "t_end": self.t_end, "step": self.step,
                "method": self.method.value, "record_every": self.record_every}

    @classmethod
    def from_dict(cls, data: dict) -> "IntegrationConfig":
        known = {"t0", "t_end", "step", "method", "record_every"}
        unknown = set(data) - known
        if unknown:
            raise ConfigurationError(f"unknown integration fields: {sorted(unknown)}")
        return cls(**data)


@dataclass
class Trajectory:
    """Recorded samples of an integration.

    ``y`` holds rows ``(x1, x2, x3, p1, p2, p3)``; ``error_estimate`` is only
    filled by the step-halving method.
    """

    t: np.ndarray
    y: np.ndarray
    diagnostics: dict[str, np.ndarray] = field(default_factory=dict)
    error_estimate: Optional[np.ndarray] = None

    def __len__(self):
        return len(self.t)

    @property
    def x(self) -> np.ndarray:
        return self.y[:, :3]

    @property
    def p(self) -> np.ndarray:
        return self.y[:, 3:]

    @property
    def samples(self) -> list[CanonicalState]:
        return [CanonicalState.from_array(t, y) for t, y in zip(self.t, self.y)]

    @property
    def final_state(self) -> CanonicalState:
        return CanonicalState.from_array(self.t[-1], self.y[-1])

    def add_diagnostic(self, name: str, fn: Callable[[CanonicalState], float]) -> None:
        self.diagnostics[name] = np.array([fn(s) for s in self.samples])


def rk4_step(rhs: RHS, t: float, y: np.ndarray, h: float) -> np.ndarray:
    k1 = rhs(t, y)
    k2 = rhs(t + h / 2, y + h / 2 * k1)
    k3 = rhs(t + h / 2, y + h / 2 * k2)
    k4 = rhs(t + h, y + h * k3)
    return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def _blown_up(*arrays):
    return not all(np.all(np.isfinite(a)) for a in arrays)


def integrate(rhs: RHS, initial: CanonicalState, cfg: IntegrationConfig) -> Trajectory:
    """Integrate ``y' = rhs(t, y)`` from ``cfg.t0`` to ``cfg.t_end``.

    Steps are uniform except the last, which is shortened to land exactly on
    ``t_end``. The initial state's own ``t`` is ignored in favour of ``cfg.t0``.
    With ``Method.RK4_HALVED`` a second solution is carried with two half
    steps per step, and ``16 (y_h - y_{h/2}) / 15`` is recorded as the
    Richardson error estimate of the reported step-``h`` solution.

    Raises
    ------
    IntegrationError
        If the state becomes non-finite.
    """
    n = cfg.n_steps
    halved = cfg.method is Method.RK4_HALVED
    y = initial.as_array()
    y_half = y.copy()
    ts, ys, errs = [cfg.t0], [y.copy()], [np.zeros(6)]
    t = cfg.t0
    for k in range(1, n + 1):
        t_next = cfg.t_end if k == n else cfg.t0 + k * cfg.step
        h = t_next - t
        # overflow is reported through IntegrationError below, not as warnings
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            y = rk4_step(rhs, t, y, h)
            if halved:
                y_half = rk4_step(rhs, t, y_half, h / 2)
                y_half = rk4_step(rhs, t + h / 2, y_half, t_next - (t + h / 2))
        if _blown_up(y, y_half):
            raise IntegrationError(f"state became non-finite at t={t_next!r}", t_next)
        t = t_next
        if k % cfg.record_every == 0 or k == n:
            ts.append(t)
            ys.append(y.copy())
            if halved:
                errs.append(16.0 * (y - y_half) / 15.0)
    return Trajectory(np.array(ts), np.array(ys),
                      error_estimate=np.array(errs) if halved else None)


@dataclass
class OrderEstimate:
    """Empirical convergence order from a step-refinement study."""

    order: float
    steps: tuple
    errors: tuple

    @property
    def estimable(self) -> bool:
        return math.isfinite(self.order)


def estimate_order(rhs: RHS, initial: CanonicalState, t_end: float,
                   step: Optional[float] = None) -> OrderEstimate:
    """Observed order from the final-state errors at steps h, h/2, h/4.

    The reference is the h/8 solution; the order is ``log2(e(h) / e(h/2))``.
    A zero or roundoff-level error (e.g. a right-hand side RK4 integrates
    exactly) yields ``order = nan``.
    """
    t0 = initial.t
    span = t_end - t0
    h = span / 10 if step is None else float(step)
    steps = (h, h / 2, h / 4, h / 8)
    finals = [integrate(rhs, initial, IntegrationConfig(t0, t_end, s)).y[-1] for s in steps]
    ref = finals[-1]
    scale = 1.0 + float(np.max(np.abs(ref)))
    errors = tuple(float(np.max(np.abs(f - ref))) for f in finals[:3])
    if errors[1] <= 1e-13 * scale or errors[0] <= 1e-13 * scale:
        return OrderEstimate(float("nan"), steps[:3], errors)
    return OrderEstimate(math.log2(errors[0] / errors[1]), steps[:3], errors)

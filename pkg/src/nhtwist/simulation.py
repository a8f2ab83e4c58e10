"""Model dispatch: build right-hand sides, initial states and diagnostics."""
from __future__ import annotations

import enum
from typing import Union

import numpy as np

from . import constant_force as cf
from . import oscillator as osc
from .deformations import DeformationSpec, eval_f
from .errors import ConfigurationError
from .integrator import IntegrationConfig, Trajectory, integrate

__all__ = ["Model", "ModelParams", "simulate", "energy_function", "parse_params"]

ModelParams = Union[cf.ConstantForceParams, osc.OscillatorParams]


class Model(str, enum.Enum):
    CONSTANT_FORCE = "constant_force"
    OSCILLATOR = "oscillator"


def _check(model, params):
    expected = cf.ConstantForceParams if model is Model.CONSTANT_FORCE else osc.OscillatorParams
    if not isinstance(params, expected):
        raise ConfigurationError(f"model {model.value} needs {expected.__name__}")


def parse_params(model, data: dict) -> ModelParams:
    model = Model(model)
    if model is Model.CONSTANT_FORCE:
        return cf.ConstantForceParams.from_dict(data)
    return osc.OscillatorParams.from_dict(data)


def energy_function(model, params: ModelParams, spec: DeformationSpec):
    model = Model(model)
    _check(model, params)
    if model is Model.CONSTANT_FORCE:
        return lambda s: cf.hamiltonian(s, params, spec)
    return lambda s: osc.hamiltonian_osc(s, params, spec)


def simulate(model, spec: DeformationSpec, params: ModelParams, init: cf.InitialData,
             cfg: IntegrationConfig) -> Trajectory:
    """Integrate one model and attach ``energy``, ``f_t`` (and ``M_f``) diagnostics."""
    model = Model(model)
    _check(model, params)
    if model is Model.CONSTANT_FORCE:
        rhs = cf.make_rhs(params, spec)
        start = cf.initial_state(init, params, spec, cfg.t0)
    else:
        rhs = osc.make_rhs_osc(params, spec)
        start = osc.initial_state_osc(init, params, spec, cfg.t0)
    traj = integrate(rhs, start, cfg)
    traj.add_diagnostic("energy", energy_function(model, params, spec))
    traj.diagnostics["f_t"] = np.asarray(eval_f(spec, traj.t), dtype=float)
    if model is Model.OSCILLATOR:
        traj.diagnostics["M_f"] = np.asarray(osc.effective_mass(traj.t, params, spec), dtype=float)
    return traj

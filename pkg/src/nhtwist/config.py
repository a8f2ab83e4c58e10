"""Run configuration: JSON file schema plus command-line overrides.

A config file looks like::

    {
      "model": "oscillator",
      "deformation": {"family": "k1", "variant": "limit", "kappa": 0.5},
      "params": {"m": 1.0, "omega": 1.0},
      "initial": {"x0": [1, 0, 0], "v0": [0, 1, 0]},
      "integration": {"t0": 0, "t_end": 10, "step": 0.001},
      "output": {"path": "run.csv", "format": "csv"},
      "grid": {"kappa": [0, 0.1, 0.2], "tau": [1, 2]}
    }

Every section is optional; ``grid`` is only read by ``sweep``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Optional

from .constant_force import InitialData
from .deformations import DeformationSpec
from .errors import ConfigurationError
from .integrator import IntegrationConfig
from .simulation import Model, ModelParams, parse_params

__all__ = ["RunConfig", "load_config_file", "build_run_config", "GRID_KEYS"]

GRID_KEYS = ("kappa", "tau", "m", "omega")

_DEFAULTS = {
    "model": "constant_force",
    "deformation": {"family": "k1", "variant": "limit", "kappa": 0.0},
    "params": {"m": 1.0, "F": [0.0, 0.0, 0.0], "omega": 1.0},
    "initial": {"x0": [0.0, 0.0, 0.0], "v0": [0.0, 0.0, 0.0]},
    "integration": {"t0": 0.0, "t_end": 10.0, "step": 1e-3, "method": "rk4", "record_every": 1},
    "output": {"path": None, "format": "csv"},
}


@dataclass
class RunConfig:
    model: Model
    spec: DeformationSpec
    params: ModelParams
    init: InitialData
    integration: IntegrationConfig
    out: Optional[str] = None
    fmt: str = "csv"
    grid: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "model": self.model.value,
            "deformation": self.spec.to_dict(),
            "params": self.params.to_dict(),
            "initial": self.init.to_dict(),
            "integration": self.integration.to_dict(),
            "output": {"path": self.out, "format": self.fmt},
        }
        if self.grid:
            out["grid"] = self.grid
        return out

    def with_cell(self, kappa=None, tau=None, m=None, omega=None) -> "RunConfig":
        """Copy with some scalar parameters replaced (one sweep cell)."""
        spec = self.spec.to_dict()
        if kappa is not None:
            spec["kappa"] = kappa
        if tau is not None and spec["variant"] != "limit":
            spec["tau"] = tau
        params = self.params.to_dict()
        if m is not None:
            params["m"] = m
        if omega is not None and "omega" in params:
            params["omega"] = omega
        return replace(self, spec=DeformationSpec.from_dict(spec),
                       params=parse_params(self.model, params), grid={})


def load_config_file(path) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigurationError("config file must hold a JSON object")
    return data


def build_run_config(file_data: Optional[dict] = None, overrides: Optional[dict] = None) -> RunConfig:
    """Merge defaults, file contents and flag overrides (flags win).

    ``overrides`` uses the same nested layout as the file; ``None`` values are
    treated as "not given".
    """
    merged = {k: (dict(v) if isinstance(v, dict) else v) for k, v in _DEFAULTS.items()}
    for source in (file_data or {}, overrides or {}):
        for key, value in source.items():
            if value is None:
                continue
            if key not in merged and key != "grid":
                raise ConfigurationError(f"unknown config section {key!r}")
            if isinstance(value, dict):
                section = merged.setdefault(key, {})
                section.update({k: v for k, v in value.items() if v is not None})
            else:
                merged[key] = value

    try:
        model = Model(merged["model"])
    except ValueError:
        raise ConfigurationError(f"unknown model {merged['model']!r}") from None
    deformation = dict(merged["deformation"])
    if deformation.get("variant") == "limit":
        deformation.pop("tau", None)
    spec = DeformationSpec.from_dict(deformation)

    params_raw = merged["params"]
    if model is Model.CONSTANT_FORCE:
        params = parse_params(model, {"m": params_raw.get("m"), "F": params_raw.get("F")})
    else:
        params = parse_params(model, {"m": params_raw.get("m"), "omega": params_raw.get("omega")})
    init = InitialData.from_dict(merged["initial"])
    integration = IntegrationConfig.from_dict(merged["integration"])

    output = merged["output"]
    fmt = output.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigurationError(f"unknown output format {fmt!r}")

    grid = merged.get("grid") or {}
    unknown = set(grid) - set(GRID_KEYS)
    if unknown:
        raise ConfigurationError(f"unknown grid axes: {sorted(unknown)}")
    for key, values in grid.items():
        if not isinstance(values, list) or not values:
            raise ConfigurationError(f"grid axis {key!r} must be a nonempty list")
    return RunConfig(model, spec, params, init, integration, output.get("path"), fmt, grid)

"""``nhtwist`` command line: simulate, check and sweep.

Exit codes: 0 success, 1 a check failed, 2 configuration error,
3 numerical failure.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import datetime
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from . import constant_force as cf
from . import oscillator as osc
from .checks import SUITES, run_suite
from .config import GRID_KEYS, RunConfig, build_run_config, load_config_file
from .deformations import DeformationSpec, all_configurations, eval_f
from .errors import ConfigurationError, IntegrationError
from .io import fmt, write_trajectory_csv, write_trajectory_json
from .simulation import Model, simulate

EXIT_OK, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3

STIFFNESS_LIMIT = 1e6


def _vector(text):
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y,z numbers, got {text!r}") from None
    if len(values) != 3:
        raise argparse.ArgumentTypeError(f"expected 3 comma-separated numbers, got {text!r}")
    return values


def _number_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_run_flags(p, with_output=True):
    p.add_argument("--config", help="JSON run configuration; flags override its values")
    p.add_argument("--model", choices=[m.value for m in Model])
    p.add_argument("--family", choices=[f"k{i}" for i in range(1, 7)])
    p.add_argument("--variant", choices=["nh+", "nh-", "limit"])
    p.add_argument("--kappa", type=float)
    p.add_argument("--tau", type=float)
    p.add_argument("--m", type=float, help="particle mass")
    p.add_argument("--omega", type=float, help="oscillator angular frequency")
    p.add_argument("--force", type=_vector, metavar="X,Y,Z", help="constant external force")
    p.add_argument("--x0", type=_vector, metavar="X,Y,Z")
    p.add_argument("--v0", type=_vector, metavar="X,Y,Z")
    p.add_argument("--t0", type=float)
    p.add_argument("--t-end", type=float)
    p.add_argument("--step", type=float)
    p.add_argument("--method", choices=["rk4", "rk4_halved"])
    p.add_argument("--record-every", type=int)
    if with_output:
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=["csv", "json"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nhtwist",
        description="Classical dynamics on twist-deformed Newton-Hooke space-times.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="integrate one trajectory")
    _add_run_flags(sim)

    chk = sub.add_parser("check", help="run a verification suite")
    chk.add_argument("suite", choices=SUITES)
    chk.add_argument("--model", choices=[m.value for m in Model], default="constant_force",
                     help="model whose force is checked by the curl suite")
    chk.add_argument("--family", choices=[f"k{i}" for i in range(1, 7)],
                     help="restrict to one configuration (needs --variant)")
    chk.add_argument("--variant", choices=["nh+", "nh-", "limit"])
    chk.add_argument("--kappa", type=float, default=0.5)
    chk.add_argument("--tau", type=float, default=None,
                     help="tau of the checked configurations (limits suite: the large tau, default 1e6)")
    chk.add_argument("--out", help="write the JSON report here (default: stdout)")

    swp = sub.add_parser("sweep", help="run a Cartesian parameter grid")
    _add_run_flags(swp)
    for key in GRID_KEYS:
        swp.add_argument(f"--{key}-values", type=_number_list, metavar="A,B,...")
    swp.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    return parser


def _overrides(args) -> dict:
    return {
        "model": args.model,
        "deformation": {"family": args.family, "variant": args.variant,
                        "kappa": args.kappa, "tau": args.tau},
        "params": {"m": args.m, "omega": args.omega, "F": args.force},
        "initial": {"x0": args.x0, "v0": args.v0},
        "integration": {"t0": args.t0, "t_end": args.t_end, "step": args.step,
                        "method": args.method, "record_every": args.record_every},
        "output": {"path": getattr(args, "out", None), "format": getattr(args, "format", None)},
    }


def _run_config(args, tau_axis=None) -> RunConfig:
    file_data = load_config_file(args.config) if args.config else None
    overrides = _overrides(args)
    if tau_axis is None and file_data:
        tau_axis = (file_data.get("grid") or {}).get("tau")
    if args.tau is None and tau_axis:
        # a tau grid axis stands in for the base tau of NH variants
        overrides["deformation"]["tau"] = tau_axis[0]
    return build_run_config(file_data, overrides)


@contextlib.contextmanager
def _data_stream(path):
    """Yield (data_fh, text_fh): data goes to ``path`` or stdout, text elsewhere."""
    if path:
        with open(path, "w", newline="") as fh:
            yield fh, sys.stdout
    else:
        yield sys.stdout, sys.stderr


def _write_sidecar(path, command, payload):
    meta = {
        "command": command,
        "version": __version__,
        "created": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        **payload,
    }
    with open(f"{path}.meta.json", "w") as fh:
        json.dump(meta, fh, indent=1)
        fh.write("\n")


# ---------------------------------------------------------------------------
# simulate

def _summary(cfg: RunConfig, traj) -> list[str]:
    spec = cfg.spec
    final = traj.final_state
    energy = traj.diagnostics["energy"]
    f_t = traj.diagnostics["f_t"]
    lines = [
        f"model: {cfg.model.value}",
        f"deformation: {spec.label} kappa={fmt(spec.kappa)}"
        + (f" tau={fmt(spec.tau)}" if spec.tau is not None and spec.variant.value != "limit" else ""),
        f"undeformed: {str(spec.kappa == 0.0).lower()}",
        f"samples: {len(traj)}",
        f"final t: {fmt(final.t)}",
        "final x: " + " ".join(fmt(v) for v in final.x),
        "final p: " + " ".join(fmt(v) for v in final.p),
        f"max |f|: {fmt(np.max(np.abs(f_t)))}",
        f"energy drift: {fmt(np.max(np.abs(energy - energy[0])))}",
    ]
    if cfg.model is Model.CONSTANT_FORCE:
        # every constant-force configuration has a curl-free G
        lines.append("conservative: true")
        offsets = np.array([(cf.force_G(t, cfg.params, spec) - cfg.params.F) / cfg.params.m
                            for t in traj.t])
        constant = bool(np.allclose(offsets, offsets[0], rtol=1e-12, atol=1e-14))
        lines.append(f"acceleration offset constant: {str(constant).lower()}")
        label = "acceleration offset" if constant else "acceleration offset at t_end"
        lines.append(f"{label}: " + " ".join(fmt(v) for v in offsets[-1]))
    else:
        lines.append(f"conservative: {str(osc.classify_conservative(spec)).lower()}")
        lines.append(f"min M_f: {fmt(np.min(traj.diagnostics['M_f']))}")
    if traj.error_estimate is not None:
        lines.append(f"max error estimate: {fmt(np.max(np.abs(traj.error_estimate)))}")
    return lines


def _stiffness_warning(cfg: RunConfig):
    if cfg.model is not Model.OSCILLATOR:
        return None
    f_end = abs(eval_f(cfg.spec, cfg.integration.t_end))
    if f_end * cfg.params.m * cfg.params.omega > STIFFNESS_LIMIT:
        return (f"warning: |f(t_end)| m omega = {fmt(f_end * cfg.params.m * cfg.params.omega)} "
                f"exceeds {STIFFNESS_LIMIT:g}; the fixed step may be too coarse")
    return None


def cmd_simulate(args) -> int:
    cfg = _run_config(args)
    warning = _stiffness_warning(cfg)
    if warning:
        print(warning, file=sys.stderr)
    traj = simulate(cfg.model, cfg.spec, cfg.params, cfg.init, cfg.integration)
    with _data_stream(cfg.out) as (data, text):
        if cfg.fmt == "csv":
            write_trajectory_csv(traj, data)
        else:
            write_trajectory_json(traj, data)
        print("\n".join(_summary(cfg, traj)), file=text)
    if cfg.out:
        _write_sidecar(cfg.out, "simulate", {"config": cfg.to_dict()})
    return EXIT_OK


# ---------------------------------------------------------------------------
# check

def cmd_check(args) -> int:
    # the limits suite replaces tau by the large value under test
    if args.suite == "limits":
        large_tau = args.tau if args.tau is not None else 1e6
        tau = 2.0
    else:
        large_tau = 1e6
        tau = args.tau if args.tau is not None else 2.0
    if args.family or args.variant:
        if not (args.family and args.variant):
            raise ConfigurationError("--family and --variant must be given together")
        specs = [DeformationSpec(args.family, args.variant, args.kappa,
                                 None if args.variant == "limit" else tau)]
    else:
        specs = all_configurations(args.kappa, tau)
    report = run_suite(args.suite, specs, model=args.model, tau=large_tau)
    with _data_stream(args.out) as (data, text):
        json.dump(report.to_dict(), data, indent=1)
        data.write("\n")
        for e in report.entries:
            status = "PASS" if e["passed"] else "FAIL"
            print(f"{status} {e['label']:<10} max_residual={fmt(e['max_residual'])}", file=text)
        print(f"{report.suite}: {'all passed' if report.passed else 'FAILED'}", file=text)
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# sweep

SWEEP_COLUMNS = ("index", "kappa", "tau", "m", "omega", "final_displacement",
                 "deviation", "energy_drift", "max_curl", "status", "message")


def _max_curl(cfg: RunConfig, traj, n=50):
    idx = np.unique(np.linspace(0, len(traj) - 1, min(n, len(traj))).astype(int))
    worst = 0.0
    for i in idx:
        t, x = traj.t[i], traj.x[i]
        if cfg.model is Model.CONSTANT_FORCE:
            c = cf.curl_G(t, cfg.params, cfg.spec, x)
        else:
            v = osc.make_rhs_osc(cfg.params, cfg.spec)(t, traj.y[i])[:3]
            c = osc.curl_H_numeric(x, v, t, cfg.params, cfg.spec)
        worst = max(worst, float(np.linalg.norm(c)))
    return worst


def run_cell(cfg: RunConfig) -> dict:
    """Simulate one sweep cell and its undeformed twin; never raises."""
    spec, params = cfg.spec, cfg.params
    row = {"kappa": spec.kappa, "tau": spec.tau if spec.tau is not None else float("nan"),
           "m": params.m, "omega": getattr(params, "omega", float("nan"))}
    try:
        traj = simulate(cfg.model, spec, params, cfg.init, cfg.integration)
        classical_spec = DeformationSpec(spec.family, spec.variant, 0.0, spec.tau)
        classical = simulate(cfg.model, classical_spec, params, cfg.init, cfg.integration)
        energy = traj.diagnostics["energy"]
        row.update(
            final_displacement=float(np.linalg.norm(traj.x[-1] - traj.x[0])),
            deviation=float(np.max(np.linalg.norm(traj.x - classical.x, axis=1))),
            energy_drift=float(np.max(np.abs(energy - energy[0]))),
            max_curl=_max_curl(cfg, traj),
            status="ok", message="")
    except (IntegrationError, ConfigurationError, ArithmeticError) as exc:
        nan = float("nan")
        row.update(final_displacement=nan, deviation=nan, energy_drift=nan, max_curl=nan,
                   status="error", message=str(exc))
    return row


def sweep_cells(base: RunConfig, grid: dict) -> list[RunConfig]:
    axes = [(k, grid[k]) for k in GRID_KEYS if k in grid]
    if not axes:
        return [base]
    cells = []
    for combo in itertools.product(*(values for _, values in axes)):
        cells.append(base.with_cell(**dict(zip((k for k, _ in axes), combo))))
    return cells


def run_sweep(cells: list[RunConfig], workers: int = 1) -> list[dict]:
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run_cell, cells))
    else:
        rows = [run_cell(c) for c in cells]
    for i, row in enumerate(rows):
        row["index"] = i
    return rows


def write_sweep_csv(rows, fh):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow([row[c] if c in ("index", "status", "message") else fmt(row[c])
                         for c in SWEEP_COLUMNS])


def _json_value(v):
    if isinstance(v, float) and not np.isfinite(v):
        return None
    return v


def cmd_sweep(args) -> int:
    base = _run_config(args, tau_axis=args.tau_values)
    grid = dict(base.grid)
    for key in GRID_KEYS:
        values = getattr(args, f"{key}_values")
        if values is not None:
            if not values:
                raise ConfigurationError(f"--{key}-values is empty")
            grid[key] = values
    if args.workers < 1:
        raise ConfigurationError("--workers must be at least 1")
    cells = sweep_cells(base, grid)
    rows = run_sweep(cells, args.workers)
    with _data_stream(base.out) as (data, text):
        if base.fmt == "csv":
            write_sweep_csv(rows, data)
        else:
            records = [{k: _json_value(r[k]) for k in SWEEP_COLUMNS} for r in rows]
            json.dump(records, data, indent=1)
            data.write("\n")
        failed = sum(r["status"] != "ok" for r in rows)
        print(f"sweep: {len(rows)} cells, {failed} failed", file=text)
    if base.out:
        _write_sidecar(base.out, "sweep", {"config": base.to_dict(), "grid": grid})
    return EXIT_NUMERICAL if failed == len(rows) else EXIT_OK


COMMANDS = {"simulate": cmd_simulate, "check": cmd_check, "sweep": cmd_sweep}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigurationError as exc:
        print(f"nhtwist: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IntegrationError as exc:
        print(f"nhtwist: integration failed at t={exc.t!r}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())

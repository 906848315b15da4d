"""Command-line driver: run scenarios or convergence studies, write
snapshots, energy series, diagnostics summaries and figures.

Subcommands:
  run            execute one scenario and write its artifacts
  converge       run a grid-refinement study on a scenario with a reference
  list-scenarios print the catalogue

Exit codes: 0 ok, 1 configuration error, 2 solver failure. Output directory
resolution: --outdir flag > ATMFV_OUTDIR environment variable > ./out.
All delimited files use 17 significant digits so values round-trip exactly.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field as dataclass_field
from pathlib import Path
from typing import Optional

import numpy as np

from atmfv.flux import FluxConfig, monotonicity_bound
from atmfv.grid import Field, Grid
from atmfv.integrate import SolverError
from atmfv.physics import CONST, eos_pressure
from atmfv.scenarios import (SCENARIOS, Scenario, energy_totals, error_norms,
                             field_extrema, front_location, get_scenario,
                             run_convergence, simulate, theta_prime)

FMT = "%.17g"


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    scenario: str
    nx: Optional[int] = None
    dx: Optional[float] = None
    end_time: Optional[float] = None
    omega: Optional[float] = None
    cfl: Optional[float] = None
    limiter: str = "superbee"
    k_visc: Optional[float] = None
    outdir: Path = Path("out")
    snapshot_times: Optional[list] = None
    fmt: str = "csv"
    energy_stride: int = 10
    figures: bool = True
    n_list: list = dataclass_field(default_factory=list)


def _build_parser():
    p = argparse.ArgumentParser(prog="atmfv", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("scenario", help="scenario name (see list-scenarios)")
        sp.add_argument("--config", type=Path, default=None,
                        help="JSON file with option defaults (CLI flags win)")
        sp.add_argument("--n", dest="nx", type=int, default=None,
                        help="cells along x (z scaled to keep dx = dz)")
        sp.add_argument("--dx", type=float, default=None,
                        help="cell size in meters (alternative to --n)")
        sp.add_argument("--end-time", type=float, default=None)
        sp.add_argument("--omega", type=float, default=None,
                        help="GFORCE blend weight in [0, 1]")
        sp.add_argument("--cfl", type=float, default=None)
        sp.add_argument("--limiter", choices=("superbee", "none"), default="superbee")
        sp.add_argument("--k-visc", type=float, default=None,
                        help="viscosity override [m^2/s] (Euler only)")
        sp.add_argument("--outdir", type=Path, default=None)
        sp.add_argument("--no-figures", action="store_true",
                        help="skip rendering matplotlib figures")
        sp.add_argument("--energy-stride", type=int, default=10)
        sp.add_argument("--format", dest="fmt", choices=("csv", "vtk"), default="csv")

    run_p = sub.add_parser("run", help="run one scenario")
    add_common(run_p)
    run_p.add_argument("--snap-times", type=str, default=None,
                       help="comma-separated snapshot times (default: scenario's)")

    conv_p = sub.add_parser("converge", help="grid-refinement study")
    add_common(conv_p)
    conv_p.add_argument("--n-list", type=str, default="50,100,200",
                        help="comma-separated resolutions")

    sub.add_parser("list-scenarios", help="print the scenario catalogue")
    return p


def parse_config(argv) -> tuple:
    """Parse argv into (command, RunConfig). Raises ConfigError on bad input."""
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the message
        raise ConfigError(f"argument parsing failed (exit {exc.code})") from None

    if ns.command == "list-scenarios":
        return ns.command, None

    file_opts = {}
    if ns.config is not None:
        try:
            file_opts = json.loads(Path(ns.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file {ns.config}: {exc}") from None
        if not isinstance(file_opts, dict):
            raise ConfigError("config file must hold a JSON object")

    def pick(name, cli_value, cast=None):
        # precedence: CLI flag > config file > scenario default (None here)
        if cli_value is not None:
            return cli_value
        v = file_opts.get(name)
        if v is not None and cast is not None:
            try:
                return cast(v)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad value for {name!r} in config file: {exc}") from None
        return v

    try:
        scenario = get_scenario(ns.scenario)
    except KeyError as exc:
        raise ConfigError(str(exc)) from None

    cfg = RunConfig(scenario=scenario.name)
    cfg.nx = pick("n", ns.nx, int)
    cfg.dx = pick("dx", ns.dx, float)
    cfg.end_time = pick("end_time", ns.end_time, float)
    cfg.omega = pick("omega", ns.omega, float)
    cfg.cfl = pick("cfl", ns.cfl, float)
    cfg.limiter = pick("limiter", None if ns.limiter == "superbee" else ns.limiter,
                       str) or "superbee"
    cfg.k_visc = pick("k_visc", ns.k_visc, float)
    outdir = pick("outdir", ns.outdir)
    if outdir is None:
        outdir = os.environ.get("ATMFV_OUTDIR", "out")
    cfg.outdir = Path(outdir)
    cfg.fmt = ns.fmt
    cfg.energy_stride = int(ns.energy_stride)
    cfg.figures = not ns.no_figures

    if cfg.dx is not None and cfg.nx is not None:
        raise ConfigError("give either --n or --dx, not both")
    if cfg.dx is not None:
        width = scenario.x_max - scenario.x_min
        nx = width / cfg.dx
        if abs(nx - round(nx)) > 1e-9:
            raise ConfigError(f"--dx {cfg.dx} does not divide the domain width {width}")
        cfg.nx = int(round(nx))

    # validate the omega/CFL pairing early so the error names the bound
    omega = scenario.omega if cfg.omega is None else cfg.omega
    cfl = scenario.cfl if cfg.cfl is None else cfg.cfl
    try:
        FluxConfig(omega=omega, cfl=cfl, limiter=cfg.limiter)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    if ns.command == "run" and ns.snap_times is not None:
        try:
            cfg.snapshot_times = [float(s) for s in ns.snap_times.split(",") if s]
        except ValueError as exc:
            raise ConfigError(f"bad --snap-times: {exc}") from None
    if ns.command == "converge":
        try:
            cfg.n_list = [int(s) for s in ns.n_list.split(",") if s]
        except ValueError as exc:
            raise ConfigError(f"bad --n-list: {exc}") from None
        if scenario.exact is None:
            raise ConfigError(f"scenario {scenario.name} has no exact solution "
                              f"for a convergence study")
    return ns.command, cfg


# ---------------------------------------------------------------------------
# snapshot and series writers
# ---------------------------------------------------------------------------

def _derived_columns(field: Field, grid: Grid, profile):
    q = field.interior(grid)
    tp = theta_prime(field, grid, profile)
    u = q[1] / q[0]
    w = q[2] / q[0]
    p = eos_pressure(q[3])
    return tp, u, w, p


def write_snapshot(field: Field, grid: Grid, t: float, path, profile=None,
                   fmt: str = "csv"):
    """Write one snapshot; x varies fastest. CSV columns carry the conserved
    components plus (Euler) derived theta', u, w and P."""
    path = Path(path)
    q = field.interior(grid)
    euler = field.n_comp == 4
    if euler:
        names = ["rho", "rho_u", "rho_w", "rho_theta", "theta_prime", "u", "w", "P"]
        tp, u, w, p = _derived_columns(field, grid, profile)
        cols = [q[0], q[1], q[2], q[3], tp, u, w, p]
    else:
        names = ["q"]
        cols = [q[0]]
    xc = grid.x_centers()
    zc = grid.z_centers()
    try:
        if fmt == "csv":
            with open(path, "w") as fh:
                fh.write(f"# t={FMT % t} nx={grid.nx} nz={grid.nz} "
                         f"dx={FMT % grid.dx} dz={FMT % grid.dz}\n")
                fh.write("x,z," + ",".join(names) + "\n")
                for j in range(grid.nz):
                    for i in range(grid.nx):
                        vals = [FMT % xc[i], FMT % zc[j]]
                        vals += [FMT % c[i, j] for c in cols]
                        fh.write(",".join(vals) + "\n")
        elif fmt == "vtk":
            with open(path, "w") as fh:
                fh.write("# vtk DataFile Version 3.0\n")
                fh.write(f"t={FMT % t} nx={grid.nx} nz={grid.nz} "
                         f"dx={FMT % grid.dx} dz={FMT % grid.dz}\n")
                fh.write("ASCII\nDATASET STRUCTURED_POINTS\n")
                fh.write(f"DIMENSIONS {grid.nx} {grid.nz} 1\n")
                fh.write(f"ORIGIN {FMT % xc[0]} {FMT % zc[0]} 0\n")
                fh.write(f"SPACING {FMT % grid.dx} {FMT % grid.dz} 1\n")
                fh.write(f"POINT_DATA {grid.nx * grid.nz}\n")
                for name, col in zip(names, cols):
                    fh.write(f"SCALARS {name} double\nLOOKUP_TABLE default\n")
                    for j in range(grid.nz):
                        for i in range(grid.nx):
                            fh.write(FMT % col[i, j] + "\n")
        else:
            raise ConfigError(f"unknown snapshot format {fmt!r}")
    except OSError as exc:
        raise OSError(f"cannot write snapshot {path}: {exc}") from None
    return path


def read_snapshot(path):
    """Read a CSV snapshot back: (t, meta, column dict of (nx, nz) arrays)."""
    path = Path(path)
    with open(path) as fh:
        header = fh.readline().strip()
        names = fh.readline().strip().split(",")
        raw = np.loadtxt(fh, delimiter=",")
    meta = {}
    for tok in header.lstrip("# ").split():
        key, val = tok.split("=")
        meta[key] = float(val) if key not in ("nx", "nz") else int(val)
    nx, nz = meta["nx"], meta["nz"]
    cols = {}
    for k, name in enumerate(names):
        cols[name] = raw[:, k].reshape(nz, nx).T
    return meta["t"], meta, cols


def write_energy_series(energy: np.ndarray, path):
    with open(path, "w") as fh:
        fh.write("t,E_int,E_kin,E_pot,E_total\n")
        for row in energy:
            fh.write(",".join(FMT % v for v in row) + "\n")
    return path


def write_summary(items: dict, path):
    with open(path, "w") as fh:
        fh.write("key,value\n")
        for key, val in items.items():
            if isinstance(val, float):
                fh.write(f"{key},{FMT % val}\n")
            else:
                fh.write(f"{key},{val}\n")
    return path


def write_convergence(rows, path):
    with open(path, "w") as fh:
        fh.write("N,Linf_error,Linf_order,L1_error,L1_order\n")
        for n, linf, po, l1, p1 in rows:
            po_s = "" if np.isnan(po) else FMT % po
            p1_s = "" if np.isnan(p1) else FMT % p1
            fh.write(f"{n},{FMT % linf},{po_s},{FMT % l1},{p1_s}\n")
    return path


def write_cross_section(field: Field, grid: Grid, path):
    """Column of Q nearest to x = 0 (the cut used by the sharp-front test)."""
    xc = grid.x_centers()
    i0 = int(np.argmin(np.abs(xc)))
    zc = grid.z_centers()
    q = field.interior(grid)[0]
    with open(path, "w") as fh:
        fh.write(f"# cut at x={FMT % xc[i0]}\n")
        fh.write("z,q\n")
        for j in range(grid.nz):
            fh.write(f"{FMT % zc[j]},{FMT % q[i0, j]}\n")
    return path, zc, q[i0, :]


# ---------------------------------------------------------------------------
# subcommand actions
# ---------------------------------------------------------------------------

def _snapshot_name(t: float, fmt: str) -> str:
    stem = f"snapshot_t{t:012.6f}".replace("-", "m")
    return f"{stem}.{'csv' if fmt == 'csv' else 'vtk'}"


def cmd_run(cfg: RunConfig) -> int:
    scenario = get_scenario(cfg.scenario)
    outdir = cfg.outdir / scenario.name
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    def on_snapshot(field, grid, t):
        path = outdir / _snapshot_name(t, cfg.fmt)
        write_snapshot(field, grid, t, path, profile=scenario.profile, fmt=cfg.fmt)
        written.append((t, path))
        if cfg.figures:
            from atmfv import plots
            plots.render_field(field, grid, t, path.with_suffix(".png"),
                               profile=scenario.profile,
                               title=f"{scenario.name}, t = {t:g}")

    res = simulate(scenario, nx=cfg.nx, omega=cfg.omega, cfl=cfg.cfl,
                   limiter=cfg.limiter, k_visc=cfg.k_visc,
                   end_time=cfg.end_time,
                   snapshot_times=cfg.snapshot_times,
                   on_snapshot=on_snapshot,
                   energy_stride=cfg.energy_stride)

    summary = {
        "scenario": scenario.name,
        "nx": res.grid.nx, "nz": res.grid.nz,
        "dx": res.grid.dx, "dz": res.grid.dz,
        "t_end": res.t, "steps": res.n_steps,
    }
    if scenario.kind == "euler":
        ext = field_extrema(res.field, res.grid, scenario.profile)
        for name, (lo, hi) in ext.items():
            summary[f"{name}_min"] = lo
            summary[f"{name}_max"] = hi
        if scenario.name.startswith("density-current"):
            summary["front_location"] = front_location(res.field, res.grid,
                                                       scenario.profile)
        summary["energy_drift"] = res.energy_drift()
        write_energy_series(res.energy, outdir / "energy.csv")
        if cfg.figures:
            from atmfv import plots
            plots.render_energy(res.energy, outdir / "energy.png",
                                title=f"{scenario.name}: normalized energy")
    else:
        q = res.field.interior(res.grid)[0]
        summary["q_min"] = float(np.min(q))
        summary["q_max"] = float(np.max(q))
        if scenario.exact is not None:
            linf, l1 = error_norms(res.field, res.grid, scenario.exact, res.t)
            summary["Linf_error"] = linf
            summary["L1_error"] = l1
        if scenario.name == "doswell-sharp":
            _, zc, cut = write_cross_section(res.field, res.grid,
                                             outdir / "cross_section_x0.csv")
            if cfg.figures:
                from atmfv import plots
                plots.render_cross_section(zc, cut, outdir / "cross_section_x0.png",
                                           title=f"{scenario.name}: cut at x = 0")
    write_summary(summary, outdir / "summary.csv")
    print(f"wrote {outdir} ({res.n_steps} steps to t = {res.t:g}, "
          f"{len(written)} snapshots)")
    return 0


def cmd_converge(cfg: RunConfig) -> int:
    scenario = get_scenario(cfg.scenario)
    outdir = cfg.outdir / f"{scenario.name}-convergence"
    outdir.mkdir(parents=True, exist_ok=True)
    rows = run_convergence(scenario, cfg.n_list, omega=cfg.omega, cfl=cfg.cfl,
                           end_time=cfg.end_time)
    write_convergence(rows, outdir / "convergence.csv")
    if cfg.figures:
        from atmfv import plots
        plots.render_convergence(rows, outdir / "convergence.png",
                                 title=f"{scenario.name}: error convergence")
    print(f"{'N':>6} {'Linf':>13} {'order':>6} {'L1':>13} {'order':>6}")
    for n, linf, po, l1, p1 in rows:
        po_s = f"{po:6.2f}" if not np.isnan(po) else "      "
        p1_s = f"{p1:6.2f}" if not np.isnan(p1) else "      "
        print(f"{n:>6} {linf:13.5e} {po_s} {l1:13.5e} {p1_s}")
    return 0


def cmd_list() -> int:
    width = max(len(n) for n in SCENARIOS)
    for name in sorted(SCENARIOS):
        print(f"{name:<{width}}  {SCENARIOS[name].description}")
    return 0


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        command, cfg = parse_config(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        if command == "list-scenarios":
            return cmd_list()
        if command == "run":
            return cmd_run(cfg)
        return cmd_converge(cfg)
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

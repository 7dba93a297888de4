"""Batch command-line front end.

Subcommands: modes, flutter, sweep, convergence.  Exit codes: 0 success,
2 configuration error, 3 solver failure.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import replace

import numpy as np

from . import driver, report
from .config import ConfigError, RunConfig, parse_config
from .eigen import ConvergenceError, SingularSystemError
from .flutter import parametric_sweep

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3


def _load_config(args) -> RunConfig:
    try:
        with open(args.config) as f:
            cfg = parse_config(f.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}")
    if args.out:
        cfg = replace(cfg, out_dir=args.out)
    if args.mesh:
        cfg = cfg.with_mesh(*args.mesh)
    if args.damped is not None:
        cfg = replace(cfg, damped=args.damped)
    return cfg


def _mesh_note(cfg: RunConfig) -> str:
    return f"{cfg.nx}x{cfg.ny}"


def cmd_modes(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    case, omega, _ = driver.run_modes_case(cfg)
    elapsed = time.perf_counter() - t0
    nd = case.nondim
    rows = [[i + 1, w, nd.omega_star(w), nd.frequency_parameter(w)]
            for i, w in enumerate(omega)]
    out = cfg.out_dir
    report.write_csv(os.path.join(out, "modes.csv"), cfg, _mesh_note(cfg),
                     elapsed,
                     ["mode", "omega_rad_s", "omega_star", "Omega"], rows)
    report.write_plot_data(os.path.join(out, "modes.dat"),
                           [r[0] for r in rows], [r[2] for r in rows])
    report.plot_modes(os.path.join(out, "modes.png"),
                      np.array([r[2] for r in rows]))
    for r in rows[:5]:
        print(f"mode {r[0]}: omega = {r[1]:.4f} rad/s, "
              f"omega* = {r[2]:.4f}, Omega = {r[3]:.4f}")
    return EXIT_OK


def cmd_flutter(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    res = driver.run_flutter_case(cfg)
    elapsed = time.perf_counter() - t0
    out = cfg.out_dir
    rows = [["flutter", cfg.theta_prime, res.lambda_star_cr,
             res.omega_star_cr, f"{res.mode_pair[0]}-{res.mode_pair[1]}",
             res.damped, res.g_tau]]
    report.write_csv(os.path.join(out, "flutter.csv"), cfg, _mesh_note(cfg),
                     elapsed,
                     ["case_id", "theta_prime_deg", "lambda_star_cr",
                      "omega_star_cr", "mode_pair", "damped", "g_tau"], rows)
    trace_x = [t[0] for t in res.trace]
    if res.trace and isinstance(res.trace[0][1], np.ndarray):
        trace_y = [float(np.sqrt(max(np.min(t[1].real), 0.0)))
                   for t in res.trace]
    else:
        trace_y = [float(t[1]) for t in res.trace]
    report.write_plot_data(os.path.join(out, "flutter_trace.dat"),
                           trace_x, trace_y)
    report.plot_flutter_trace(os.path.join(out, "flutter_trace.png"), res)
    if not res.found:
        print(f"no flutter point in range: {res.message}", file=sys.stderr)
        return EXIT_SOLVER
    print(f"lambda*_cr = {res.lambda_star_cr:.2f}, "
          f"omega*_cr = {res.omega_star_cr:.2f}, "
          f"modes {res.mode_pair[0]}-{res.mode_pair[1]}"
          + (f", g_tau = {res.g_tau:.4g}" if res.damped else ""))
    return EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    if cfg.sweep_axis is None:
        raise ConfigError("sweep subcommand needs a [sweep] section "
                          "(axis, values)")
    t0 = time.perf_counter()
    points = parametric_sweep(cfg.sweep_axis, cfg.sweep_values, cfg)
    elapsed = time.perf_counter() - t0
    rows = []
    for p in points:
        if p.result is not None and p.result.found:
            r = p.result
            rows.append([p.case_id, p.axis_value, r.lambda_star_cr,
                         r.omega_star_cr,
                         f"{r.mode_pair[0]}-{r.mode_pair[1]}", r.damped,
                         r.g_tau])
        else:
            msg = p.error or (p.result.message if p.result else "failed")
            rows.append([p.case_id, p.axis_value, "nan", "nan", "-", cfg.damped,
                         "nan"])
            print(f"sweep point {p.case_id} failed: {msg}", file=sys.stderr)
    out = cfg.out_dir
    report.write_csv(os.path.join(out, "sweep.csv"), cfg,
                     _mesh_note(cfg), elapsed,
                     ["case_id", "axis_value", "lambda_star_cr",
                      "omega_star_cr", "mode_pair", "damped", "g_tau"], rows)
    ok = [p for p in points if p.result is not None and p.result.found]
    report.write_plot_data(os.path.join(out, "sweep.dat"),
                           [p.axis_value for p in ok],
                           [p.result.lambda_star_cr for p in ok])
    report.plot_sweep(os.path.join(out, "sweep.png"), cfg.sweep_axis, points)
    if not ok:
        return EXIT_SOLVER
    print(f"sweep over {cfg.sweep_axis}: {len(ok)}/{len(points)} points "
          f"solved in {elapsed:.1f}s")
    return EXIT_OK


def cmd_convergence(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    rows = []
    table = []
    for n in cfg.ladder:
        c = cfg.with_mesh(n, n)
        case, omega, _ = driver.run_modes_case(c, n_modes=3)
        nd = case.nondim
        Om = [nd.frequency_parameter(w) for w in omega[:3]]
        rows.append([f"{n}x{n}"] + Om)
        table.append(Om)
        print(f"{n}x{n}: Omega = "
              + ", ".join(f"{v:.4f}" for v in Om))
    elapsed = time.perf_counter() - t0
    out = cfg.out_dir
    report.write_csv(os.path.join(out, "convergence.csv"), cfg,
                     ",".join(f"{n}x{n}" for n in cfg.ladder), elapsed,
                     ["mesh", "Omega1", "Omega2", "Omega3"], rows)
    report.write_plot_data(os.path.join(out, "convergence.dat"),
                           list(cfg.ladder), [r[1] for r in rows])
    report.plot_convergence(os.path.join(out, "convergence.png"),
                            list(cfg.ladder), np.array(table), r"$\Omega$")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="panelflutter",
        description="Free-vibration and supersonic flutter analysis of "
                    "laminated composite panels")
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn in (("modes", cmd_modes), ("flutter", cmd_flutter),
                     ("sweep", cmd_sweep), ("convergence", cmd_convergence)):
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, help="INI config file")
        sp.add_argument("--out", default=None, help="output directory")
        sp.add_argument("--threads", type=int, default=None,
                        help="BLAS/LAPACK thread count")
        sp.add_argument("--damped", type=lambda s: s.lower() in
                        ("true", "1", "yes", "on"), default=None,
                        help="override flow.damped (true/false)")
        sp.add_argument("--mesh", type=int, nargs=2, metavar=("NX", "NY"),
                        default=None, help="override mesh size")
        sp.set_defaults(fn=fn)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                    "MKL_NUM_THREADS"):
            os.environ[var] = str(args.threads)
    try:
        cfg = _load_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.fn(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SingularSystemError, ConvergenceError, ValueError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())

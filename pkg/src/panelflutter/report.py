"""CSV / plot-data / figure output for the batch front end.

All CSV files carry a '# key = value' header echoing the effective
configuration; the timestamp line is the only non-deterministic content.
Figures are rendered with the Agg backend next to the delimited output.
"""

from __future__ import annotations

import csv
import datetime
import os
import tempfile

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .config import RunConfig
from .flutter import FlutterResult, SweepPoint


def _header_lines(cfg: RunConfig, mesh_note: str, elapsed: float) -> list[str]:
    from . import __version__
    lines = [f"# panelflutter {__version__}"]
    lines += [f"# {ln}" for ln in cfg.echo()]
    lines.append(f"# mesh = {mesh_note}")
    lines.append(f"# elapsed_s = {elapsed:.3f}")
    lines.append("# timestamp = "
                 + datetime.datetime.now().isoformat(timespec="seconds"))
    return lines


def _atomic_write(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: str, cfg: RunConfig, mesh_note: str, elapsed: float,
              columns: list[str], rows: list[list]) -> None:
    out = _header_lines(cfg, mesh_note, elapsed)
    out.append(",".join(columns))
    for row in rows:
        out.append(",".join(
            f"{v:.10g}" if isinstance(v, (int, float, np.floating))
            and not isinstance(v, bool) else str(v)
            for v in row))
    _atomic_write(path, "\n".join(out) + "\n")


def write_plot_data(path: str, x, y) -> None:
    """Two-column gnuplot-compatible plot data."""
    lines = [f"{xv:.10g} {yv:.10g}" for xv, yv in zip(x, y)]
    _atomic_write(path, "\n".join(lines) + "\n")


def plot_modes(path: str, omega_star: np.ndarray) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    idx = np.arange(1, len(omega_star) + 1)
    ax.stem(idx, omega_star)
    ax.set_xlabel("mode")
    ax.set_ylabel(r"$\omega^*$")
    ax.set_title("Free-vibration frequencies")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_flutter_trace(path: str, result: FlutterResult) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    if result.trace and isinstance(result.trace[0][1], np.ndarray):
        lam = [t[0] for t in result.trace]
        heads = np.array([np.sort(t[1].real) for t in result.trace])
        for j in range(heads.shape[1]):
            ax.plot(lam, np.sqrt(np.maximum(heads[:, j], 0.0)), "-o",
                    ms=2.5, lw=1)
        ax.set_ylabel(r"$\sqrt{\mathrm{Re}\,\bar\kappa}$  [rad/s]")
    else:
        lam = [t[0] for t in result.trace]
        g = [t[1] for t in result.trace]
        ax.plot(lam, g, "-o", ms=2.5)
        ax.axhline(0.0, color="k", lw=0.8)
        ax.set_ylabel("max growth rate  [1/s]")
    if result.found:
        ax.axvline(result.lambda_star_cr, color="r", ls="--", lw=1,
                   label=rf"$\lambda^*_{{cr}} = {result.lambda_star_cr:.1f}$")
        ax.legend()
    ax.set_xlabel(r"$\lambda^*$")
    ax.set_title("Flutter sweep" + (" (damped)" if result.damped else ""))
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_sweep(path: str, axis: str, points: list[SweepPoint]) -> None:
    ok = [p for p in points if p.result is not None and p.result.found]
    fig, axes = plt.subplots(1, 2, figsize=(9, 4))
    x = [p.axis_value for p in ok]
    axes[0].plot(x, [p.result.lambda_star_cr for p in ok], "-o", ms=3)
    axes[0].set_ylabel(r"$\lambda^*_{cr}$")
    axes[1].plot(x, [p.result.omega_star_cr for p in ok], "-s", ms=3)
    axes[1].set_ylabel(r"$\omega^*_{cr}$")
    for ax in axes:
        ax.set_xlabel(axis)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_convergence(path: str, meshes: list[int], table: np.ndarray,
                     ylabel: str) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    for j in range(table.shape[1]):
        ax.plot(meshes, table[:, j], "-o", ms=3, label=f"mode {j + 1}")
    ax.set_xlabel("mesh (n x n)")
    ax.set_ylabel(ylabel)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

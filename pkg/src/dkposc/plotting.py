"""Figure rendering for sweep and wavefunction tables (file output only)."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

SYMBOLS = {
    "alpha": r"$\alpha$", "Omega": r"$\Omega$", "omega": r"$\omega$", "A": r"$A$", "B": r"$B$",
    "phi": r"$\phi$", "k": r"$k$", "n": r"$n$", "m": r"$m$",
}

RC = {
    "font.family": "serif",
    "font.size": 10,
    "axes.labelsize": 11,
    "legend.fontsize": 9,
    "xtick.labelsize": 9,
    "ytick.labelsize": 9,
    "lines.linewidth": 1.4,
    "savefig.dpi": 150,
}


def figsize(width=5.0, height=None):
    golden = (math.sqrt(5.0) - 1.0) / 2.0
    return width, height or width * golden


def plot_sweep(rows, path, title=None):
    """Energy against the swept parameter, one line per curve label."""
    curves = {}
    for row in rows:
        if row.E is None:
            continue
        curves.setdefault(row.curve, ([], []))
        curves[row.curve][0].append(row.value)
        curves[row.curve][1].append(row.E)
    param = rows[0].sweep_param if rows else ""
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=figsize())
        for label, (x, y) in curves.items():
            ax.plot(x, y, marker="." if len(x) < 30 else None, label=label or None)
        ax.set_xlabel(SYMBOLS.get(param, param))
        ax.set_ylabel(r"$E$")
        if any(curves):
            ax.legend(frameon=False)
        if title:
            ax.set_title(title)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path


def plot_wavefunction(r, phi1, current, path, title=None):
    """Normalized radial amplitude and charge density on twin axes."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=figsize())
        ax.plot(r, phi1, color="C0", label=r"$\Phi_1(r)$")
        ax.axhline(0.0, color="0.6", lw=0.6)
        ax.set_xlabel(r"$r$")
        ax.set_ylabel(r"$\Phi_1$", color="C0")
        twin = ax.twinx()
        twin.plot(r, current, color="C3", ls="--", label=r"$J^t$")
        twin.set_ylabel(r"$J^t$", color="C3")
        if title:
            ax.set_title(title)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path

"""Figure rendering for the report path.

All plots go straight to files through the Agg backend; nothing here
opens a window.  Each function returns the path it wrote.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

DPI = 150


def _finish(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path


def render_nyquist(segments: dict, beta0: float, path, title: str) -> Path:
    """Closed Nyquist image: axis branches, pole detour, critical point.

    segments maps segment names to (re, im) arrays as exported in the
    nyquist tables.
    """
    fig, ax = plt.subplots(figsize=(6.0, 5.0))
    styles = {"axis_neg": "C0-", "detour": "C2--", "axis_pos": "C1-"}
    for name, (re, im) in segments.items():
        ax.plot(re, im, styles.get(name, "k-"), lw=1.2, label=name)
    ax.plot([-1.0 / beta0], [0.0], "r*", ms=10, label="-1/beta0")
    ax.axhline(0.0, color="0.8", lw=0.6)
    ax.axvline(0.0, color="0.8", lw=0.6)
    ax.set_xlabel("Re G")
    ax.set_ylabel("Im G")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    return _finish(fig, path)


def render_popov(omegas: np.ndarray, re: np.ndarray, im: np.ndarray,
                 beta0: float, q_star: float, path) -> Path:
    """Popov locus with the separating line through (-1/beta0, 0)."""
    fig, ax = plt.subplots(figsize=(6.0, 5.0))
    ax.plot(re, im, "C0-", lw=1.2, label="locus")
    x0 = -1.0 / beta0
    xs = np.linspace(min(re.min(), x0) - 0.05, max(re.max(), x0) + 0.05, 64)
    if q_star > 0.0:
        ax.plot(xs, (xs - x0) / q_star, "C3--", lw=1.0,
                label="line through -1/beta0, slope 1/q*")
    ax.plot([x0], [0.0], "r*", ms=10)
    ax.axhline(0.0, color="0.8", lw=0.6)
    ax.set_xlabel("Re")
    ax.set_ylabel("omega * Im")
    ax.set_title("Popov locus")
    ax.set_ylim(min(im.min(), -0.5) - 0.05, max(im.max(), 0.1) + 0.05)
    ax.legend(loc="best", fontsize=8)
    return _finish(fig, path)


def render_mq(qs: np.ndarray, ms: np.ndarray, q_star: float, beta_star: float,
              path) -> Path:
    """Certified gain against the multiplier, with the optimum marked."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(qs, ms, "C0-", lw=1.2)
    ax.axhline(beta_star, color="C3", lw=0.8, ls="--")
    ax.plot([q_star], [beta_star], "r*", ms=10,
            label=f"q* = {q_star:.4g}, beta* = {beta_star:.6g}")
    ax.set_xlabel("q")
    ax.set_ylabel("largest certified gain")
    ax.set_title("Multiplier optimization")
    ax.legend(loc="lower right", fontsize=8)
    return _finish(fig, path)


def render_two_route(times: np.ndarray, trace_volterra: np.ndarray,
                     trace_pde: np.ndarray, path) -> Path:
    """Overlay of the boundary trace by both routes plus their gap."""
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6.5, 5.5), sharex=True)
    ax1.plot(times, trace_volterra, "C0-", lw=1.2, label="integral equation")
    ax1.plot(times, trace_pde, "C1--", lw=1.2, label="spectral simulation")
    ax1.set_ylabel("u(t, pi)")
    ax1.legend(loc="best", fontsize=8)
    ax1.set_title("Boundary trace, two routes")
    gap = np.abs(trace_pde - trace_volterra)
    ax2.semilogy(times, np.maximum(gap, 1e-300), "C2-", lw=1.0)
    ax2.set_xlabel("t")
    ax2.set_ylabel("|difference|")
    return _finish(fig, path)

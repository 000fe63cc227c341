"""Matplotlib figures for the report commands (rank, deform, congruent)."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def rank_figure(report, path, tau: float = 1e-8, title: str = "") -> None:
    """Singular values of the measure Jacobian against the rank threshold."""
    s = np.asarray(report.singular_values, dtype=float)
    k = np.arange(1, s.size + 1)
    shown = np.where(s > 0, s, np.nan)
    fig, ax = plt.subplots(figsize=(6, 3.6))
    ax.semilogy(k, shown, "o-", ms=4, label="singular values")
    ax.axhline(tau * s[0], color="C3", ls="--", lw=1, label=f"threshold {tau:g}·σ₁")
    ax.axvline(report.expected + 0.5, color="0.5", ls=":", lw=1, label="4n − 6")
    zeros = np.flatnonzero(s == 0)
    if zeros.size:
        ax.plot(k[zeros], np.full(zeros.size, np.nanmin(shown) / 10), "x", color="0.3",
                label="structural zeros")
    ax.set_xlabel("index")
    ax.set_ylabel("σ")
    ax.set_title(title or f"rank {report.rank} / expected {report.expected}")
    ax.legend(fontsize=8)
    _save(fig, path)


def deform_figure(result, edge_labels, path) -> None:
    """Inversive distance of each deformed edge and the measure residual along t."""
    from .rigidity import measure

    ts = np.asarray(result.ts)
    tri = result.states[0].triangulation
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))
    for e in result.spec.unitary_edge_set:
        k = tri.edge_index[e]
        inv = [-measure(s)[k] for s in result.states]
        ax1.plot(ts, inv, lw=1, label=edge_labels.get(e, str(e)))
    ax1.set_xlabel("t")
    ax1.set_ylabel("Inv")
    ax1.set_title("deformed edges")
    if len(result.spec.unitary_edge_set) <= 12:
        ax1.legend(fontsize=7, ncol=2)
    res = np.maximum(np.asarray(result.measure_residuals), 1e-18)
    ax2.semilogy(ts, res, "o-", ms=4)
    ax2.set_xlabel("t")
    ax2.set_ylabel("‖f − l(t)‖∞")
    ax2.set_title("measure residual")
    _save(fig, path)


def congruence_figure(evidence, path) -> None:
    """The fitted maps along the path and their successive differences near t = 0."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))
    if evidence.grid_fits:
        ts = evidence.ts[1:]
        ax1.semilogy(ts, [max(r.residual, 1e-18) for r in evidence.grid_fits], "o-", ms=4)
    ax1.set_xlabel("t")
    ax1.set_ylabel("fit residual")
    ax1.set_title("congruence along the path")
    diffs = evidence.trail_differences
    if diffs:
        tt = evidence.trail_ts[-len(diffs):]
        ax2.loglog(tt, diffs, "o-", ms=4, label="successive difference")
        ax2.axhline(1e-7, color="C3", ls="--", lw=1, label="1e-7")
        ax2.invert_xaxis()
        ax2.legend(fontsize=8)
    ax2.set_xlabel("t")
    ax2.set_ylabel("max |Δφ|")
    ax2.set_title("Cauchy trail" if diffs else "no deformation needed")
    if not math.isnan(evidence.limit_gap):
        ax2.text(0.02, 0.04, f"gap to t = 0 fit: {evidence.limit_gap:.2e}",
                 transform=ax2.transAxes, fontsize=8)
    _save(fig, path)

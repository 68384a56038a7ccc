"""Matplotlib renderings of the report tables (written next to the CSVs)."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def plot_convergence(rows, path: str, title: str = "oracle vs predicted limit"):
    """Total-variation distance against the horizon exponent, log scale."""
    ms = [m for m, _ in rows]
    tvs = [max(tv, 1e-16) for _, tv in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogy(ms, tvs, marker="o", color="#336699")
    ax.set_xlabel("horizon exponent m")
    ax.set_ylabel("total variation distance")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_census(table, predicted, path: str, title: str = "residue class frequencies"):
    """Empirical frequencies as bars with predicted limits overlaid."""
    cells = sorted(table.frequencies())
    labels = [",".join(map(str, r)) for r in cells]
    freqs = [float(table.frequency(r)) for r in cells]
    fig, ax = plt.subplots(figsize=(max(6, len(cells) * 0.45), 4))
    xs = range(len(cells))
    ax.bar(xs, freqs, color="#88aacc", label="oracle")
    if predicted:
        preds = [
            float(predicted[r]) if predicted.get(r) is not None else float("nan")
            for r in cells
        ]
        ax.plot(xs, preds, "k_", markersize=14, label="predicted")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels, rotation=90, fontsize=7)
    ax.set_ylabel("frequency")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_dimension(est, path: str, title: str = "mass dimension fit"):
    """log member count against m log g, with fitted and exact slopes."""
    pts = [(m, c) for m, c in est.counts if c > 0]
    fig, ax = plt.subplots(figsize=(6, 4))
    if pts:
        xs = [m * math.log(est.base) for m, _ in pts]
        ys = [math.log(c) for _, c in pts]
        ax.plot(xs, ys, "o", color="#336699", label="log |A ∩ [0, g^m)|")
        if est.fitted_slope is not None:
            x0, y0 = xs[-1], ys[-1]
            ax.plot(
                xs,
                [y0 + est.fitted_slope * (x - x0) for x in xs],
                "-",
                color="#cc6633",
                label=f"fit slope {est.fitted_slope:.4f}",
            )
        if est.exact is not None:
            x0, y0 = xs[-1], ys[-1]
            ax.plot(
                xs,
                [y0 + est.exact * (x - x0) for x in xs],
                "--",
                color="#339966",
                label=f"exact {est.exact:.4f}",
            )
    ax.set_xlabel("m log g")
    ax.set_ylabel("log count")
    ax.set_title(title)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

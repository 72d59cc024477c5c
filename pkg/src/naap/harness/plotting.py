"""Matplotlib figures for reports: prediction scatters and feature-importance bars."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# fixed ids and no timestamps, so the same data gives the same bytes
plt.rcParams.update({
    "svg.hashsalt": "naap",
    "figure.dpi": 100,
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
})
_METADATA = {
    ".svg": {"Date": None, "Creator": None},
    ".png": {"Software": None},
    ".pdf": {"CreationDate": None, "Creator": None, "Producer": None},
}


def save(fig, path: str | Path) -> Path:
    path = Path(path)
    fig.savefig(path, metadata=_METADATA.get(path.suffix, {}), bbox_inches="tight")
    plt.close(fig)
    return path


def scatter_figure(gt: Sequence[float], pred: Sequence[float], title: str = ""):
    gt = np.asarray(gt, dtype=float)
    pred = np.asarray(pred, dtype=float)
    fig, ax = plt.subplots(figsize=(4, 4))
    lo = float(min(gt.min(), pred.min()))
    hi = float(max(gt.max(), pred.max()))
    pad = 0.05 * (hi - lo or 1.0)
    ax.plot([lo - pad, hi + pad], [lo - pad, hi + pad], color="0.6", lw=1, ls="--", zorder=1)
    ax.scatter(gt, pred, s=14, color="tab:blue", zorder=2)
    ax.set_xlim(lo - pad, hi + pad)
    ax.set_ylim(lo - pad, hi + pad)
    ax.set_aspect("equal")
    ax.set_xlabel("ground-truth accuracy")
    ax.set_ylabel("predicted accuracy")
    if title:
        ax.set_title(title, fontsize=9)
    return fig


def importance_figure(rates: Mapping[str, Mapping[str, float]], title: str = ""):
    """Grouped bars: one group per feature, one bar per algorithm."""
    algos = list(rates)
    features: list[str] = []
    for a in algos:
        for f in rates[a]:
            if f not in features:
                features.append(f)
    x = np.arange(len(features))
    width = 0.8 / max(len(algos), 1)
    fig, ax = plt.subplots(figsize=(max(6.0, 0.35 * len(features) * max(1, len(algos) / 2)), 3.5))
    for k, a in enumerate(algos):
        vals = [rates[a].get(f, np.nan) for f in features]
        ax.bar(x + (k - (len(algos) - 1) / 2) * width, vals, width, label=a)
    ax.set_xticks(x)
    ax.set_xticklabels(features, rotation=70, ha="right", fontsize=7)
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("selection rate")
    if title:
        ax.set_title(title, fontsize=9)
    ax.legend(fontsize=7, frameon=False, ncol=2)
    return fig

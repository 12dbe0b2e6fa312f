"""Figure rendering for bank reports.

Each renderer writes one PNG with a fixed name into the requested
directory and returns the paths, so CLI output stays deterministic.
Figures are diagnostic companions to the key=value report: the weight
histogram against the target density, the per-filter spectral Gram
matrix, and (for 2-D banks) a montage of the kernels themselves.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .initializers import FilterBank, spectrum_dim_1d, spectrum_dim_2d
from .spectral import rfft1, rfft2

__all__ = ["render_report_figures"]


def _save(fig, path: Path) -> None:
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)


def _weight_histogram(bank: FilterBank, report, path: Path) -> None:
    w = bank.weights.data.ravel()
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.hist(w, bins=61, density=True, color="#4878b0", alpha=0.85, label="weights")
    if report.variance_target > 0:
        sd = np.sqrt(report.variance_target)
        xs = np.linspace(w.min(), w.max(), 301)
        ax.plot(
            xs,
            np.exp(-0.5 * (xs / sd) ** 2) / (sd * np.sqrt(2 * np.pi)),
            color="#c44e52",
            lw=1.5,
            label="target density",
        )
    ax.set_xlabel("weight value")
    ax.set_ylabel("density")
    ax.legend(frameon=False, fontsize=8)
    ax.set_title(f"shape {'x'.join(str(v) for v in report.shape)}", fontsize=9)
    _save(fig, path)


def _gram_heatmap(bank: FilterBank, path: Path) -> None:
    w = bank.weights.data
    if w.ndim == 4:
        flat = rfft2(w[:1]).reshape(1, w.shape[1], -1)[0]
        block = spectrum_dim_2d(w.shape[2], w.shape[3])
    else:
        flat = rfft1(w[:1]).reshape(1, w.shape[1], -1)[0]
        block = spectrum_dim_1d(w.shape[2])
    V = flat[:block]
    G = np.abs(V @ np.conj(V).T)
    fig, ax = plt.subplots(figsize=(3.8, 3.4))
    im = ax.imshow(G, cmap="viridis")
    fig.colorbar(im, ax=ax, fraction=0.046)
    ax.set_title(f"filter 0 spectral Gram (block {V.shape[0]})", fontsize=9)
    ax.set_xlabel("channel")
    ax.set_ylabel("channel")
    _save(fig, path)


def _kernel_montage(bank: FilterBank, path: Path) -> None:
    w = bank.weights.data
    rows = min(4, w.shape[0])
    cols = min(6, w.shape[1])
    fig, axes = plt.subplots(rows, cols, figsize=(1.2 * cols, 1.2 * rows), squeeze=False)
    vmax = float(np.max(np.abs(w[:rows, :cols]))) or 1.0
    for i in range(rows):
        for j in range(cols):
            ax = axes[i][j]
            ax.imshow(w[i, j], cmap="RdBu_r", vmin=-vmax, vmax=vmax)
            ax.set_xticks([])
            ax.set_yticks([])
    fig.suptitle("kernels (filters x channels)", fontsize=9)
    _save(fig, path)


def render_report_figures(bank: FilterBank, report, outdir) -> list[Path]:
    """Render the report's figures into outdir; returns the written paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = []
    hist = outdir / "weights_hist.png"
    _weight_histogram(bank, report, hist)
    paths.append(hist)
    gram = outdir / "spectral_gram.png"
    _gram_heatmap(bank, gram)
    paths.append(gram)
    if bank.weights.rank == 4 and min(bank.weights.shape[2:]) > 1:
        montage = outdir / "kernels.png"
        _kernel_montage(bank, montage)
        paths.append(montage)
    return paths

"""SVG figures.  Output is byte-stable for identical inputs."""

from __future__ import annotations

import os
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["save_svg", "plot_pmf_cdf", "plot_rates", "plot_simulation", "plot_fitted"]


def save_svg(fig, path: str | os.PathLike) -> None:
    with matplotlib.rc_context({"svg.hashsalt": "edlid", "svg.fonttype": "path"}):
        fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_pmf_cdf(x: np.ndarray, pmf: np.ndarray, cdf: np.ndarray, title: str, path) -> None:
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
    ax1.bar(x, pmf, color="0.35", width=0.6)
    ax1.set_xlabel("x")
    ax1.set_ylabel("pmf")
    ax2.step(x, cdf, where="post", color="k")
    ax2.set_xlabel("x")
    ax2.set_ylabel("cdf")
    fig.suptitle(title)
    fig.tight_layout()
    save_svg(fig, path)


def plot_rates(x: np.ndarray, hazard: np.ndarray, rhazard: np.ndarray, title: str, path) -> None:
    fig, ax = plt.subplots(figsize=(5.5, 3.5))
    ax.plot(x, hazard, "o-", ms=3, color="k", label="hazard")
    ax.plot(x, rhazard, "s--", ms=3, color="0.5", label="reversed hazard")
    ax.set_xlabel("x")
    ax.legend(frameon=False)
    ax.set_title(title)
    fig.tight_layout()
    save_svg(fig, path)


def plot_simulation(sizes: Sequence[int], series: Mapping[str, Sequence[float]], path) -> None:
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5))
    for key, ax in zip(("bias", "mse"), axes):
        for name, vals in series.items():
            if name.startswith(key):
                ax.plot(sizes, vals, "o-", ms=3, label=name)
        ax.axhline(0.0, color="0.7", lw=0.8)
        ax.set_xlabel("n")
        ax.set_ylabel(key.upper() if key == "mse" else key)
        ax.legend(frameon=False)
    fig.tight_layout()
    save_svg(fig, path)


def plot_fitted(x: np.ndarray, observed: np.ndarray, fitted: Mapping[str, np.ndarray], title: str, path) -> None:
    fig, ax = plt.subplots(figsize=(6.5, 4))
    ax.bar(x, observed, color="0.8", width=0.7, label="observed")
    for name, ef in fitted.items():
        ax.plot(x, ef, "o-", ms=3, lw=1, label=name)
    ax.set_xlabel("x")
    ax.set_ylabel("frequency")
    ax.set_title(title)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    save_svg(fig, path)

"""Figures written next to the CSV output. Uses the non-interactive Agg backend."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .dynamics import EvolutionResult  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.linewidth": 1.2,
    "axes.grid": True,
    "grid.alpha": 0.3,
}
# no timestamps in the PNG so reruns produce identical files
_METADATA = {"Software": None}


def _figsize(width: float = 6.0, rows: int = 1) -> tuple[float, float]:
    golden = (np.sqrt(5.0) - 1.0) / 2.0
    return width, width * golden * (0.6 + 0.4 * rows)


def plot_evolution(results: list[EvolutionResult], path: Path) -> Path:
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(3, 1, sharex=True, figsize=_figsize(rows=3))
        for result in results:
            obs = result.observables
            dashed = "--" if result.method == "oracle" and len(results) > 1 else "-"
            tag = f" ({result.method})" if len(results) > 1 else ""
            for name, color in (("sx", "C0"), ("sy", "C1"), ("sz", "C2")):
                axes[0].plot(result.times, obs[name], dashed, color=color, label=f"<{name}>{tag}")
            axes[1].plot(result.times, obs["coherence_abs"], dashed, color="C3", label=f"|rho01|{tag}")
            axes[1].plot(result.times, obs["purity"], dashed, color="C4", label=f"purity{tag}")
            axes[2].plot(result.times, obs["parity_J"], dashed, color="C5", label=f"<sx (x) P>{tag}")
        axes[0].set_ylabel("Bloch components")
        axes[1].set_ylabel("coherence, purity")
        axes[2].set_ylabel("total parity")
        axes[2].set_xlabel("t")
        axes[2].ticklabel_format(axis="y", useOffset=False)
        for ax in axes:
            ax.legend(loc="best", ncol=2)
        fig.tight_layout()
        fig.savefig(path, dpi=150, metadata=_METADATA)
        plt.close(fig)
    return path


def plot_spectrum(spectra: dict[str, np.ndarray], path: Path) -> Path:
    """Sorted eigenvalues of each named set, index on the x axis."""
    markers = {"full": "o", "dressed_union": "x", "h_plus": "^", "h_minus": "v"}
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=_figsize())
        for name, values in spectra.items():
            if name not in markers:
                continue
            ax.plot(np.arange(len(values)), values, markers[name], markersize=3, label=name, linestyle="none")
        ax.set_xlabel("index")
        ax.set_ylabel("eigenvalue")
        ax.legend(loc="best")
        fig.tight_layout()
        fig.savefig(path, dpi=150, metadata=_METADATA)
        plt.close(fig)
    return path

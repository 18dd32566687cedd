"""Box-plot rendering of the trial results."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .stats import TrialResults


def render_boxplot(results: TrialResults, path: str | Path) -> None:
    """Three-box SVG: boxes labelled (1), (2), (3) in condition order,
    with the condition names in the legend text below."""
    with plt.rc_context({"svg.hashsalt": "philotope"}):
        fig, ax = plt.subplots(figsize=(6, 4))
        k = len(results.conditions)
        ax.boxplot([results.values[:, i] for i in range(k)],
                   tick_labels=[f"({i + 1})" for i in range(k)])
        ax.set_ylabel("bottleneck distance")
        caption = "   ".join(f"({i + 1}) {cond}"
                             for i, cond in enumerate(results.conditions))
        ax.set_xlabel(caption)
        fig.tight_layout()
        fig.savefig(Path(path), format="svg", metadata={"Date": None})
        plt.close(fig)

"""SVG sensitivity panels for sweep results.

One panel per swept hyperparameter (batch size, learning rate, epochs),
each plotting micro-F1 and Jaccard accuracy along the one-at-a-time slice
through the best configuration.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from noteroute.evaluation.sweep import SweepResult

_AXIS_LABELS = {
    "batch_size": "batch size",
    "learning_rate": "learning rate",
    "epochs": "epochs",
}

_CURVES = (("micro_f1", "micro-F1"), ("jaccard_accuracy", "Jaccard accuracy"))


def sensitivity_panels(
    result: SweepResult, out_dir: str | Path, stem: str = "sensitivity"
) -> list[Path]:
    """Write one SVG per hyperparameter axis; returns the paths written."""
    if not result.slices:
        raise ValueError("sweep result carries no slices to plot")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    written: list[Path] = []
    for axis, entries in result.slices.items():
        scored = [e for e in entries if "micro_f1" in e]
        if not scored:
            continue
        values = [e["value"] for e in scored]

        fig, ax = plt.subplots(figsize=(4.5, 3.2))
        for key, label in _CURVES:
            ax.plot(values, [e[key] for e in scored], marker="o", label=label)
        if result.best is not None:
            ax.axvline(getattr(result.best, axis), color="gray", linestyle=":", linewidth=1)
        if axis == "learning_rate":
            ax.set_xscale("log")
        ax.set_xlabel(_AXIS_LABELS[axis])
        ax.set_ylabel("validation score")
        ax.set_ylim(0.0, 1.0)
        ax.set_title(f"Sensitivity to {_AXIS_LABELS[axis]}")
        ax.legend(loc="lower right", fontsize=8)
        fig.tight_layout()

        path = out / f"{stem}_{axis}.svg"
        fig.savefig(path, format="svg")
        plt.close(fig)
        written.append(path)
    return written

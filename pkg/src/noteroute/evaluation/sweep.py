"""Hyperparameter sensitivity sweep over batch size, learning rate and
epoch count.

The full Cartesian grid is evaluated against a fixed split (train once per
configuration, calibrate on validation, score on validation). The best
configuration is the argmax under the grid's selection metric; around it
the sweep exposes one-at-a-time slices (vary one hyperparameter, hold the
other two at their best values) ready for plotting.
"""

from __future__ import annotations

import csv
import io
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from noteroute.evaluation.metrics import MetricsReport
from noteroute.evaluation.split import (
    LabeledNote,
    Split,
    SplitSpec,
    evaluate_model,
    stratified_split,
)
from noteroute.router.calibrate import calibrate_thresholds
from noteroute.router.features import FeatureSpec
from noteroute.router.train import DataError, HyperParams, train

SELECTION_METRICS = ("micro_f1", "macro_f1", "sample_f1")

# (batch, learning rate, epochs) defaults per backbone family. The native
# linear model trains at lr ~0.1; the transformer-scale grid only makes
# sense when scoring an external probability file.
NATIVE_GRID = ((8, 16, 32), (0.03, 0.1, 0.3), (2, 4, 8))
EXTERNAL_GRID = ((8, 16, 32), (2e-5, 3e-5, 5e-5), tuple(range(2, 16)))


@dataclass(frozen=True)
class SweepGrid:
    batch_sizes: tuple[int, ...] = NATIVE_GRID[0]
    learning_rates: tuple[float, ...] = NATIVE_GRID[1]
    epoch_counts: tuple[int, ...] = NATIVE_GRID[2]
    selection_metric: str = "micro_f1"

    def __post_init__(self):
        object.__setattr__(self, "batch_sizes", tuple(self.batch_sizes))
        object.__setattr__(self, "learning_rates", tuple(self.learning_rates))
        object.__setattr__(self, "epoch_counts", tuple(self.epoch_counts))
        if not (self.batch_sizes and self.learning_rates and self.epoch_counts):
            raise ValueError("every grid axis needs at least one value")
        if self.selection_metric not in SELECTION_METRICS:
            raise ValueError(
                f"selection_metric must be one of {SELECTION_METRICS}, "
                f"got {self.selection_metric!r}"
            )

    def configs(self) -> list[tuple[int, float, int]]:
        return list(
            itertools.product(self.batch_sizes, self.learning_rates, self.epoch_counts)
        )

    def to_json(self) -> dict:
        return {
            "batch_sizes": list(self.batch_sizes),
            "learning_rates": list(self.learning_rates),
            "epoch_counts": list(self.epoch_counts),
            "selection_metric": self.selection_metric,
        }

    @classmethod
    def external_default(cls, selection_metric: str = "micro_f1") -> "SweepGrid":
        return cls(*EXTERNAL_GRID, selection_metric=selection_metric)

    @classmethod
    def from_json(cls, obj: Mapping) -> "SweepGrid":
        base = cls()
        return cls(
            batch_sizes=tuple(int(b) for b in obj.get("batch_sizes", base.batch_sizes)),
            learning_rates=tuple(
                float(r) for r in obj.get("learning_rates", base.learning_rates)
            ),
            epoch_counts=tuple(int(e) for e in obj.get("epoch_counts", base.epoch_counts)),
            selection_metric=str(obj.get("selection_metric", base.selection_metric)),
        )


@dataclass
class SweepRow:
    hp: HyperParams
    metrics: MetricsReport | None = None
    error: str | None = None

    @property
    def config(self) -> tuple[int, float, int]:
        return (self.hp.batch_size, self.hp.learning_rate, self.hp.epochs)

    def metric_value(self, name: str) -> float | None:
        if self.metrics is None:
            return None
        return getattr(self.metrics, name)


@dataclass
class SweepResult:
    grid: SweepGrid
    rows: list[SweepRow]
    best: HyperParams | None = None
    slices: dict[str, list[dict]] = field(default_factory=dict)

    def row_for(self, config: tuple[int, float, int]) -> SweepRow:
        for row in self.rows:
            if row.config == config:
                return row
        raise KeyError(f"no sweep row for configuration {config}")

    @property
    def best_row(self) -> SweepRow | None:
        return self.row_for(
            (self.best.batch_size, self.best.learning_rate, self.best.epochs)
        ) if self.best else None

    def to_json(self) -> dict:
        return {
            "grid": self.grid.to_json(),
            "selection_metric": self.grid.selection_metric,
            "best": self.best.to_json() if self.best else None,
            "rows": [
                {
                    "batch_size": row.hp.batch_size,
                    "learning_rate": row.hp.learning_rate,
                    "epochs": row.hp.epochs,
                    "metrics": row.metrics.summary_row() if row.metrics else None,
                    "error": row.error,
                }
                for row in self.rows
            ],
            "slices": self.slices,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "SweepResult":
        """Restore grid, best config, row configs, and slices.

        Enough to replot sensitivity panels; per-kind metric detail is
        not round-tripped.
        """
        rows = [
            SweepRow(
                hp=HyperParams(
                    batch_size=int(r["batch_size"]),
                    learning_rate=float(r["learning_rate"]),
                    epochs=int(r["epochs"]),
                ),
                metrics=None,
                error=r.get("error"),
            )
            for r in obj.get("rows", [])
        ]
        best = obj.get("best")
        return cls(
            grid=SweepGrid.from_json(obj.get("grid", {})),
            rows=rows,
            best=HyperParams.from_json(best) if best else None,
            slices={k: list(v) for k, v in obj.get("slices", {}).items()},
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(
            [
                "batch_size",
                "learning_rate",
                "epochs",
                "micro_f1",
                "macro_f1",
                "sample_f1",
                "subset_accuracy",
                "jaccard_accuracy",
                "is_best",
                "error",
            ]
        )
        best_cfg = (
            (self.best.batch_size, self.best.learning_rate, self.best.epochs)
            if self.best
            else None
        )
        for row in self.rows:
            m = row.metrics
            writer.writerow(
                [
                    row.hp.batch_size,
                    row.hp.learning_rate,
                    row.hp.epochs,
                    f"{m.micro_f1:.6f}" if m else "",
                    f"{m.macro_f1:.6f}" if m else "",
                    f"{m.sample_f1:.6f}" if m else "",
                    f"{m.subset_accuracy:.6f}" if m else "",
                    f"{m.jaccard_accuracy:.6f}" if m else "",
                    "yes" if row.config == best_cfg else "no",
                    row.error or "",
                ]
            )
        return buf.getvalue()


def _evaluate_config(
    split: Split, hp: HyperParams, spec: FeatureSpec
) -> MetricsReport:
    model, _ = train(split.train, hp, spec)
    model, _ = calibrate_thresholds(model, split.val)
    return evaluate_model(model, split.val)


def run_sweep(
    corpus: Sequence[LabeledNote],
    grid: SweepGrid,
    spec: FeatureSpec,
    split_spec: SplitSpec | None = None,
    base_hp: HyperParams | None = None,
    max_workers: int | None = None,
) -> SweepResult:
    """Evaluate every grid configuration on a shared validation split.

    Configurations run in parallel; results are keyed by configuration so
    completion order never changes the outcome. A configuration that raises
    is recorded with its error and the sweep continues. Raises DataError
    only if every configuration failed.
    """
    split_spec = split_spec or SplitSpec()
    base_hp = base_hp or HyperParams()
    usable = [(note, labels) for note, labels in corpus if labels]
    if not usable:
        raise DataError("no labeled notes to sweep over")
    split = stratified_split(usable, split_spec)

    configs = grid.configs()
    hps = [
        HyperParams(
            batch_size=b,
            learning_rate=lr,
            epochs=e,
            weight_decay=base_hp.weight_decay,
            seed=base_hp.seed,
        )
        for b, lr, e in configs
    ]

    rows_by_config: dict[tuple[int, float, int], SweepRow] = {}
    workers = max_workers or min(4, len(hps))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {
            pool.submit(_evaluate_config, split, hp, spec): hp for hp in hps
        }
        for future, hp in futures.items():
            key = (hp.batch_size, hp.learning_rate, hp.epochs)
            try:
                rows_by_config[key] = SweepRow(hp=hp, metrics=future.result())
            except Exception as exc:
                rows_by_config[key] = SweepRow(hp=hp, error=f"{type(exc).__name__}: {exc}")

    rows = [rows_by_config[cfg] for cfg in configs]
    result = SweepResult(grid=grid, rows=rows)

    scored = [r for r in rows if r.metrics is not None]
    if not scored:
        raise DataError("every sweep configuration failed")
    best_row = max(scored, key=lambda r: r.metric_value(grid.selection_metric))
    result.best = best_row.hp
    result.slices = _one_at_a_time_slices(result, best_row)
    return result


def _one_at_a_time_slices(result: SweepResult, best_row: SweepRow) -> dict[str, list[dict]]:
    """Slices through the grid that vary one axis and pin the others at
    the best configuration's values."""
    best_b, best_lr, best_e = best_row.config
    grid = result.grid
    axes = {
        "batch_size": [(b, (b, best_lr, best_e)) for b in grid.batch_sizes],
        "learning_rate": [(lr, (best_b, lr, best_e)) for lr in grid.learning_rates],
        "epochs": [(e, (best_b, best_lr, e)) for e in grid.epoch_counts],
    }
    slices: dict[str, list[dict]] = {}
    for axis, points in axes.items():
        entries = []
        for value, cfg in points:
            row = result.row_for(cfg)
            entry: dict = {"value": value, "error": row.error}
            if row.metrics is not None:
                entry.update(row.metrics.summary_row())
            entries.append(entry)
        slices[axis] = entries
    return slices

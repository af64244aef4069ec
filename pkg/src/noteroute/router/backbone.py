"""Pluggable probability backbones.

The native backbone wraps a trained RouterModel. The external backbone
replays per-kind probabilities precomputed elsewhere (e.g. by a large
encoder trained off-repo) from a line-delimited JSON file, so such models
can be evaluated through the same metrics path without retraining here.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Mapping, Protocol

import numpy as np

from noteroute.model import KINDS, Note
from noteroute.router.model import RouterModel, predict_proba


class BackboneProvider(Protocol):
    def probabilities(self, note: Note) -> np.ndarray:
        """Per-kind probability vector (20,), each value in [0, 1]."""
        ...


class NativeBackbone:
    def __init__(self, model: RouterModel):
        self.model = model

    def probabilities(self, note: Note) -> np.ndarray:
        return predict_proba(self.model, note)


class ExternalProbabilityBackbone:
    """Per-kind probabilities loaded from {note_id, probs} JSONL records."""

    def __init__(self, records: Mapping[str, np.ndarray]):
        self._records = dict(records)

    @classmethod
    def from_file(cls, path: str | Path) -> "ExternalProbabilityBackbone":
        return cls(load_probability_file(path))

    def probabilities(self, note: Note) -> np.ndarray:
        try:
            return self._records[note.id]
        except KeyError:
            raise KeyError(f"no external probabilities for note {note.id}")

    def note_ids(self) -> list[str]:
        return list(self._records)


def load_probability_file(path: str | Path) -> dict[str, np.ndarray]:
    """Parse a probability file: one {"note_id", "probs": [20 floats]} per line."""
    records: dict[str, np.ndarray] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            probs = np.asarray(obj["probs"], dtype=np.float64)
            if probs.shape != (len(KINDS),):
                raise ValueError(
                    f"line {lineno}: expected {len(KINDS)} probabilities, got {probs.shape}"
                )
            if np.any(probs < 0) or np.any(probs > 1):
                raise ValueError(f"line {lineno}: probabilities outside [0, 1]")
            records[str(obj["note_id"])] = probs
    return records


def dump_probability_file(path: str | Path, rows: Iterable[tuple[str, np.ndarray]]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for note_id, probs in rows:
            fh.write(json.dumps({"note_id": note_id, "probs": list(map(float, probs))}) + "\n")

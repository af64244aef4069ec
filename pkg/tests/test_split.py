"""Stratified splitting and the split/train/calibrate/test pipeline."""

import math

import numpy as np
import pytest

from noteroute.evaluation.split import (
    SplitSpec,
    evaluate_backbone,
    evaluate_model,
    gold_labels,
    run_split_eval,
    stratified_split,
)
from noteroute.model import KINDS
from noteroute.router.backbone import NativeBackbone
from noteroute.router.features import FeatureSpec
from noteroute.router.train import DataError, HyperParams

from util import make_note


def _corpus(n, label_of):
    return [(make_note(i), frozenset(label_of(i))) for i in range(n)]


def _round_robin_labels(i):
    return {KINDS[i % 6]}


def test_partition_sizes_are_floor_floor_remainder():
    corpus = _corpus(3173, _round_robin_labels)
    split = stratified_split(corpus, SplitSpec(seed=0))
    assert split.sizes() == {"train": 2538, "val": 317, "test": 318}


@pytest.mark.parametrize("n", [10, 37, 100, 333])
def test_partitions_are_disjoint_and_cover(n):
    corpus = _corpus(n, _round_robin_labels)
    split = stratified_split(corpus, SplitSpec(seed=3))
    ids = [note.id for part in (split.train, split.val, split.test) for note, _ in part]
    assert len(ids) == n
    assert len(set(ids)) == n
    assert split.sizes()["train"] == math.floor(n * 0.8)
    assert split.sizes()["val"] == math.floor(n * 0.1)


def test_split_is_deterministic_per_seed():
    corpus = _corpus(120, _round_robin_labels)
    a = stratified_split(corpus, SplitSpec(seed=7))
    b = stratified_split(corpus, SplitSpec(seed=7))
    assert [n.id for n, _ in a.train] == [n.id for n, _ in b.train]
    assert [n.id for n, _ in a.val] == [n.id for n, _ in b.val]
    assert [n.id for n, _ in a.test] == [n.id for n, _ in b.test]
    c = stratified_split(corpus, SplitSpec(seed=8))
    assert [n.id for n, _ in a.train] != [n.id for n, _ in c.train]


def test_common_kinds_reach_every_partition():
    # 100 positives of one kind among 200 notes must land in all three parts
    def labels(i):
        return {"task"} if i < 100 else {"insight"}

    corpus = _corpus(200, labels)
    split = stratified_split(corpus, SplitSpec(seed=0))
    for part in (split.train, split.val, split.test):
        kinds = set().union(*(ls for _, ls in part))
        assert kinds == {"task", "insight"}

    # proportions roughly follow the 80/10/10 capacities
    train_tasks = sum("task" in ls for _, ls in split.train)
    assert 75 <= train_tasks <= 85


def test_singleton_kind_lands_in_exactly_one_partition():
    def labels(i):
        return {"decision"} if i == 5 else {"task"}

    corpus = _corpus(60, labels)
    split = stratified_split(corpus, SplitSpec(seed=1))
    holders = [
        name
        for name, part in (("train", split.train), ("val", split.val), ("test", split.test))
        if any("decision" in ls for _, ls in part)
    ]
    assert len(holders) == 1


def test_empty_corpus_rejected():
    with pytest.raises(ValueError):
        stratified_split([], SplitSpec())


@pytest.mark.parametrize(
    "train_frac,val_frac",
    [(0.0, 0.1), (0.8, 0.0), (0.9, 0.1), (0.95, 0.2)],
)
def test_split_spec_validation(train_frac, val_frac):
    with pytest.raises(ValueError):
        SplitSpec(train_frac=train_frac, val_frac=val_frac)


def test_gold_labels_only_counts_passed_concepts(sample_note):
    from noteroute.model import CanonicalScores, Concept

    scores = CanonicalScores(0.5, 0.5, 0.5, 0.5, 0.5)
    mk = lambda i, kind, status: Concept(
        id=f"c{i}",
        note_id=sample_note.id,
        kind=kind,
        summary="s",
        entities=(),
        analysis="a",
        scores=scores,
        qa_status=status,
    )
    concepts = [
        mk(0, "task", "passed"),
        mk(1, "goal", "flagged"),
        mk(2, "idea", "failed"),
        mk(3, "insight", "passed"),
    ]
    assert gold_labels(concepts) == frozenset({"task", "insight"})


def test_run_split_eval_reports_are_complete(split_result):
    assert set(split_result.split_sizes) == {"train", "val", "test"}
    assert split_result.train_report is not None
    assert split_result.calibration is not None
    assert split_result.val_report is not None
    assert split_result.test_report is not None
    assert split_result.baseline_report is not None
    assert split_result.model is not None
    payload = split_result.to_json()
    assert set(payload) >= {"split_sizes", "warnings", "train", "val", "test", "baseline"}


def test_run_split_eval_drops_unlabeled_notes_with_warning(labeled):
    corpus = list(labeled[:80]) + [(make_note(90000 + i), frozenset()) for i in range(5)]
    spec = FeatureSpec(hash_dims=2**10)
    hp = HyperParams(epochs=1)
    result = run_split_eval(corpus, SplitSpec(seed=0), hp, spec)
    assert any("dropped 5 notes" in w for w in result.warnings)
    assert sum(result.split_sizes.values()) == sum(1 for _, ls in corpus if ls)


def test_run_split_eval_warns_on_kind_missing_from_a_partition():
    def labels(i):
        return {"decision"} if i == 0 else {"task"}

    corpus = _corpus(40, labels)
    result = run_split_eval(
        corpus, SplitSpec(seed=0), HyperParams(epochs=1), FeatureSpec(hash_dims=2**10)
    )
    missing = [w for w in result.warnings if "decision" in w and "no positives" in w]
    assert len(missing) == 2  # singleton reaches one partition, missing from two


def test_run_split_eval_rejects_all_unlabeled():
    corpus = [(make_note(i), frozenset()) for i in range(30)]
    with pytest.raises(DataError):
        run_split_eval(corpus, SplitSpec(), HyperParams(), FeatureSpec(hash_dims=2**10))


def test_native_backbone_matches_evaluate_model(fixture_model, labeled):
    sample = labeled[:40]
    direct = evaluate_model(fixture_model, sample)
    via_backbone = evaluate_backbone(
        NativeBackbone(fixture_model), sample, thresholds=fixture_model.thresholds
    )
    assert direct.micro_f1 == pytest.approx(via_backbone.micro_f1, abs=1e-12)
    assert direct.subset_accuracy == pytest.approx(via_backbone.subset_accuracy, abs=1e-12)


def test_evaluate_backbone_defaults_to_uniform_half(fixture_model, labeled):
    sample = labeled[:20]

    class Half:
        def probabilities(self, note):
            probs = np.full(len(KINDS), 0.25)
            probs[0] = 0.75
            return probs

    report = evaluate_backbone(Half(), sample)
    # threshold 0.5 everywhere: only kind index 0 fires
    gold = [ls for _, ls in sample]
    tp = sum("task" in ls for ls in gold)
    fp = len(gold) - tp
    fn = sum(len(ls - {"task"}) for ls in gold)
    expect = 2 * tp / (2 * tp + fp + fn)
    assert report.micro_f1 == pytest.approx(expect, abs=1e-12)

"""Multi-label metrics against a brute-force oracle and hand counts."""

import random

import pytest

from noteroute.evaluation.metrics import (
    LengthMismatch,
    compute_metrics,
    frequency_prior_labels,
)
from noteroute.model import KINDS

from util import oracle_metrics


def test_hand_worked_micro_example():
    gold = [frozenset({"task"}), frozenset({"task", "insight"})]
    pred = [frozenset({"task", "idea"}), frozenset({"insight"})]
    # tp=2 (task, insight), fp=1 (idea), fn=1 (task)
    report = compute_metrics(gold, pred)
    assert report.micro_f1 == pytest.approx(2 * 2 / (2 * 2 + 1 + 1))


def test_perfect_prediction_scores_one():
    gold = [frozenset({"task"}), frozenset({"idea", "goal"})]
    report = compute_metrics(gold, list(gold))
    assert report.micro_f1 == 1.0
    assert report.sample_f1 == 1.0
    assert report.subset_accuracy == 1.0
    assert report.jaccard_accuracy == 1.0


def test_empty_sets_count_as_agreement():
    gold = [frozenset(), frozenset({"task"})]
    pred = [frozenset(), frozenset({"task"})]
    report = compute_metrics(gold, pred)
    assert report.jaccard_accuracy == 1.0
    assert report.sample_f1 == 1.0
    assert report.subset_accuracy == 1.0


def test_macro_excludes_unseen_unpredicted_kinds():
    gold = [frozenset({"task"}), frozenset({"task"})]
    pred = [frozenset({"task"}), frozenset({"task"})]
    report = compute_metrics(gold, pred)
    # only task participates; every other kind has no support and no
    # predictions, so macro is not dragged to ~0.05
    assert report.macro_f1 == 1.0


def test_macro_counts_false_positive_kinds():
    gold = [frozenset({"task"})]
    pred = [frozenset({"task", "idea"})]
    report = compute_metrics(gold, pred)
    # idea: predicted with zero support -> f1 0 participates in macro
    assert report.macro_f1 == pytest.approx(0.5)


def test_length_mismatch_rejected():
    with pytest.raises(LengthMismatch):
        compute_metrics([frozenset()], [])


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        compute_metrics([frozenset({"nonsense"})], [frozenset()])


def test_matches_oracle_on_200_random_cases():
    rng = random.Random(42)
    for _ in range(200):
        n = rng.randint(1, 40)
        gold, pred = [], []
        for _ in range(n):
            gold.append(
                frozenset(k for k in KINDS if rng.random() < 0.15)
            )
            pred.append(
                frozenset(k for k in KINDS if rng.random() < 0.15)
            )
        report = compute_metrics(gold, pred)
        want = oracle_metrics(gold, pred)
        for name, expected in want.items():
            assert abs(getattr(report, name) - expected) < 1e-9, name


def test_per_kind_supports_sum_to_gold_assignments():
    gold = [frozenset({"task", "idea"}), frozenset({"task"})]
    pred = [frozenset({"task"}), frozenset()]
    report = compute_metrics(gold, pred)
    assert report.per_kind["task"].support == 2
    assert report.per_kind["idea"].support == 1
    assert report.per_kind["task"].recall == pytest.approx(0.5)


def test_frequency_prior_uses_cutoff():
    train = [frozenset({"task"})] * 7 + [frozenset({"idea"})] * 3
    labels = frequency_prior_labels(train, cutoff=0.5)
    assert labels == frozenset({"task"})
    labels_low = frequency_prior_labels(train, cutoff=0.25)
    assert labels_low == frozenset({"task", "idea"})


def test_report_json_shape():
    gold = [frozenset({"task"})]
    report = compute_metrics(gold, gold)
    obj = report.to_json()
    assert set(obj) >= {
        "micro_f1",
        "macro_f1",
        "sample_f1",
        "subset_accuracy",
        "jaccard_accuracy",
        "per_kind",
    }
    assert obj["per_kind"]["task"]["support"] == 1

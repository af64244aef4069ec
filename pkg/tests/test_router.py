"""Router training: gradients, determinism, degenerate kinds, model files."""

import numpy as np
import pytest
from scipy import sparse

from noteroute.model import KINDS, parse_note
from noteroute.router.features import FeatureSpec, features_matrix
from noteroute.router.model import (
    DEFAULT_THRESHOLD,
    FormatError,
    RouterModel,
    load_model,
    predict_labels,
    predict_proba,
    save_model,
    sigmoid,
    zero_model,
)
from noteroute.router.train import (
    DataError,
    HyperParams,
    bce_loss_and_grad,
    label_matrix,
    positive_weights,
    train,
)


def _note(content, persona="INTJ"):
    return parse_note(f"[2023-06-01][09:00][Desk][Laptop][Sunny] {content}", persona)


def _tiny_corpus():
    rows = [
        ("finish the report by friday deadline", {"task"}),
        ("remember to call the vendor tomorrow", {"task"}),
        ("noticed that mornings are my productive hours", {"insight"}),
        ("what if we merged the two dashboards", {"idea"}),
        ("sketch a prototype for the merged view", {"idea", "task"}),
        ("the pattern holds across all three weeks", {"insight"}),
        ("draft the kickoff agenda", {"task"}),
        ("a quieter desk might help focus", {"suggestion"}),
    ]
    personas = ["INTJ", "ENFP", "ISTP", "ESFJ"] * 2
    return [
        (_note(text, persona), frozenset(labels))
        for (text, labels), persona in zip(rows, personas)
    ]


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(7)
    n, d = 6, 12
    x = sparse.csr_matrix(rng.random((n, d)) * (rng.random((n, d)) < 0.4))
    y = (rng.random((n, len(KINDS))) < 0.3).astype(np.float64)
    w = rng.normal(scale=0.3, size=(len(KINDS), d))
    b = rng.normal(scale=0.1, size=len(KINDS))
    pos_w = np.clip(1.0 / (y.mean(axis=0) + 1e-3), 1.0, 20.0)

    _, grad_w, grad_b = bce_loss_and_grad(w, b, x, y, pos_w)

    eps = 1e-6
    checks = 0
    rng2 = np.random.default_rng(11)
    for _ in range(50):
        k = rng2.integers(len(KINDS))
        j = rng2.integers(d)
        wp, wm = w.copy(), w.copy()
        wp[k, j] += eps
        wm[k, j] -= eps
        lp, _, _ = bce_loss_and_grad(wp, b, x, y, pos_w)
        lm, _, _ = bce_loss_and_grad(wm, b, x, y, pos_w)
        numeric = (lp - lm) / (2 * eps)
        denom = max(abs(numeric), abs(grad_w[k, j]), 1e-8)
        assert abs(numeric - grad_w[k, j]) / denom < 1e-4
        checks += 1
    assert checks == 50


def test_bias_gradient_matches_finite_differences():
    rng = np.random.default_rng(3)
    n, d = 5, 8
    x = sparse.csr_matrix(rng.random((n, d)))
    y = (rng.random((n, len(KINDS))) < 0.4).astype(np.float64)
    w = rng.normal(scale=0.2, size=(len(KINDS), d))
    b = rng.normal(scale=0.2, size=len(KINDS))
    pos_w = np.ones(len(KINDS))
    _, _, grad_b = bce_loss_and_grad(w, b, x, y, pos_w)
    eps = 1e-6
    for k in range(0, len(KINDS), 3):
        bp, bm = b.copy(), b.copy()
        bp[k] += eps
        bm[k] -= eps
        lp, _, _ = bce_loss_and_grad(w, bp, x, y, pos_w)
        lm, _, _ = bce_loss_and_grad(w, bm, x, y, pos_w)
        numeric = (lp - lm) / (2 * eps)
        denom = max(abs(numeric), abs(grad_b[k]), 1e-8)
        assert abs(numeric - grad_b[k]) / denom < 1e-4


def test_label_matrix_layout():
    corpus = _tiny_corpus()
    y = label_matrix([labels for _, labels in corpus])
    assert y.shape == (len(corpus), len(KINDS))
    assert y[0, KINDS.index("task")] == 1.0
    assert y[0].sum() == 1.0
    assert y[4].sum() == 2.0


def test_positive_weights_capped_at_20():
    y = np.zeros((100, len(KINDS)))
    y[0, 0] = 1.0  # rare: raw weight 100/2 = 50, capped
    y[:60, 1] = 1.0  # common: raw weight 100/120, floored
    y[:10, 2] = 1.0  # raw weight 100/20 = 5, untouched
    w = positive_weights(y)
    assert w[0] == pytest.approx(20.0)
    assert w[1] == pytest.approx(1.0)
    assert w[2] == pytest.approx(5.0)


def test_training_is_deterministic():
    corpus = _tiny_corpus()
    spec = FeatureSpec(hash_dims=2**10)
    hp = HyperParams(epochs=3, seed=5)
    m1, r1 = train(corpus, hp, spec)
    m2, r2 = train(corpus, hp, spec)
    assert np.array_equal(m1.weights, m2.weights)
    assert np.array_equal(m1.bias, m2.bias)
    assert r1.epoch_losses == r2.epoch_losses


def test_seed_changes_the_trajectory():
    corpus = _tiny_corpus()
    spec = FeatureSpec(hash_dims=2**10)
    m1, _ = train(corpus, HyperParams(epochs=3, seed=1), spec)
    m2, _ = train(corpus, HyperParams(epochs=3, seed=2), spec)
    assert not np.array_equal(m1.weights, m2.weights)


def test_degenerate_kinds_stay_at_zero():
    corpus = _tiny_corpus()  # most kinds have no positives
    spec = FeatureSpec(hash_dims=2**10)
    model, report = train(corpus, HyperParams(epochs=2), spec)
    assert "communication" in report.degenerate_kinds
    k = KINDS.index("communication")
    assert np.all(model.weights[k] == 0.0)
    # fitted bias keeps the kind below its decision threshold
    assert sigmoid(model.bias[k]) < model.thresholds[k]


def test_training_loss_decreases():
    corpus = _tiny_corpus() * 4
    spec = FeatureSpec(hash_dims=2**10)
    _, report = train(corpus, HyperParams(epochs=6), spec)
    assert report.epoch_losses[-1] < report.epoch_losses[0]


def test_train_rejects_empty_corpus():
    with pytest.raises(DataError):
        train([], HyperParams(), FeatureSpec(hash_dims=2**10))


def test_predictions_respect_thresholds():
    corpus = _tiny_corpus()
    spec = FeatureSpec(hash_dims=2**10)
    model, _ = train(corpus, HyperParams(epochs=4), spec)
    note = corpus[0][0]
    probs = predict_proba(model, note)
    labels = predict_labels(model, note)
    for i, kind in enumerate(KINDS):
        assert (kind in labels) == (probs[i] >= model.thresholds[i])


def test_hyperparams_validate():
    with pytest.raises(ValueError):
        HyperParams(batch_size=0)
    with pytest.raises(ValueError):
        HyperParams(learning_rate=-0.1)
    with pytest.raises(ValueError):
        HyperParams(epochs=0)


def test_model_file_round_trip(fixture_model):
    data = save_model(fixture_model)
    back = load_model(data)
    assert np.array_equal(back.weights, fixture_model.weights)
    assert np.array_equal(back.bias, fixture_model.bias)
    assert np.array_equal(back.thresholds, fixture_model.thresholds)
    assert back.spec == fixture_model.spec
    assert back.version == fixture_model.version


def test_model_file_detects_corruption(fixture_model):
    data = bytearray(save_model(fixture_model))
    data[len(data) // 2] ^= 0xFF
    with pytest.raises(FormatError):
        load_model(bytes(data))


def test_model_file_rejects_wrong_magic(fixture_model):
    data = b"XXXXXXX" + save_model(fixture_model)[7:]
    with pytest.raises(FormatError):
        load_model(data)


def test_model_file_rejects_truncation(fixture_model):
    data = save_model(fixture_model)[:-20]
    with pytest.raises(FormatError):
        load_model(data)


def test_zero_model_defaults():
    spec = FeatureSpec(hash_dims=2**10)
    m = zero_model(spec)
    assert np.all(m.thresholds == DEFAULT_THRESHOLD)
    assert np.all(m.weights == 0.0)


def test_with_thresholds_bumps_version():
    m = zero_model(FeatureSpec(hash_dims=2**10))
    m2 = m.with_thresholds(np.full(len(KINDS), 0.3))
    assert m2.version == m.version + 1
    with pytest.raises(ValueError):
        m.with_thresholds(np.full(len(KINDS), 0.99))  # above the cap


def test_model_parameters_are_read_only(fixture_model):
    with pytest.raises(ValueError):
        fixture_model.weights[0, 0] = 1.0

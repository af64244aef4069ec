"""Command line interface.

Every command prints JSON on stdout. Failures print a JSON error object
on stderr and exit 1; usage errors exit 2. Anything stochastic flows
from an explicit --seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from noteroute.corpus.client import StubTextClient
from noteroute.corpus.generate import GenerationConfig, generate_corpus
from noteroute.corpus.ingest import FatalError, ingest_dataset
from noteroute.corpus.personas import builtin_profiles
from noteroute.corpus.qa import QAConfig, qa_pipeline
from noteroute.corpus.reference import write_reference_dataset
from noteroute.corpus.stats import corpus_stats
from noteroute.evaluation.split import (
    SplitSpec,
    evaluate_backbone,
    evaluate_model,
    labeled_corpus,
    run_split_eval,
)
from noteroute.evaluation.sweep import SweepGrid, SweepResult, run_sweep
from noteroute.gateway.config import ServiceConfig, load_config
from noteroute.model import ParseError, dump_corpus_jsonl, parse_note
from noteroute.router.backbone import ExternalProbabilityBackbone
from noteroute.router.features import FeatureSpec
from noteroute.router.model import (
    labels_from_probs,
    load_model,
    predict_proba,
    proba_map,
    save_model,
)
from noteroute.router.train import DataError, HyperParams
from noteroute.vault.store import NoteRecord, Vault, VaultError


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _fail(exc: Exception) -> int:
    body = {"error": {"type": type(exc).__name__, "message": str(exc)}}
    if isinstance(exc, ParseError):
        body["error"]["field"] = exc.field
        body["error"]["offset"] = exc.offset
    print(json.dumps(body), file=sys.stderr)
    return 1


def _load_labeled(path: str):
    corpus, errors = ingest_dataset(path)
    if errors:
        raise DataError(
            f"{len(errors)} records failed to ingest; first: {errors[0].message}"
        )
    return labeled_corpus(corpus)


def _read_model(path: str):
    return load_model(Path(path).read_bytes())


# -- command handlers -------------------------------------------------------


def _cmd_generate(args) -> int:
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    if args.reference:
        write_reference_dataset(out)
        corpus, _ = ingest_dataset(out)
    else:
        profiles = builtin_profiles()
        cfg = GenerationConfig(
            seed=args.seed,
            personas=tuple(args.personas.split(","))
            if args.personas
            else tuple(profiles),
            notes_per_persona=(args.min_notes, args.max_notes),
            mode="template",
        )
        corpus = generate_corpus(list(profiles.values()), cfg)
        out.write_text(dump_corpus_jsonl(corpus), encoding="utf-8")
    stats = corpus_stats(corpus)
    _emit({"path": str(out), **stats.to_json()})
    return 0


def _cmd_qa(args) -> int:
    corpus, errors = ingest_dataset(args.input)
    checked, report = qa_pipeline(
        corpus,
        client=StubTextClient(seed=args.seed),
        cfg=QAConfig(stage2_enabled=not args.no_stage2),
        workers=args.workers,
    )
    if args.out:
        Path(args.out).write_text(dump_corpus_jsonl(checked), encoding="utf-8")
    _emit(
        {
            "report": report.to_json(),
            "ingest_errors": [e.message for e in errors],
            "out": args.out,
        }
    )
    return 0


def _cmd_ingest(args) -> int:
    corpus, errors = ingest_dataset(args.input)
    vault = Vault()
    model = _read_model(args.model) if args.model else None
    for note, concepts in corpus:
        vault.put_note(NoteRecord(note=note, concepts=tuple(concepts)))
        if model is not None:
            vault.index_note(note.id, model)
    Path(args.vault).parent.mkdir(parents=True, exist_ok=True)
    vault.persist(args.vault)
    _emit(
        {
            "vault": args.vault,
            "stored": len(vault),
            "indexed": len(vault.snapshot) if model is not None else 0,
            "errors": [e.message for e in errors],
        }
    )
    return 0


def _cmd_stats(args) -> int:
    if args.vault:
        vault = Vault.load(args.vault)
        pairs = [(r.note, tuple(r.concepts)) for r in vault.list_notes()]
    else:
        corpus, _ = ingest_dataset(args.input)
        pairs = corpus
    _emit(corpus_stats(pairs).to_json())
    return 0


def _cmd_train(args) -> int:
    labeled = _load_labeled(args.input)
    hp = HyperParams(
        batch_size=args.batch_size,
        learning_rate=args.learning_rate,
        epochs=args.epochs,
        weight_decay=args.weight_decay,
        seed=args.seed,
    )
    result = run_split_eval(
        labeled,
        split_spec=SplitSpec(seed=args.seed),
        hp=hp,
        spec=FeatureSpec(hash_dims=args.hash_dims),
    )
    out = Path(args.model_out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_bytes(save_model(result.model))
    _emit(
        {
            "model": str(out),
            "split_sizes": result.split_sizes,
            "val": result.val_report.to_json(),
            "test": result.test_report.to_json(),
            "baseline": result.baseline_report.to_json(),
            "warnings": result.warnings,
        }
    )
    return 0


def _cmd_eval(args) -> int:
    labeled = _load_labeled(args.input)
    if args.probs:
        backbone = ExternalProbabilityBackbone.from_file(args.probs)
        report = evaluate_backbone(backbone, labeled)
    else:
        report = evaluate_model(_read_model(args.model), labeled)
    _emit({"metrics": report.to_json(), "notes": len(labeled)})
    return 0


def _cmd_sweep(args) -> int:
    from noteroute.evaluation.plots import sensitivity_panels

    labeled = _load_labeled(args.input)
    grid = (
        SweepGrid.external_default()
        if args.grid == "external"
        else SweepGrid()
    )
    result = run_sweep(
        labeled,
        grid,
        spec=FeatureSpec(hash_dims=args.hash_dims),
        split_spec=SplitSpec(seed=args.seed),
        base_hp=HyperParams(seed=args.seed),
        max_workers=args.workers,
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "sweep.csv").write_text(result.to_csv(), encoding="utf-8")
    (out_dir / "sweep.json").write_text(
        json.dumps(result.to_json(), indent=2), encoding="utf-8"
    )
    plots = sensitivity_panels(result, out_dir)
    _emit(
        {
            "best": result.best.to_json() if result.best else None,
            "csv": str(out_dir / "sweep.csv"),
            "json": str(out_dir / "sweep.json"),
            "plots": [str(p) for p in plots],
        }
    )
    return 0


def _cmd_route(args) -> int:
    raw = sys.stdin.read()
    note = parse_note(raw.strip("\n"), args.persona, note_id=args.id)
    model = _read_model(args.model)
    probs = predict_proba(model, note)
    labels = labels_from_probs(probs, model.thresholds)
    _emit(
        {
            "note_id": note.id,
            "predicted": sorted(labels),
            "probabilities": proba_map(probs),
        }
    )
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from noteroute.gateway.service import create_app

    config = load_config(args.config) if args.config else ServiceConfig()
    overrides = {}
    for name in ("host", "port", "vault", "model", "ledger", "k"):
        value = getattr(args, name)
        if value is not None:
            key = {
                "vault": "vault_path",
                "model": "model_path",
                "ledger": "ledger_path",
            }.get(name, name)
            overrides[key] = value
    if overrides:
        config = ServiceConfig.from_json({**config.to_json(), **overrides})
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
    return 0


def _cmd_plot(args) -> int:
    from noteroute.evaluation.plots import sensitivity_panels

    result = SweepResult.from_json(
        json.loads(Path(args.input).read_text(encoding="utf-8"))
    )
    plots = sensitivity_panels(result, args.out_dir)
    _emit({"plots": [str(p) for p in plots]})
    return 0


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noteroute",
        description="Note routing pipeline: generate, annotate, train, serve.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic dataset (JSONL)")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-notes", type=int, default=20)
    p.add_argument("--max-notes", type=int, default=60)
    p.add_argument("--personas", help="comma-separated persona codes")
    p.add_argument(
        "--reference",
        action="store_true",
        help="write the pinned reference dataset instead of sampling",
    )
    p.set_defaults(fn=_cmd_generate)

    p = sub.add_parser("qa", help="run both QA stages over a dataset")
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-stage2", action="store_true")
    p.set_defaults(fn=_cmd_qa)

    p = sub.add_parser("ingest", help="load a dataset file into a vault")
    p.add_argument("--input", required=True)
    p.add_argument("--vault", required=True)
    p.add_argument("--model", help="router model; enables embedding")
    p.set_defaults(fn=_cmd_ingest)

    p = sub.add_parser("stats", help="corpus counts and kind distribution")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--input")
    group.add_argument("--vault")
    p.set_defaults(fn=_cmd_stats)

    p = sub.add_parser("train", help="train and calibrate a router model")
    p.add_argument("--input", required=True)
    p.add_argument("--model-out", required=True)
    p.add_argument("--hash-dims", type=int, default=2**15)
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--learning-rate", type=float, default=0.1)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--weight-decay", type=float, default=1e-4)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_train)

    p = sub.add_parser("eval", help="score a model or probability file")
    p.add_argument("--input", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--model")
    group.add_argument("--probs", help="JSONL of {note_id, probs}")
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("sweep", help="hyperparameter grid sweep")
    p.add_argument("--input", required=True)
    p.add_argument("--grid", choices=("default", "external"), default="default")
    p.add_argument("--out-dir", default="sweep_out")
    p.add_argument("--hash-dims", type=int, default=2**15)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("route", help="classify one note read from stdin")
    p.add_argument("--persona", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--id", help="note id (otherwise generated)")
    p.set_defaults(fn=_cmd_route)

    p = sub.add_parser("serve", help="run the HTTP gateway")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.add_argument("--vault")
    p.add_argument("--model")
    p.add_argument("--ledger")
    p.add_argument("--k", type=int)
    p.set_defaults(fn=_cmd_serve)

    p = sub.add_parser("plot", help="replot sensitivity panels from sweep.json")
    p.add_argument("--input", required=True)
    p.add_argument("--out-dir", default="sweep_out")
    p.set_defaults(fn=_cmd_plot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (
        ParseError,
        DataError,
        FatalError,
        VaultError,
        ValueError,
        OSError,
    ) as exc:
        return _fail(exc)


if __name__ == "__main__":
    sys.exit(main())

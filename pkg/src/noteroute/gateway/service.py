"""HTTP gateway: the full pipeline behind a JSON API.

Note capture classifies and embeds synchronously so the UI sees
predictions immediately; training, evaluation, and sweeps run as
background jobs (one at a time). The model file always holds the model a
training job produced; feedback nudges accumulate in the ledger, so
startup state is replay(model file, ledger). Installing a retrained
model rotates the ledger, which restarts that equation from the new
model.
"""

from __future__ import annotations

import datetime as dt
import os
import tempfile
import time
from pathlib import Path
from typing import Any, Mapping

import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from noteroute.corpus.client import client_from_config
from noteroute.corpus.generate import GenerationConfig, generate_corpus
from noteroute.corpus.ingest import FatalError, ingest_dataset
from noteroute.corpus.personas import builtin_profiles
from noteroute.corpus.qa import QAConfig, qa_pipeline
from noteroute.corpus.stats import corpus_stats
from noteroute.evaluation.split import (
    SplitSpec,
    evaluate_model,
    labeled_corpus,
    run_split_eval,
)
from noteroute.evaluation.sweep import NATIVE_GRID, SweepGrid, run_sweep
from noteroute.evaluation.plots import sensitivity_panels
from noteroute.gateway.config import ServiceConfig
from noteroute.gateway.jobs import JobRunner, UnknownJob
from noteroute.model import KINDS, Note, ParseError, dump_corpus_jsonl, parse_note
from noteroute.orchestrator.core import Orchestrator
from noteroute.orchestrator.feedback import (
    DoubleFeedback,
    FeedbackLedger,
    UnknownSuggestion,
    replay_ledger,
)
from noteroute.orchestrator.views import board_to_json, calendar_to_json
from noteroute.router.features import FeatureSpec
from noteroute.router.model import (
    RouterModel,
    labels_from_probs,
    load_model,
    predict_proba,
    proba_map,
    save_model,
)
from noteroute.router.train import DataError, HyperParams
from noteroute.vault.store import ConflictError, NotFound, NoteRecord, Vault

SERVICE_HASH_DIMS = 2**15


def initial_model(hash_dims: int = SERVICE_HASH_DIMS) -> RouterModel:
    """Untrained placeholder that predicts no kinds."""
    spec = FeatureSpec(hash_dims=hash_dims)
    n = len(KINDS)
    return RouterModel(
        spec=spec,
        weights=np.zeros((n, spec.dimension)),
        bias=np.full(n, -4.0),
        thresholds=np.full(n, 0.5),
    )


def _atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class GatewayState:
    """Everything the endpoints share: vault, orchestrator, jobs."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        self.vault = (
            Vault.load(config.vault_path)
            if Path(config.vault_path).exists()
            else Vault()
        )
        model_path = Path(config.model_path)
        base = (
            load_model(model_path.read_bytes())
            if model_path.exists()
            else initial_model()
        )
        self.ledger = FeedbackLedger(config.ledger_path)
        model = replay_ledger(base, self.ledger, config.policy)
        self.orchestrator = Orchestrator(
            model,
            self.ledger,
            policy=config.policy,
            k=config.k,
            rules=None,
            projection_seed=self.vault.projection_seed,
        )
        self.jobs = JobRunner()
        self.client = client_from_config(config.client)

    @property
    def model(self) -> RouterModel:
        return self.orchestrator.model

    def labeled_from_vault(self):
        pairs = [(r.note, tuple(r.concepts)) for r in self.vault.list_notes()]
        return labeled_corpus(pairs)

    def labeled_from_path(self, path: str):
        corpus, errors = ingest_dataset(path)
        if errors:
            raise DataError(
                f"{len(errors)} records failed to ingest; first: {errors[0].message}"
            )
        return labeled_corpus(corpus)

    def install_model(self, model: RouterModel) -> None:
        """Persist a retrained model and restart the feedback ledger."""
        _atomic_write(Path(self.config.model_path), save_model(model))
        ledger_path = Path(self.config.ledger_path)
        if ledger_path.exists() and ledger_path.stat().st_size > 0:
            os.replace(ledger_path, ledger_path.with_suffix(f".{int(time.time())}.old"))
        self.orchestrator.install_model(model)

    def persist_vault(self) -> None:
        Path(self.config.vault_path).parent.mkdir(parents=True, exist_ok=True)
        self.vault.persist(self.config.vault_path)

    def shutdown(self) -> None:
        self.jobs.shutdown()


def _error_body(exc: Exception) -> dict:
    body: dict[str, Any] = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ParseError):
        body["field"] = exc.field
        body["offset"] = exc.offset
    return {"error": body}


def _bad_request(message: str) -> JSONResponse:
    return JSONResponse(
        status_code=400, content={"error": {"type": "BadRequest", "message": message}}
    )


def _require(payload: Mapping, *keys: str) -> JSONResponse | None:
    missing = [k for k in keys if k not in payload]
    if missing:
        return _bad_request(f"missing required field(s): {', '.join(missing)}")
    return None


def create_app(config: ServiceConfig | None = None, state: GatewayState | None = None) -> FastAPI:
    state = state or GatewayState(config or ServiceConfig())
    app = FastAPI(title="noteroute gateway")
    app.state.gateway = state

    # The workbench UI is served from a different origin.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    async def _on_validation(_req: Request, exc: RequestValidationError):
        return _bad_request(str(exc))

    @app.exception_handler(ParseError)
    async def _on_parse(_req: Request, exc: ParseError):
        return JSONResponse(status_code=400, content=_error_body(exc))

    @app.exception_handler(ValueError)
    async def _on_value(_req: Request, exc: ValueError):
        return JSONResponse(status_code=400, content=_error_body(exc))

    @app.exception_handler(NotFound)
    async def _on_missing(_req: Request, exc: NotFound):
        return JSONResponse(status_code=404, content=_error_body(exc))

    @app.exception_handler(UnknownSuggestion)
    async def _on_unknown_suggestion(_req: Request, exc: UnknownSuggestion):
        return JSONResponse(status_code=404, content=_error_body(exc))

    @app.exception_handler(ConflictError)
    async def _on_conflict(_req: Request, exc: ConflictError):
        return JSONResponse(status_code=409, content=_error_body(exc))

    @app.exception_handler(DoubleFeedback)
    async def _on_double(_req: Request, exc: DoubleFeedback):
        return JSONResponse(status_code=409, content=_error_body(exc))

    # -- notes ---------------------------------------------------------

    @app.post("/notes", status_code=201)
    def create_note(payload: dict):
        if err := _require(payload, "text", "persona"):
            return err
        note = parse_note(
            str(payload["text"]),
            str(payload["persona"]),
            note_id=payload.get("id"),
        )
        model = state.model
        probs = predict_proba(model, note)
        predicted = labels_from_probs(probs, model.thresholds)
        record = NoteRecord(
            note=note, predicted=predicted, model_version=str(model.version)
        )
        state.vault.put_note(record)
        state.vault.index_note(note.id, model)
        return {
            "note": note.to_json(),
            "predicted": sorted(predicted),
            "probabilities": proba_map(probs),
        }

    @app.get("/notes")
    def list_notes(
        persona: str | None = None,
        kind: str | None = None,
        date_from: str | None = None,
        date_to: str | None = None,
    ):
        records = state.vault.list_notes(
            persona=persona,
            kind=kind,
            date_from=dt.date.fromisoformat(date_from) if date_from else None,
            date_to=dt.date.fromisoformat(date_to) if date_to else None,
        )
        return {"notes": [r.to_json() for r in records], "count": len(records)}

    @app.get("/notes/{note_id}")
    def get_note(note_id: str):
        return state.vault.get_note(note_id).to_json()

    @app.get("/notes/{note_id}/suggestions")
    def note_suggestions(note_id: str):
        record = state.vault.get_note(note_id)
        cands = state.orchestrator.propose(record.note, state.vault.snapshot)
        return {"suggestions": [c.to_json() for c in cands]}

    # -- feedback and views ---------------------------------------------

    @app.post("/feedback")
    def feedback(payload: dict):
        if err := _require(payload, "suggestion_id", "action"):
            return err
        updated = state.orchestrator.record_feedback(
            str(payload["suggestion_id"]),
            str(payload["action"]),
            payload.get("edited_payload"),
        )
        return {
            "suggestion": updated.to_json(),
            "model_version": state.model.version,
        }

    @app.get("/kanban")
    def kanban():
        return board_to_json(state.orchestrator.kanban_board())

    @app.get("/calendar")
    def calendar(date: str):
        day = dt.date.fromisoformat(date)
        events = state.orchestrator.calendar_day(day)
        return {"date": day.isoformat(), "events": calendar_to_json(events)}

    # -- jobs -----------------------------------------------------------

    @app.post("/train", status_code=202)
    def train_job(payload: dict | None = None):
        payload = payload or {}
        hp = HyperParams.from_json(payload.get("hyperparams", {}))
        hash_dims = int(payload.get("hash_dims", SERVICE_HASH_DIMS))
        corpus_path = payload.get("corpus_path")
        split = SplitSpec(seed=hp.seed)

        def run():
            labeled = (
                state.labeled_from_path(corpus_path)
                if corpus_path
                else state.labeled_from_vault()
            )
            result = run_split_eval(
                labeled, hp=hp, spec=FeatureSpec(hash_dims=hash_dims), split_spec=split
            )
            state.install_model(result.model)
            return {
                "installed_version": result.model.version,
                "val": result.val_report.to_json(),
                "test": result.test_report.to_json(),
            }

        return {"job": state.jobs.submit("train", run).to_json()}

    @app.post("/eval", status_code=202)
    def eval_job(payload: dict | None = None):
        payload = payload or {}
        corpus_path = payload.get("corpus_path")

        def run():
            labeled = (
                state.labeled_from_path(corpus_path)
                if corpus_path
                else state.labeled_from_vault()
            )
            report = evaluate_model(state.model, labeled)
            return {"metrics": report.to_json(), "notes": len(labeled)}

        return {"job": state.jobs.submit("eval", run).to_json()}

    @app.post("/sweep", status_code=202)
    def sweep_job(payload: dict | None = None):
        payload = payload or {}
        grid_arg = payload.get("grid", "default")
        if isinstance(grid_arg, Mapping):
            grid = SweepGrid.from_json(grid_arg)
        elif grid_arg in ("default", "native"):
            grid = SweepGrid(*NATIVE_GRID)
        elif grid_arg == "external":
            grid = SweepGrid.external_default()
        else:
            return _bad_request(f"unknown grid: {grid_arg!r}")
        hash_dims = int(payload.get("hash_dims", SERVICE_HASH_DIMS))
        corpus_path = payload.get("corpus_path")
        out_dir = payload.get("out_dir")

        def run():
            labeled = (
                state.labeled_from_path(corpus_path)
                if corpus_path
                else state.labeled_from_vault()
            )
            result = run_sweep(labeled, grid, spec=FeatureSpec(hash_dims=hash_dims))
            out: dict[str, Any] = {
                "best": result.best.to_json(),
                "rows": len(result.rows),
            }
            if out_dir:
                directory = Path(out_dir)
                directory.mkdir(parents=True, exist_ok=True)
                csv_path = directory / "sweep.csv"
                csv_path.write_text(result.to_csv(), encoding="utf-8")
                out["csv"] = str(csv_path)
                out["plots"] = [
                    str(p) for p in sensitivity_panels(result, directory)
                ]
            return out

        return {"job": state.jobs.submit("sweep", run).to_json()}

    @app.get("/jobs/{job_id}")
    def get_job(job_id: str):
        try:
            return state.jobs.get(job_id).to_json()
        except UnknownJob as exc:
            return JSONResponse(status_code=404, content=_error_body(exc))

    # -- dataset utilities ----------------------------------------------

    @app.post("/dataset/generate")
    def dataset_generate(payload: dict):
        if err := _require(payload, "out_path"):
            return err
        lo, hi = payload.get("notes_per_persona", (20, 60))
        profiles = builtin_profiles()
        cfg = GenerationConfig(
            seed=int(payload.get("seed", 0)),
            personas=tuple(payload.get("personas", list(profiles))),
            notes_per_persona=(int(lo), int(hi)),
            mode=str(payload.get("mode", "template")),
        )
        corpus = generate_corpus(list(profiles.values()), cfg, client=None)
        out_path = Path(str(payload["out_path"]))
        out_path.parent.mkdir(parents=True, exist_ok=True)
        out_path.write_text(dump_corpus_jsonl(corpus), encoding="utf-8")
        stats = corpus_stats(corpus)
        return {
            "path": str(out_path),
            "note_count": stats.note_count,
            "concept_count": stats.concept_count,
        }

    @app.post("/dataset/qa")
    def dataset_qa(payload: dict):
        if err := _require(payload, "in_path"):
            return err
        try:
            corpus, errors = ingest_dataset(str(payload["in_path"]))
        except FatalError as exc:
            return _bad_request(str(exc))
        except FileNotFoundError as exc:
            return JSONResponse(status_code=404, content=_error_body(exc))
        checked, report = qa_pipeline(
            corpus,
            client=state.client,
            cfg=QAConfig(stage2_enabled=bool(payload.get("stage2", True))),
            workers=int(payload.get("workers", 1)),
        )
        body: dict[str, Any] = {
            "report": report.to_json(),
            "ingest_errors": [e.message for e in errors],
        }
        if payload.get("out_path"):
            out_path = Path(str(payload["out_path"]))
            out_path.parent.mkdir(parents=True, exist_ok=True)
            out_path.write_text(dump_corpus_jsonl(checked), encoding="utf-8")
            body["out_path"] = str(out_path)
        return body

    @app.get("/stats")
    def stats():
        pairs = [(r.note, tuple(r.concepts)) for r in state.vault.list_notes()]
        return corpus_stats(pairs).to_json()

    return app

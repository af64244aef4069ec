"""Two-stage quality assurance over concept annotations.

Stage I is rule-based: schema presence, JSON datatypes, score ranges
(out-of-range values clamped and marked corrected). Stage II is
client-based: the analysis prose is scored for consistency against the
numeric scores (inclusive flag threshold), a bounded fixer retry may
replace the annotation with a structurally valid rewrite, and summaries
are checked for plausibility against the raw note. Flags mark concepts
for human inspection; nothing in Stage II hard-deletes.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from noteroute.model import KIND_INDEX, CanonicalScores, Concept, Note
from noteroute.corpus.client import ClientError, StubTextClient, TextClient
from noteroute.corpus.routing import validate_concept_payload
from noteroute.router.features import tokenize

QA_CHECKS = ("schema", "type", "range", "canonical_consistency", "plausibility")
QA_OUTCOMES = ("pass", "corrected", "flagged", "failed")

REQUIRED_FIELDS = ("note_id", "kind", "summary", "entities", "analysis", "scores")


@dataclass(frozen=True)
class QAConfig:
    discrepancy_threshold: float = 0.25
    autofix_attempts: int = 1
    stage2_enabled: bool = True

    def __post_init__(self):
        if not 0.0 < self.discrepancy_threshold < 1.0:
            raise ValueError("discrepancy_threshold must be in (0, 1)")
        if self.autofix_attempts < 0:
            raise ValueError("autofix_attempts must be >= 0")


@dataclass(frozen=True)
class CheckResult:
    concept_id: str
    check: str
    outcome: str
    detail: str = ""

    def __post_init__(self):
        if self.check not in QA_CHECKS:
            raise ValueError(f"unknown check: {self.check!r}")
        if self.outcome not in QA_OUTCOMES:
            raise ValueError(f"unknown outcome: {self.outcome!r}")


@dataclass
class QAReport:
    entries: list[CheckResult] = field(default_factory=list)

    def add(self, concept_id: str, check: str, outcome: str, detail: str = "") -> None:
        self.entries.append(CheckResult(concept_id, check, outcome, detail))

    @property
    def counts(self) -> dict[str, int]:
        out = {o: 0 for o in QA_OUTCOMES}
        for e in self.entries:
            out[e.outcome] += 1
        return out

    def flagged_concept_ids(self) -> list[str]:
        """Concepts tagged for human inspection, in first-seen order."""
        seen: list[str] = []
        for e in self.entries:
            if e.outcome == "flagged" and e.concept_id not in seen:
                seen.append(e.concept_id)
        return seen

    def merged(self, other: "QAReport") -> "QAReport":
        return QAReport(entries=self.entries + other.entries)

    def to_json(self) -> dict:
        return {
            "counts": self.counts,
            "entries": [
                {
                    "concept_id": e.concept_id,
                    "check": e.check,
                    "outcome": e.outcome,
                    "detail": e.detail,
                }
                for e in self.entries
            ],
        }

    def to_table(self) -> str:
        header = f"{'concept':<28} {'check':<22} {'outcome':<10} detail"
        lines = [header, "-" * len(header)]
        for e in self.entries:
            lines.append(f"{e.concept_id:<28} {e.check:<22} {e.outcome:<10} {e.detail}")
        counts = self.counts
        lines.append("-" * len(header))
        lines.append(
            "totals: "
            + ", ".join(f"{name}={counts[name]}" for name in QA_OUTCOMES)
        )
        return "\n".join(lines)


def _clamped_scores(raw: Mapping[str, Any]) -> tuple[dict[str, float], list[str]]:
    fixed: dict[str, float] = {}
    clamped: list[str] = []
    for name in CanonicalScores.FIELDS:
        value = float(raw[name])
        bounded = min(1.0, max(0.0, value))
        if bounded != value:
            clamped.append(f"{name}={value}")
        fixed[name] = bounded
    return fixed, clamped


def _stage1_payload(payload: Mapping[str, Any], fallback_id: str, report: QAReport) -> Concept | None:
    cid = str(payload.get("id", fallback_id))

    missing = [k for k in REQUIRED_FIELDS if k not in payload]
    if missing:
        report.add(cid, "schema", "failed", f"missing fields: {missing}")
        report.add(cid, "type", "failed", "skipped: schema failed")
        report.add(cid, "range", "failed", "skipped: schema failed")
        return None
    report.add(cid, "schema", "pass")

    type_problems: list[str] = []
    if not isinstance(payload["entities"], list):
        type_problems.append("entities is not a list")
    if not isinstance(payload["summary"], str):
        type_problems.append("summary is not a string")
    if not isinstance(payload["analysis"], str):
        type_problems.append("analysis is not a string")
    if payload["kind"] not in KIND_INDEX:
        type_problems.append(f"unknown kind {payload['kind']!r}")
    scores = payload["scores"]
    if not isinstance(scores, Mapping):
        type_problems.append("scores is not an object")
    else:
        for name in CanonicalScores.FIELDS:
            value = scores.get(name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                type_problems.append(f"score {name} is not numeric")
    if type_problems:
        report.add(cid, "type", "failed", "; ".join(type_problems))
        report.add(cid, "range", "failed", "skipped: type failed")
        return None
    report.add(cid, "type", "pass")

    fixed, clamped = _clamped_scores(scores)
    if clamped:
        report.add(cid, "range", "corrected", f"clamped into [0, 1]: {', '.join(clamped)}")
    else:
        report.add(cid, "range", "pass")

    return Concept(
        id=cid,
        note_id=str(payload["note_id"]),
        kind=str(payload["kind"]),
        summary=payload["summary"],
        entities=tuple(str(e) for e in payload["entities"]),
        analysis=payload["analysis"],
        scores=CanonicalScores(**fixed),
        qa_status=str(payload.get("qa_status", "pending")),
        cognitive_state=payload.get("cognitive_state"),
    )


def qa_stage1(
    items: Sequence[Concept | Mapping[str, Any]],
) -> tuple[list[Concept], QAReport]:
    """Schema, datatype and range checks.

    Typed Concept inputs are valid by construction and pass all three
    checks unchanged. Raw payloads get the full treatment: missing fields
    or wrong datatypes fail (the payload is excluded from the survivors,
    its verdict lives in the report); out-of-range scores are clamped and
    marked corrected. Idempotent: a second run over the survivors is
    all-pass.
    """
    report = QAReport()
    survivors: list[Concept] = []
    for i, item in enumerate(items):
        if isinstance(item, Concept):
            for check in ("schema", "type", "range"):
                report.add(item.id, check, "pass")
            survivors.append(item)
            continue
        concept = _stage1_payload(item, fallback_id=f"payload-{i}", report=report)
        if concept is not None:
            survivors.append(concept)
    return survivors, report


def _plausible(concept: Concept, note: Note) -> bool:
    content_tokens = set(tokenize(note.content))
    summary_overlap = bool(set(tokenize(concept.summary)) & content_tokens)
    entity_overlap = any(
        set(tokenize(e)) & content_tokens for e in concept.entities
    )
    return summary_overlap or entity_overlap


def _try_fix(
    concept: Concept, client: TextClient, attempts: int
) -> Concept | None:
    """Ask the client to rewrite the annotation; accept only structurally
    valid output. Identity fields are pinned to the original."""
    prompt_payload = json.dumps(concept.to_json())
    for _ in range(attempts):
        try:
            text = client.complete(
                "FIX\n"
                f"{prompt_payload}\n"
                "Rewrite this concept so the analysis prose matches the "
                "numeric scores. Return one JSON object."
            )
        except ClientError:
            return None
        try:
            obj = json.loads(text)
            obj = validate_concept_payload(obj)
        except (json.JSONDecodeError, ValueError):
            prompt_payload = text
            continue
        return Concept(
            id=concept.id,
            note_id=concept.note_id,
            kind=obj["kind"],
            summary=obj["summary"],
            entities=tuple(str(e) for e in obj["entities"]),
            analysis=obj["analysis"],
            scores=CanonicalScores.from_dict(obj["scores"]),
            qa_status="pending",
            cognitive_state=obj.get("cognitive_state", concept.cognitive_state),
        )
    return None


def _stage2_one(
    concept: Concept,
    client: TextClient,
    cfg: QAConfig,
    note: Note | None,
) -> tuple[Concept, list[CheckResult]]:
    entries: list[CheckResult] = []
    current = concept
    flagged = False

    try:
        implied = client.score_consistency(current.analysis, current.scores)
        discrepancy = abs(implied - current.scores.mean())
        if discrepancy >= cfg.discrepancy_threshold:
            repaired = (
                _try_fix(current, client, cfg.autofix_attempts)
                if cfg.autofix_attempts > 0
                else None
            )
            resolved = False
            if repaired is not None:
                implied2 = client.score_consistency(repaired.analysis, repaired.scores)
                if abs(implied2 - repaired.scores.mean()) < cfg.discrepancy_threshold:
                    current = repaired
                    entries.append(
                        CheckResult(
                            concept.id,
                            "canonical_consistency",
                            "corrected",
                            f"discrepancy {discrepancy:.3f} resolved by fixer",
                        )
                    )
                    resolved = True
            if not resolved:
                flagged = True
                entries.append(
                    CheckResult(
                        concept.id,
                        "canonical_consistency",
                        "flagged",
                        f"|implied - mean| = {discrepancy:.3f} >= "
                        f"{cfg.discrepancy_threshold}; needs human inspection",
                    )
                )
        else:
            entries.append(
                CheckResult(
                    concept.id,
                    "canonical_consistency",
                    "pass",
                    f"discrepancy {discrepancy:.3f}",
                )
            )
    except ClientError as exc:
        flagged = True
        entries.append(
            CheckResult(
                concept.id,
                "canonical_consistency",
                "flagged",
                f"consistency client failed: {exc}; needs human inspection",
            )
        )

    if note is not None:
        if _plausible(current, note):
            entries.append(CheckResult(concept.id, "plausibility", "pass"))
        else:
            flagged = True
            entries.append(
                CheckResult(
                    concept.id,
                    "plausibility",
                    "flagged",
                    "summary and entities share no tokens with the note; "
                    "needs human inspection",
                )
            )

    return current.with_status("flagged" if flagged else "passed"), entries


def qa_stage2(
    concepts: Sequence[Concept],
    client: TextClient,
    cfg: QAConfig | None = None,
    notes_by_id: Mapping[str, Note] | None = None,
    workers: int = 1,
) -> tuple[list[Concept], QAReport]:
    """Consistency and plausibility checks; sets final pass/flag statuses.

    The plausibility check runs only for concepts whose note is supplied.
    Worker count never changes the result; concepts are reported in input
    order.
    """
    cfg = cfg or QAConfig()
    notes_by_id = notes_by_id or {}

    def job(concept: Concept):
        return _stage2_one(concept, client, cfg, notes_by_id.get(concept.note_id))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, concepts))
    else:
        results = [job(c) for c in concepts]

    report = QAReport()
    out: list[Concept] = []
    for concept, entries in results:
        out.append(concept)
        report.entries.extend(entries)
    return out, report


def qa_pipeline(
    corpus: Sequence[tuple[Note, Sequence[Concept]]],
    client: TextClient | None = None,
    cfg: QAConfig | None = None,
    workers: int = 1,
) -> tuple[list[tuple[Note, list[Concept]]], QAReport]:
    """Both QA stages over a whole corpus, preserving note order."""
    cfg = cfg or QAConfig()
    client = client or StubTextClient()

    notes_by_id = {note.id: note for note, _ in corpus}
    flat: list[Concept] = [c for _, concepts in corpus for c in concepts]

    stage1_out, report = qa_stage1(flat)
    if cfg.stage2_enabled:
        stage2_out, stage2_report = qa_stage2(
            stage1_out, client, cfg, notes_by_id, workers=workers
        )
        report = report.merged(stage2_report)
    else:
        stage2_out = [c.with_status("passed") for c in stage1_out]

    by_note: dict[str, list[Concept]] = {note.id: [] for note, _ in corpus}
    for concept in stage2_out:
        by_note.setdefault(concept.note_id, []).append(concept)
    return [(note, by_note[note.id]) for note, _ in corpus], report

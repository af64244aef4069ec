"""Text-service boundary: completion and consistency scoring.

Three prompt families cross this boundary, distinguished by a first-line
marker so the deterministic stub can answer each one offline:

  - ``COMPOSE`` + ``MENTION <kind>: <topic>`` lines -> note prose
  - ``ANNOTATE`` + ``NOTE: <content>``            -> JSON concept array
  - ``FIX`` + a JSON payload                      -> repaired JSON payload

The stub is pure given its seed; the HTTP client posts the same prompts to
a remote endpoint and never interprets them.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
from typing import Any, Mapping, Protocol

from noteroute.model import KINDS, CanonicalScores
from noteroute.corpus.templates import (
    KIND_KEYWORDS,
    KIND_SUMMARIES,
    KIND_TEMPLATES,
    analysis_text,
    keyword_hits,
)


class ClientError(RuntimeError):
    """The text service failed or returned an unusable response."""


class TextClient(Protocol):
    def complete(self, prompt: str) -> str: ...

    def score_consistency(self, analysis: str, scores: CanonicalScores) -> float: ...


_SCORE_RE = re.compile(r"(?<![\d.])(?:0(?:\.\d+)?|1(?:\.0*)?)(?!\.?\d)")

_CONCEPT_DEFAULTS: dict[str, Any] = {
    "summary": "",
    "entities": [],
    "analysis": "",
}


def _unit_hash(*parts: Any) -> float:
    digest = hashlib.sha256("|".join(str(p) for p in parts).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") / 2**64


class StubTextClient:
    """Offline deterministic stand-in for the remote text service."""

    def __init__(self, seed: int = 0):
        self.seed = seed

    # -- scoring -----------------------------------------------------------

    def score_consistency(self, analysis: str, scores: CanonicalScores) -> float:
        """Mean of the unit-interval numbers the analysis itself states.

        Analysis prose that quotes no numbers gets a hash-derived but
        deterministic score, so mismatched prose still scores somewhere.
        """
        found = [float(m) for m in _SCORE_RE.findall(analysis)]
        found = [v for v in found if 0.0 <= v <= 1.0]
        if found:
            return min(1.0, max(0.0, sum(found) / len(found)))
        return _unit_hash(self.seed, "score", analysis, sorted(scores.to_dict().items()))

    # -- completion --------------------------------------------------------

    def complete(self, prompt: str) -> str:
        head = prompt.lstrip().split("\n", 1)[0].strip().upper()
        if head.startswith("FIX"):
            return self._fix(prompt)
        if head.startswith("ANNOTATE"):
            return self._annotate(prompt)
        if head.startswith("COMPOSE"):
            return self._compose(prompt)
        pick = int(_unit_hash(self.seed, "text", prompt) * 3)
        return (
            "Quick note to self about the day.",
            "Jotting this down before it fades.",
            "A short record of what just happened.",
        )[pick]

    def _compose(self, prompt: str) -> str:
        sentences: list[str] = []
        scenario = None
        for line in prompt.splitlines():
            line = line.strip()
            if line.upper().startswith("SCENARIO:"):
                scenario = line.split(":", 1)[1].strip()
            elif line.upper().startswith("MENTION "):
                body = line[len("MENTION ") :]
                kind, _, topic = body.partition(":")
                kind = kind.strip()
                topic = topic.strip() or "it"
                templates = KIND_TEMPLATES.get(kind)
                if templates is None:
                    continue
                pick = int(_unit_hash(self.seed, "compose", kind, topic) * len(templates))
                sentences.append(templates[pick].format(topic=topic))
        opener = f"{scenario}." if scenario else "Today's entry."
        return " ".join([opener] + sentences) if sentences else opener

    def _annotate(self, prompt: str) -> str:
        content = ""
        for line in prompt.splitlines():
            if line.upper().startswith("NOTE:"):
                content = line.split(":", 1)[1].strip()
                break
        concepts = []
        for kind in KINDS:
            if not keyword_hits(content, KIND_KEYWORDS[kind]):
                continue
            base = _unit_hash(self.seed, "annotate", kind, content)
            values = {
                name: round(0.2 + 0.7 * _unit_hash(self.seed, kind, content, name), 2)
                for name in CanonicalScores.FIELDS
            }
            concepts.append(
                {
                    "kind": kind,
                    "summary": KIND_SUMMARIES[kind].format(topic="this entry"),
                    "entities": [],
                    "analysis": analysis_text(values),
                    "scores": values,
                    "confidence": round(0.5 + base / 2, 2),
                }
            )
        return json.dumps(concepts)

    def _fix(self, prompt: str) -> str:
        payload = _extract_json(prompt)
        if payload is None:
            return "{}"
        if isinstance(payload, list):
            return json.dumps([_repair_concept(p) for p in payload if isinstance(p, dict)])
        if isinstance(payload, dict):
            return json.dumps(_repair_concept(payload))
        return "{}"


def _extract_json(text: str):
    """First balanced JSON object or array embedded in the text, if any."""
    for opener, closer in (("{", "}"), ("[", "]")):
        start = text.find(opener)
        while start != -1:
            depth = 0
            in_string = False
            escaped = False
            for i in range(start, len(text)):
                ch = text[i]
                if in_string:
                    if escaped:
                        escaped = False
                    elif ch == "\\":
                        escaped = True
                    elif ch == '"':
                        in_string = False
                    continue
                if ch == '"':
                    in_string = True
                elif ch == opener:
                    depth += 1
                elif ch == closer:
                    depth -= 1
                    if depth == 0:
                        try:
                            return json.loads(text[start : i + 1])
                        except json.JSONDecodeError:
                            break
            start = text.find(opener, start + 1)
    return None


def _repair_concept(obj: dict) -> dict:
    """Clamp scores, fill defaults, coerce types; never invents a kind."""
    out = dict(obj)
    for key, default in _CONCEPT_DEFAULTS.items():
        if key not in out or out[key] is None:
            out[key] = default if not isinstance(default, list) else list(default)
    if not isinstance(out["entities"], list):
        out["entities"] = [str(out["entities"])]
    out["entities"] = [str(e) for e in out["entities"]]
    out["summary"] = str(out["summary"])
    out["analysis"] = str(out["analysis"])

    raw_scores = out.get("scores")
    if not isinstance(raw_scores, Mapping):
        raw_scores = {}
    fixed = {}
    for name in CanonicalScores.FIELDS:
        try:
            value = float(raw_scores.get(name, 0.5))
        except (TypeError, ValueError):
            value = 0.5
        fixed[name] = min(1.0, max(0.0, value))
    out["scores"] = fixed
    return out


class HttpTextClient:
    """Remote text service over JSON/HTTP.

    POSTs {"prompt"} to <endpoint>/complete and {"analysis", "scores"} to
    <endpoint>/score. The bearer token is read from the named environment
    variable at call time.
    """

    def __init__(
        self,
        endpoint: str,
        api_key_env: str = "NOTEROUTE_API_KEY",
        timeout: float = 30.0,
    ):
        if not endpoint:
            raise ValueError("endpoint must be a URL")
        self.endpoint = endpoint.rstrip("/")
        self.api_key_env = api_key_env
        self.timeout = timeout

    def _headers(self) -> dict[str, str]:
        key = os.environ.get(self.api_key_env, "")
        return {"Authorization": f"Bearer {key}"} if key else {}

    def _post(self, path: str, body: dict) -> dict:
        import httpx

        try:
            resp = httpx.post(
                f"{self.endpoint}{path}",
                json=body,
                headers=self._headers(),
                timeout=self.timeout,
            )
        except httpx.HTTPError as exc:
            raise ClientError(f"text service unreachable: {exc}") from exc
        if resp.status_code != 200:
            raise ClientError(f"text service returned HTTP {resp.status_code}")
        try:
            return resp.json()
        except ValueError as exc:
            raise ClientError(f"text service returned non-JSON body: {exc}") from exc

    def complete(self, prompt: str) -> str:
        obj = self._post("/complete", {"prompt": prompt})
        if "text" not in obj:
            raise ClientError("completion response missing 'text'")
        return str(obj["text"])

    def score_consistency(self, analysis: str, scores: CanonicalScores) -> float:
        obj = self._post("/score", {"analysis": analysis, "scores": scores.to_dict()})
        if "score" not in obj:
            raise ClientError("score response missing 'score'")
        try:
            value = float(obj["score"])
        except (TypeError, ValueError) as exc:
            raise ClientError(f"score is not numeric: {obj['score']!r}") from exc
        if not 0.0 <= value <= 1.0:
            raise ClientError(f"score {value} outside [0, 1]")
        return value


def client_from_config(cfg: Mapping[str, Any]) -> TextClient:
    """Build a client from a config mapping ({"kind": "stub"|"http", ...})."""
    kind = str(cfg.get("kind", "stub"))
    if kind == "stub":
        return StubTextClient(seed=int(cfg.get("seed", 0)))
    if kind == "http":
        return HttpTextClient(
            endpoint=str(cfg["endpoint"]),
            api_key_env=str(cfg.get("api_key_env", "NOTEROUTE_API_KEY")),
            timeout=float(cfg.get("timeout", 30.0)),
        )
    raise ValueError(f"unknown client kind: {kind!r}")

"""Service configuration: file based, with environment overrides.

Precedence, lowest to highest: built-in defaults, JSON config file,
NOTEROUTE_* environment variables.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping

from noteroute.orchestrator.feedback import FeedbackPolicy

DEFAULT_HOST = "127.0.0.1"
DEFAULT_PORT = 8040

_ENV_PREFIX = "NOTEROUTE_"


@dataclass(frozen=True)
class ServiceConfig:
    host: str = DEFAULT_HOST
    port: int = DEFAULT_PORT
    vault_path: str = "data/vault.bin"
    model_path: str = "data/model.bin"
    ledger_path: str = "data/feedback.jsonl"
    k: int = 5
    policy: FeedbackPolicy = field(default_factory=FeedbackPolicy)
    client: dict = field(default_factory=lambda: {"kind": "stub"})

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if not 0 < self.port < 65536:
            raise ValueError(f"port {self.port} outside (0, 65536)")
        for path in (self.vault_path, self.model_path, self.ledger_path):
            parent = Path(path).parent
            if parent.exists() and not os.access(parent, os.W_OK):
                raise ValueError(f"directory {parent} is not writable")

    def to_json(self) -> dict:
        return {
            "host": self.host,
            "port": self.port,
            "vault_path": self.vault_path,
            "model_path": self.model_path,
            "ledger_path": self.ledger_path,
            "k": self.k,
            "policy": self.policy.to_json(),
            "client": dict(self.client),
        }

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "ServiceConfig":
        base = cls()
        return cls(
            host=str(obj.get("host", base.host)),
            port=int(obj.get("port", base.port)),
            vault_path=str(obj.get("vault_path", base.vault_path)),
            model_path=str(obj.get("model_path", base.model_path)),
            ledger_path=str(obj.get("ledger_path", base.ledger_path)),
            k=int(obj.get("k", base.k)),
            policy=FeedbackPolicy.from_json(obj.get("policy", {})),
            client=dict(obj.get("client", base.client)),
        )


def _env_overrides(environ: Mapping[str, str]) -> dict[str, Any]:
    out: dict[str, Any] = {}
    mapping = {
        "HOST": ("host", str),
        "PORT": ("port", int),
        "VAULT_PATH": ("vault_path", str),
        "MODEL_PATH": ("model_path", str),
        "LEDGER_PATH": ("ledger_path", str),
        "K": ("k", int),
    }
    for suffix, (name, cast) in mapping.items():
        raw = environ.get(_ENV_PREFIX + suffix)
        if raw is not None:
            out[name] = cast(raw)
    return out


def load_config(
    path: str | Path | None = None,
    environ: Mapping[str, str] | None = None,
) -> ServiceConfig:
    environ = os.environ if environ is None else environ
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            config = ServiceConfig.from_json(json.load(fh))
    else:
        config = ServiceConfig()
    overrides = _env_overrides(environ)
    return replace(config, **overrides) if overrides else config

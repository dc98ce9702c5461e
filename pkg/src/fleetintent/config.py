"""Service configuration.

Config lives in a YAML file; only the chat-endpoint credential comes
from the environment (the file stores the variable name, never the
secret). Relative paths resolve against the config file's directory.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

import yaml

from .chat import ChatEndpoint
from .maintenance.policy import CostEstimate, CostModel, PolicyBands, StaffRoster


@dataclass(frozen=True)
class ServiceConfig:
    data_path: Path
    fixture_path: Path | None = None
    engine_limit: int = 20
    bands: PolicyBands = field(default_factory=PolicyBands)
    cost_model: CostModel = field(default_factory=CostModel)
    roster: StaffRoster = field(default_factory=StaffRoster)
    backend: str = "rule"  # "rule" | "llm"
    llm: ChatEndpoint | None = None
    host: str = "127.0.0.1"
    port: int = 8000
    auto_confirm_critical: bool = False
    busy_policy: str = "queue"  # "queue" | "reject"
    max_decompose_attempts: int = 3
    delegation_depth_limit: int = 3
    frontend_dir: Path | None = None

    def __post_init__(self):
        if self.backend not in ("rule", "llm"):
            raise ValueError(f"backend must be 'rule' or 'llm', got '{self.backend}'")
        if self.backend == "llm" and self.llm is None:
            raise ValueError("backend 'llm' requires an llm endpoint configuration")
        if self.busy_policy not in ("queue", "reject"):
            raise ValueError(f"busy_policy must be 'queue' or 'reject', got '{self.busy_policy}'")


def load_config(path: Path | str) -> ServiceConfig:
    path = Path(path)
    doc = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    return config_from_dict(doc, base_dir=path.parent)


def config_from_dict(doc: Mapping[str, Any], base_dir: Path | None = None) -> ServiceConfig:
    base = base_dir or Path.cwd()

    def resolve(value: Any) -> Path:
        p = Path(str(value))
        return p if p.is_absolute() else (base / p).resolve()

    kwargs: dict[str, Any] = {}
    if "data_path" in doc:
        kwargs["data_path"] = resolve(doc["data_path"])
    else:
        raise ValueError("config requires data_path")
    if doc.get("fixture_path"):
        kwargs["fixture_path"] = resolve(doc["fixture_path"])
    if doc.get("frontend_dir"):
        kwargs["frontend_dir"] = resolve(doc["frontend_dir"])
    for key in ("engine_limit", "backend", "host", "port", "auto_confirm_critical",
                "busy_policy", "max_decompose_attempts", "delegation_depth_limit"):
        if key in doc:
            kwargs[key] = doc[key]

    if "bands" in doc:
        kwargs["bands"] = PolicyBands(**doc["bands"])
    if "cost_model" in doc:
        per_action = {
            action: CostEstimate(float(entry["cost_usd"]), float(entry["labor_hours"]))
            for action, entry in doc["cost_model"].items()
        }
        kwargs["cost_model"] = CostModel(per_action=per_action)
    if "roster" in doc:
        roster_doc = dict(doc["roster"])
        capacity = float(roster_doc.pop("daily_capacity_hours", 8.0))
        kwargs["roster"] = StaffRoster(
            headcount={k: int(v) for k, v in roster_doc.items()},
            daily_capacity_hours=capacity,
        )
    if "llm" in doc and doc["llm"]:
        kwargs["llm"] = ChatEndpoint(**doc["llm"])
    return ServiceConfig(**kwargs)

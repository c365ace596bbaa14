"""Runtime configuration: every tunable the pipeline exposes, with the
defaults used throughout the tests. Loaded from a flat JSON file."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from .profiler import DEFAULT_EVENT_WEIGHTS, ProfileConfig

DEFAULT_ACCEPTED_SUFFIXES = (".ps", ".pdf", ".ps.gz", ".ps.z", ".pdf.gz")


@dataclass
class RuntimeConfig:
    k: int = 1
    boost_rounds: int = 10
    cv_folds: int = 10
    decay_offset: float = 1.0
    event_weights: dict[str, float] = field(
        default_factory=lambda: dict(DEFAULT_EVENT_WEIGHTS)
    )
    propagation_factor: float = 0.5
    n_recommendations: int = 10
    n_topics: int = 3
    accepted_suffixes: tuple[str, ...] = DEFAULT_ACCEPTED_SUFFIXES
    stoplist_path: Optional[str] = None  # packaged default when unset
    auth_token: Optional[str] = None
    re_recommend_after_days: Optional[int] = None  # None: never resurface

    def profile_config(self) -> ProfileConfig:
        return ProfileConfig(
            event_weights=dict(self.event_weights),
            propagation_factor=self.propagation_factor,
            decay_offset=self.decay_offset,
        )

    def url_accepted(self, url: str) -> bool:
        lowered = url.lower()
        return any(lowered.endswith(suffix) for suffix in self.accepted_suffixes)

    def to_json(self) -> str:
        payload = asdict(self)
        payload["accepted_suffixes"] = list(self.accepted_suffixes)
        return json.dumps(payload, indent=1, sort_keys=True)


def load_config(path: str | Path | None) -> RuntimeConfig:
    if path is None:
        return RuntimeConfig()
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    config = RuntimeConfig()
    for key, value in payload.items():
        if not hasattr(config, key):
            raise ValueError(f"unknown config key {key!r}")
        if key == "accepted_suffixes":
            value = tuple(value)
        elif key == "event_weights":
            merged = dict(DEFAULT_EVENT_WEIGHTS)
            merged.update({k: float(v) for k, v in value.items()})
            value = merged
        setattr(config, key, value)
    return config

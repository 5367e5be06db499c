"""Run configuration: every model parameter surfaced, defaulted to the
standard experiment values, so a run with an empty config file reproduces
the reference setup.

STM size 5 chunks; attention span 20 tokens advancing 1 token at a time;
chunk formation probability 1; 10 simulated seconds to create a chunk and
2 to update one.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    stm_size: int = 5
    attention_span: int = 20
    attention_step: int = 1
    min_fetch: int = 2
    chunk_probability: float = 1.0
    seconds_per_new_chunk: float = 10.0
    seconds_per_update: float = 2.0
    seed: int = 0
    shuffle: bool = True              # reshuffle sample order each epoch
    max_epochs: int = 1000
    node_ceiling_factor: int = 10     # abort if nodes exceed factor x tokens
    stm_pairing: str = "head"         # head | position
    link_weighting: str = "proportional"  # proportional | multiplicative

    def __post_init__(self):
        if not 2 <= self.stm_size <= 9:
            raise ConfigError(f"stm_size must be in [2, 9], got {self.stm_size}")
        if not 0.0 <= self.chunk_probability <= 1.0:
            raise ConfigError("chunk_probability must be in [0, 1]")
        if self.attention_span < 2:
            raise ConfigError("attention_span must be >= 2")
        if self.attention_step < 1:
            raise ConfigError("attention_step must be >= 1")
        if not 2 <= self.min_fetch <= self.attention_span:
            raise ConfigError("need 2 <= min_fetch <= attention_span")
        if self.stm_pairing not in ("head", "position"):
            raise ConfigError(f"unknown stm_pairing {self.stm_pairing!r}")
        if self.link_weighting not in ("proportional", "multiplicative"):
            raise ConfigError(f"unknown link_weighting {self.link_weighting!r}")
        if self.max_epochs < 1 or self.node_ceiling_factor < 1:
            raise ConfigError("max_epochs and node_ceiling_factor must be >= 1")

    def replace(self, **kwargs) -> "RunConfig":
        data = asdict(self)
        data.update(kwargs)
        return RunConfig(**data)

    def to_dict(self) -> dict:
        return asdict(self)


def load_config(path=None, overrides: dict | None = None) -> RunConfig:
    """Read a JSON config file; absent file fields keep their defaults."""
    data: dict = {}
    if path is not None:
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigError(f"config not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        known = set(RunConfig.__dataclass_fields__)
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        data.update(raw)
    if overrides:
        data.update(overrides)
    try:
        return RunConfig(**data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None

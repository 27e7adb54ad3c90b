"""Experiment configuration: a flat ``key=value`` text file.

Lists are comma separated; ``#`` starts a comment. Every field of
:class:`ExperimentConfig` is a valid key.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any

from ..congestion import StationLoadProfile
from ..errors import ConfigurationError
from ..servicemodel import EnergyModelParams


@dataclass(frozen=True)
class ExperimentConfig:
    node_counts: tuple[int, ...] = (10, 20, 30, 40)
    k_values: tuple[int, ...] = (3, 4, 5)
    pads_per_station: int = 3
    runs_fraction: float = 0.5
    master_seed: int = 0
    payload_kg: float = 1.0
    # energy model
    alpha: float = 0.2
    beta: float = 0.3
    reserve: float = 0.1
    # congestion
    baseline_rate: float = 4.0  # drones/hour
    baseline_occupancy: float = 30.0  # minutes
    rate_spread: float = 0.5  # per-station rate multiplier drawn from 1 +/- spread
    saturation_cap: float = 240.0
    max_hops: int = 0  # 0: number of nodes in the subnetwork
    max_retries: int = 20
    workers: int = 1
    # inputs; empty paths select the built-in generator / fleet / baseline
    network_size: int = 5000
    network_edge_prob: float = 0.7  # generator: survival chance of non-tree grid links
    nodes_file: str = ""
    edges_file: str = ""
    drones_file: str = ""
    profiles_file: str = ""

    def __post_init__(self):
        if not 0.0 < self.runs_fraction <= 1.0:
            raise ConfigurationError(f"runs_fraction must lie in (0, 1], got {self.runs_fraction}")
        if not self.node_counts or min(self.node_counts) < 2:
            raise ConfigurationError("node_counts must be non-empty with every entry >= 2")
        if not self.k_values or min(self.k_values) < 1:
            raise ConfigurationError("k_values must be non-empty and positive")
        if self.pads_per_station < 1:
            raise ConfigurationError("pads_per_station must be >= 1")
        if not 0.0 <= self.rate_spread <= 1.0:
            raise ConfigurationError("rate_spread must lie in [0, 1]")
        if self.workers < 1 or self.max_retries < 1:
            raise ConfigurationError("workers and max_retries must be >= 1")
        if self.payload_kg < 0 or self.baseline_rate < 0 or self.baseline_occupancy < 0:
            raise ConfigurationError("payload, baseline rate and occupancy must be >= 0")
        self.energy_params  # validates alpha / beta / reserve

    @property
    def energy_params(self) -> EnergyModelParams:
        return EnergyModelParams(self.alpha, self.beta, self.reserve)

    @property
    def baseline_profile(self) -> StationLoadProfile:
        return StationLoadProfile.constant(self.baseline_rate, self.baseline_occupancy, seed=self.master_seed)

    def replace(self, **changes: Any) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)


FIELD_TYPES = {f.name: f.type for f in fields(ExperimentConfig)}


def convert_value(key: str, raw: str) -> Any:
    if key not in FIELD_TYPES:
        raise ConfigurationError(f"unknown config key {key!r}")
    kind = FIELD_TYPES[key]
    raw = raw.strip()
    try:
        if kind == "tuple[int, ...]":
            return tuple(int(v) for v in raw.split(",") if v.strip())
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
    except ValueError:
        raise ConfigurationError(f"bad value for {key}: {raw!r}") from None
    return raw


def parse_config_text(text: str, source: str = "<config>") -> dict[str, Any]:
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{source}:{lineno}: expected key=value")
        key, raw = line.split("=", 1)
        values[key.strip()] = convert_value(key.strip(), raw)
    return values


def load_config(path: str | Path | None = None, **overrides: Any) -> ExperimentConfig:
    """Config from file (if given) with ``overrides`` applied on top."""
    values: dict[str, Any] = {}
    if path is not None:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigurationError(f"cannot read config {path}: {exc}") from None
        values.update(parse_config_text(text, str(path)))
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**values)


def dump_config(cfg: ExperimentConfig) -> str:
    lines = []
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        if isinstance(value, tuple):
            value = ",".join(str(v) for v in value)
        lines.append(f"{f.name}={value}")
    return "\n".join(lines) + "\n"

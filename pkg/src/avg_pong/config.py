"""Tunable constants for gameplay, cursor behaviour and the engine loop.

Everything lives in frozen dataclasses so a session's behaviour is fixed by
(config, seed, inputs) and nothing else. A JSON config file may override any
field; CLI flags win over the file.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

from .gesture_cursor import DWELL_THRESHOLD_MS, UNTRACKED_TIMEOUT_MS, InteractionBox
from .skeleton_stream import CONFIDENCE_MIN, SMOOTHING_ALPHA, JointId


@dataclass(frozen=True)
class GameplayConfig:
    tick_hz: int = 60
    base_speed_easy: float = 0.50  # field units / s
    base_speed_hard: float = 0.80
    speed_up_per_hit: float = 1.05
    speed_cap_factor: float = 2.0  # cap = factor * base speed
    half_h_hand: float = 0.10
    half_h_head: float = 0.06
    max_deflection_deg: float = 60.0
    lives: int = 3
    serve_delay_ms: float = 1000.0
    serve_angle_max_deg: float = 30.0
    human_paddle_speed: float = 3.0  # field units / s, ~instant at 60 Hz
    ai_speed_easy: float = 0.40
    ai_speed_hard: float = 0.70
    ai_deadband: float = 0.02

    @property
    def dt(self) -> float:
        return 1.0 / self.tick_hz


@dataclass(frozen=True)
class CursorConfig:
    controlling_slot: int = 0
    controlling_hand: JointId = JointId.HAND_RIGHT
    dwell_threshold_ms: float = DWELL_THRESHOLD_MS
    untracked_timeout_ms: float = UNTRACKED_TIMEOUT_MS
    box: InteractionBox = field(default_factory=InteractionBox)


@dataclass(frozen=True)
class EngineConfig:
    gameplay: GameplayConfig = field(default_factory=GameplayConfig)
    cursor: CursorConfig = field(default_factory=CursorConfig)
    smoothing_alpha: float = SMOOTHING_ALPHA
    confidence_min: float = CONFIDENCE_MIN
    countdown_ms: float = 3000.0


DEFAULT_GAMEPLAY = GameplayConfig()
DEFAULT_CURSOR = CursorConfig()
DEFAULT_ENGINE = EngineConfig()


def _apply_overrides(cfg, overrides: dict):
    fields = {f.name: f for f in dataclasses.fields(cfg)}
    unknown = set(overrides) - set(fields)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    converted = {}
    for key, value in overrides.items():
        current = getattr(cfg, key)
        if dataclasses.is_dataclass(current) and isinstance(value, dict):
            converted[key] = _apply_overrides(current, value)
        elif isinstance(current, JointId):
            converted[key] = JointId(value)
        else:
            converted[key] = type(current)(value) if current is not None else value
    return dataclasses.replace(cfg, **converted)


def load_engine_config(path: str | Path | None, **cli_overrides) -> EngineConfig:
    """Build an EngineConfig from defaults, an optional JSON file, then any
    CLI-level overrides (flat keys into gameplay, e.g. tick_hz)."""
    cfg = EngineConfig()
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        cfg = _apply_overrides(cfg, data)
    gameplay_overrides = {k: v for k, v in cli_overrides.items() if v is not None}
    if gameplay_overrides:
        cfg = dataclasses.replace(
            cfg, gameplay=_apply_overrides(cfg.gameplay, gameplay_overrides)
        )
    return cfg

"""Movement summaries from joint streams.

A desk-scale proxy for how much the players actually moved: per-joint path
length, mean speed and active fraction. Deliberately no energy-expenditure
estimates; there is no defensible formula at this scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .skeleton_stream import JointId, SkeletonFrame

SPEED_THRESHOLD = 0.1  # field-box units per second

JointKey = tuple[int, JointId]  # (slot, joint)


class TooFewFrames(ValueError):
    pass


class KeyMismatch(ValueError):
    pass


@dataclass(frozen=True)
class JointActivity:
    path_length: float  # sum of x,y displacements, field-box units
    mean_speed: float  # path_length / session duration
    active_fraction: float  # share of sample gaps moving above threshold


@dataclass(frozen=True)
class ActivityReport:
    duration_ms: int
    per_joint: Mapping[JointKey, JointActivity]

    def to_json_dict(self) -> dict:
        joints = {}
        for (slot, jid), a in sorted(self.per_joint.items(), key=lambda kv: (kv[0][0], kv[0][1].value)):
            joints[f"{slot}:{jid.value}"] = {
                "path_length": a.path_length,
                "mean_speed": a.mean_speed,
                "active_fraction": a.active_fraction,
            }
        return {"duration_ms": self.duration_ms, "joints": joints}


def summarize(
    frames: Iterable[SkeletonFrame], speed_threshold: float = SPEED_THRESHOLD
) -> ActivityReport:
    """Accumulate per-(slot, joint) movement over a frame sequence.

    Displacement is measured in the x,y sensor plane between consecutive
    frames where the joint is present. Needs at least two frames.
    """
    frames = list(frames)
    if len(frames) < 2:
        raise TooFewFrames(f"need at least 2 frames, got {len(frames)}")

    duration_ms = frames[-1].t_ms - frames[0].t_ms
    duration_s = duration_ms / 1000.0

    path: dict[JointKey, float] = {}
    active: dict[JointKey, int] = {}
    gaps: dict[JointKey, int] = {}

    prev = frames[0]
    for frame in frames[1:]:
        dt_s = (frame.t_ms - prev.t_ms) / 1000.0
        for player in frame.players:
            prev_player = prev.player(player.slot)
            if prev_player is None:
                continue
            for jid, joint in player.joints.items():
                pj = prev_player.joints[jid]
                key = (player.slot, jid)
                d = math.hypot(joint.x - pj.x, joint.y - pj.y)
                path[key] = path.get(key, 0.0) + d
                gaps[key] = gaps.get(key, 0) + 1
                if dt_s > 0:
                    moving = d / dt_s > speed_threshold
                else:
                    moving = d > 0
                if moving:
                    active[key] = active.get(key, 0) + 1
        prev = frame

    per_joint = {}
    for key, total in path.items():
        n = gaps[key]
        per_joint[key] = JointActivity(
            path_length=total,
            mean_speed=total / duration_s if duration_s > 0 else 0.0,
            active_fraction=active.get(key, 0) / n if n else 0.0,
        )
    return ActivityReport(duration_ms=duration_ms, per_joint=per_joint)


def compare(a: ActivityReport, b: ActivityReport) -> dict:
    """Per-joint b/a ratios of path length and active fraction. Zero
    denominators come back as None rather than blowing up."""
    if set(a.per_joint) != set(b.per_joint):
        raise KeyMismatch(
            f"reports cover different joints: {sorted(a.per_joint)} vs {sorted(b.per_joint)}"
        )

    def ratio(num: float, den: float) -> float | None:
        return num / den if den != 0 else None

    out = {}
    for key in sorted(a.per_joint, key=lambda k: (k[0], k[1].value)):
        ja, jb = a.per_joint[key], b.per_joint[key]
        out[f"{key[0]}:{key[1].value}"] = {
            "path_ratio": ratio(jb.path_length, ja.path_length),
            "active_fraction_ratio": ratio(jb.active_fraction, ja.active_fraction),
        }
    return out

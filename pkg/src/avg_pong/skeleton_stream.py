"""Joint-frame data model, newline-JSON wire codec, and frame sources.

Three interchangeable sources produce ordered SkeletonFrame sequences:
replay files, synthetic motion scripts, and a live TCP line stream. All of
them emit frames that satisfy the same invariants, so the engine does not
care where its input comes from.
"""

from __future__ import annotations

import json
import math
import socket
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Mapping

PROTOCOL_VERSION = 1

# Joints treated as untracked below this confidence; consumers hold the
# last good value instead.
CONFIDENCE_MIN = 0.2

# Default exponential smoothing weight applied per joint before game use.
SMOOTHING_ALPHA = 0.5


class StreamError(ValueError):
    """Base class for wire/stream violations."""


class MalformedRecord(StreamError):
    pass


class VersionMismatch(StreamError):
    pass


class RangeViolation(StreamError):
    pass


class DuplicateSlot(StreamError):
    pass


class MissingHeader(StreamError):
    pass


class MonotonicityViolation(StreamError):
    pass


class EmptyScript(StreamError):
    pass


class SourceUnavailable(StreamError):
    pass


class JointId(str, Enum):
    HEAD = "HEAD"
    HAND_LEFT = "HAND_LEFT"
    HAND_RIGHT = "HAND_RIGHT"


JOINT_ORDER = (JointId.HEAD, JointId.HAND_LEFT, JointId.HAND_RIGHT)


@dataclass(frozen=True)
class Joint:
    """One tracked point: normalized x,y in [-1,1], depth z >= 0 meters,
    confidence c in [0,1]."""

    x: float
    y: float
    z: float
    c: float

    def __post_init__(self):
        if not (-1.0 <= self.x <= 1.0):
            raise RangeViolation(f"joint x out of [-1,1]: {self.x}")
        if not (-1.0 <= self.y <= 1.0):
            raise RangeViolation(f"joint y out of [-1,1]: {self.y}")
        if not (self.z >= 0.0):
            raise RangeViolation(f"joint z negative: {self.z}")
        if not (0.0 <= self.c <= 1.0):
            raise RangeViolation(f"joint c out of [0,1]: {self.c}")

    @property
    def tracked(self) -> bool:
        return self.c >= CONFIDENCE_MIN


@dataclass(frozen=True)
class PlayerSkeleton:
    slot: int
    joints: Mapping[JointId, Joint]

    def __post_init__(self):
        if self.slot not in (0, 1):
            raise MalformedRecord(f"slot must be 0 or 1, got {self.slot}")
        if set(self.joints) != set(JOINT_ORDER):
            raise MalformedRecord(
                f"player must carry exactly {[j.value for j in JOINT_ORDER]}"
            )


@dataclass(frozen=True)
class SkeletonFrame:
    """One timestamped sample of all tracked joints, for up to two players.

    Players are kept sorted by slot so equal frames encode to equal bytes.
    """

    seq: int
    t_ms: int
    players: tuple[PlayerSkeleton, ...]

    def __post_init__(self):
        if self.seq < 0:
            raise RangeViolation(f"seq negative: {self.seq}")
        if self.t_ms < 0:
            raise RangeViolation(f"t_ms negative: {self.t_ms}")
        if len(self.players) > 2:
            raise MalformedRecord(f"at most 2 players, got {len(self.players)}")
        slots = [p.slot for p in self.players]
        if len(set(slots)) != len(slots):
            raise DuplicateSlot(f"duplicate player slot in frame seq={self.seq}")
        ordered = tuple(sorted(self.players, key=lambda p: p.slot))
        object.__setattr__(self, "players", ordered)

    def player(self, slot: int) -> PlayerSkeleton | None:
        for p in self.players:
            if p.slot == slot:
                return p
        return None

    def joint(self, slot: int, joint_id: JointId) -> Joint | None:
        p = self.player(slot)
        return p.joints.get(joint_id) if p else None


def _require(cond: bool, msg: str):
    if not cond:
        raise MalformedRecord(msg)


def _parse_number(obj: dict, key: str, ctx: str) -> float:
    v = obj.get(key)
    if not isinstance(v, (int, float)) or isinstance(v, bool):
        raise MalformedRecord(f"{ctx}: field '{key}' must be a number, got {v!r}")
    return float(v)


def parse_frame(line: str) -> SkeletonFrame:
    """Parse one wire record into a SkeletonFrame.

    Raises MalformedRecord, VersionMismatch, RangeViolation or DuplicateSlot;
    every line that parses satisfies all frame invariants.
    """
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as e:
        raise MalformedRecord(f"invalid JSON: {e}") from e
    _require(isinstance(obj, dict), "record must be a JSON object")
    version = obj.get("v")
    if version != PROTOCOL_VERSION:
        raise VersionMismatch(f"unsupported protocol version {version!r}")
    seq = obj.get("seq")
    _require(isinstance(seq, int) and not isinstance(seq, bool), "seq must be an integer")
    t_ms = obj.get("t_ms")
    _require(isinstance(t_ms, int) and not isinstance(t_ms, bool), "t_ms must be an integer")
    raw_players = obj.get("players")
    _require(isinstance(raw_players, list), "players must be a list")

    players = []
    for rp in raw_players:
        _require(isinstance(rp, dict), "player must be an object")
        slot = rp.get("slot")
        _require(isinstance(slot, int) and not isinstance(slot, bool), "slot must be an integer")
        if slot not in (0, 1):
            raise MalformedRecord(f"slot must be 0 or 1, got {slot}")
        raw_joints = rp.get("joints")
        _require(isinstance(raw_joints, dict), "joints must be an object")
        joints: dict[JointId, Joint] = {}
        for name, rj in raw_joints.items():
            try:
                jid = JointId(name)
            except ValueError:
                raise MalformedRecord(f"unknown joint id {name!r}") from None
            _require(isinstance(rj, dict), f"joint {name} must be an object")
            joints[jid] = Joint(
                x=_parse_number(rj, "x", name),
                y=_parse_number(rj, "y", name),
                z=_parse_number(rj, "z", name),
                c=_parse_number(rj, "c", name),
            )
        players.append(PlayerSkeleton(slot=slot, joints=joints))
    return SkeletonFrame(seq=seq, t_ms=t_ms, players=tuple(players))


def _fmt(x: float) -> str:
    # json.dumps renders floats with repr(): shortest string that round-trips.
    return json.dumps(float(x))


def encode_frame(frame: SkeletonFrame) -> str:
    """Canonical wire encoding: fixed key order, no whitespace, all joint
    values as floats. parse_frame(encode_frame(f)) == f, and equal frames
    encode to byte-identical lines."""
    parts = [f'{{"v":{PROTOCOL_VERSION},"seq":{frame.seq},"t_ms":{frame.t_ms},"players":[']
    player_chunks = []
    for p in frame.players:
        joint_chunks = []
        for jid in JOINT_ORDER:
            j = p.joints[jid]
            joint_chunks.append(
                f'"{jid.value}":{{"x":{_fmt(j.x)},"y":{_fmt(j.y)},'
                f'"z":{_fmt(j.z)},"c":{_fmt(j.c)}}}'
            )
        player_chunks.append(f'{{"slot":{p.slot},"joints":{{{",".join(joint_chunks)}}}}}')
    parts.append(",".join(player_chunks))
    parts.append("]}")
    return "".join(parts)


def smooth(prev: Joint, nxt: Joint, alpha: float) -> Joint:
    """Exponential smoothing of coordinates; confidence passes through."""
    if not (0.0 < alpha <= 1.0):
        raise ValueError(f"alpha must be in (0,1], got {alpha}")
    b = 1.0 - alpha
    return Joint(
        x=alpha * nxt.x + b * prev.x,
        y=alpha * nxt.y + b * prev.y,
        z=alpha * nxt.z + b * prev.z,
        c=nxt.c,
    )


# --- replay files -----------------------------------------------------------


def replay_header(rate_hz: float) -> str:
    return f'{{"v":{PROTOCOL_VERSION},"kind":"replay","rate_hz":{json.dumps(float(rate_hz))}}}'


def write_replay(path: str | Path, frames: Iterable[SkeletonFrame], rate_hz: float = 60.0) -> int:
    """Write a replay file (header line + one frame per line). Returns the
    number of frames written."""
    n = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(replay_header(rate_hz) + "\n")
        for f in frames:
            fh.write(encode_frame(f) + "\n")
            n += 1
    return n


class ReplayReader:
    """Iterable over the frames of a replay file, validating seq/t_ms
    monotonicity while streaming."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        if not self.path.exists():
            raise SourceUnavailable(f"replay file not found: {path}")
        with open(self.path, encoding="utf-8") as fh:
            first = fh.readline()
        self.rate_hz = self._parse_header(first)

    @staticmethod
    def _parse_header(line: str) -> float:
        try:
            obj = json.loads(line)
        except json.JSONDecodeError:
            raise MissingHeader("replay header is not valid JSON") from None
        if (
            not isinstance(obj, dict)
            or obj.get("kind") != "replay"
            or obj.get("v") != PROTOCOL_VERSION
            or not isinstance(obj.get("rate_hz"), (int, float))
        ):
            raise MissingHeader(f"first line is not a v{PROTOCOL_VERSION} replay header")
        return float(obj["rate_hz"])

    def __iter__(self) -> Iterator[SkeletonFrame]:
        prev_seq = None
        prev_t = None
        with open(self.path, encoding="utf-8") as fh:
            fh.readline()  # header
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                frame = parse_frame(line)
                if prev_seq is not None and frame.seq <= prev_seq:
                    raise MonotonicityViolation(
                        f"seq not strictly increasing at seq={frame.seq}"
                    )
                if prev_t is not None and frame.t_ms < prev_t:
                    raise MonotonicityViolation(
                        f"t_ms decreased at seq={frame.seq}"
                    )
                prev_seq, prev_t = frame.seq, frame.t_ms
                yield frame


def open_replay(path: str | Path) -> ReplayReader:
    return ReplayReader(path)


# --- synthetic motion scripts ------------------------------------------------

_AXIS_DEFAULTS = {"x": 0.0, "y": 0.0, "z": 2.0, "c": 1.0}
_AXIS_CLAMP = {
    "x": (-1.0, 1.0),
    "y": (-1.0, 1.0),
    "z": (0.0, math.inf),
    "c": (0.0, 1.0),
}


@dataclass(frozen=True)
class Waveform:
    """One axis trajectory: constant value, linear ramp over the script
    duration, or a sine."""

    kind: str  # "constant" | "linear" | "sine"
    start: float = 0.0
    end: float = 0.0
    amplitude: float = 0.0
    period_ms: float = 1000.0
    phase: float = 0.0
    offset: float = 0.0

    def sample(self, t_ms: float, duration_ms: float) -> float:
        if self.kind == "constant":
            return self.start
        if self.kind == "linear":
            if duration_ms <= 0:
                return self.start
            frac = min(max(t_ms / duration_ms, 0.0), 1.0)
            return self.start + (self.end - self.start) * frac
        if self.kind == "sine":
            return self.offset + self.amplitude * math.sin(
                2.0 * math.pi * t_ms / self.period_ms + self.phase
            )
        raise ValueError(f"unknown waveform kind {self.kind!r}")


@dataclass(frozen=True)
class MotionScript:
    """Deterministic joint motion: per (slot, joint) a waveform per axis.
    Unspecified axes fall back to a neutral pose (x=y=0, z=2m, c=1)."""

    duration_ms: float
    tracks: Mapping[tuple[int, JointId], Mapping[str, Waveform]] = field(default_factory=dict)

    def slots(self) -> list[int]:
        return sorted({slot for slot, _ in self.tracks})

    @classmethod
    def from_json(cls, obj: dict) -> "MotionScript":
        tracks: dict[tuple[int, JointId], dict[str, Waveform]] = {}
        for rp in obj.get("players", []):
            slot = rp["slot"]
            for name, axes in rp.get("joints", {}).items():
                jid = JointId(name)
                tracks[(slot, jid)] = {
                    axis: Waveform(**wf) for axis, wf in axes.items()
                }
        return cls(duration_ms=float(obj["duration_ms"]), tracks=tracks)

    @classmethod
    def load(cls, path: str | Path) -> "MotionScript":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def _clamp(value: float, lo: float, hi: float) -> float:
    return min(max(value, lo), hi)


def synth_frames(script: MotionScript, rate_hz: float) -> Iterator[SkeletonFrame]:
    """Sample a MotionScript into floor(duration*rate) frames at
    t_ms = floor(i*1000/rate). Purely deterministic."""
    if rate_hz <= 0:
        raise ValueError(f"rate_hz must be positive, got {rate_hz}")
    if not script.tracks:
        raise EmptyScript("script defines no joint tracks")
    slots = script.slots()
    count = math.floor(script.duration_ms * rate_hz / 1000.0)
    for i in range(count):
        t_ms = math.floor(i * 1000.0 / rate_hz)
        players = []
        for slot in slots:
            joints = {}
            for jid in JOINT_ORDER:
                axes = script.tracks.get((slot, jid), {})
                values = {}
                for axis, default in _AXIS_DEFAULTS.items():
                    wf = axes.get(axis)
                    raw = wf.sample(t_ms, script.duration_ms) if wf else default
                    lo, hi = _AXIS_CLAMP[axis]
                    values[axis] = _clamp(raw, lo, hi)
                joints[jid] = Joint(**values)
            players.append(PlayerSkeleton(slot=slot, joints=joints))
        yield SkeletonFrame(seq=i, t_ms=t_ms, players=tuple(players))


# --- live TCP source ---------------------------------------------------------


def tcp_frames(
    host: str,
    port: int,
    connect_attempts: int = 3,
    retry_delay_s: float = 1.0,
) -> Iterator[SkeletonFrame]:
    """Read the line protocol from a TCP server. Connection is retried a few
    times so the sensor bridge may be started in any order."""
    sock = None
    last_err: Exception | None = None
    for attempt in range(connect_attempts):
        try:
            sock = socket.create_connection((host, port), timeout=5.0)
            break
        except OSError as e:
            last_err = e
            if attempt + 1 < connect_attempts:
                time.sleep(retry_delay_s)
    if sock is None:
        raise SourceUnavailable(f"cannot connect to {host}:{port}: {last_err}")

    prev_seq = None
    prev_t = None
    try:
        sock.settimeout(None)
        with sock.makefile("r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                frame = parse_frame(line)
                if prev_seq is not None and frame.seq <= prev_seq:
                    raise MonotonicityViolation(f"seq not strictly increasing at seq={frame.seq}")
                if prev_t is not None and frame.t_ms < prev_t:
                    raise MonotonicityViolation(f"t_ms decreased at seq={frame.seq}")
                prev_seq, prev_t = frame.seq, frame.t_ms
                yield frame
    finally:
        sock.close()

"""Session gateway: wires frame sources through cursor/menu/game into a
canonical Snapshot stream.

The Engine here is the single owner of all mutable session state and is
driven tick by tick; everything it consumes (frames, client events) is
applied in a deterministic order, so (seed, source stream, event log) fully
determine the snapshot bytes. Networking lives in server.py; this module is
synchronous and used directly by the headless CLI commands.
"""

from __future__ import annotations

import hashlib
import json
import math
from collections import defaultdict
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Iterator

from . import menu_flow
from .activity_metrics import ActivityReport, summarize
from .config import DEFAULT_ENGINE, EngineConfig
from .game_core import (
    MatchPhase,
    MatchState,
    PaddleInput,
    PaddleInputs,
    Side,
    StepEvent,
    paddle_target_from_joint,
    step_events,
)
from .gesture_cursor import CursorState, initial_cursor, reset_dwell, update_cursor
from .menu_flow import MENU_PHASES, SessionPhase, SessionState
from .skeleton_stream import (
    JOINT_ORDER,
    Joint,
    JointId,
    MalformedRecord,
    MotionScript,
    PlayerSkeleton,
    RangeViolation,
    SkeletonFrame,
    SourceUnavailable,
    open_replay,
    replay_header,
    encode_frame,
    smooth,
    synth_frames,
    tcp_frames,
)

SNAPSHOT_VERSION = 1


# --- client events -----------------------------------------------------------


@dataclass(frozen=True)
class EmulatedJoint:
    """Keyboard/mouse fallback input from a UI client."""

    slot: int
    joint: JointId
    x: float
    y: float
    z: float = 2.0
    c: float = 1.0


@dataclass(frozen=True)
class MenuOverride:
    option: str


@dataclass(frozen=True)
class Ping:
    pass


ClientEvent = EmulatedJoint | MenuOverride | Ping


def parse_client_event(obj: dict) -> ClientEvent:
    """Validate one client message. Raises MalformedRecord or RangeViolation;
    range rules are the Joint invariants."""
    if not isinstance(obj, dict) or "type" not in obj:
        raise MalformedRecord("client event must be an object with a 'type' field")
    kind = obj["type"]
    if kind == "ping":
        return Ping()
    if kind == "menu_override":
        option = obj.get("option")
        if not isinstance(option, str) or not option:
            raise MalformedRecord("menu_override needs a non-empty 'option'")
        return MenuOverride(option)
    if kind == "emulated_joint":
        slot = obj.get("slot")
        if slot not in (0, 1):
            raise MalformedRecord(f"slot must be 0 or 1, got {slot!r}")
        try:
            joint = JointId(obj.get("joint"))
        except ValueError:
            raise MalformedRecord(f"unknown joint id {obj.get('joint')!r}") from None
        values = {}
        for axis, default in (("x", None), ("y", None), ("z", 2.0), ("c", 1.0)):
            v = obj.get(axis, default)
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise MalformedRecord(f"emulated_joint field '{axis}' must be a number")
            values[axis] = float(v)
        Joint(**values)  # reject range violations here, not in the engine loop
        return EmulatedJoint(slot=slot, joint=joint, **values)
    raise MalformedRecord(f"unknown client event type {kind!r}")


def client_event_to_json(ev: ClientEvent) -> dict:
    if isinstance(ev, Ping):
        return {"type": "ping"}
    if isinstance(ev, MenuOverride):
        return {"type": "menu_override", "option": ev.option}
    return {
        "type": "emulated_joint",
        "slot": ev.slot,
        "joint": ev.joint.value,
        "x": ev.x,
        "y": ev.y,
        "z": ev.z,
        "c": ev.c,
    }


def load_event_log(path: str | Path) -> dict[int, list[ClientEvent]]:
    """Read a jsonl event log of {"tick": N, ...event} records, grouped by
    the tick at which each event is applied."""
    by_tick: dict[int, list[ClientEvent]] = defaultdict(list)
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            tick = obj.get("tick")
            if not isinstance(tick, int) or tick < 0:
                raise MalformedRecord(f"event log entry needs a non-negative tick: {line}")
            by_tick[tick].append(parse_client_event(obj))
    return dict(by_tick)


# --- snapshots ---------------------------------------------------------------


def encode_snapshot(snapshot: dict) -> str:
    """Canonical bytes: sorted keys, no whitespace. Identical state encodes
    identically, which is what the determinism checks hash."""
    return json.dumps(snapshot, sort_keys=True, separators=(",", ":"))


def snapshot_hash(encoded: str) -> str:
    return hashlib.sha256(encoded.encode("utf-8")).hexdigest()


def _match_to_dict(m: MatchState) -> dict:
    return {
        "tick": m.tick,
        "seed": m.seed,
        "phase": m.phase.value,
        "ball": {"x": m.ball.x, "y": m.ball.y, "vx": m.ball.vx, "vy": m.ball.vy},
        "paddles": {
            "left": {"y": m.left.y, "half_h": m.left.half_h},
            "right": {"y": m.right.y, "half_h": m.right.half_h},
        },
        "score": list(m.score),
        "lives": list(m.lives),
        "rally_speed": m.rally_speed,
        "serving_side": m.serving_side.value if m.serving_side else None,
        "serve_delay_ms": m.serve_delay_ms,
        "winner": m.winner.value if m.winner else None,
    }


def build_snapshot(
    tick: int,
    session: SessionState,
    cursor: CursorState,
    targets,
    config: EngineConfig,
) -> dict:
    snap: dict = {
        "type": "snapshot",
        "v": SNAPSHOT_VERSION,
        "tick": tick,
        "phase": session.phase.value,
        "config": {
            "num_players": session.num_players,
            "difficulty": session.difficulty.value if session.difficulty else None,
            "body_part": session.body_part.value if session.body_part else None,
        },
        "cursor": None,
        "targets": [
            {"id": t.id, "u_min": t.u_min, "v_min": t.v_min, "u_max": t.u_max, "v_max": t.v_max}
            for t in targets
        ],
        "countdown_ms": session.countdown_ms if session.phase is SessionPhase.COUNTDOWN else None,
        "match": _match_to_dict(session.match) if session.match else None,
        "winner": session.winner.value if session.winner else None,
        "final_score": list(session.final_score) if session.final_score else None,
    }
    if session.phase in MENU_PHASES:
        snap["cursor"] = {
            "u": cursor.pos[0],
            "v": cursor.pos[1],
            "visible": cursor.visible,
            "hovered": cursor.hovered,
            "dwell_ms": cursor.dwell_ms,
            "dwell_threshold_ms": config.cursor.dwell_threshold_ms,
        }
    return snap


# --- the engine --------------------------------------------------------------

_PLACEHOLDER = Joint(0.0, 0.0, 2.0, 0.0)  # untracked filler for absent joints


class Engine:
    """Authoritative session core, advanced one fixed tick at a time.

    Call ingest_frame / ingest_event in arrival order, then advance_tick once
    per tick period. Snapshots come back as plain dicts ready for canonical
    encoding.
    """

    def __init__(self, seed: int = 0, config: EngineConfig = DEFAULT_ENGINE):
        self.config = config
        self.seed = seed
        self.tick = 0
        self.session: SessionState = menu_flow.initial_session(seed)
        self.cursor: CursorState = initial_cursor()
        self.held: dict[tuple[int, JointId], Joint] = {}
        self.pending_selects: list[str] = []
        self.side_slot: dict[Side, int] = {Side.LEFT: 0, Side.RIGHT: 1}
        self.last_step_events: list[StepEvent] = []

    @property
    def dt_ms(self) -> float:
        return 1000.0 / self.config.gameplay.tick_hz

    def tick_time_ms(self, tick: int | None = None) -> float:
        return (self.tick if tick is None else tick) * 1000.0 / self.config.gameplay.tick_hz

    # -- input ingestion --

    def ingest_frame(self, frame: SkeletonFrame) -> None:
        """Fold one source frame into the held joint map: low-confidence
        joints are dropped (last good value wins), the rest are smoothed."""
        alpha = self.config.smoothing_alpha
        for player in frame.players:
            for jid, joint in player.joints.items():
                if joint.c < self.config.confidence_min:
                    continue
                key = (player.slot, jid)
                prev = self.held.get(key)
                self.held[key] = smooth(prev, joint, alpha) if prev is not None else joint

    def ingest_event(self, ev: ClientEvent) -> dict | None:
        """Apply one client event; returns an optional direct reply."""
        if isinstance(ev, Ping):
            return {"type": "pong"}
        if isinstance(ev, MenuOverride):
            self.pending_selects.append(ev.option)
            return None
        # emulated joints override the source exactly, no smoothing
        self.held[(ev.slot, ev.joint)] = Joint(ev.x, ev.y, ev.z, ev.c)
        return None

    # -- frame assembly --

    def effective_frame(self, remap: bool = False) -> SkeletonFrame:
        slots = sorted({slot for slot, _ in self.held})
        players = []
        for slot in slots:
            joints = {
                jid: self.held.get((slot, jid), _PLACEHOLDER) for jid in JOINT_ORDER
            }
            out_slot = slot
            if remap:
                if self.side_slot[Side.LEFT] == slot:
                    out_slot = 0
                elif self.side_slot[Side.RIGHT] == slot:
                    out_slot = 1
            players.append(PlayerSkeleton(slot=out_slot, joints=joints))
        return SkeletonFrame(
            seq=self.tick, t_ms=math.floor(self.tick_time_ms()), players=tuple(players)
        )

    def _assign_sides(self) -> None:
        """Map player slots to paddle sides at match start: in 2P play the
        player standing further left (head x) takes the left paddle."""
        self.side_slot = {Side.LEFT: 0, Side.RIGHT: 1}
        if self.session.num_players != 2:
            return
        head0 = self.held.get((0, JointId.HEAD))
        head1 = self.held.get((1, JointId.HEAD))
        if head0 is not None and head1 is not None and head1.x < head0.x:
            self.side_slot = {Side.LEFT: 1, Side.RIGHT: 0}

    # -- tick --

    def advance_tick(self) -> dict:
        config = self.config
        session = self.session
        cursor = self.cursor
        self.last_step_events = []

        if session.phase in MENU_PHASES:
            targets = menu_flow.menu_targets(session)
            cursor = update_cursor(
                cursor,
                self.effective_frame(),
                targets,
                self.dt_ms,
                slot=config.cursor.controlling_slot,
                hand=config.cursor.controlling_hand,
                box=config.cursor.box,
                dwell_threshold_ms=config.cursor.dwell_threshold_ms,
                untracked_timeout_ms=config.cursor.untracked_timeout_ms,
            )
            selects = list(self.pending_selects)
            self.pending_selects.clear()
            if cursor.emitted is not None:
                selects.append(cursor.emitted)
            for option in selects:
                advanced = menu_flow.advance(session, menu_flow.Select(option), config)
                if advanced is not session:
                    session = advanced
                    cursor = reset_dwell(cursor)
        else:
            self.pending_selects.clear()

        if session.phase is SessionPhase.COUNTDOWN:
            before = session
            session = menu_flow.tick_countdown(session, self.dt_ms, config)
            if session.phase is SessionPhase.PLAYING and before.phase is not SessionPhase.PLAYING:
                self._assign_sides()

        elif session.phase is SessionPhase.PLAYING:
            match = session.match
            frame = self.effective_frame(remap=True)
            box = config.cursor.box
            left_t = paddle_target_from_joint(
                frame, Side.LEFT, session.body_part, box=box, half_h=match.left.half_h
            )
            if session.num_players == 2:
                right_t = paddle_target_from_joint(
                    frame, Side.RIGHT, session.body_part, box=box, half_h=match.right.half_h
                )
            else:
                right_t = None
            inputs = PaddleInputs(left=PaddleInput(left_t), right=PaddleInput(right_t))
            match, evs = step_events(match, inputs, gameplay=config.gameplay)
            self.last_step_events = evs
            session = replace(session, match=match)
            if match.phase is MatchPhase.OVER:
                session = menu_flow.advance(
                    session, menu_flow.MatchEnded(match.winner, match.score), config
                )
                cursor = reset_dwell(cursor)

        self.session = session
        self.cursor = cursor
        targets = menu_flow.menu_targets(session)
        snap = build_snapshot(self.tick, session, cursor, targets, config)
        self.tick += 1
        return snap


# --- sources -----------------------------------------------------------------

DEFAULT_SYNTH_RATE_HZ = 30.0  # sensor-native rate assumed for scripts


def open_source(spec: str) -> Iterator[SkeletonFrame]:
    """Build a frame iterator from a CLI source spec:
    replay:<path> | synth:<script.json> | tcp:<host>:<port>."""
    kind, _, rest = spec.partition(":")
    if kind == "replay" and rest:
        return iter(open_replay(rest))
    if kind == "synth" and rest:
        path = Path(rest)
        if not path.exists():
            raise SourceUnavailable(f"script not found: {rest}")
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
        script = MotionScript.from_json(obj)
        rate = float(obj.get("rate_hz", DEFAULT_SYNTH_RATE_HZ))
        return synth_frames(script, rate)
    if kind == "tcp" and rest:
        host, _, port = rest.rpartition(":")
        if not host or not port.isdigit():
            raise SourceUnavailable(f"bad tcp source spec: {spec}")
        return tcp_frames(host, int(port))
    raise SourceUnavailable(f"unrecognized source spec: {spec!r}")


class Peekable:
    """Tiny one-item lookahead over an iterator."""

    _none = object()

    def __init__(self, it: Iterable):
        self._it = iter(it)
        self._next = self._none

    def peek(self):
        if self._next is self._none:
            self._next = next(self._it, self._none)
        return None if self._next is self._none else self._next

    def pop(self):
        v = self.peek()
        self._next = self._none
        return v


# --- sinks -------------------------------------------------------------------


class ReplayRecorder:
    """Records the raw frames the engine consumed, with t_ms rewritten to the
    consumption tick so a replay feeds them back at exactly the same ticks."""

    def __init__(self, path: str | Path, rate_hz: float):
        self._fh = open(path, "w", encoding="utf-8", newline="\n")
        self._fh.write(replay_header(rate_hz) + "\n")

    def on_raw_frame(self, frame: SkeletonFrame, tick: int, tick_ms: float) -> None:
        self._fh.write(encode_frame(replace(frame, t_ms=math.floor(tick_ms))) + "\n")

    def on_snapshot(self, tick: int, encoded: str, snapshot: dict) -> None:
        pass

    def close(self) -> None:
        self._fh.close()


class EventLogRecorder:
    """Writes client events as jsonl with the tick at which they applied, so
    a session can be replayed deterministically from raw frames + this log."""

    def __init__(self, path: str | Path):
        self._fh = open(path, "w", encoding="utf-8", newline="\n")

    def record(self, tick: int, ev: ClientEvent) -> None:
        entry = {"tick": tick, **client_event_to_json(ev)}
        self._fh.write(json.dumps(entry, separators=(",", ":")) + "\n")

    def close(self) -> None:
        self._fh.close()


class SnapshotHasher:
    def __init__(self):
        self.hashes: list[str] = []

    def on_raw_frame(self, frame, tick, tick_ms) -> None:
        pass

    def on_snapshot(self, tick: int, encoded: str, snapshot: dict) -> None:
        self.hashes.append(snapshot_hash(encoded))

    def close(self) -> None:
        pass


class SnapshotWriter:
    def __init__(self, path: str | Path):
        self._fh = open(path, "w", encoding="utf-8", newline="\n")

    def on_raw_frame(self, frame, tick, tick_ms) -> None:
        pass

    def on_snapshot(self, tick: int, encoded: str, snapshot: dict) -> None:
        self._fh.write(encoded + "\n")

    def close(self) -> None:
        self._fh.close()


class ActivityCollector:
    """Builds an ActivityReport from the raw consumed frames."""

    def __init__(self):
        self.frames: list[SkeletonFrame] = []

    def on_raw_frame(self, frame: SkeletonFrame, tick: int, tick_ms: float) -> None:
        self.frames.append(frame)

    def on_snapshot(self, tick, encoded, snapshot) -> None:
        pass

    def close(self) -> None:
        pass

    def report(self, speed_threshold: float | None = None) -> ActivityReport:
        if speed_threshold is None:
            return summarize(self.frames)
        return summarize(self.frames, speed_threshold)


# --- headless session driver -------------------------------------------------


@dataclass
class SessionResult:
    ticks: int
    session: SessionState
    exit_code: int = 0


def run_session(
    source: str | Iterable[SkeletonFrame],
    *,
    seed: int = 0,
    config: EngineConfig = DEFAULT_ENGINE,
    events: dict[int, list[ClientEvent]] | None = None,
    sinks: tuple = (),
    max_ticks: int | None = None,
    stop_on_match_over: bool = False,
) -> SessionResult:
    """Drive a full headless session at fixed engine ticks.

    Frames are consumed once their t_ms is due; slower sources are held
    (last value repeated). Client events are applied at their recorded tick,
    in order. Runs until the source and event log are exhausted, a tick
    budget is hit, or (optionally) the match ends.
    """
    frames = Peekable(open_source(source) if isinstance(source, str) else source)
    events = events or {}
    last_event_tick = max(events) if events else -1
    engine = Engine(seed, config)

    autonomous = (SessionPhase.COUNTDOWN, SessionPhase.PLAYING)
    while True:
        tick = engine.tick
        if max_ticks is not None and tick >= max_ticks:
            break
        if max_ticks is None and frames.peek() is None and tick > last_event_tick:
            # inputs are exhausted; keep ticking only while the session can
            # still progress on its own toward the match-over stop
            if not (stop_on_match_over and engine.session.phase in autonomous):
                break
        tick_ms = engine.tick_time_ms()
        while True:
            nxt = frames.peek()
            if nxt is None or nxt.t_ms > tick_ms:
                break
            frame = frames.pop()
            engine.ingest_frame(frame)
            for sink in sinks:
                sink.on_raw_frame(frame, tick, tick_ms)
        for ev in events.get(tick, ()):
            engine.ingest_event(ev)
        snap = engine.advance_tick()
        encoded = encode_snapshot(snap)
        for sink in sinks:
            sink.on_snapshot(tick, encoded, snap)
        if stop_on_match_over and engine.session.phase is SessionPhase.MATCH_OVER:
            break

    for sink in sinks:
        sink.close()
    return SessionResult(ticks=engine.tick, session=engine.session)

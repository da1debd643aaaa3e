"""Deterministic fixed-timestep Pong.

The field is the unit square; paddle faces sit on the x=0 and x=1 planes and
goals are scored once the ball is strictly outside them. Ball motion within a
tick is resolved continuously (segment vs. wall/paddle planes) so the capped
ball speed can never tunnel through a paddle. Every function here is a pure
function of its arguments; identical (config, seed, inputs) give identical
trajectories.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

from .config import DEFAULT_GAMEPLAY, GameplayConfig
from .gesture_cursor import DEFAULT_BOX, InteractionBox
from .skeleton_stream import JointId, SkeletonFrame


class IncompleteConfig(ValueError):
    pass


class MatchAlreadyOver(RuntimeError):
    pass


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"

    @property
    def other(self) -> "Side":
        return Side.RIGHT if self is Side.LEFT else Side.LEFT


class Difficulty(str, Enum):
    EASY = "easy"
    HARD = "hard"


class BodyPart(str, Enum):
    HAND = "hand"
    HEAD = "head"


class MatchPhase(str, Enum):
    SERVING = "serving"
    RALLY = "rally"
    OVER = "over"


class InputSource(str, Enum):
    JOINT = "joint"
    AI = "ai"
    EMULATED = "emulated"


@dataclass(frozen=True)
class MatchConfig:
    num_players: int
    difficulty: Difficulty
    body_part: BodyPart

    def __post_init__(self):
        if self.num_players not in (1, 2):
            raise IncompleteConfig(f"num_players must be 1 or 2, got {self.num_players}")
        if not isinstance(self.difficulty, Difficulty) or not isinstance(self.body_part, BodyPart):
            raise IncompleteConfig("difficulty and body_part must both be set")


@dataclass(frozen=True)
class Ball:
    x: float
    y: float
    vx: float
    vy: float

    @property
    def speed(self) -> float:
        return math.hypot(self.vx, self.vy)


@dataclass(frozen=True)
class Paddle:
    side: Side
    y: float
    half_h: float

    @property
    def y_min(self) -> float:
        return self.y - self.half_h

    @property
    def y_max(self) -> float:
        return self.y + self.half_h


@dataclass(frozen=True)
class PaddleInput:
    target_y: float | None = None  # None holds position
    source: InputSource = InputSource.JOINT


@dataclass(frozen=True)
class PaddleInputs:
    left: PaddleInput = PaddleInput()
    right: PaddleInput = PaddleInput()

    def for_side(self, side: Side) -> PaddleInput:
        return self.left if side is Side.LEFT else self.right


HOLD = PaddleInputs()


@dataclass(frozen=True)
class StepEvent:
    """Trace record emitted by step_events, for tests and diagnostics."""

    kind: str  # serve|wall_bounce|paddle_hit|plane_crossed|goal|match_over
    side: Side | None = None
    y: float | None = None
    offset: float | None = None
    speed: float | None = None


@dataclass(frozen=True)
class MatchState:
    config: MatchConfig
    ball: Ball
    left: Paddle
    right: Paddle
    score: tuple[int, int]  # (left, right), only increases
    lives: tuple[int, int]  # (left, right), only decreases
    rally_speed: float
    phase: MatchPhase
    serving_side: Side | None
    serve_delay_ms: float
    winner: Side | None
    tick: int
    seed: int

    def paddle(self, side: Side) -> Paddle:
        return self.left if side is Side.LEFT else self.right


def base_speed(gameplay: GameplayConfig, difficulty: Difficulty) -> float:
    return gameplay.base_speed_easy if difficulty is Difficulty.EASY else gameplay.base_speed_hard


def ai_speed(gameplay: GameplayConfig, difficulty: Difficulty) -> float:
    return gameplay.ai_speed_easy if difficulty is Difficulty.EASY else gameplay.ai_speed_hard


def half_height(gameplay: GameplayConfig, body_part: BodyPart) -> float:
    return gameplay.half_h_hand if body_part is BodyPart.HAND else gameplay.half_h_head


_MASK64 = (1 << 64) - 1


def _mix64(z: int) -> int:
    # splitmix64 finalizer; stable across platforms and Python versions
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def serve_angle_rad(seed: int, serve_index: int, max_deg: float) -> float:
    """Deterministic per-match serve angle, uniform in [-max_deg, +max_deg]."""
    h = _mix64((seed & _MASK64) ^ _mix64(serve_index))
    u = h / float(1 << 64)
    return math.radians((2.0 * u - 1.0) * max_deg)


def new_match(config: MatchConfig, seed: int, gameplay: GameplayConfig = DEFAULT_GAMEPLAY) -> MatchState:
    """Fresh match: full lives, centered paddles, first serve side chosen by
    seed parity (even = left)."""
    if not isinstance(config, MatchConfig):
        raise IncompleteConfig("match config missing")
    hh = half_height(gameplay, config.body_part)
    speed = base_speed(gameplay, config.difficulty)
    first_server = Side.LEFT if (seed & _MASK64) % 2 == 0 else Side.RIGHT
    return MatchState(
        config=config,
        ball=Ball(0.5, 0.5, 0.0, 0.0),
        left=Paddle(Side.LEFT, 0.5, hh),
        right=Paddle(Side.RIGHT, 0.5, hh),
        score=(0, 0),
        lives=(gameplay.lives, gameplay.lives),
        rally_speed=speed,
        phase=MatchPhase.SERVING,
        serving_side=first_server,
        serve_delay_ms=gameplay.serve_delay_ms,
        winner=None,
        tick=0,
        seed=seed,
    )


def move_paddle(paddle: Paddle, target_y: float | None, max_speed: float, dt: float) -> Paddle:
    """Advance a paddle toward target_y by at most max_speed*dt, clamped so
    the paddle stays fully inside the field. Never overshoots."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if target_y is None:
        return paddle
    lo, hi = paddle.half_h, 1.0 - paddle.half_h
    goal = min(max(target_y, lo), hi)
    delta = goal - paddle.y
    limit = max_speed * dt
    if delta > limit:
        delta = limit
    elif delta < -limit:
        delta = -limit
    return replace(paddle, y=paddle.y + delta)


def ai_paddle_target(state: MatchState, gameplay: GameplayConfig = DEFAULT_GAMEPLAY) -> float:
    """Computer opponent for the right paddle: chase the ball while it
    approaches, recenter while it moves away, hold inside the deadband."""
    pad = state.right
    if state.phase is MatchPhase.RALLY and state.ball.vx > 0:
        target = state.ball.y
    else:
        target = 0.5
    if abs(target - pad.y) < gameplay.ai_deadband:
        return pad.y
    return target


def paddle_target_from_joint(
    frame: SkeletonFrame,
    side: Side,
    body_part: BodyPart,
    *,
    box: InteractionBox = DEFAULT_BOX,
    half_h: float = DEFAULT_GAMEPLAY.half_h_hand,
) -> float | None:
    """Map the controlling joint of the side's player to a paddle target.

    Slot 0 plays LEFT, slot 1 plays RIGHT. In hand mode each player uses the
    hand facing the screen center (left player right hand, right player left
    hand). Returns None for an absent or untracked joint.
    """
    slot = 0 if side is Side.LEFT else 1
    if body_part is BodyPart.HEAD:
        joint_id = JointId.HEAD
    else:
        joint_id = JointId.HAND_RIGHT if side is Side.LEFT else JointId.HAND_LEFT
    joint = frame.joint(slot, joint_id)
    if joint is None or not joint.tracked:
        return None
    norm = (joint.y - box.y_min) / (box.y_max - box.y_min)
    norm = min(max(norm, 0.0), 1.0)
    return half_h + norm * (1.0 - 2.0 * half_h)


def reflect_off_paddle(
    ball: Ball,
    paddle: Paddle,
    rally_speed: float,
    *,
    speed_cap: float,
    speed_up: float = DEFAULT_GAMEPLAY.speed_up_per_hit,
    max_deflection_deg: float = DEFAULT_GAMEPLAY.max_deflection_deg,
) -> tuple[Ball, float]:
    """Bounce the ball off a paddle face: the contact offset within the
    paddle sets the outgoing angle (up to max deflection), speed increases by
    the per-hit factor up to the cap, and the ball is left flush on the face.
    """
    offset = (ball.y - paddle.y) / paddle.half_h
    offset = min(max(offset, -1.0), 1.0)
    new_speed = min(rally_speed * speed_up, speed_cap)
    angle = math.radians(offset * max_deflection_deg)
    direction = 1.0 if paddle.side is Side.LEFT else -1.0
    face_x = 0.0 if paddle.side is Side.LEFT else 1.0
    out = Ball(
        x=face_x,
        y=ball.y,
        vx=direction * new_speed * math.cos(angle),
        vy=new_speed * math.sin(angle),
    )
    return out, new_speed


def detect_goal(state: MatchState) -> Side | None:
    """Scoring side once the ball is strictly beyond a paddle plane; run
    after collision resolution so a saved ball never scores."""
    if state.ball.x < 0.0:
        return Side.RIGHT
    if state.ball.x > 1.0:
        return Side.LEFT
    return None


def apply_goal(
    state: MatchState, scorer: Side, gameplay: GameplayConfig = DEFAULT_GAMEPLAY
) -> MatchState:
    """Book a point: scorer's score up, loser's lives down. Either the match
    ends, or the loser serves with the rally speed reset to base."""
    loser = scorer.other
    sl, sr = state.score
    ll, lr = state.lives
    if scorer is Side.LEFT:
        sl += 1
        lr -= 1
    else:
        sr += 1
        ll -= 1
    score = (sl, sr)
    lives = (ll, lr)
    centered = Ball(0.5, 0.5, 0.0, 0.0)
    if lives[0] == 0 or lives[1] == 0:
        return replace(
            state,
            ball=centered,
            score=score,
            lives=lives,
            phase=MatchPhase.OVER,
            serving_side=None,
            serve_delay_ms=0.0,
            winner=scorer,
        )
    return replace(
        state,
        ball=centered,
        score=score,
        lives=lives,
        rally_speed=base_speed(gameplay, state.config.difficulty),
        phase=MatchPhase.SERVING,
        serving_side=loser,
        serve_delay_ms=gameplay.serve_delay_ms,
        winner=None,
    )


def _advance_ball(
    ball: Ball,
    rally_speed: float,
    left: Paddle,
    right: Paddle,
    dt: float,
    gameplay: GameplayConfig,
    speed_cap: float,
    events: list[StepEvent],
) -> tuple[Ball, float]:
    """Move the ball through one tick, resolving wall bounces and paddle
    collisions in time order along the segment."""
    x, y, vx, vy = ball.x, ball.y, ball.vx, ball.vy
    speed = rally_speed
    remaining = dt
    crossed = {Side.LEFT: False, Side.RIGHT: False}

    for _ in range(32):
        if remaining <= 1e-15:
            break
        # time to next wall
        if vy < 0:
            t_wall, wall_y = (0.0 - y) / vy, 0.0
        elif vy > 0:
            t_wall, wall_y = (1.0 - y) / vy, 1.0
        else:
            t_wall, wall_y = math.inf, None
        # time to next paddle plane, only while approaching from inside
        if vx < 0 and not crossed[Side.LEFT] and x >= 0.0:
            t_pad, pad = (0.0 - x) / vx, left
        elif vx > 0 and not crossed[Side.RIGHT] and x <= 1.0:
            t_pad, pad = (1.0 - x) / vx, right
        else:
            t_pad, pad = math.inf, None

        if t_pad <= t_wall and t_pad <= remaining:
            y_cross = y + vy * t_pad
            remaining -= t_pad
            if abs(y_cross - pad.y) <= pad.half_h:
                hit = Ball(0.0 if pad.side is Side.LEFT else 1.0, y_cross, vx, vy)
                bounced, speed = reflect_off_paddle(
                    hit,
                    pad,
                    speed,
                    speed_cap=speed_cap,
                    speed_up=gameplay.speed_up_per_hit,
                    max_deflection_deg=gameplay.max_deflection_deg,
                )
                x, y, vx, vy = bounced.x, bounced.y, bounced.vx, bounced.vy
                events.append(
                    StepEvent(
                        "paddle_hit",
                        side=pad.side,
                        y=y_cross,
                        offset=(y_cross - pad.y) / pad.half_h,
                        speed=speed,
                    )
                )
            else:
                # ball passes the face; goal handling happens after motion
                crossed[pad.side] = True
                x = 0.0 if pad.side is Side.LEFT else 1.0
                y = y_cross
                events.append(StepEvent("plane_crossed", side=pad.side, y=y_cross))
        elif t_wall <= remaining:
            x += vx * t_wall
            y = wall_y
            vy = -vy
            remaining -= t_wall
            events.append(StepEvent("wall_bounce", y=wall_y))
        else:
            x += vx * remaining
            y += vy * remaining
            remaining = 0.0
    return Ball(x, y, vx, vy), speed


def step_events(
    state: MatchState,
    inputs: PaddleInputs = HOLD,
    dt: float | None = None,
    gameplay: GameplayConfig = DEFAULT_GAMEPLAY,
) -> tuple[MatchState, list[StepEvent]]:
    """One fixed timestep: paddles move, then the serve countdown or the
    rally advances, then goals are resolved. Returns the new state plus a
    trace of what happened inside the tick."""
    if state.phase is MatchPhase.OVER:
        raise MatchAlreadyOver("step() on a finished match")
    if dt is None:
        dt = gameplay.dt
    events: list[StepEvent] = []

    # paddle motion; the right paddle is computer-driven in 1-player mode
    left_in = inputs.for_side(Side.LEFT)
    if state.config.num_players == 1:
        right_in = PaddleInput(ai_paddle_target(state, gameplay), InputSource.AI)
    else:
        right_in = inputs.for_side(Side.RIGHT)

    def paddle_speed(pin: PaddleInput) -> float:
        if pin.source is InputSource.AI:
            return ai_speed(gameplay, state.config.difficulty)
        return gameplay.human_paddle_speed

    left = move_paddle(state.left, left_in.target_y, paddle_speed(left_in), dt)
    right = move_paddle(state.right, right_in.target_y, paddle_speed(right_in), dt)

    if state.phase is MatchPhase.SERVING:
        delay = state.serve_delay_ms - dt * 1000.0
        if delay <= 0.0:
            serve_index = state.score[0] + state.score[1]
            angle = serve_angle_rad(state.seed, serve_index, gameplay.serve_angle_max_deg)
            direction = 1.0 if state.serving_side is Side.LEFT else -1.0
            ball = Ball(
                0.5,
                0.5,
                direction * state.rally_speed * math.cos(angle),
                state.rally_speed * math.sin(angle),
            )
            events.append(StepEvent("serve", side=state.serving_side, speed=state.rally_speed))
            new = replace(
                state,
                ball=ball,
                left=left,
                right=right,
                phase=MatchPhase.RALLY,
                serve_delay_ms=0.0,
                tick=state.tick + 1,
            )
        else:
            new = replace(state, left=left, right=right, serve_delay_ms=delay, tick=state.tick + 1)
        return new, events

    # RALLY
    cap = gameplay.speed_cap_factor * base_speed(gameplay, state.config.difficulty)
    ball, rally_speed = _advance_ball(
        state.ball, state.rally_speed, left, right, dt, gameplay, cap, events
    )
    new = replace(
        state,
        ball=ball,
        left=left,
        right=right,
        rally_speed=rally_speed,
        tick=state.tick + 1,
    )
    scorer = detect_goal(new)
    if scorer is not None:
        events.append(StepEvent("goal", side=scorer))
        new = replace(apply_goal(new, scorer, gameplay), tick=new.tick)
        if new.phase is MatchPhase.OVER:
            events.append(StepEvent("match_over", side=new.winner))
    return new, events


def step(
    state: MatchState,
    inputs: PaddleInputs = HOLD,
    dt: float | None = None,
    gameplay: GameplayConfig = DEFAULT_GAMEPLAY,
) -> MatchState:
    return step_events(state, inputs, dt, gameplay)[0]

"""Session state machine: title -> player count -> difficulty -> body part
-> countdown -> play -> scoreboard, with rematch or quit from the scoreboard.

advance() is total and deterministic; illegal (state, event) pairs return the
state unchanged and are logged as ignored.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from enum import Enum

from .config import DEFAULT_ENGINE, EngineConfig
from .game_core import (
    BodyPart,
    Difficulty,
    MatchConfig,
    MatchState,
    Side,
    _mix64,
    new_match,
)
from .gesture_cursor import Target, validate_targets

log = logging.getLogger(__name__)

# Menu option ids (also target ids on screen)
START = "START"
ONE_PLAYER = "ONE_PLAYER"
TWO_PLAYERS = "TWO_PLAYERS"
EASY = "EASY"
HARD = "HARD"
HAND = "HAND"
HEAD = "HEAD"
REMATCH = "REMATCH"
QUIT = "QUIT"


class SessionPhase(str, Enum):
    TITLE = "title"
    SELECT_PLAYERS = "select_players"
    SELECT_DIFFICULTY = "select_difficulty"
    SELECT_BODY_PART = "select_body_part"
    COUNTDOWN = "countdown"
    PLAYING = "playing"
    MATCH_OVER = "match_over"


MENU_PHASES = (
    SessionPhase.TITLE,
    SessionPhase.SELECT_PLAYERS,
    SessionPhase.SELECT_DIFFICULTY,
    SessionPhase.SELECT_BODY_PART,
    SessionPhase.MATCH_OVER,
)


@dataclass(frozen=True)
class Select:
    option: str


@dataclass(frozen=True)
class CountdownElapsed:
    pass


@dataclass(frozen=True)
class MatchEnded:
    winner: Side
    score: tuple[int, int]


@dataclass(frozen=True)
class Rematch:
    pass


@dataclass(frozen=True)
class Quit:
    pass


SessionEvent = Select | CountdownElapsed | MatchEnded | Rematch | Quit


@dataclass(frozen=True)
class SessionState:
    phase: SessionPhase = SessionPhase.TITLE
    num_players: int | None = None
    difficulty: Difficulty | None = None
    body_part: BodyPart | None = None
    countdown_ms: float = 0.0
    match: MatchState | None = None
    winner: Side | None = None
    final_score: tuple[int, int] | None = None
    seed: int = 0
    match_index: int = 0

    def match_config(self) -> MatchConfig:
        return MatchConfig(self.num_players, self.difficulty, self.body_part)

    def config_complete(self) -> bool:
        return None not in (self.num_players, self.difficulty, self.body_part)


def initial_session(seed: int = 0) -> SessionState:
    return SessionState(seed=seed)


def match_seed(session_seed: int, match_index: int) -> int:
    """Per-match seed derived from the session seed; deterministic and
    distinct across rematches."""
    return _mix64(session_seed ^ _mix64(match_index))


def _ignored(state: SessionState, event: SessionEvent) -> SessionState:
    log.debug("ignored event %r in phase %s", event, state.phase.value)
    return state


def advance(
    state: SessionState,
    event: SessionEvent,
    config: EngineConfig = DEFAULT_ENGINE,
) -> SessionState:
    """Apply one event. Only the transitions of the session flow are legal;
    anything else leaves the state untouched (same object) so callers can
    detect ignored events by identity."""
    phase = state.phase

    if isinstance(event, Select):
        opt = event.option
        if phase is SessionPhase.TITLE and opt == START:
            return replace(state, phase=SessionPhase.SELECT_PLAYERS)
        if phase is SessionPhase.SELECT_PLAYERS and opt in (ONE_PLAYER, TWO_PLAYERS):
            return replace(
                state,
                phase=SessionPhase.SELECT_DIFFICULTY,
                num_players=1 if opt == ONE_PLAYER else 2,
            )
        if phase is SessionPhase.SELECT_DIFFICULTY and opt in (EASY, HARD):
            return replace(
                state,
                phase=SessionPhase.SELECT_BODY_PART,
                difficulty=Difficulty.EASY if opt == EASY else Difficulty.HARD,
            )
        if phase is SessionPhase.SELECT_BODY_PART and opt in (HAND, HEAD):
            return replace(
                state,
                phase=SessionPhase.COUNTDOWN,
                body_part=BodyPart.HAND if opt == HAND else BodyPart.HEAD,
                countdown_ms=config.countdown_ms,
            )
        if phase is SessionPhase.MATCH_OVER and opt == REMATCH:
            return advance(state, Rematch(), config)
        if phase is SessionPhase.MATCH_OVER and opt == QUIT:
            return advance(state, Quit(), config)
        return _ignored(state, event)

    if isinstance(event, CountdownElapsed):
        if phase is SessionPhase.COUNTDOWN and state.config_complete():
            match = new_match(
                state.match_config(),
                match_seed(state.seed, state.match_index),
                config.gameplay,
            )
            return replace(
                state,
                phase=SessionPhase.PLAYING,
                countdown_ms=0.0,
                match=match,
                winner=None,
                final_score=None,
            )
        return _ignored(state, event)

    if isinstance(event, MatchEnded):
        if phase is SessionPhase.PLAYING:
            return replace(
                state,
                phase=SessionPhase.MATCH_OVER,
                match=None,
                winner=event.winner,
                final_score=event.score,
            )
        return _ignored(state, event)

    if isinstance(event, Rematch):
        if phase is SessionPhase.MATCH_OVER:
            return replace(
                state,
                phase=SessionPhase.COUNTDOWN,
                countdown_ms=config.countdown_ms,
                match=None,
                winner=None,
                final_score=None,
                match_index=state.match_index + 1,
            )
        return _ignored(state, event)

    if isinstance(event, Quit):
        if phase is SessionPhase.MATCH_OVER:
            return SessionState(seed=state.seed, match_index=state.match_index + 1)
        return _ignored(state, event)

    return _ignored(state, event)


def tick_countdown(
    state: SessionState, dt_ms: float, config: EngineConfig = DEFAULT_ENGINE
) -> SessionState:
    """Engine-loop helper: run down the countdown and fire CountdownElapsed
    on expiry."""
    if state.phase is not SessionPhase.COUNTDOWN:
        return state
    remaining = state.countdown_ms - dt_ms
    if remaining > 0.0:
        return replace(state, countdown_ms=remaining)
    return advance(replace(state, countdown_ms=0.0), CountdownElapsed(), config)


# Screen layout for the two-option menus and the title screen. Gaps between
# rectangles keep hit_test containment unique.
_BOX_A = (0.08, 0.38, 0.46, 0.62)
_BOX_B = (0.54, 0.38, 0.92, 0.62)
_BOX_CENTER = (0.35, 0.40, 0.65, 0.60)

_MENU_LAYOUT: dict[SessionPhase, tuple[tuple[str, tuple[float, float, float, float]], ...]] = {
    SessionPhase.TITLE: ((START, _BOX_CENTER),),
    SessionPhase.SELECT_PLAYERS: ((ONE_PLAYER, _BOX_A), (TWO_PLAYERS, _BOX_B)),
    SessionPhase.SELECT_DIFFICULTY: ((EASY, _BOX_A), (HARD, _BOX_B)),
    SessionPhase.SELECT_BODY_PART: ((HAND, _BOX_A), (HEAD, _BOX_B)),
    SessionPhase.MATCH_OVER: ((REMATCH, _BOX_A), (QUIT, _BOX_B)),
}


def menu_targets(state: SessionState) -> list[Target]:
    """Selectable targets for the current phase; empty outside menus."""
    layout = _MENU_LAYOUT.get(state.phase, ())
    targets = [
        Target(option, u_min, v_min, u_max, v_max)
        for option, (u_min, v_min, u_max, v_max) in layout
    ]
    validate_targets(targets)
    return targets

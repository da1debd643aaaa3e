from collections import deque

import pytest

from avg_pong.game_core import BodyPart, Difficulty, MatchPhase, Side
from avg_pong.gesture_cursor import validate_targets
from avg_pong.menu_flow import (
    EASY,
    HAND,
    HARD,
    HEAD,
    ONE_PLAYER,
    QUIT,
    REMATCH,
    START,
    TWO_PLAYERS,
    CountdownElapsed,
    MatchEnded,
    Quit,
    Rematch,
    Select,
    SessionPhase,
    SessionState,
    advance,
    initial_session,
    menu_targets,
    tick_countdown,
)

ALL_EVENTS = (
    Select(START),
    Select(ONE_PLAYER),
    Select(TWO_PLAYERS),
    Select(EASY),
    Select(HARD),
    Select(HAND),
    Select(HEAD),
    Select(REMATCH),
    Select(QUIT),
    CountdownElapsed(),
    MatchEnded(Side.LEFT, (3, 1)),
    MatchEnded(Side.RIGHT, (0, 3)),
    Rematch(),
    Quit(),
)


def session_at(phase: SessionPhase) -> SessionState:
    """Walk the happy path to the requested phase."""
    s = initial_session(seed=7)
    path = {
        SessionPhase.TITLE: [],
        SessionPhase.SELECT_PLAYERS: [Select(START)],
        SessionPhase.SELECT_DIFFICULTY: [Select(START), Select(ONE_PLAYER)],
        SessionPhase.SELECT_BODY_PART: [Select(START), Select(ONE_PLAYER), Select(EASY)],
        SessionPhase.COUNTDOWN: [Select(START), Select(ONE_PLAYER), Select(EASY), Select(HAND)],
        SessionPhase.PLAYING: [
            Select(START), Select(ONE_PLAYER), Select(EASY), Select(HAND), CountdownElapsed(),
        ],
        SessionPhase.MATCH_OVER: [
            Select(START), Select(ONE_PLAYER), Select(EASY), Select(HAND), CountdownElapsed(),
            MatchEnded(Side.LEFT, (3, 0)),
        ],
    }
    for ev in path[phase]:
        s = advance(s, ev)
    assert s.phase is phase
    return s


class TestAdvance:
    def test_player_selection_sets_count(self):
        s = session_at(SessionPhase.SELECT_PLAYERS)
        s2 = advance(s, Select(ONE_PLAYER))
        assert s2.phase is SessionPhase.SELECT_DIFFICULTY
        assert s2.num_players == 1

    def test_illegal_option_ignored(self):
        s = session_at(SessionPhase.SELECT_DIFFICULTY)
        s2 = advance(s, Select(HEAD))  # not an option in this menu
        assert s2 is s  # unchanged, same object

    def test_rematch_keeps_config(self):
        s = session_at(SessionPhase.MATCH_OVER)
        s2 = advance(s, Rematch())
        assert s2.phase is SessionPhase.COUNTDOWN
        assert (s2.num_players, s2.difficulty, s2.body_part) == (1, Difficulty.EASY, BodyPart.HAND)

    def test_rematch_via_select_option(self):
        s = session_at(SessionPhase.MATCH_OVER)
        assert advance(s, Select(REMATCH)).phase is SessionPhase.COUNTDOWN

    def test_quit_resets_everything(self):
        s = session_at(SessionPhase.MATCH_OVER)
        s2 = advance(s, Quit())
        assert s2.phase is SessionPhase.TITLE
        assert s2.num_players is None and s2.difficulty is None and s2.body_part is None

    def test_countdown_to_playing_builds_match(self):
        s = session_at(SessionPhase.COUNTDOWN)
        s2 = advance(s, CountdownElapsed())
        assert s2.phase is SessionPhase.PLAYING
        assert s2.match is not None and s2.match.phase is MatchPhase.SERVING

    def test_match_over_carries_winner(self):
        s = session_at(SessionPhase.MATCH_OVER)
        assert s.winner is Side.LEFT
        assert s.final_score == (3, 0)

    def test_rematch_uses_a_fresh_seed(self):
        s = session_at(SessionPhase.MATCH_OVER)
        first = advance(advance(s, Rematch()), CountdownElapsed()).match
        second_over = advance(
            advance(advance(s, Rematch()), CountdownElapsed()),
            MatchEnded(Side.LEFT, (3, 2)),
        )
        second = advance(advance(second_over, Rematch()), CountdownElapsed()).match
        assert first.seed != second.seed

    def test_tick_countdown_expires_into_playing(self):
        s = session_at(SessionPhase.COUNTDOWN)
        total = 0.0
        while s.phase is SessionPhase.COUNTDOWN:
            s = tick_countdown(s, 100.0)
            total += 100.0
        assert s.phase is SessionPhase.PLAYING
        assert total == pytest.approx(3000.0, abs=100.0)


class TestMenuTargets:
    def test_select_players_has_two_options(self):
        ids = {t.id for t in menu_targets(session_at(SessionPhase.SELECT_PLAYERS))}
        assert ids == {ONE_PLAYER, TWO_PLAYERS}

    def test_difficulty_menu(self):
        ids = {t.id for t in menu_targets(session_at(SessionPhase.SELECT_DIFFICULTY))}
        assert ids == {EASY, HARD}

    def test_playing_has_no_targets(self):
        assert menu_targets(session_at(SessionPhase.PLAYING)) == []

    def test_all_menus_validate(self):
        for phase in SessionPhase:
            validate_targets(menu_targets(session_at(phase)))


def explore(max_depth=10):
    """BFS over every event sequence up to max_depth, deduplicating states.

    Deterministic advance means the reachable-state graph carries the same
    information as enumerating all sequences; edges record predecessors.
    """
    start = initial_session(seed=7)
    seen = {start: 0}
    preds = {start: set()}
    frontier = deque([start])
    while frontier:
        state = frontier.popleft()
        depth = seen[state]
        if depth >= max_depth:
            continue
        for ev in ALL_EVENTS:
            nxt = advance(state, ev)
            if nxt is state:
                continue
            preds.setdefault(nxt, set()).add((state.phase, type(ev).__name__, getattr(ev, "option", None)))
            if nxt not in seen:
                seen[nxt] = depth + 1
                frontier.append(nxt)
    return seen, preds


class TestModelCheck:
    def test_playing_reachable_only_via_ordered_selections(self):
        seen, preds = explore()
        playing = [s for s in seen if s.phase is SessionPhase.PLAYING]
        assert playing, "Playing must be reachable"
        for s in playing:
            # only entry: Countdown + CountdownElapsed
            assert preds[s] == {(SessionPhase.COUNTDOWN, "CountdownElapsed", None)}
            assert s.config_complete()
        for s in seen:
            if s.phase is SessionPhase.COUNTDOWN:
                entries = {p[0] for p in preds[s]}
                assert entries <= {SessionPhase.SELECT_BODY_PART, SessionPhase.MATCH_OVER}
            if s.phase is SessionPhase.SELECT_BODY_PART:
                assert {p[0] for p in preds[s]} == {SessionPhase.SELECT_DIFFICULTY}
            if s.phase is SessionPhase.SELECT_DIFFICULTY:
                assert {p[0] for p in preds[s]} == {SessionPhase.SELECT_PLAYERS}
            if s.phase is SessionPhase.SELECT_PLAYERS:
                assert {p[0] for p in preds[s]} == {SessionPhase.TITLE}

    def test_every_playing_exit_goes_to_match_over_then_countdown_or_title(self):
        seen, _ = explore()
        for s in seen:
            if s.phase is SessionPhase.PLAYING:
                exits = {advance(s, ev).phase for ev in ALL_EVENTS if advance(s, ev) is not s}
                assert exits == {SessionPhase.MATCH_OVER}
            if s.phase is SessionPhase.MATCH_OVER:
                exits = {advance(s, ev).phase for ev in ALL_EVENTS if advance(s, ev) is not s}
                assert exits == {SessionPhase.COUNTDOWN, SessionPhase.TITLE}

    def test_config_only_lost_on_quit(self):
        seen, _ = explore()
        for s in seen:
            for ev in ALL_EVENTS:
                nxt = advance(s, ev)
                if nxt is s:
                    continue
                if isinstance(ev, Quit) or (isinstance(ev, Select) and ev.option == QUIT):
                    assert nxt.num_players is None
                else:
                    for field in ("num_players", "difficulty", "body_part"):
                        if getattr(s, field) is not None:
                            assert getattr(nxt, field) == getattr(s, field)

    def test_advance_total_and_deterministic(self):
        seen, _ = explore()
        for s in seen:
            for ev in ALL_EVENTS:
                assert advance(s, ev) == advance(s, ev)

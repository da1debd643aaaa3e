import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from avg_pong.gesture_cursor import (
    DWELL_THRESHOLD_MS,
    InteractionBox,
    Target,
    hit_test,
    initial_cursor,
    map_hand_to_screen,
    update_cursor,
    validate_targets,
)
from conftest import make_frame, make_joint, make_player

BOX = InteractionBox()
TARGET_A = Target("A", 0.1, 0.1, 0.4, 0.4)
TARGET_B = Target("B", 0.6, 0.6, 0.9, 0.9)
TARGETS = [TARGET_A, TARGET_B]


def frame_with_hand(x, y, c=1.0):
    return make_frame(players=(make_player(0, hand_right=make_joint(x=x, y=y, c=c)),))


def hand_at_screen(u, v, box=BOX):
    """Sensor coordinates that map to screen position (u, v)."""
    x = box.x_min + u * (box.x_max - box.x_min)
    y = box.y_min + (1.0 - v) * (box.y_max - box.y_min)
    return frame_with_hand(x, y)


class TestMapHandToScreen:
    def test_box_center_maps_to_screen_center(self):
        j = make_joint(x=(BOX.x_min + BOX.x_max) / 2, y=(BOX.y_min + BOX.y_max) / 2)
        u, v = map_hand_to_screen(j, BOX)
        assert (u, v) == (0.5, 0.5)

    def test_outside_box_clamps(self):
        u, v = map_hand_to_screen(make_joint(x=1.0, y=-1.0), BOX)
        assert (u, v) == (1.0, 1.0)

    def test_full_sensor_box_hand_computed(self):
        # box [-1,1]^2, hand at (0.5, 0.5): u=(0.5+1)/2, v flipped
        full = InteractionBox(-1.0, 1.0, -1.0, 1.0)
        u, v = map_hand_to_screen(make_joint(x=0.5, y=0.5), full)
        assert (u, v) == (0.75, 0.25)

    @given(
        x1=st.floats(-1, 1), x2=st.floats(-1, 1),
        y=st.floats(-1, 1),
    )
    @settings(max_examples=100)
    def test_monotone_in_x(self, x1, x2, y):
        u1, _ = map_hand_to_screen(make_joint(x=x1, y=y), BOX)
        u2, _ = map_hand_to_screen(make_joint(x=x2, y=y), BOX)
        if x1 <= x2:
            assert u1 <= u2

    @given(x=st.floats(-1, 1), y=st.floats(-1, 1))
    @settings(max_examples=100)
    def test_idempotent_after_clamp(self, x, y):
        u, v = map_hand_to_screen(make_joint(x=x, y=y), BOX)
        # map the screen point back into the box and through the map again
        x2 = BOX.x_min + u * (BOX.x_max - BOX.x_min)
        y2 = BOX.y_min + (1.0 - v) * (BOX.y_max - BOX.y_min)
        u2, v2 = map_hand_to_screen(make_joint(x=x2, y=y2), BOX)
        assert abs(u2 - u) < 1e-12 and abs(v2 - v) < 1e-12


class TestHitTest:
    def test_inside(self):
        assert hit_test((0.2, 0.2), TARGETS) == "A"

    def test_empty_region(self):
        assert hit_test((0.5, 0.5), TARGETS) is None

    def test_edge_belongs_to_target(self):
        assert hit_test((0.4, 0.25), TARGETS) == "A"
        assert hit_test((0.6, 0.9), TARGETS) == "B"

    def test_overlap_rejected_at_construction(self):
        with pytest.raises(ValueError):
            validate_targets([TARGET_A, Target("C", 0.3, 0.3, 0.5, 0.5)])
        with pytest.raises(ValueError):
            validate_targets([TARGET_A, Target("A", 0.6, 0.6, 0.9, 0.9)])

    def test_degenerate_rect_rejected(self):
        with pytest.raises(ValueError):
            Target("D", 0.5, 0.5, 0.5, 0.9)


def run_updates(states_frames, dt_ms, state=None, targets=TARGETS):
    state = state or initial_cursor()
    emitted = []
    for frame in states_frames:
        state = update_cursor(state, frame, targets, dt_ms)
        if state.emitted:
            emitted.append(state.emitted)
    return state, emitted


class TestDwellSelection:
    def test_select_fires_when_accumulated_dwell_reaches_threshold(self):
        # 90 updates x 16.67 ms = 1500.3 ms >= threshold on the 90th update
        dt = 16.67
        frame = hand_at_screen(0.25, 0.25)  # inside A
        state = initial_cursor()
        fired_at = None
        for i in range(1, 95):
            state = update_cursor(state, frame, TARGETS, dt)
            if state.emitted:
                fired_at = i
                break
        assert fired_at == 90

    def test_leaving_resets_dwell(self):
        dt = 16.67
        inside, outside = hand_at_screen(0.25, 0.25), hand_at_screen(0.5, 0.5)
        seq = [inside] * 89 + [outside] + [inside] * 89
        _, emitted = run_updates(seq, dt)
        assert emitted == []

    def test_one_shot_without_hover_break(self):
        dt = 100.0
        frame = hand_at_screen(0.25, 0.25)
        _, emitted = run_updates([frame] * 100, dt)
        assert emitted == ["A"]  # a single Select over a 10 s hover

    def test_fires_again_after_break(self):
        dt = 100.0
        inside, outside = hand_at_screen(0.25, 0.25), hand_at_screen(0.5, 0.5)
        seq = [inside] * 20 + [outside] + [inside] * 20
        _, emitted = run_updates(seq, dt)
        assert emitted == ["A", "A"]

    def test_dwell_never_exceeds_threshold_plus_dt(self):
        dt = 40.0
        frame = hand_at_screen(0.25, 0.25)
        state = initial_cursor()
        for _ in range(200):
            state = update_cursor(state, frame, TARGETS, dt)
            assert state.dwell_ms <= DWELL_THRESHOLD_MS + dt

    def test_emission_state_carries_threshold_dwell(self):
        dt = 100.0
        frame = hand_at_screen(0.25, 0.25)
        state = initial_cursor()
        for _ in range(50):
            state = update_cursor(state, frame, TARGETS, dt)
            if state.emitted:
                assert state.dwell_ms >= DWELL_THRESHOLD_MS
                break
        else:
            pytest.fail("no selection fired")
        # next update resets the accumulator while the latch holds
        state = update_cursor(state, frame, TARGETS, dt)
        assert state.dwell_ms == 0.0 and state.emitted is None

    def test_untracked_hand_hides_cursor_and_resets_dwell(self):
        dt = 100.0
        inside = hand_at_screen(0.25, 0.25)
        lost = frame_with_hand(0.0, 0.0, c=0.05)  # below confidence floor
        state, _ = run_updates([inside] * 5, dt)
        assert state.visible and state.dwell_ms > 0
        # short dropout: position held, dwell keeps running
        state = update_cursor(state, lost, TARGETS, dt)
        assert state.visible and state.hovered == "A"
        # past the 1000 ms timeout the cursor hides and dwell resets
        for _ in range(11):
            state = update_cursor(state, lost, TARGETS, dt)
        assert not state.visible
        assert state.hovered is None and state.dwell_ms == 0.0

    def test_missing_player_counts_as_untracked(self):
        state = initial_cursor()
        empty = make_frame(players=())
        state = update_cursor(state, empty, TARGETS, 16.67)
        assert not state.visible and state.hovered is None


def dwell_oracle(hovers, dts, threshold=DWELL_THRESHOLD_MS):
    """Run-length reference: one Select per maximal same-target hover run
    whose accumulated time reaches the threshold."""
    selects = []
    run_target = None
    run_ms = 0.0
    fired = False
    for target, dt in zip(hovers, dts):
        if target != run_target:
            run_target = target
            run_ms = 0.0
            fired = False
        if target is None:
            continue
        run_ms += dt
        if not fired and run_ms >= threshold:
            selects.append(target)
            fired = True
    return selects


def random_hover_sequence(rng, length):
    spots = {"A": (0.25, 0.25), "B": (0.75, 0.75), None: (0.5, 0.5)}
    hovers = []
    frames = []
    i = 0
    while i < length:
        choice = rng.choice(["A", "B", None])
        run = rng.randint(1, 120)
        for _ in range(min(run, length - i)):
            hovers.append(choice)
            u, v = spots[choice]
            frames.append(hand_at_screen(u, v))
            i += 1
    return hovers, frames


class TestDwellOracle:
    @pytest.mark.parametrize("seed", range(8))
    def test_random_sequences_match_oracle(self, seed):
        rng = random.Random(seed)
        hovers, frames = random_hover_sequence(rng, 600)
        dts = [rng.choice([10.0, 16.67, 33.3]) for _ in frames]
        state = initial_cursor()
        emitted = []
        for frame, dt in zip(frames, dts):
            state = update_cursor(state, frame, TARGETS, dt)
            if state.emitted:
                emitted.append(state.emitted)
        assert emitted == dwell_oracle(hovers, dts)

import math

import pytest
from hypothesis import strategies as st

from avg_pong.skeleton_stream import (
    JOINT_ORDER,
    Joint,
    JointId,
    PlayerSkeleton,
    SkeletonFrame,
)


def make_joint(x=0.0, y=0.0, z=2.0, c=1.0) -> Joint:
    return Joint(x, y, z, c)


def make_player(slot=0, head=None, hand_left=None, hand_right=None) -> PlayerSkeleton:
    return PlayerSkeleton(
        slot=slot,
        joints={
            JointId.HEAD: head or make_joint(y=0.8),
            JointId.HAND_LEFT: hand_left or make_joint(x=-0.3),
            JointId.HAND_RIGHT: hand_right or make_joint(x=0.3),
        },
    )


def make_frame(seq=0, t_ms=0, players=None) -> SkeletonFrame:
    if players is None:
        players = (make_player(0),)
    return SkeletonFrame(seq=seq, t_ms=t_ms, players=tuple(players))


# --- hypothesis strategies ---

finite = st.floats(allow_nan=False, allow_infinity=False)
coord = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)
depth = st.floats(min_value=0.0, max_value=10.0, allow_nan=False)
confidence = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)

joints_st = st.builds(Joint, x=coord, y=coord, z=depth, c=confidence)


def player_st(slot: int):
    return st.builds(
        PlayerSkeleton,
        slot=st.just(slot),
        joints=st.fixed_dictionaries({jid: joints_st for jid in JOINT_ORDER}),
    )


players_st = st.one_of(
    st.just(()),
    st.tuples(player_st(0)),
    st.tuples(player_st(1)),
    st.tuples(player_st(0), player_st(1)),
)

frames_st = st.builds(
    SkeletonFrame,
    seq=st.integers(min_value=0, max_value=10**9),
    t_ms=st.integers(min_value=0, max_value=10**9),
    players=players_st,
)


@pytest.fixture
def frame_one_player():
    return make_frame()


def assert_close(a, b, tol=1e-9):
    assert math.isclose(a, b, rel_tol=0, abs_tol=tol), f"{a} != {b} (tol {tol})"

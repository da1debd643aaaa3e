"""Hands-free menu control: hand position drives a screen cursor, dwelling
on a target for a fixed time selects it."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

from .skeleton_stream import Joint, JointId, SkeletonFrame

DWELL_THRESHOLD_MS = 1500.0
UNTRACKED_TIMEOUT_MS = 1000.0


@dataclass(frozen=True)
class InteractionBox:
    """Sub-range of sensor space mapped onto the screen, sized so a
    comfortable arm motion spans the full cursor range."""

    x_min: float = -0.6
    x_max: float = 0.6
    y_min: float = -0.4
    y_max: float = 0.6

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("interaction box must be non-degenerate")


DEFAULT_BOX = InteractionBox()


@dataclass(frozen=True)
class Target:
    """Closed axis-aligned rectangle in screen space with a unique id."""

    id: str
    u_min: float
    v_min: float
    u_max: float
    v_max: float

    def __post_init__(self):
        if not (0.0 <= self.u_min < self.u_max <= 1.0 and 0.0 <= self.v_min < self.v_max <= 1.0):
            raise ValueError(f"degenerate or out-of-range target rectangle: {self}")

    def contains(self, u: float, v: float) -> bool:
        return self.u_min <= u <= self.u_max and self.v_min <= v <= self.v_max


def validate_targets(targets: Sequence[Target]) -> None:
    """Reject menus whose targets overlap (even on boundaries) or reuse ids.

    Run at menu construction so hit_test can assume unique containment.
    """
    ids = [t.id for t in targets]
    if len(set(ids)) != len(ids):
        raise ValueError(f"duplicate target ids: {ids}")
    for i, a in enumerate(targets):
        for b in targets[i + 1 :]:
            if a.u_min <= b.u_max and b.u_min <= a.u_max and a.v_min <= b.v_max and b.v_min <= a.v_max:
                raise ValueError(f"overlapping targets: {a.id} and {b.id}")


@dataclass(frozen=True)
class CursorState:
    pos: tuple[float, float] = (0.5, 0.5)
    hovered: str | None = None
    dwell_ms: float = 0.0
    emitted: str | None = None  # Select event, valid for this update only
    fired: bool = False  # latched until the hover run breaks
    untracked_ms: float = 0.0
    visible: bool = False


def initial_cursor() -> CursorState:
    return CursorState()


def map_hand_to_screen(j: Joint, box: InteractionBox = DEFAULT_BOX) -> tuple[float, float]:
    """Affine map from the interaction box to [0,1]^2, clamped. The v axis is
    flipped so raising the hand moves the cursor up the screen (v=0 is top)."""
    u = (j.x - box.x_min) / (box.x_max - box.x_min)
    v = 1.0 - (j.y - box.y_min) / (box.y_max - box.y_min)
    return (min(max(u, 0.0), 1.0), min(max(v, 0.0), 1.0))


def hit_test(pos: tuple[float, float], targets: Sequence[Target]) -> str | None:
    """Id of the target containing pos (rectangles are closed), else None.
    Assumes validate_targets already ran, so containment is unique."""
    u, v = pos
    for t in targets:
        if t.contains(u, v):
            return t.id
    return None


def update_cursor(
    state: CursorState,
    frame: SkeletonFrame,
    targets: Sequence[Target],
    dt_ms: float,
    *,
    slot: int = 0,
    hand: JointId = JointId.HAND_RIGHT,
    box: InteractionBox = DEFAULT_BOX,
    dwell_threshold_ms: float = DWELL_THRESHOLD_MS,
    untracked_timeout_ms: float = UNTRACKED_TIMEOUT_MS,
) -> CursorState:
    """One cursor step: follow the controlling hand, accumulate dwell over an
    unchanged hover target, and emit a one-shot Select when the dwell
    threshold is crossed. Loss of tracking beyond the timeout hides the
    cursor and resets dwell."""
    if dt_ms <= 0:
        raise ValueError(f"dt_ms must be positive, got {dt_ms}")

    joint = frame.joint(slot, hand)
    tracked = joint is not None and joint.tracked

    if tracked:
        pos = map_hand_to_screen(joint, box)
        untracked_ms = 0.0
        visible = True
    else:
        # Hold the last good position through short dropouts.
        pos = state.pos
        untracked_ms = state.untracked_ms + dt_ms
        visible = state.visible and untracked_ms <= untracked_timeout_ms

    hovered = hit_test(pos, targets) if visible else None

    fired = state.fired
    dwell = state.dwell_ms
    if hovered != state.hovered:
        dwell = 0.0
        fired = False

    emitted = None
    if hovered is not None:
        if fired:
            dwell = 0.0  # latched until the hover run breaks
        else:
            dwell += dt_ms
            if dwell >= dwell_threshold_ms:
                emitted = hovered
                fired = True
    else:
        dwell = 0.0

    return CursorState(
        pos=pos,
        hovered=hovered,
        dwell_ms=dwell,
        emitted=emitted,
        fired=fired,
        untracked_ms=untracked_ms,
        visible=visible,
    )


def reset_dwell(state: CursorState) -> CursorState:
    """Drop hover/dwell bookkeeping, e.g. when the active menu changes."""
    return replace(state, hovered=None, dwell_ms=0.0, emitted=None, fired=False)

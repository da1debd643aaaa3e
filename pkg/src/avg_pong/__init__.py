"""Motion-controlled Pong, desk-scale: joint streaming, dwell-gesture menus,
a deterministic fixed-timestep game core, and a snapshot-broadcast gateway."""

from .activity_metrics import ActivityReport, compare, summarize
from .config import CursorConfig, EngineConfig, GameplayConfig, load_engine_config
from .game_core import (
    Ball,
    BodyPart,
    Difficulty,
    MatchConfig,
    MatchPhase,
    MatchState,
    Paddle,
    PaddleInput,
    PaddleInputs,
    Side,
    ai_paddle_target,
    apply_goal,
    detect_goal,
    move_paddle,
    new_match,
    paddle_target_from_joint,
    reflect_off_paddle,
    step,
    step_events,
)
from .gesture_cursor import (
    CursorState,
    InteractionBox,
    Target,
    hit_test,
    map_hand_to_screen,
    update_cursor,
)
from .menu_flow import SessionPhase, SessionState, advance, menu_targets
from .skeleton_stream import (
    Joint,
    JointId,
    MotionScript,
    PlayerSkeleton,
    SkeletonFrame,
    Waveform,
    encode_frame,
    open_replay,
    parse_frame,
    smooth,
    synth_frames,
    write_replay,
)

__version__ = "0.1.0"

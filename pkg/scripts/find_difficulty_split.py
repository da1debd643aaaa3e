#!/usr/bin/env python3
"""Search for (seed, edge-hit pattern) pairs where the scripted human beats
the easy AI but not the hard AI. Used to pin the difficulty-ordering
acceptance scenario; kept around so the constants can be re-tuned."""

import argparse

from avg_pong.game_core import (
    BodyPart,
    Difficulty,
    MatchConfig,
    MatchPhase,
    PaddleInput,
    PaddleInputs,
    Side,
    new_match,
    step_events,
)

PATTERNS = {
    "top": [0.99],
    "bottom": [-0.99],
    "alternate": [0.99, -0.99],
    "double": [0.99, 0.99, -0.99, -0.99],
}


def run(difficulty, seed, pattern, max_ticks=60 * 240):
    m = new_match(MatchConfig(1, difficulty, BodyPart.HAND), seed)
    hits = 0
    for _ in range(max_ticks):
        if m.phase is MatchPhase.OVER:
            break
        o = pattern[hits % len(pattern)]
        b = m.ball
        target = b.y - o * m.left.half_h if (m.phase is MatchPhase.RALLY and b.vx < 0) else 0.5
        m, events = step_events(m, PaddleInputs(left=PaddleInput(target)))
        hits += sum(1 for e in events if e.kind == "paddle_hit" and e.side is Side.LEFT)
    return m


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=12)
    args = ap.parse_args()

    for name, pattern in PATTERNS.items():
        for seed in range(args.seeds):
            easy = run(Difficulty.EASY, seed, pattern)
            hard = run(Difficulty.HARD, seed, pattern)
            split = (
                easy.phase is MatchPhase.OVER
                and hard.phase is MatchPhase.OVER
                and easy.score[0] >= 1
                and hard.score[0] == 0
            )
            marker = "  <-- split" if split else ""
            print(
                f"{name:9s} seed={seed:3d} easy={easy.score} hard={hard.score}{marker}"
            )


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Measure raw step throughput: how many engine ticks per second the match
core sustains single-threaded (the real loop only needs 60)."""

import random
import time

from avg_pong.game_core import (
    BodyPart,
    Difficulty,
    MatchConfig,
    MatchPhase,
    PaddleInput,
    PaddleInputs,
    new_match,
    step,
)


def main():
    rng = random.Random(1)
    total = 0
    t0 = time.perf_counter()
    while time.perf_counter() - t0 < 2.0:
        m = new_match(MatchConfig(2, Difficulty.HARD, BodyPart.HAND), rng.getrandbits(32))
        tl = tr = 0.5
        for i in range(5000):
            if m.phase is MatchPhase.OVER:
                break
            if i % 37 == 0:
                tl, tr = rng.random(), rng.random()
            m = step(m, PaddleInputs(PaddleInput(tl), PaddleInput(tr)))
            total += 1
    dt = time.perf_counter() - t0
    print(f"{total} ticks in {dt:.2f}s = {total / dt:,.0f} ticks/s "
          f"({total / dt / 60:,.0f}x realtime)")


if __name__ == "__main__":
    main()

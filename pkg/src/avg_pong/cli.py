"""Command line entry points.

  avg-pong serve    --port P --source SPEC       real-time gateway + broadcast
  avg-pong simulate --source SPEC [--events LOG] headless deterministic run
  avg-pong report   --replay PATH --out JSON     movement report from a replay

Exit codes: 0 ok, 2 usage error, 3 source failure.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import logging
import sys

from .activity_metrics import TooFewFrames
from .config import load_engine_config
from .gateway import (
    ActivityCollector,
    ReplayRecorder,
    SnapshotHasher,
    SnapshotWriter,
    load_event_log,
    run_session,
)
from .skeleton_stream import SourceUnavailable, StreamError, open_replay

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SOURCE = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="avg-pong", description=__doc__)
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the real-time gateway")
    serve.add_argument("--port", type=int, required=True)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--source", required=True, help="replay:<path>|synth:<script.json>|tcp:<host:port>")
    serve.add_argument("--seed", type=int, default=0)
    serve.add_argument("--tick-hz", type=int, default=None)
    serve.add_argument("--config", default=None, help="JSON config file")
    serve.add_argument("--record", default=None, help="record consumed frames to a replay file")
    serve.add_argument("--record-events", default=None, help="record client events with ticks")

    sim = sub.add_parser("simulate", help="headless deterministic session")
    sim.add_argument("--source", required=True)
    sim.add_argument("--events", default=None, help="client event log (jsonl) to replay")
    sim.add_argument("--out", default=None, help="write the activity report JSON here")
    sim.add_argument("--record", default=None, help="record consumed frames to a replay file")
    sim.add_argument("--snapshots", default=None, help="write every snapshot (jsonl)")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--ticks", type=int, default=None, help="fixed tick budget")
    sim.add_argument("--until-match-over", action="store_true")
    sim.add_argument("--tick-hz", type=int, default=None)
    sim.add_argument("--config", default=None)
    sim.add_argument("--print-hash", action="store_true", help="print a hash of the snapshot sequence")

    rep = sub.add_parser("report", help="movement report from a replay file")
    rep.add_argument("--replay", required=True)
    rep.add_argument("--out", required=True)
    return parser


def _cmd_serve(args) -> int:
    config = load_engine_config(args.config, tick_hz=args.tick_hz)
    from .server import BindFailure, serve_forever

    try:
        asyncio.run(
            serve_forever(
                args.source,
                host=args.host,
                port=args.port,
                seed=args.seed,
                config=config,
                record=args.record,
                record_events=args.record_events,
            )
        )
    except SourceUnavailable as e:
        print(f"source failure: {e}", file=sys.stderr)
        return EXIT_SOURCE
    except BindFailure as e:
        print(f"bind failure: {e}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        pass
    return EXIT_OK


def _cmd_simulate(args) -> int:
    config = load_engine_config(args.config, tick_hz=args.tick_hz)
    sinks = []
    collector = ActivityCollector()
    sinks.append(collector)
    hasher = SnapshotHasher()
    if args.print_hash:
        sinks.append(hasher)
    if args.record:
        sinks.append(ReplayRecorder(args.record, config.gameplay.tick_hz))
    if args.snapshots:
        sinks.append(SnapshotWriter(args.snapshots))
    events = load_event_log(args.events) if args.events else None
    try:
        result = run_session(
            args.source,
            seed=args.seed,
            config=config,
            events=events,
            sinks=tuple(sinks),
            max_ticks=args.ticks,
            stop_on_match_over=args.until_match_over,
        )
    except (SourceUnavailable, StreamError) as e:
        print(f"source failure: {e}", file=sys.stderr)
        return EXIT_SOURCE
    if args.out:
        try:
            report = collector.report()
        except TooFewFrames as e:
            print(f"source failure: {e}", file=sys.stderr)
            return EXIT_SOURCE
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report.to_json_dict(), fh, indent=2)
            fh.write("\n")
    if args.print_hash:
        import hashlib

        combined = hashlib.sha256("".join(hasher.hashes).encode()).hexdigest()
        print(f"ticks={result.ticks} snapshot_chain={combined}")
    return EXIT_OK


def _cmd_report(args) -> int:
    from .activity_metrics import summarize

    try:
        frames = list(open_replay(args.replay))
        report = summarize(frames)
    except (StreamError, TooFewFrames) as e:
        print(f"source failure: {e}", file=sys.stderr)
        return EXIT_SOURCE
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(report.to_json_dict(), fh, indent=2)
        fh.write("\n")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO)
    if args.command == "serve":
        code = _cmd_serve(args)
    elif args.command == "simulate":
        code = _cmd_simulate(args)
    else:
        code = _cmd_report(args)
    return code


if __name__ == "__main__":
    sys.exit(main())

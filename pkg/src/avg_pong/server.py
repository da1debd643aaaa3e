"""Real-time gateway server: paces the engine at the tick rate, broadcasts
every snapshot to all connected UI clients, and feeds client events back into
the engine.

One engine task owns all state; connection tasks only exchange messages with
it through queues. A client that stops reading is dropped once its outbound
queue holds 2 s worth of snapshots, so a stalled consumer can never hold up
the tick cadence.
"""

from __future__ import annotations

import asyncio
import json
import logging
import socket as socket_mod
from dataclasses import dataclass, field

import websockets
from websockets.asyncio.server import serve as ws_serve

from .config import DEFAULT_ENGINE, EngineConfig
from .gateway import (
    Engine,
    EventLogRecorder,
    Peekable,
    encode_snapshot,
    open_source,
    parse_client_event,
)
from .skeleton_stream import MalformedRecord, RangeViolation, SkeletonFrame

log = logging.getLogger(__name__)

HELLO = json.dumps({"type": "hello", "v": 1}, separators=(",", ":"))

# Outbound queue bound per client: 2 s of snapshots at 60 Hz.
CLIENT_QUEUE_LIMIT = 120

# Small write buffer so TCP backpressure reaches the queue quickly.
WRITE_LIMIT = 4096

# Cap per-client kernel send buffering for the same reason: the bounded
# application queue, not kernel autotuning, decides when a client is stalled.
SEND_BUFFER_CAP = 16384


class BindFailure(OSError):
    pass


@dataclass
class ClientConn:
    cid: int
    ws: object
    queue: asyncio.Queue
    sender: asyncio.Task | None = None
    stall_started: float | None = None
    connected_at: float = 0.0


@dataclass
class Disconnect:
    cid: int
    reason: str
    at_s: float  # seconds since engine start
    tick: int
    stalled_for_s: float | None = None


@dataclass
class ServerStats:
    started_at: float = 0.0
    ticks: int = 0
    clients_seen: int = 0
    disconnects: list[Disconnect] = field(default_factory=list)


class GatewayServer:
    """Engine loop plus websocket fan-out. Construct, await start(), then
    either wait on run_until_stopped() or drive tests against .stats."""

    def __init__(
        self,
        source: str | None,
        *,
        host: str = "127.0.0.1",
        port: int = 0,
        seed: int = 0,
        config: EngineConfig = DEFAULT_ENGINE,
        record: str | None = None,
        record_events: str | None = None,
        max_ticks: int | None = None,
    ):
        self.engine = Engine(seed, config)
        self.config = config
        self.host = host
        self.port = port
        self.source_spec = source
        self.max_ticks = max_ticks
        self.stats = ServerStats()
        self.clients: dict[int, ClientConn] = {}
        self._next_cid = 0
        self._event_queue: list[tuple[int, object]] = []
        self._frames: Peekable | None = None
        self._live_frames: asyncio.Queue | None = None
        self._server = None
        self._engine_task: asyncio.Task | None = None
        self._pump_task: asyncio.Task | None = None
        self._stopped = asyncio.Event()
        self._record_path = record
        self._recorder = None
        self._event_recorder = EventLogRecorder(record_events) if record_events else None

    async def start(self) -> None:
        if self.source_spec is not None:
            if self.source_spec.startswith("tcp:"):
                # live source: a thread reads the socket, frames are handed
                # to the loop and consumed at the next tick
                self._live_frames = asyncio.Queue()
                frames = open_source(self.source_spec)
                loop = asyncio.get_running_loop()

                def pump():
                    for frame in frames:
                        loop.call_soon_threadsafe(self._live_frames.put_nowait, frame)

                self._pump_task = asyncio.create_task(asyncio.to_thread(pump))
            else:
                self._frames = Peekable(open_source(self.source_spec))
        if self._record_path:
            from .gateway import ReplayRecorder

            self._recorder = ReplayRecorder(self._record_path, self.config.gameplay.tick_hz)
        try:
            self._server = await ws_serve(
                self._handler,
                self.host,
                self.port,
                compression=None,
                write_limit=WRITE_LIMIT,
                ping_interval=None,
            )
        except OSError as e:
            raise BindFailure(f"cannot bind {self.host}:{self.port}: {e}") from e
        self.port = self._server.sockets[0].getsockname()[1]
        self._engine_task = asyncio.create_task(self._engine_loop())

    async def stop(self) -> None:
        self._stopped.set()
        if self._engine_task:
            await asyncio.wait([self._engine_task])
        for conn in list(self.clients.values()):
            self._drop_client(conn, "server_shutdown")
        if self._server:
            self._server.close()
            await self._server.wait_closed()
        if self._pump_task:
            self._pump_task.cancel()
        if self._recorder:
            self._recorder.close()
        if self._event_recorder:
            self._event_recorder.close()

    async def run_until_stopped(self) -> None:
        await self._stopped.wait()

    # -- connections --

    async def _handler(self, ws) -> None:
        loop = asyncio.get_running_loop()
        cid = self._next_cid
        self._next_cid += 1
        self.stats.clients_seen += 1
        sock = ws.transport.get_extra_info("socket")
        if sock is not None:
            sock.setsockopt(socket_mod.SOL_SOCKET, socket_mod.SO_SNDBUF, SEND_BUFFER_CAP)
        try:
            await ws.send(HELLO)
            raw = await ws.recv()
            try:
                hello = json.loads(raw)
            except json.JSONDecodeError:
                hello = None
            if not isinstance(hello, dict) or hello.get("type") != "hello" or hello.get("v") != 1:
                await ws.send(json.dumps({"type": "error", "message": "expected hello v1"}))
                await ws.close()
                return
        except websockets.ConnectionClosed:
            return

        conn = ClientConn(
            cid=cid,
            ws=ws,
            queue=asyncio.Queue(maxsize=CLIENT_QUEUE_LIMIT),
            connected_at=loop.time(),
        )
        conn.sender = asyncio.create_task(self._sender(conn))
        self.clients[cid] = conn
        log.info("client %d connected", cid)
        try:
            async for raw in ws:
                try:
                    obj = json.loads(raw)
                    ev = parse_client_event(obj)
                except (json.JSONDecodeError, MalformedRecord, RangeViolation) as e:
                    self._offer(conn, json.dumps({"type": "error", "message": str(e)}))
                    continue
                self._event_queue.append((cid, ev))
        except websockets.ConnectionClosed:
            pass
        finally:
            if cid in self.clients:
                self._drop_client(conn, "closed")

    async def _sender(self, conn: ClientConn) -> None:
        try:
            while True:
                text = await conn.queue.get()
                await conn.ws.send(text)
                if conn.queue.qsize() == 0:
                    conn.stall_started = None
        except (asyncio.CancelledError, websockets.ConnectionClosed):
            pass

    def _offer(self, conn: ClientConn, text: str) -> None:
        """Non-blocking enqueue; a full queue means the client stopped
        reading and gets dropped instead of stalling the engine."""
        loop = asyncio.get_running_loop()
        try:
            conn.queue.put_nowait(text)
        except asyncio.QueueFull:
            stalled = None
            if conn.stall_started is not None:
                stalled = loop.time() - conn.stall_started
            self._drop_client(conn, "slow_consumer", stalled_for_s=stalled)
            return
        # stall_started marks when the queue last became (and stayed) nonempty
        if conn.stall_started is None:
            conn.stall_started = loop.time()

    def _drop_client(self, conn: ClientConn, reason: str, stalled_for_s: float | None = None) -> None:
        if conn.cid not in self.clients:
            return
        del self.clients[conn.cid]
        loop = asyncio.get_running_loop()
        self.stats.disconnects.append(
            Disconnect(
                cid=conn.cid,
                reason=reason,
                at_s=loop.time() - self.stats.started_at,
                tick=self.engine.tick,
                stalled_for_s=stalled_for_s,
            )
        )
        if conn.sender:
            conn.sender.cancel()
        asyncio.ensure_future(self._close_ws(conn.ws))
        log.info("client %d dropped (%s)", conn.cid, reason)

    @staticmethod
    async def _close_ws(ws) -> None:
        try:
            await ws.close()
        except Exception:
            pass

    # -- engine pacing --

    async def _engine_loop(self) -> None:
        loop = asyncio.get_running_loop()
        hz = self.config.gameplay.tick_hz
        t0 = loop.time()
        self.stats.started_at = t0
        engine = self.engine
        while not self._stopped.is_set():
            tick = engine.tick
            if self.max_ticks is not None and tick >= self.max_ticks:
                self._stopped.set()
                break
            tick_ms = engine.tick_time_ms()
            # frames first, then client events, mirroring the headless driver
            if self._frames is not None:
                while True:
                    nxt = self._frames.peek()
                    if nxt is None or nxt.t_ms > tick_ms:
                        break
                    self._consume_frame(self._frames.pop(), tick, tick_ms)
            if self._live_frames is not None:
                while not self._live_frames.empty():
                    self._consume_frame(self._live_frames.get_nowait(), tick, tick_ms)
            if self._event_queue:
                pending, self._event_queue = self._event_queue, []
                for cid, ev in pending:
                    reply = engine.ingest_event(ev)
                    if self._event_recorder:
                        self._event_recorder.record(tick, ev)
                    if reply is not None and cid in self.clients:
                        self._offer(self.clients[cid], json.dumps(reply, separators=(",", ":")))

            encoded = encode_snapshot(engine.advance_tick())
            for conn in list(self.clients.values()):
                self._offer(conn, encoded)
            self.stats.ticks = engine.tick

            deadline = t0 + engine.tick / hz
            delay = deadline - loop.time()
            if delay > 0:
                try:
                    await asyncio.wait_for(self._stopped.wait(), timeout=delay)
                except asyncio.TimeoutError:
                    pass

    def _consume_frame(self, frame: SkeletonFrame, tick: int, tick_ms: float) -> None:
        self.engine.ingest_frame(frame)
        if self._recorder:
            self._recorder.on_raw_frame(frame, tick, tick_ms)


async def serve_forever(
    source: str | None,
    *,
    host: str,
    port: int,
    seed: int,
    config: EngineConfig,
    record: str | None = None,
    record_events: str | None = None,
) -> None:
    server = GatewayServer(
        source,
        host=host,
        port=port,
        seed=seed,
        config=config,
        record=record,
        record_events=record_events,
    )
    await server.start()
    log.info("gateway listening on ws://%s:%d", server.host, server.port)
    print(f"avg-pong gateway on ws://{server.host}:{server.port}", flush=True)
    try:
        await server.run_until_stopped()
    finally:
        await server.stop()

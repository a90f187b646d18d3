"""WebSocket service around a live SessionCore.

One consumer task owns the core; sources, the dwell ticker, and client
receive loops communicate with it only through an ordered input queue.
Clients get every text/speech event but only the latest snapshot when they
fall behind (keep-latest, never unbounded buffering).

Endpoint: ``ws://<listen>/ws``, JSON text frames.

    server -> client:  snapshot | text_emitted | speech_request | error
    client -> server:  sim_blink | set_threshold | set_dwell | get_snapshot
"""

from __future__ import annotations

import asyncio
import contextlib
import json
import logging
from collections import deque

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .replay import CaptureRecord
from .session import ReplaySource, SerialSource, SessionConfig, SessionCore, SourceUnavailable

logger = logging.getLogger(__name__)

EVENT_BACKLOG = 256


class ClientChannel:
    """Outbound messages for one client: ordered events plus a latest-snapshot slot."""

    def __init__(self):
        self._events: deque[dict] = deque(maxlen=EVENT_BACKLOG)
        self._snapshot: dict | None = None
        self._wake = asyncio.Event()

    def push_event(self, msg: dict) -> None:
        self._events.append(msg)
        self._wake.set()

    def push_snapshot(self, snap: dict) -> None:
        self._snapshot = snap  # replaces any unsent one
        self._wake.set()

    async def next_batch(self) -> tuple[list[dict], dict | None]:
        await self._wake.wait()
        self._wake.clear()
        events = list(self._events)
        self._events.clear()
        snap, self._snapshot = self._snapshot, None
        return events, snap


class LiveSession:
    """Owns the input queue and the consumer task that mutates the core."""

    def __init__(self, core: SessionCore):
        self.core = core
        self.queue: asyncio.Queue = asyncio.Queue()
        self.clients: set[ClientChannel] = set()
        self.finished = asyncio.Event()
        self._start_ms: float | None = None

    def now_ms(self) -> int:
        loop = asyncio.get_running_loop()
        if self._start_ms is None:
            self._start_ms = loop.time() * 1000.0
        return int(loop.time() * 1000.0 - self._start_ms)

    # -- client side -----------------------------------------------------

    def register(self) -> ClientChannel:
        chan = ClientChannel()
        self.clients.add(chan)
        # Snapshot request rides the queue so it reflects all earlier input.
        self.queue.put_nowait(("command", {"type": "get_snapshot"}, chan))
        return chan

    def unregister(self, chan: ClientChannel) -> None:
        self.clients.discard(chan)

    def submit_command(self, payload: object, chan: ClientChannel) -> None:
        self.queue.put_nowait(("command", payload, chan))

    # -- consumer ----------------------------------------------------------

    async def consume(self) -> None:
        while True:
            item = await self.queue.get()
            kind = item[0]
            if kind == "eof":
                break
            if kind == "bytes":
                changed, events = self.core.handle_bytes(item[1], item[2])
            elif kind == "tick":
                changed, events = self.core.handle_tick(item[1])
            elif kind == "source_lost":
                changed, events = self.core.mark_source_lost(), []
            else:  # command
                reply, changed, events = self.core.handle_command(item[1])
                chan = item[2]
                if reply is not None and chan in self.clients:
                    if reply.get("type") == "snapshot":
                        chan.push_snapshot(reply)
                    else:
                        chan.push_event(reply)
            for msg in events:
                self._broadcast_event(msg)
            if changed:
                self._broadcast_snapshot()
        self.finished.set()

    def _broadcast_event(self, msg: dict) -> None:
        for chan in self.clients:
            chan.push_event(msg)

    def _broadcast_snapshot(self) -> None:
        snap = self.core.snapshot()
        for chan in self.clients:
            chan.push_snapshot(snap)

    # -- sources -----------------------------------------------------------

    async def feed_replay(self, records: list[CaptureRecord], speed: float) -> None:
        """Replay-time event generator, paced against the wall clock by `speed`.

        Tick timestamps come from the capture timeline, never the wall
        clock, so the state trajectory matches an offline run exactly.
        """
        loop = asyncio.get_running_loop()
        started = loop.time()

        async def pace(t_ms: int) -> None:
            delay = started + t_ms / 1000.0 / speed - loop.time()
            if delay > 0:
                await asyncio.sleep(delay)

        t_end = records[-1].t_ms if records else None
        next_tick = self.core.config.dwell_ms
        for rec in records:
            while next_tick <= min(rec.t_ms, t_end):
                await pace(next_tick)
                await self.queue.put(("tick", next_tick))
                next_tick += self.core.config.dwell_ms
            await pace(rec.t_ms)
            await self.queue.put(("bytes", rec.t_ms, rec.data))
        while t_end is not None and next_tick <= t_end:
            await pace(next_tick)
            await self.queue.put(("tick", next_tick))
            next_tick += self.core.config.dwell_ms
        await self.queue.put(("eof",))

    async def feed_serial(self, port) -> None:
        """Drain an open serial port in a worker thread; losing it mid-run
        degrades the session to a disconnected state instead of exiting."""
        try:
            while True:
                data = await asyncio.to_thread(port.read, 4096)
                if data:
                    await self.queue.put(("bytes", self.now_ms(), data))
        except Exception as exc:
            logger.error("serial source lost: %s", exc)
            await self.queue.put(("source_lost",))
        finally:
            with contextlib.suppress(Exception):
                port.close()

    async def run_wall_clock_ticker(self) -> None:
        while True:
            await asyncio.sleep(self.core.config.dwell_ms / 1000.0)
            await self.queue.put(("tick", self.now_ms()))


def create_app(live: LiveSession) -> FastAPI:
    """App serving /ws; the consumer task runs for the app's lifespan."""

    @contextlib.asynccontextmanager
    async def lifespan(_app):
        consumer = asyncio.create_task(live.consume(), name="consumer")
        try:
            yield
        finally:
            consumer.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await consumer

    app = FastAPI(lifespan=lifespan)

    @app.websocket("/ws")
    async def ws_endpoint(sock: WebSocket):
        await sock.accept()
        chan = live.register()
        sender = asyncio.create_task(_pump(sock, chan))
        try:
            while True:
                text = await sock.receive_text()
                try:
                    payload = json.loads(text)
                except ValueError:
                    chan.push_event({"type": "error", "error": "frame is not valid JSON"})
                    continue
                live.submit_command(payload, chan)
        except WebSocketDisconnect:
            pass
        finally:
            live.unregister(chan)
            sender.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await sender

    return app


async def _pump(sock: WebSocket, chan: ClientChannel) -> None:
    while True:
        events, snap = await chan.next_batch()
        for msg in events:
            await sock.send_json(msg)
        if snap is not None:
            await sock.send_json(snap)


def open_serial(source: SerialSource):
    """Open the port up front so a bad device fails before the server starts."""
    try:
        import serial  # pyserial, optional dependency
    except ImportError:
        raise SourceUnavailable(
            "serial support requires pyserial (pip install blinkscribe[serial])"
        ) from None
    try:
        return serial.Serial(source.port, source.baud, timeout=0.05)
    except Exception as exc:
        raise SourceUnavailable(f"cannot open {source.port}: {exc}") from None


def parse_listen(listen: str) -> tuple[str, int]:
    host, _, port = listen.rpartition(":")
    if not host or not port.isdigit():
        raise ValueError(f"listen address must be host:port, got {listen!r}")
    return host, int(port)


async def _serve(config: SessionConfig, core: SessionCore,
                 records: list[CaptureRecord] | None) -> None:
    import uvicorn

    live = LiveSession(core)
    app = create_app(live)
    host, port = parse_listen(config.listen)
    server = uvicorn.Server(uvicorn.Config(app, host=host, port=port, log_level="warning"))

    tasks = []
    if records is not None:
        speed = config.source.speed if isinstance(config.source, ReplaySource) else 1.0
        tasks.append(asyncio.create_task(live.feed_replay(records, speed), name="replay"))
    else:
        tasks.append(asyncio.create_task(live.run_wall_clock_ticker(), name="ticker"))
        if isinstance(config.source, SerialSource):
            port = open_serial(config.source)
            tasks.append(asyncio.create_task(live.feed_serial(port), name="serial"))

    async def stop_on_replay_end():
        await live.finished.wait()
        server.should_exit = True

    stopper = asyncio.create_task(stop_on_replay_end())
    try:
        await server.serve()
    finally:
        stopper.cancel()
        for task in tasks:
            task.cancel()
        for task in tasks:
            with contextlib.suppress(asyncio.CancelledError):
                await task
        # Surface a startup failure (e.g. missing pyserial) from the source task.
        for task in tasks:
            if task.done() and not task.cancelled() and task.exception():
                raise task.exception()


def serve_session(config: SessionConfig, core: SessionCore,
                  records: list[CaptureRecord] | None = None) -> None:
    """Run the session until shutdown or end-of-replay (blocking)."""
    asyncio.run(_serve(config, core, records))

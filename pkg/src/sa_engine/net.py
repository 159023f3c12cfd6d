"""Live hub service: a framed TCP endpoint for federates, a websocket + static
asset endpoint for the browser console, and the in-process engine federate
that owns the filter.

Both channels carry the same canonical-JSON messages; TCP adds the 4-byte
length prefix, the websocket sends each message as one text frame.  Every
state mutation is funneled through the engine's single asyncio context, so the
entity database keeps its single-writer contract.
"""

import asyncio
import threading
from dataclasses import replace
from pathlib import Path
from typing import Callable, Dict, Optional

from .entities import entity_from_record
from .filtering import run_filter, decision_set_to_record
from .geo import Point3, Polyline2
from .hub import Hub
from .mapview import Route
from .scenario import Scenario, ScenarioSession
from .filtering import OperationZone
from .wire import FrameDecoder, Message, ProtocolError, frame_encode, message_from_bytes, message_to_bytes

DEFAULT_HUB_PORT = 7411
DEFAULT_UI_PORT = 7412


class HubService:
    """One served session: hub + engine, TCP federate port, optional UI port."""

    def __init__(self, scenario: Scenario, hub_port: int = DEFAULT_HUB_PORT,
                 ui_port: Optional[int] = DEFAULT_UI_PORT, host: str = "127.0.0.1",
                 ui_assets: Optional[Path] = None, play_events: bool = True):
        self.session = ScenarioSession(scenario)
        self.hub = Hub(db=self.session.db)
        # The in-process engine is a first-class federate so its DECISIONS
        # broadcasts route like any other message; it subscribes to nothing
        # because it reads state directly.
        self.hub.join("engine", "c2", subscriptions=set())
        self.hub_port = hub_port
        self.ui_port = ui_port
        self.host = host
        self.ui_assets = ui_assets
        self.play_events = play_events
        self._senders: Dict[str, Callable[[Message], None]] = {}
        self._engine_seq = 0
        self._loop: Optional[asyncio.AbstractEventLoop] = None
        self._thread: Optional[threading.Thread] = None
        self._started = threading.Event()
        self._stop: Optional[asyncio.Event] = None
        self._start_error: Optional[BaseException] = None

    # -- engine federate ---------------------------------------------------

    def _next_seq(self) -> int:
        self._engine_seq += 1
        return self._engine_seq

    def _publish_decisions(self):
        ds = run_filter(self.session.db, self.session.zone, self.session.foci,
                        self.session.now, self.session.scenario.amplification)
        msg = Message("DECISIONS", "engine", self._next_seq(),
                      decision_set_to_record(ds))
        self._broadcast(msg)

    def _broadcast(self, msg: Message):
        result = self.hub.route(msg)
        for fed_id, delivery in result.deliveries:
            sender = self._senders.get(fed_id)
            if sender is not None:
                sender(delivery)

    def _handle_mutation(self, msg: Message):
        """Apply a state-changing message to the engine and re-filter."""
        sess = self.session
        if msg.type == "FOCUS_UPDATE":
            p = msg.payload
            pos = p.get("position")
            sess.foci = replace(
                sess.foci,
                user_position=(Point3(*[float(v) for v in pos]) if pos else sess.foci.user_position),
                weapon_range=float(p.get("weapon_range", sess.foci.weapon_range)),
                awareness_range=float(p.get("awareness_range", sess.foci.awareness_range)),
            )
        elif msg.type == "ZONE_UPDATE":
            sess.apply_event({"kind": "zone", "zone": msg.payload})
        elif msg.type == "ROUTE_UPDATE":
            wps = msg.payload.get("waypoints", [])
            if len(wps) >= 2:
                sess.zone = OperationZone(
                    kind="corridor",
                    route=Polyline2([(float(w[0]), float(w[1])) for w in wps]),
                    half_width=float(msg.payload.get("half_width", 50.0)),
                )
        # ENTITY_UPDATE / ENTITY_REMOVE are applied by the hub replica, which
        # is the same database object the engine filters.
        self._publish_decisions()

    def _on_message(self, msg: Message):
        result = self.hub.route(msg)
        for fed_id, delivery in result.deliveries:
            sender = self._senders.get(fed_id)
            if sender is not None:
                sender(delivery)
        if result.dropped:
            return
        for reply in result.replies:
            sender = self._senders.get(msg.sender)
            if sender is not None:
                sender(reply)
        if msg.type in ("ENTITY_UPDATE", "ENTITY_REMOVE", "FOCUS_UPDATE",
                        "ZONE_UPDATE", "ROUTE_UPDATE"):
            self._handle_mutation(msg)

    def _join(self, msg: Message, sender: Callable[[Message], None]):
        fed_id = msg.sender
        kind = msg.payload.get("kind", "mobile")
        subs = msg.payload.get("subscriptions")
        replies = self.hub.join(fed_id, kind, set(subs) if subs else None)
        self._senders[fed_id] = sender
        for reply in replies:
            sender(reply)

    def _leave(self, fed_id: str):
        self._senders.pop(fed_id, None)
        self.hub.leave(fed_id)

    # -- TCP endpoint --------------------------------------------------------

    async def _tcp_client(self, reader: asyncio.StreamReader, writer: asyncio.StreamWriter):
        decoder = FrameDecoder()
        fed_id: Optional[str] = None

        def sender(m: Message):
            writer.write(frame_encode(m))

        try:
            while True:
                data = await reader.read(65536)
                if not data:
                    break
                for msg in decoder.feed(data):
                    if fed_id is None:
                        if msg.type != "JOIN":
                            raise ProtocolError("first message must be JOIN")
                        fed_id = msg.sender
                        self._join(msg, sender)
                    else:
                        self._on_message(msg)
                await writer.drain()
        except (ProtocolError, ConnectionError):
            pass
        finally:
            if fed_id is not None:
                self._leave(fed_id)
            writer.close()

    # -- UI endpoint (websocket + static assets) ------------------------------

    def _build_ui_app(self):
        from fastapi import FastAPI, WebSocket, WebSocketDisconnect
        from fastapi.staticfiles import StaticFiles

        app = FastAPI()

        @app.websocket("/ws")
        async def ws_endpoint(ws: WebSocket):
            await ws.accept()
            queue: asyncio.Queue = asyncio.Queue()
            fed_id: Optional[str] = None

            def sender(m: Message):
                queue.put_nowait(message_to_bytes(m).decode("utf-8"))

            async def pump():
                while True:
                    await ws.send_text(await queue.get())

            pump_task = asyncio.ensure_future(pump())
            try:
                while True:
                    text = await ws.receive_text()
                    msg = message_from_bytes(text.encode("utf-8"))
                    if fed_id is None:
                        if msg.type != "JOIN":
                            raise ProtocolError("first message must be JOIN")
                        fed_id = msg.sender
                        self._join(msg, sender)
                    else:
                        self._on_message(msg)
            except (WebSocketDisconnect, ProtocolError):
                pass
            finally:
                pump_task.cancel()
                if fed_id is not None:
                    self._leave(fed_id)

        if self.ui_assets is not None and Path(self.ui_assets).is_dir():
            app.mount("/", StaticFiles(directory=str(self.ui_assets), html=True), name="ui")
        return app

    # -- scripted events ------------------------------------------------------

    async def _play_script(self):
        last_t = 0.0
        for ev in self.session.scenario.events:
            await asyncio.sleep(float(ev["t"]) - last_t)
            last_t = float(ev["t"])
            self.session.now = last_t
            self.session.apply_event(ev)
            if ev["kind"] == "entity":
                self._broadcast(Message("ENTITY_UPDATE", "engine", self._next_seq(),
                                        ev["entity"]))
            self._publish_decisions()

    # -- lifecycle -------------------------------------------------------------

    async def _serve_async(self):
        self._stop = asyncio.Event()
        server = await asyncio.start_server(self._tcp_client, self.host, self.hub_port)
        ui_task = None
        uvicorn_server = None
        if self.ui_port is not None:
            import uvicorn

            config = uvicorn.Config(self._build_ui_app(), host=self.host,
                                    port=self.ui_port, log_level="warning",
                                    lifespan="off")
            uvicorn_server = uvicorn.Server(config)
            # Bind now so an occupied port fails fast instead of inside the task.
            sockets = [config.bind_socket()]
            ui_task = asyncio.ensure_future(uvicorn_server.serve(sockets=sockets))
        script_task = None
        if self.play_events and self.session.scenario.events:
            script_task = asyncio.ensure_future(self._play_script())
        self._started.set()
        try:
            await self._stop.wait()
        finally:
            server.close()
            await server.wait_closed()
            for task in (script_task, ui_task):
                if task is not None:
                    if uvicorn_server is not None and task is ui_task:
                        uvicorn_server.should_exit = True
                        await asyncio.sleep(0)
                    task.cancel()

    def run_forever(self):
        """Blocking entry point used by the CLI."""
        asyncio.run(self._serve_async())

    def start(self, timeout: float = 10.0):
        """Run the service on a background thread; returns once ports are bound."""

        def runner():
            try:
                asyncio.run(self._capture_loop())
            except BaseException as exc:  # surfaced to the caller in start()
                self._start_error = exc
                self._started.set()

        self._thread = threading.Thread(target=runner, daemon=True)
        self._thread.start()
        if not self._started.wait(timeout):
            raise TimeoutError("hub service did not start")
        if self._start_error is not None:
            raise self._start_error

    async def _capture_loop(self):
        self._loop = asyncio.get_running_loop()
        await self._serve_async()

    def stop(self):
        if self._loop is not None and self._stop is not None:
            self._loop.call_soon_threadsafe(self._stop.set)
        if self._thread is not None:
            self._thread.join(timeout=10.0)

"""Topic broker: a synchronous routing core and its WebSocket front end.

The core is a plain state machine (connections, advertisements,
subscriptions) whose ``handle`` method turns one inbound envelope into a
delivery list. The asyncio layer owns the sockets: each peer gets a
bounded outbound buffer drained by its own sender task, so one slow or
dead subscriber can never delay delivery to the others. Routing happens
inline in each peer's receive loop; the event loop serializes those, which
preserves per-publisher order on every topic.
"""

from __future__ import annotations

import asyncio
import http
import logging
import mimetypes
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from websockets.asyncio.server import Server, ServerConnection, serve
from websockets.datastructures import Headers
from websockets.exceptions import ConnectionClosed
from websockets.http11 import Request, Response

from .envelope import Envelope, EnvelopeError, decode, encode

__all__ = [
    "ProtocolViolationError",
    "BrokerCore",
    "PeerBuffer",
    "BridgeServer",
    "DEFAULT_PORT",
    "BRIDGE_PATH",
]

log = logging.getLogger(__name__)

DEFAULT_PORT = 9090
BRIDGE_PATH = "/bridge"

#: Outbound buffer depth per peer; oldest frames are dropped beyond this.
PEER_BUFFER_CAPACITY = 256

#: Topics where only the newest frame matters; buffered at depth 1.
LATEST_WINS_TOPICS = frozenset({"/gaze"})


class ProtocolViolationError(RuntimeError):
    """Envelope is well-formed but illegal in the connection's state."""


@dataclass
class _PeerState:
    advertised: set[str] = field(default_factory=set)
    subscriptions: set[str] = field(default_factory=set)


class BrokerCore:
    """Connection, advertisement, and subscription bookkeeping plus routing."""

    def __init__(self, strict: bool = True):
        self.strict = strict
        self._peers: dict[str, _PeerState] = {}
        self._subscribers: dict[str, list[str]] = {}
        self.routed = 0
        self.dropped_disconnected = 0

    def connect(self, peer: str) -> None:
        if peer in self._peers:
            raise ProtocolViolationError(f"peer {peer!r} already connected")
        self._peers[peer] = _PeerState()

    def disconnect(self, peer: str) -> None:
        state = self._peers.pop(peer, None)
        if state is None:
            return
        for topic in state.subscriptions:
            subs = self._subscribers.get(topic)
            if subs and peer in subs:
                subs.remove(peer)

    def peers(self) -> list[str]:
        return list(self._peers)

    def subscribers(self, topic: str) -> list[str]:
        return list(self._subscribers.get(topic, ()))

    def handle(self, peer: str, env: Envelope) -> list[tuple[str, Envelope]]:
        """Apply one envelope; returns (subscriber, envelope) deliveries.

        Subscribe/unsubscribe affect subsequent publishes only. Publishes
        fan out to every current subscriber except the sender, in
        subscription order.
        """
        state = self._peers.get(peer)
        if state is None:
            raise ProtocolViolationError(f"unknown peer {peer!r}")

        if env.op == "advertise":
            state.advertised.add(env.topic)
            return []
        if env.op == "unadvertise":
            state.advertised.discard(env.topic)
            return []
        if env.op == "subscribe":
            if env.topic not in state.subscriptions:
                state.subscriptions.add(env.topic)
                self._subscribers.setdefault(env.topic, []).append(peer)
            return []
        if env.op == "unsubscribe":
            if env.topic in state.subscriptions:
                state.subscriptions.discard(env.topic)
                subs = self._subscribers.get(env.topic)
                if subs and peer in subs:
                    subs.remove(peer)
            return []

        # publish
        if env.topic not in state.advertised:
            raise ProtocolViolationError(f"publish on {env.topic!r} without prior advertise")
        deliveries = [(sub, env) for sub in self._subscribers.get(env.topic, ()) if sub != peer]
        self.routed += 1
        return deliveries


class PeerBuffer:
    """Bounded outbound queue: drop-oldest overall, latest-wins per gaze."""

    def __init__(self, capacity: int = PEER_BUFFER_CAPACITY):
        self.capacity = capacity
        self.dropped = 0
        self._items: deque[Envelope] = deque()
        self._ready = asyncio.Event()

    def __len__(self) -> int:
        return len(self._items)

    def push(self, env: Envelope) -> None:
        if env.topic in LATEST_WINS_TOPICS:
            stale = [e for e in self._items if e.topic == env.topic]
            for e in stale:
                self._items.remove(e)
                self.dropped += 1
        if len(self._items) >= self.capacity:
            self._items.popleft()
            self.dropped += 1
        self._items.append(env)
        self._ready.set()

    async def drain(self) -> list[Envelope]:
        await self._ready.wait()
        out = list(self._items)
        self._items.clear()
        self._ready.clear()
        return out


def _error_frame(kind: str, message: str) -> str:
    import json

    return json.dumps({"error": {"kind": kind, "message": message}}, sort_keys=True, separators=(",", ":"))


class BridgeServer:
    """WebSocket pub/sub gateway at ws://host:port/bridge.

    `local_hook`, when set, receives every envelope delivered to the
    internal "local" peer (the simulation side); the live session layer
    uses it to schedule inputs and record the session. Static assets, if a
    directory is configured, are served on plain HTTP GETs outside the
    bridge path.
    """

    LOCAL_PEER = "local"

    def __init__(
        self,
        host: str = "127.0.0.1",
        port: int = DEFAULT_PORT,
        *,
        strict: bool = True,
        assets_dir: Optional[Path] = None,
        local_hook: Optional[Callable[[Envelope], None]] = None,
        http_payloads: Optional[dict[str, tuple[str, bytes]]] = None,
    ):
        self.host = host
        self.port = port
        self.core = BrokerCore(strict=strict)
        self.strict = strict
        self.assets_dir = Path(assets_dir) if assets_dir else None
        self.local_hook = local_hook
        #: Extra HTTP GET endpoints: path -> (content type, body bytes).
        self.http_payloads = dict(http_payloads or {})
        self._server: Server | None = None
        self._buffers: dict[str, PeerBuffer] = {}
        self._sockets: dict[str, ServerConnection] = {}
        self._next_peer = 0
        self.core.connect(self.LOCAL_PEER)

    async def __aenter__(self) -> "BridgeServer":
        await self.start()
        return self

    async def __aexit__(self, *exc) -> None:
        await self.stop()

    async def start(self) -> None:
        self._server = await serve(
            self._handler,
            self.host,
            self.port,
            process_request=self._process_request,
            ping_interval=20,
            ping_timeout=20,
            # A wedged peer (full write buffer) should not stall shutdown.
            close_timeout=1.0,
        )

    async def stop(self) -> None:
        if self._server is not None:
            self._server.close()
            await self._server.wait_closed()
            self._server = None

    def local_subscribe(self, topic: str) -> None:
        self.core.handle(self.LOCAL_PEER, Envelope(op="subscribe", topic=topic, stamp=0.0))

    def local_advertise(self, topic: str, type_name: str) -> None:
        self.core.handle(self.LOCAL_PEER, Envelope(op="advertise", topic=topic, stamp=0.0, type=type_name))

    def publish_local(self, env: Envelope) -> None:
        """Publish from the simulation side and fan out to remote peers."""
        for peer, delivery in self.core.handle(self.LOCAL_PEER, env):
            buffer = self._buffers.get(peer)
            if buffer is None:
                self.core.dropped_disconnected += 1
                continue
            buffer.push(delivery)

    def _dispatch(self, sender: str, env: Envelope) -> None:
        for peer, delivery in self.core.handle(sender, env):
            if peer == self.LOCAL_PEER:
                if self.local_hook is not None:
                    self.local_hook(delivery)
                continue
            buffer = self._buffers.get(peer)
            if buffer is None:
                self.core.dropped_disconnected += 1
                continue
            buffer.push(delivery)

    def _process_request(self, connection: ServerConnection, request: Request) -> Response | None:
        path = request.path.split("?", 1)[0]
        if path == BRIDGE_PATH:
            return None
        if path in self.http_payloads:
            content_type, body = self.http_payloads[path]
            headers = Headers(
                [
                    ("Content-Type", content_type),
                    ("Content-Length", str(len(body))),
                    ("Access-Control-Allow-Origin", "*"),
                ]
            )
            return Response(http.HTTPStatus.OK, "OK", headers, body)
        if self.assets_dir is None:
            return connection.respond(http.HTTPStatus.NOT_FOUND, "not found\n")
        name = path.lstrip("/") or "index.html"
        target = (self.assets_dir / name).resolve()
        try:
            target.relative_to(self.assets_dir.resolve())
        except ValueError:
            return connection.respond(http.HTTPStatus.FORBIDDEN, "forbidden\n")
        if not target.is_file():
            return connection.respond(http.HTTPStatus.NOT_FOUND, "not found\n")
        body = target.read_bytes()
        content_type = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        headers = Headers([("Content-Type", content_type), ("Content-Length", str(len(body)))])
        return Response(http.HTTPStatus.OK, "OK", headers, body)

    async def _sender(self, peer: str, socket: ServerConnection, buffer: PeerBuffer) -> None:
        try:
            while True:
                for env in await buffer.drain():
                    await socket.send(encode(env).decode("utf-8"))
        except ConnectionClosed:
            pass

    async def _handler(self, socket: ServerConnection) -> None:
        self._next_peer += 1
        peer = f"peer-{self._next_peer}"
        buffer = PeerBuffer()
        self.core.connect(peer)
        self._buffers[peer] = buffer
        self._sockets[peer] = socket
        sender = asyncio.create_task(self._sender(peer, socket, buffer))
        try:
            async for frame in socket:
                try:
                    env = decode(frame, strict=self.strict)
                    self._dispatch(peer, env)
                except EnvelopeError as err:
                    await socket.send(_error_frame("envelope", str(err)))
                except ProtocolViolationError as err:
                    await socket.send(_error_frame("protocol", str(err)))
        except ConnectionClosed:
            pass
        finally:
            sender.cancel()
            self.core.disconnect(peer)
            self._buffers.pop(peer, None)
            self._sockets.pop(peer, None)

"""Broker routing semantics: the synchronous core and the WebSocket layer."""

import asyncio
import json
import socket

import pytest

from websockets.asyncio.client import connect

from gaze_drive.broker import (
    BridgeServer,
    BrokerCore,
    PeerBuffer,
    ProtocolViolationError,
)
from gaze_drive.envelope import Envelope, decode, encode, make_publish


def adv(topic, type_name, stamp=0.0):
    return Envelope(op="advertise", topic=topic, stamp=stamp, type=type_name)


def sub(topic, stamp=0.0):
    return Envelope(op="subscribe", topic=topic, stamp=stamp)


def gaze_pub(x, stamp=0.0):
    return make_publish("/gaze", {"x": x, "y": 0.0, "valid": True, "stamp": stamp}, stamp)


def test_fanout_two_subscribers_in_order():
    core = BrokerCore()
    for peer in ("pub", "sub1", "sub2"):
        core.connect(peer)
    core.handle("pub", adv("/gaze", "gaze_drive/Gaze"))
    core.handle("sub1", sub("/gaze"))
    core.handle("sub2", sub("/gaze"))
    env = gaze_pub(1.0)
    deliveries = core.handle("pub", env)
    assert deliveries == [("sub1", env), ("sub2", env)]


def test_publish_with_no_subscribers_accepted():
    core = BrokerCore()
    core.connect("pub")
    core.handle("pub", adv("/gaze", "gaze_drive/Gaze"))
    assert core.handle("pub", gaze_pub(1.0)) == []
    assert core.routed == 1


def test_publish_before_advertise_rejected():
    core = BrokerCore()
    core.connect("pub")
    with pytest.raises(ProtocolViolationError, match="advertise"):
        core.handle("pub", gaze_pub(1.0))


def test_sender_excluded_from_fanout():
    core = BrokerCore()
    core.connect("pub")
    core.handle("pub", adv("/gaze", "gaze_drive/Gaze"))
    core.handle("pub", sub("/gaze"))
    assert core.handle("pub", gaze_pub(2.0)) == []


def test_subscribe_affects_subsequent_publishes_only():
    core = BrokerCore()
    core.connect("pub")
    core.connect("sub")
    core.handle("pub", adv("/gaze", "gaze_drive/Gaze"))
    assert core.handle("pub", gaze_pub(1.0)) == []
    core.handle("sub", sub("/gaze"))
    assert len(core.handle("pub", gaze_pub(2.0))) == 1
    core.handle("sub", Envelope(op="unsubscribe", topic="/gaze", stamp=0.0))
    assert core.handle("pub", gaze_pub(3.0)) == []


def test_disconnect_cleans_subscriptions():
    core = BrokerCore()
    core.connect("pub")
    core.connect("sub")
    core.handle("pub", adv("/gaze", "gaze_drive/Gaze"))
    core.handle("sub", sub("/gaze"))
    core.disconnect("sub")
    assert core.handle("pub", gaze_pub(1.0)) == []
    assert core.subscribers("/gaze") == []


def test_per_publisher_fifo_interleaved_10k():
    core = BrokerCore()
    for peer in ("pub_a", "pub_b", "sub1", "sub2"):
        core.connect(peer)
    for pub in ("pub_a", "pub_b"):
        core.handle(pub, adv("/cmd_vel", "gaze_drive/CmdVel"))
    core.handle("sub1", sub("/cmd_vel"))
    core.handle("sub2", sub("/cmd_vel"))

    received = {"sub1": [], "sub2": []}
    # omega encodes publisher identity, vx the per-publisher sequence number.
    for i in range(5000):
        for pub_id, pub in enumerate(("pub_a", "pub_b")):
            env = make_publish("/cmd_vel", {"vx": float(i), "vy": 0.0, "omega": float(pub_id)}, float(i))
            for peer, delivery in core.handle(pub, env):
                received[peer].append((delivery.msg["omega"], delivery.msg["vx"]))
    assert core.routed == 10000
    for peer in ("sub1", "sub2"):
        assert len(received[peer]) == 10000
        for pub_id in (0.0, 1.0):
            seq = [v for p, v in received[peer] if p == pub_id]
            assert seq == sorted(seq)
            assert len(seq) == 5000


def test_peer_buffer_drop_oldest():
    async def scenario():
        buffer = PeerBuffer(capacity=4)
        for i in range(6):
            buffer.push(make_publish("/cmd_vel", {"vx": float(i), "vy": 0.0, "omega": 0.0}, float(i)))
        assert buffer.dropped == 2
        drained = await buffer.drain()
        assert [e.msg["vx"] for e in drained] == [2.0, 3.0, 4.0, 5.0]

    asyncio.run(scenario())


def test_peer_buffer_gaze_latest_wins():
    async def scenario():
        buffer = PeerBuffer(capacity=16)
        buffer.push(make_publish("/cmd_vel", {"vx": 9.0, "vy": 0.0, "omega": 0.0}, 0.0))
        for i in range(5):
            buffer.push(gaze_pub(float(i), stamp=float(i)))
        drained = await buffer.drain()
        gaze = [e for e in drained if e.topic == "/gaze"]
        assert len(gaze) == 1
        assert gaze[0].msg["x"] == 4.0
        assert buffer.dropped == 4
        # The non-gaze envelope is still there, in arrival order.
        assert drained[0].topic == "/cmd_vel"

    asyncio.run(scenario())


def free_port() -> int:
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


def test_websocket_end_to_end():
    async def scenario():
        port = free_port()
        server = BridgeServer("127.0.0.1", port)
        await server.start()
        try:
            url = f"ws://127.0.0.1:{port}/bridge"
            async with connect(url) as publisher, connect(url) as subscriber:
                await subscriber.send(encode(sub("/gaze")).decode())
                await asyncio.sleep(0.05)  # let the subscription land
                await publisher.send(encode(adv("/gaze", "gaze_drive/Gaze")).decode())
                for i in range(3):
                    await publisher.send(encode(gaze_pub(float(i), stamp=float(i))).decode())
                    # Pace the publishes so the depth-1 gaze buffer keeps each.
                    frame = await asyncio.wait_for(subscriber.recv(), timeout=2.0)
                    env = decode(frame)
                    assert env.topic == "/gaze"
                    assert env.msg["x"] == float(i)
        finally:
            await server.stop()

    asyncio.run(scenario())


def test_websocket_error_frames():
    async def scenario():
        port = free_port()
        server = BridgeServer("127.0.0.1", port)
        await server.start()
        try:
            url = f"ws://127.0.0.1:{port}/bridge"
            async with connect(url) as client:
                # publish before advertise -> protocol error frame
                await client.send(encode(gaze_pub(1.0)).decode())
                reply = json.loads(await asyncio.wait_for(client.recv(), timeout=2.0))
                assert reply["error"]["kind"] == "protocol"
                assert "advertise" in reply["error"]["message"]
                # malformed envelope -> envelope error frame, connection stays up
                await client.send('{"op":"publish"}')
                reply = json.loads(await asyncio.wait_for(client.recv(), timeout=2.0))
                assert reply["error"]["kind"] == "envelope"
                # connection still usable afterwards
                await client.send(encode(adv("/gaze", "gaze_drive/Gaze")).decode())
                await client.send(encode(gaze_pub(2.0)).decode())
        finally:
            await server.stop()

    asyncio.run(scenario())


def test_websocket_slow_subscriber_does_not_block_others():
    async def scenario():
        port = free_port()
        server = BridgeServer("127.0.0.1", port)
        await server.start()
        try:
            url = f"ws://127.0.0.1:{port}/bridge"
            opts = {"close_timeout": 0.2}
            async with connect(url, **opts) as publisher, connect(url, **opts) as fast, connect(url, **opts) as slow:
                for peer in (fast, slow):
                    await peer.send(encode(sub("/cmd_vel")).decode())
                await asyncio.sleep(0.05)
                await publisher.send(encode(adv("/cmd_vel", "gaze_drive/CmdVel")).decode())
                # The slow peer never reads; flood well past its buffer.
                for i in range(600):
                    env = make_publish("/cmd_vel", {"vx": float(i), "vy": 0.0, "omega": 0.0}, float(i))
                    await publisher.send(encode(env).decode())
                # The fast peer still sees a correctly ordered prefix.
                got = []
                for _ in range(50):
                    env = decode(await asyncio.wait_for(fast.recv(), timeout=2.0))
                    got.append(env.msg["vx"])
                assert got == sorted(got)
        finally:
            await server.stop()

    asyncio.run(scenario())

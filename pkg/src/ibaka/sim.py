"""Deterministic two-party exchange scripts with a wire-level adversary.

The harness owns a logical clock and a seeded random source, runs honest
exchanges in any message order, and replays the two man-in-the-middle
scripts: timestamp-rewriting replay, and replay with a compromised ephemeral
key.  Every run with the same seed and parameters produces byte-identical
transcripts and reports.

The adversary is a separate object that only ever holds wire bytes plus
secrets explicitly granted to it; it never touches party-internal state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

from .group import Curve, Point, TOY_CURVE
from .ibs import EntityKeyPair, Variant, extract_key, pkg_setup
from .protocol import (
    DEFAULT_WINDOW,
    MalformedMessage,
    ProtocolError,
    VerifiedPeer,
    build_message,
    decode_message,
    derive_session_key,
    encode_message,
    verify_message,
)
from .rand import DeterministicRandom

SERVER_ID = "server-1"
CLIENT_ID = "sensor-7"

START_TICKS = 100
DEFAULT_DELAY = 1000


class Role(Enum):
    SERVER = "SERVER"
    CLIENT = "CLIENT"


class MessageOrder(Enum):
    SERVER_FIRST = "SERVER_FIRST"
    CLIENT_FIRST = "CLIENT_FIRST"
    PARALLEL = "PARALLEL"


class AttackKind(Enum):
    REPLAY = "REPLAY"
    EPHEMERAL_COMPROMISE = "EPHEMERAL_COMPROMISE"


class Outcome(Enum):
    SUCCEEDED = "SUCCEEDED"
    DEFEATED = "DEFEATED"


class FieldOutOfRange(ValueError):
    pass


class LogicalClock:
    """Harness-driven tick counter; advances, never rewinds."""

    def __init__(self, start: int = START_TICKS):
        self.now = start

    def advance(self, ticks: int):
        if ticks < 0:
            raise ValueError("logical clocks only move forward")
        self.now += ticks


@dataclass(frozen=True)
class Party:
    """One protocol endpoint: fixed role, keys, variant, freshness window."""

    role: Role
    keys: EntityKeyPair
    variant: Variant
    window: int
    clock: LogicalClock
    master_public: Point

    @property
    def id(self) -> str:
        return self.keys.identity

    @property
    def curve(self) -> Curve:
        return self.keys.curve

    def build_toward(self, peer_id: str, rng) -> tuple[bytes, int]:
        msg, y = build_message(self.keys, peer_id, self.clock.now, self.variant, rng)
        return encode_message(self.curve, msg), y

    def receive(self, wire: bytes) -> VerifiedPeer:
        msg = decode_message(self.curve, wire)
        return verify_message(
            self.curve, msg, self.id, self.master_public,
            self.clock.now, self.window, self.variant,
        )

    def session_key(self, peer_id: str, own_secret: int, peer_Y: Point) -> bytes:
        # The server's identity always hashes first.
        if self.role is Role.SERVER:
            return derive_session_key(self.curve, self.id, peer_id, own_secret, peer_Y)
        return derive_session_key(self.curve, peer_id, self.id, own_secret, peer_Y)


@dataclass(frozen=True)
class TranscriptEvent:
    time: int
    actor: str
    action: str
    payload: bytes

    def to_dict(self) -> dict:
        return {
            "time": self.time,
            "actor": self.actor,
            "action": self.action,
            "payload_hex": self.payload.hex(),
        }


class Transcript:
    """Append-only, time-ordered event log of one scripted run."""

    def __init__(self):
        self.events: list[TranscriptEvent] = []

    def record(self, time: int, actor: Role | str, action: str, payload: bytes = b""):
        if self.events and time < self.events[-1].time:
            raise ValueError("transcript events must be appended in time order")
        name = actor.value if isinstance(actor, Role) else actor
        self.events.append(TranscriptEvent(time, name, action, payload))

    def to_dicts(self) -> list[dict]:
        return [event.to_dict() for event in self.events]


ADVERSARY = "ADVERSARY"


class Adversary:
    """Man-in-the-middle with wire access only.

    Knowledge is limited to captured wire bytes, public parameters, and any
    ephemeral secret explicitly granted by the compromise script; there is no
    reference to either Party.
    """

    def __init__(self, curve: Curve, impersonating: Role = Role.SERVER):
        self.curve = curve
        self.impersonating = impersonating
        self.captured: list[bytes] = []
        self.granted_y: int | None = None

    def intercept(self, wire: bytes):
        self.captured.append(bytes(wire))

    def grant_ephemeral(self, y: int):
        self.granted_y = y

    @staticmethod
    def rewrite_timestamp(wire: bytes, new_ticks: int) -> bytes:
        """Overwrite the trailing timestamp field by byte surgery.

        Works on raw bytes without decoding: the format pins the timestamp
        as the final length-prefixed 8-byte field.
        """
        if len(wire) < 10 or wire[-10:-8] != (8).to_bytes(2, "big"):
            raise MalformedMessage("trailing timestamp field not found")
        if not 0 <= new_ticks < 1 << 64:
            raise ValueError("timestamp ticks outside unsigned 64-bit range")
        return wire[:-8] + new_ticks.to_bytes(8, "big")

    def compute_session_key(self) -> bytes:
        """Session key from the granted ephemeral plus two captured wires.

        captured[0] is the message whose ephemeral y was granted,
        captured[1] the victim's response.
        """
        if self.granted_y is None:
            raise RuntimeError("no ephemeral secret has been granted")
        if len(self.captured) < 2:
            raise RuntimeError("need the original message and the victim response")
        original = decode_message(self.curve, self.captured[0])
        response = decode_message(self.curve, self.captured[1])
        if self.impersonating is Role.SERVER:
            server_id, client_id = original.sender_id, response.sender_id
        else:
            server_id, client_id = response.sender_id, original.sender_id
        return derive_session_key(
            self.curve, server_id, client_id, self.granted_y, response.Y
        )


@dataclass
class ExchangeResult:
    variant: Variant
    message_order: MessageOrder
    server_key: bytes
    client_key: bytes
    transcript: Transcript

    @property
    def keys_equal(self) -> bool:
        return self.server_key == self.client_key

    def to_dict(self) -> dict:
        return {
            "variant": self.variant.name,
            "message_order": self.message_order.name,
            "keys_equal": self.keys_equal,
            "server_key_hex": self.server_key.hex(),
            "client_key_hex": self.client_key.hex(),
            "events": self.transcript.to_dicts(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


@dataclass
class AttackReport:
    attack: AttackKind
    variant: Variant
    outcome: Outcome
    reason: str | None
    attacker_key: bytes | None
    victim_key: bytes | None
    keys_match: bool
    transcript: Transcript = field(repr=False)

    def __post_init__(self):
        if self.keys_match:
            assert self.attacker_key is not None and self.attacker_key == self.victim_key

    def to_dict(self) -> dict:
        return {
            "attack": self.attack.name,
            "variant": self.variant.name,
            "outcome": self.outcome.name,
            "reason": self.reason,
            "keys_match": self.keys_match,
            "attacker_key_hex": None if self.attacker_key is None else self.attacker_key.hex(),
            "victim_key_hex": None if self.victim_key is None else self.victim_key.hex(),
            "events": self.transcript.to_dicts(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _setup(seed, variant, window, curve, clock):
    """PKG setup and key extraction for both identities, in a fixed order."""
    rng = DeterministicRandom(seed)
    master = pkg_setup(curve, rng)
    server = Party(
        Role.SERVER, extract_key(master, SERVER_ID, rng),
        variant, window, clock, master.public,
    )
    client = Party(
        Role.CLIENT, extract_key(master, CLIENT_ID, rng),
        variant, window, clock, master.public,
    )
    return rng, server, client


def _send(transcript, party, peer_id, rng):
    wire, y = party.build_toward(peer_id, rng)
    transcript.record(party.clock.now, party.role, "SEND", wire)
    return wire, y


def _deliver(transcript, party, wire):
    """Decode and verify at the receiving party, recording the verdict."""
    try:
        verified = party.receive(wire)
    except ProtocolError as exc:
        transcript.record(
            party.clock.now, party.role, f"VERIFY_FAIL({type(exc).__name__})", wire
        )
        raise
    transcript.record(party.clock.now, party.role, "VERIFY_OK", wire)
    return verified


def _derive(transcript, party, peer: VerifiedPeer, own_secret):
    key = party.session_key(peer.peer_id, own_secret, peer.Y)
    transcript.record(party.clock.now, party.role, "DERIVE_KEY", key)
    return key


def run_honest_exchange(
    seed: int,
    variant: Variant,
    message_order: MessageOrder = MessageOrder.SERVER_FIRST,
    *,
    window: int = DEFAULT_WINDOW,
    curve: Curve = TOY_CURVE,
) -> ExchangeResult:
    """Both messages built, delivered, and verified; both keys derived."""
    clock = LogicalClock()
    rng, server, client = _setup(seed, variant, window, curve, clock)
    transcript = Transcript()

    if message_order is MessageOrder.SERVER_FIRST:
        wire_s, y_s = _send(transcript, server, client.id, rng)
        clock.advance(1)
        seen_server = _deliver(transcript, client, wire_s)
        wire_c, y_c = _send(transcript, client, server.id, rng)
        clock.advance(1)
        seen_client = _deliver(transcript, server, wire_c)
    elif message_order is MessageOrder.CLIENT_FIRST:
        wire_c, y_c = _send(transcript, client, server.id, rng)
        clock.advance(1)
        seen_client = _deliver(transcript, server, wire_c)
        wire_s, y_s = _send(transcript, server, client.id, rng)
        clock.advance(1)
        seen_server = _deliver(transcript, client, wire_s)
    elif message_order is MessageOrder.PARALLEL:
        wire_s, y_s = _send(transcript, server, client.id, rng)
        wire_c, y_c = _send(transcript, client, server.id, rng)
        clock.advance(1)
        seen_client = _deliver(transcript, server, wire_c)
        seen_server = _deliver(transcript, client, wire_s)
    else:
        raise ValueError(f"unknown message order {message_order!r}")

    server_key = _derive(transcript, server, seen_client, y_s)
    client_key = _derive(transcript, client, seen_server, y_c)
    return ExchangeResult(variant, message_order, server_key, client_key, transcript)


def _attack_roles(server: Party, client: Party, impersonate: Role):
    """The impersonated party sends the intercepted message; the other verifies."""
    if impersonate is Role.SERVER:
        return server, client
    return client, server


def run_replay_attack(
    seed: int,
    variant: Variant,
    delay: int = DEFAULT_DELAY,
    *,
    window: int = DEFAULT_WINDOW,
    curve: Curve = TOY_CURVE,
    rewrite_timestamp: bool = True,
    impersonate: Role = Role.SERVER,
) -> AttackReport:
    """Intercept one honest message, wait, update its timestamp, replay it.

    With rewrite_timestamp False the captured bytes are replayed untouched,
    which any variant rejects as stale once the delay exceeds the window.
    """
    if delay <= window:
        raise ValueError("delay must exceed the freshness window")
    clock = LogicalClock()
    rng, server, client = _setup(seed, variant, window, curve, clock)
    impersonated, victim = _attack_roles(server, client, impersonate)
    transcript = Transcript()
    adversary = Adversary(curve, impersonating=impersonate)

    wire, _ = _send(transcript, impersonated, victim.id, rng)
    adversary.intercept(wire)
    transcript.record(clock.now, ADVERSARY, "INTERCEPT", wire)

    clock.advance(delay)
    replay_wire = wire
    if rewrite_timestamp:
        replay_wire = adversary.rewrite_timestamp(wire, clock.now)
        transcript.record(clock.now, ADVERSARY, "REWRITE_TIMESTAMP", replay_wire)
    transcript.record(clock.now, ADVERSARY, "REPLAY", replay_wire)

    try:
        accepted = _deliver(transcript, victim, replay_wire)
    except ProtocolError as exc:
        return AttackReport(
            AttackKind.REPLAY, variant, Outcome.DEFEATED, type(exc).__name__,
            None, None, False, transcript,
        )

    # The victim believes the session is live: it responds and derives a key.
    _, y_victim = _send(transcript, victim, accepted.peer_id, rng)
    victim_key = _derive(transcript, victim, accepted, y_victim)
    return AttackReport(
        AttackKind.REPLAY, variant, Outcome.SUCCEEDED, None,
        None, victim_key, False, transcript,
    )


def run_ephemeral_compromise_attack(
    seed: int,
    variant: Variant,
    delay: int = DEFAULT_DELAY,
    *,
    window: int = DEFAULT_WINDOW,
    curve: Curve = TOY_CURVE,
    impersonate: Role = Role.SERVER,
) -> AttackReport:
    """Replay with the intercepted message's ephemeral secret in hand.

    The adversary is granted y at interception time (the leak mechanism is
    out of scope), replays with a fresh timestamp, and derives the same
    session key as the victim whenever the replay is accepted.  delay may be
    any non-negative value; delay=0 is the strictly easier live-session case.
    """
    if delay < 0:
        raise ValueError("delay must be non-negative")
    clock = LogicalClock()
    rng, server, client = _setup(seed, variant, window, curve, clock)
    impersonated, victim = _attack_roles(server, client, impersonate)
    transcript = Transcript()
    adversary = Adversary(curve, impersonating=impersonate)

    wire, y_leaked = _send(transcript, impersonated, victim.id, rng)
    adversary.intercept(wire)
    adversary.grant_ephemeral(y_leaked)
    transcript.record(clock.now, ADVERSARY, "INTERCEPT", wire)

    clock.advance(delay)
    replay_wire = adversary.rewrite_timestamp(wire, clock.now)
    transcript.record(clock.now, ADVERSARY, "REWRITE_TIMESTAMP", replay_wire)
    transcript.record(clock.now, ADVERSARY, "REPLAY", replay_wire)

    try:
        accepted = _deliver(transcript, victim, replay_wire)
    except ProtocolError as exc:
        return AttackReport(
            AttackKind.EPHEMERAL_COMPROMISE, variant, Outcome.DEFEATED,
            type(exc).__name__, None, None, False, transcript,
        )

    response_wire, y_victim = _send(transcript, victim, accepted.peer_id, rng)
    adversary.intercept(response_wire)
    transcript.record(clock.now, ADVERSARY, "INTERCEPT", response_wire)
    victim_key = _derive(transcript, victim, accepted, y_victim)
    attacker_key = adversary.compute_session_key()
    transcript.record(clock.now, ADVERSARY, "DERIVE_KEY", attacker_key)

    keys_match = attacker_key == victim_key
    outcome = Outcome.SUCCEEDED if keys_match else Outcome.DEFEATED
    reason = None if keys_match else "SessionKeyMismatch"
    return AttackReport(
        AttackKind.EPHEMERAL_COMPROMISE, variant, outcome, reason,
        attacker_key, victim_key, keys_match, transcript,
    )


class TamperField(Enum):
    """Wire fields addressable by tamper_field, in encoding order."""

    SENDER_ID = 0
    Y = 1
    H = 2
    MU = 3
    R = 4
    T = 5


def _field_spans(wire: bytes) -> list[tuple[int, int]]:
    if not wire:
        raise MalformedMessage("empty message")
    spans = []
    pos = 1
    for _ in range(6):
        if pos + 2 > len(wire):
            raise MalformedMessage("truncated length prefix")
        length = int.from_bytes(wire[pos:pos + 2], "big")
        pos += 2
        if pos + length > len(wire):
            raise MalformedMessage("truncated field")
        spans.append((pos, pos + length))
        pos += length
    if pos != len(wire):
        raise MalformedMessage("trailing bytes after final field")
    return spans


def tamper_field(wire: bytes, field: TamperField, byte_index: int, xor_mask: int) -> bytes:
    """XOR one byte inside the chosen field of an encoded message."""
    if not 1 <= xor_mask <= 0xFF:
        raise ValueError("xor mask must be a non-zero byte")
    start, end = _field_spans(wire)[field.value]
    if not 0 <= byte_index < end - start:
        raise FieldOutOfRange(
            f"byte {byte_index} outside {field.name} (length {end - start})"
        )
    mutated = bytearray(wire)
    mutated[start + byte_index] ^= xor_mask
    return bytes(mutated)

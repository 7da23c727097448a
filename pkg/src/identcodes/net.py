"""UDP caller/responder for identification-based call setup.

Request datagram:  correlation id (4 bytes) | encoded identification word
Reply datagram:    correlation id (4 bytes) | verdict (1 byte) | reason (1 byte)

The verdict byte is ``0x01`` for ACCEPT and ``0x00`` for REJECT; the reason
byte is a :class:`~identcodes.verdict.Reason` value.  The responder keeps no
per-request state, so datagrams are verified independently and in
parallel.
"""
from __future__ import annotations

import enum
import logging
import random
import socket
import socketserver
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from .bits import symbols_from_hex, symbols_to_hex
from .gf import FieldVector
from .identify_code import CodeSpec, send
from .identify_prng import PrngScheme, prng_send
from .verdict import Reason, Verdict
from .wire import encode_code_word, encode_prng_word, verify_encoded

log = logging.getLogger(__name__)

ACCEPT_BYTE = 0x01
REJECT_BYTE = 0x00
CORR_BYTES = 4


def parse_endpoint(text: str) -> tuple[str, int]:
    host, sep, port = text.rpartition(":")
    if not sep or not port.isdigit():
        raise ValueError(f"endpoint must look like host:port, got {text!r}")
    return host.strip("[]") or "127.0.0.1", int(port)


@dataclass
class Registry:
    """Identifier labels mapped to messages, all under one scheme.

    File format: one ``label hex-encoded-u`` pair per line; ``#`` starts a
    comment.  ``u`` is hex of its k symbols packed at m bits each.
    """

    scheme: CodeSpec | PrngScheme
    entries: dict[str, FieldVector] = field(default_factory=dict)

    def add(self, label: str, u: FieldVector) -> None:
        self.entries[label] = self.scheme.message(u)

    def __getitem__(self, label: str) -> FieldVector:
        return self.entries[label]

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, label: str) -> bool:
        return label in self.entries

    @classmethod
    def parse(cls, text: str, scheme: CodeSpec | PrngScheme) -> Registry:
        reg = cls(scheme)
        f = scheme.field
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"registry line {lineno}: expected 'label hex', got {line!r}")
            label, hexu = parts
            if label in reg.entries:
                raise ValueError(f"registry line {lineno}: duplicate label {label!r}")
            try:
                values = symbols_from_hex(hexu, f.m, scheme.k)
            except ValueError as e:
                raise ValueError(f"registry line {lineno}: {e}") from None
            reg.add(label, FieldVector(f, values))
        return reg

    @classmethod
    def load(cls, path: str | Path, scheme: CodeSpec | PrngScheme) -> Registry:
        return cls.parse(Path(path).read_text(), scheme)

    def dumps(self) -> str:
        m = self.scheme.field.m
        return "".join(f"{label} {symbols_to_hex(u.values, m)}\n" for label, u in self.entries.items())


class _Handler(socketserver.BaseRequestHandler):
    def handle(self):
        data, sock = self.request
        reply = self.server.respond(data)
        sock.sendto(reply, self.client_address)


class Responder(socketserver.ThreadingUDPServer):
    """Answers identification calls on behalf of one registry entry."""

    daemon_threads = True
    allow_reuse_address = True

    def __init__(self, registry: Registry, own_label: str, endpoint=("127.0.0.1", 0), ell: int | None = None):
        if own_label not in registry:
            raise KeyError(f"label {own_label!r} not in registry")
        self.registry = registry
        self.own_label = own_label
        self.own = registry[own_label]
        self.ell = ell
        super().__init__(endpoint, _Handler)

    @property
    def endpoint(self) -> tuple[str, int]:
        return self.server_address[:2]

    def judge(self, word: bytes) -> Verdict:
        return verify_encoded(self.registry.scheme, self.own, word, self.ell)

    def respond(self, data: bytes) -> bytes:
        corr = data[:CORR_BYTES].ljust(CORR_BYTES, b"\0")
        if len(data) < CORR_BYTES:
            verdict = Verdict(False, Reason.SHORT_DATAGRAM)
        else:
            verdict = self.judge(data[CORR_BYTES:])
        if verdict.reason.malformed:
            log.debug("reject %s: %s %s", corr.hex(), verdict.reason.name, verdict.detail)
        return corr + bytes([ACCEPT_BYTE if verdict.accepted else REJECT_BYTE, verdict.reason])

    def start(self) -> threading.Thread:
        """Serve in a background thread; stop with :meth:`shutdown`."""
        t = threading.Thread(target=self.serve_forever, name="identcodes-responder", daemon=True)
        t.start()
        return t


def responder_serve(registry: Registry, own_label: str, endpoint: tuple[str, int], ell: int | None = None) -> None:
    """Serve until interrupted."""
    with Responder(registry, own_label, endpoint, ell) as srv:
        log.info("responder for %r listening on %s:%d", own_label, *srv.endpoint)
        srv.serve_forever()


class CallResult(enum.Enum):
    ACCEPT = "ACCEPT"
    REJECT = "REJECT"
    TIMEOUT = "TIMEOUT"


@dataclass(frozen=True)
class CallOutcome:
    result: CallResult
    reason: Reason | None = None
    attempts: int = 1


class Caller:
    """Sends identification words to one endpoint over a single socket."""

    def __init__(
        self,
        endpoint: tuple[str, int],
        scheme: CodeSpec | PrngScheme,
        ell: int = 1,
        timeout: float = 1.0,
        retries: int = 0,
        rng: random.Random | None = None,
    ):
        self.endpoint = endpoint
        self.scheme = scheme
        self.ell = ell
        self.timeout = timeout
        self.retries = retries
        self.rng = rng if rng is not None else random.SystemRandom()
        self.sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)

    def close(self) -> None:
        self.sock.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def _word(self, u: FieldVector) -> bytes:
        if isinstance(self.scheme, PrngScheme):
            return encode_prng_word(self.scheme, prng_send(self.scheme, u, self.rng))
        return encode_code_word(self.scheme, send(self.scheme, u, self.ell, self.rng))

    def _await(self, corr: bytes) -> bytes | None:
        deadline = time.monotonic() + self.timeout
        while True:
            left = deadline - time.monotonic()
            if left <= 0:
                return None
            self.sock.settimeout(left)
            try:
                data, _ = self.sock.recvfrom(64)
            except socket.timeout:
                return None
            except OSError:
                # ICMP port unreachable surfaces here on some platforms
                time.sleep(min(left, 0.01))
                continue
            if data[:CORR_BYTES] == corr and len(data) >= CORR_BYTES + 2:
                return data

    def call(self, u: FieldVector) -> CallOutcome:
        """One call; a timeout is retried up to ``retries`` times with a fresh word."""
        for attempt in range(1, self.retries + 2):
            corr = self.rng.getrandbits(32).to_bytes(CORR_BYTES, "big")
            try:
                self.sock.sendto(corr + self._word(u), self.endpoint)
            except OSError:
                pass
            reply = self._await(corr)
            if reply is None:
                continue
            verdict = reply[CORR_BYTES]
            try:
                reason = Reason(reply[CORR_BYTES + 1])
            except ValueError:
                reason = None
            result = CallResult.ACCEPT if verdict == ACCEPT_BYTE else CallResult.REJECT
            return CallOutcome(result, reason, attempt)
        return CallOutcome(CallResult.TIMEOUT, None, self.retries + 1)


def caller_call(
    endpoint: tuple[str, int],
    u: FieldVector,
    scheme: CodeSpec | PrngScheme,
    ell: int = 1,
    timeout: float = 1.0,
    retries: int = 0,
    rng: random.Random | None = None,
) -> CallOutcome:
    with Caller(endpoint, scheme, ell, timeout, retries, rng) as c:
        return c.call(u)

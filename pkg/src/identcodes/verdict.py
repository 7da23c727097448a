"""Accept/reject outcome with a machine-readable reason."""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum


class Reason(IntEnum):
    """Reason codes; the numeric value is the byte sent in responder replies."""

    OK = 0
    TAG_MISMATCH = 1
    BAD_VERSION = 2
    UNKNOWN_SCHEME = 3
    TRUNCATED = 4
    NONZERO_PAD = 5
    LENGTH_MISMATCH = 6
    BAD_PARAMS = 7
    PARAM_MISMATCH = 8
    INDEX_RANGE = 9
    UNKNOWN_GENERATOR = 10
    SHORT_DATAGRAM = 11

    @property
    def malformed(self) -> bool:
        return self not in (Reason.OK, Reason.TAG_MISMATCH)


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    reason: Reason = Reason.OK
    detail: str = ""

    @classmethod
    def accept(cls) -> Verdict:
        return cls(True)

    def __bool__(self) -> bool:
        return self.accepted

"""Shared message vocabulary: envelopes, faults, interfaces, and time.

Everything here is an immutable value, safe to copy and share between
concurrent activities. Resilience logic never inspects payloads.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Any, Callable, Iterable, Protocol

from .errors import EnvelopeError

# Milliseconds, virtual or wall time depending on the clock source.
Instant = int
DurationMs = int

CB_FAULT = "CBFault"


class Kind(str, enum.Enum):
    REQUEST = "req"
    RESPONSE = "res"
    FAULT = "fault"


class Origin(str, enum.Enum):
    """Where a fault came from; every non-success outcome has exactly one."""

    BREAKER = "breaker"
    TIMEOUT = "timeout"
    BACKEND = "backend"
    TRANSPORT = "transport"


@dataclass(frozen=True)
class FaultInfo:
    name: str
    detail: str
    origin: Origin

    def __post_init__(self) -> None:
        if not self.name:
            raise EnvelopeError("fault name must be non-empty")
        if self.name == CB_FAULT and self.origin not in (Origin.BREAKER, Origin.TIMEOUT):
            raise EnvelopeError(f"{CB_FAULT} origin must be breaker or timeout, got {self.origin.value}")


@dataclass(frozen=True)
class MessageEnvelope:
    """One request, response, or fault in flight.

    Validation is applied at the edges (factories, codec) rather than in the
    constructor, so malformed frames can be represented long enough to reject.
    """

    correlation_id: str
    kind: Kind
    operation: str
    api: str | None = None
    client_id: str | None = None
    payload: Any = None
    fault: FaultInfo | None = None

    def validate(self) -> None:
        if not self.correlation_id:
            raise EnvelopeError("correlation_id must be non-empty")
        if (self.kind is Kind.FAULT) != (self.fault is not None):
            raise EnvelopeError("fault info must be present iff kind is fault")
        if self.kind is Kind.REQUEST and not self.operation:
            raise EnvelopeError("requests must carry an operation name")


def make_request(
    correlation_id: str,
    operation: str,
    payload: Any = None,
    *,
    api: str | None = None,
    client_id: str | None = None,
) -> MessageEnvelope:
    env = MessageEnvelope(correlation_id, Kind.REQUEST, operation, api, client_id, payload)
    env.validate()
    return env


def make_response(request: MessageEnvelope, payload: Any = None) -> MessageEnvelope:
    if request.kind is not Kind.REQUEST:
        raise EnvelopeError("replies can only be built from a request")
    env = MessageEnvelope(request.correlation_id, Kind.RESPONSE, request.operation, payload=payload)
    env.validate()
    return env


def make_fault_reply(request: MessageEnvelope, fault: FaultInfo) -> MessageEnvelope:
    """Build the fault reply for a request, preserving correlation and operation."""
    if request.kind is not Kind.REQUEST:
        raise EnvelopeError("fault replies can only be built from a request")
    env = MessageEnvelope(request.correlation_id, Kind.FAULT, request.operation, fault=fault)
    env.validate()
    return env


@dataclass(frozen=True)
class InterfaceDescriptor:
    """The operation set of a callable service.

    `augmented` records that every operation may additionally raise the
    breaker fault; augmentation never changes the operation set.
    """

    operations: frozenset[str]
    augmented: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "operations", frozenset(self.operations))
        if not self.operations:
            raise EnvelopeError("an interface needs at least one operation")
        if any(not op for op in self.operations):
            raise EnvelopeError("operation names must be non-empty")


def interface(operations: Iterable[str]) -> InterfaceDescriptor:
    return InterfaceDescriptor(frozenset(operations))


def augment_interface(iface: InterfaceDescriptor) -> InterfaceDescriptor:
    """Mark every operation as able to raise the breaker fault. Pure and idempotent."""
    if iface.augmented:
        return iface
    return replace(iface, augmented=True)


class TimerHandle(Protocol):
    def cancel(self) -> None: ...


class Clock(Protocol):
    """Monotone time source with one-shot timers; wall or virtual."""

    def now(self) -> Instant: ...

    def call_later(self, delay_ms: DurationMs, action: Callable[[], None]) -> TimerHandle: ...

"""Microservice resilience toolkit: circuit breakers in three deployment
topologies, service discovery, an API gateway with runtime API deployment,
and a deterministic simulation harness that exercises all of them."""

from .breaker import (
    BreakerParams,
    BreakerState,
    CircuitBreaker,
    Decision,
    Outcome,
    RollingStats,
    should_trip,
)
from .clocks import VirtualClock, WallClock
from .errors import (
    AlreadyExistsError,
    BreakwaterError,
    ConfigError,
    DeadlineExpired,
    EnvelopeError,
    NotRegisteredError,
    ServiceUnavailableError,
    TransportError,
    UnknownApiError,
)
from .model import (
    CB_FAULT,
    FaultInfo,
    InterfaceDescriptor,
    Kind,
    MessageEnvelope,
    Origin,
    augment_interface,
    interface,
    make_fault_reply,
    make_request,
    make_response,
)
from .rng import SplitMix64
from .wire import DecodeError, EncodeError, canonical_json, decode, encode

__version__ = "0.1.0"

"""Exception types shared across the toolkit."""


class BreakwaterError(Exception):
    """Base class for all toolkit errors."""


class EnvelopeError(BreakwaterError):
    """A message envelope violates its structural invariants."""


class TransportError(BreakwaterError):
    """Delivery failed at the transport level (connection, framing, routing)."""


class DeadlineExpired(BreakwaterError):
    """A call deadline passed before any reply arrived."""


class ConfigError(BreakwaterError):
    """A configuration document is missing, malformed, or violates a constraint."""


class ServiceUnavailableError(BreakwaterError):
    """No live instance is registered for the requested service."""


class NotRegisteredError(BreakwaterError):
    """The named record does not exist in the registry."""


class AlreadyExistsError(BreakwaterError):
    """An API with this name is already deployed."""


class UnknownApiError(BreakwaterError):
    """No route is deployed under this API name."""

"""Circuit-breaker state machine with bucketed rolling statistics.

The breaker is driven purely by explicit events and clock readings: callers
ask for an admission decision with `pre_call`, report what happened with
`record_outcome`, and may deliver reset-timer ticks with `on_reset_timer`.
The reset deadline is also checked lazily inside `pre_call`, so the machine
is correct with or without a timer service.

A breaker instance is a serialized state machine: operations on one instance
are guarded by an internal lock, and distinct instances are independent.
"""
from __future__ import annotations

import enum
import threading
from dataclasses import dataclass

from .model import DurationMs, Instant


@dataclass(frozen=True)
class BreakerParams:
    call_timeout_ms: DurationMs = 20_000
    rolling_window_ms: DurationMs = 60_000
    trip_threshold: float = 0.05
    reset_timeout_ms: DurationMs = 30_000
    min_request_volume: int = 10
    half_open_max_probes: int = 1
    bucket_count: int = 10

    def __post_init__(self) -> None:
        for name in ("call_timeout_ms", "rolling_window_ms", "reset_timeout_ms"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        if not 0.0 < self.trip_threshold <= 1.0:
            raise ValueError("trip_threshold must be in (0, 1]")
        if self.min_request_volume < 1:
            raise ValueError("min_request_volume must be >= 1")
        if self.half_open_max_probes < 1:
            raise ValueError("half_open_max_probes must be >= 1")
        if self.bucket_count < 1:
            raise ValueError("bucket_count must be >= 1")
        if self.rolling_window_ms % self.bucket_count != 0:
            raise ValueError("rolling_window_ms must be divisible by bucket_count")


class BreakerState(str, enum.Enum):
    CLOSED = "closed"
    OPEN = "open"
    HALF_OPEN = "half_open"


class Outcome(str, enum.Enum):
    SUCCESS = "success"
    FAILURE = "failure"
    TIMEOUT = "timeout"


class Decision(enum.Enum):
    ALLOW = "allow"
    REJECT = "reject"


@dataclass(frozen=True)
class Transition:
    at: Instant
    from_state: BreakerState
    to_state: BreakerState
    reason: str


class RollingStats:
    """Success/failure/timeout counters over a trailing window of fixed buckets.

    Expiry happens at bucket boundaries: an event recorded at time t is counted
    while t's bucket is among the most recent `bucket_count` bucket indices.
    """

    __slots__ = ("_width", "_count", "_cells", "_newest")

    def __init__(self, window_ms: DurationMs, bucket_count: int, now: Instant = 0):
        if bucket_count < 1 or window_ms <= 0 or window_ms % bucket_count != 0:
            raise ValueError("window_ms must be a positive multiple of bucket_count")
        self._width = window_ms // bucket_count
        self._count = bucket_count
        self._cells = [[0, 0, 0] for _ in range(bucket_count)]
        self._newest = now // self._width

    @property
    def bucket_width_ms(self) -> DurationMs:
        return self._width

    def _advance(self, now: Instant) -> None:
        idx = now // self._width
        if idx <= self._newest:
            return
        for k in range(1, min(idx - self._newest, self._count) + 1):
            self._cells[(self._newest + k) % self._count] = [0, 0, 0]
        self._newest = idx

    def record(self, outcome: Outcome, now: Instant) -> None:
        self._advance(now)
        cell = self._cells[(now // self._width) % self._count]
        if outcome is Outcome.SUCCESS:
            cell[0] += 1
        elif outcome is Outcome.FAILURE:
            cell[1] += 1
        else:
            cell[2] += 1

    def counts(self, now: Instant) -> tuple[int, int, int]:
        self._advance(now)
        successes = sum(c[0] for c in self._cells)
        failures = sum(c[1] for c in self._cells)
        timeouts = sum(c[2] for c in self._cells)
        return successes, failures, timeouts

    def error_rate(self, now: Instant) -> tuple[float, int]:
        """Fraction of failures+timeouts over live events, with the live total.

        An empty window reports (0.0, 0) rather than dividing by zero.
        """
        successes, failures, timeouts = self.counts(now)
        total = successes + failures + timeouts
        if total == 0:
            return 0.0, 0
        return (failures + timeouts) / total, total

    def reset(self, now: Instant) -> None:
        for cell in self._cells:
            cell[0] = cell[1] = cell[2] = 0
        self._newest = now // self._width


def should_trip(stats: RollingStats, params: BreakerParams, now: Instant) -> bool:
    """True iff the window holds enough volume and the error rate meets the
    threshold (inclusive)."""
    rate, total = stats.error_rate(now)
    return total >= params.min_request_volume and rate >= params.trip_threshold


class CircuitBreaker:
    """Closed / Open / Half-open admission control around one target.

    Closed passes calls and trips when the windowed error rate crosses the
    threshold. Open rejects everything until the reset deadline, then admits a
    bounded number of probes (half-open). Any probe failure reopens the
    circuit; enough probe successes close it and clear the counters.
    """

    def __init__(self, params: BreakerParams | None = None, *, now: Instant = 0, name: str = ""):
        self.params = params or BreakerParams()
        self.name = name
        self._state = BreakerState.CLOSED
        self._stats = RollingStats(self.params.rolling_window_ms, self.params.bucket_count, now)
        self._opened_at: Instant | None = None
        self._probes_used = 0
        self._half_open_successes = 0
        self._log: list[Transition] = []
        self._lock = threading.RLock()

    @property
    def state(self) -> BreakerState:
        return self._state

    @property
    def opened_at(self) -> Instant | None:
        return self._opened_at

    @property
    def probes_used(self) -> int:
        return self._probes_used

    @property
    def transition_log(self) -> list[Transition]:
        return self._log

    def _set_state(self, to_state: BreakerState, now: Instant, reason: str) -> None:
        self._log.append(Transition(now, self._state, to_state, reason))
        self._state = to_state

    def _enter_half_open(self, now: Instant, reason: str) -> None:
        self._set_state(BreakerState.HALF_OPEN, now, reason)
        self._opened_at = None
        self._probes_used = 0
        self._half_open_successes = 0
        self._stats.reset(now)

    def _trip(self, now: Instant, reason: str) -> None:
        self._set_state(BreakerState.OPEN, now, reason)
        self._opened_at = now

    def pre_call(self, now: Instant) -> Decision:
        """Admission decision for a call starting now. Total: never raises."""
        with self._lock:
            if self._state is BreakerState.CLOSED:
                return Decision.ALLOW
            if self._state is BreakerState.OPEN:
                if now < self._opened_at + self.params.reset_timeout_ms:
                    return Decision.REJECT
                self._enter_half_open(now, "attempt_reset")
            if self._probes_used < self.params.half_open_max_probes:
                self._probes_used += 1
                return Decision.ALLOW
            return Decision.REJECT

    def record_outcome(self, outcome: Outcome, now: Instant) -> None:
        """Feed one observed call outcome into the window and the state machine."""
        with self._lock:
            self._stats.record(outcome, now)
            if self._state is BreakerState.CLOSED:
                if outcome is not Outcome.SUCCESS and should_trip(self._stats, self.params, now):
                    self._trip(now, "threshold")
            elif self._state is BreakerState.HALF_OPEN:
                if outcome is Outcome.SUCCESS:
                    self._half_open_successes += 1
                    if self._half_open_successes >= self.params.half_open_max_probes:
                        self._set_state(BreakerState.CLOSED, now, "probe_success")
                        self._opened_at = None
                        self._stats.reset(now)
                else:
                    self._trip(now, "probe_failure")
            # While open: late replies from calls admitted earlier only update
            # the window; no transition can originate here.

    def trip(self, now: Instant, reason: str = "threshold") -> None:
        """Force the circuit open. Tripping an already-open breaker is a
        logged no-op (self-loop entry)."""
        with self._lock:
            if self._state is BreakerState.OPEN:
                self._log.append(Transition(now, BreakerState.OPEN, BreakerState.OPEN, "redundant_trip"))
                return
            self._trip(now, reason)

    def on_reset_timer(self, now: Instant) -> None:
        """Reset-timer tick: move Open to Half-open once the deadline passed.

        Stale ticks (wrong state, or arriving before the deadline of a newer
        trip) are no-ops.
        """
        with self._lock:
            if self._state is BreakerState.OPEN and now >= self._opened_at + self.params.reset_timeout_ms:
                self._enter_half_open(now, "attempt_reset")

    def refund_probe(self, now: Instant) -> None:
        """Return one half-open probe that was admitted but never dispatched.

        Used by dual-gate deployments when a second gate rejects after this
        breaker allowed: without the refund the probe budget would leak and the
        breaker could stay half-open forever.
        """
        with self._lock:
            if self._state is BreakerState.HALF_OPEN and self._probes_used > 0:
                self._probes_used -= 1

    def error_rate(self, now: Instant) -> tuple[float, int]:
        with self._lock:
            return self._stats.error_rate(now)

"""Clock sources: wall time for serving, a virtual event queue for simulation."""
from __future__ import annotations

import heapq
import itertools
import threading
import time
from typing import Callable

from .model import DurationMs, Instant


class ScheduledCall:
    """Handle for one pending virtual-clock action; cancellation is lazy."""

    __slots__ = ("at", "seq", "action", "cancelled")

    def __init__(self, at: Instant, seq: int, action: Callable[[], None]):
        self.at = at
        self.seq = seq
        self.action = action
        self.cancelled = False

    def cancel(self) -> None:
        self.cancelled = True

    def __lt__(self, other: "ScheduledCall") -> bool:
        return (self.at, self.seq) < (other.at, other.seq)


class VirtualClock:
    """Discrete-event virtual time.

    Time never decreases; simultaneous events run in scheduling order (ties
    broken by a sequence number), which makes runs fully deterministic.
    """

    def __init__(self, start_ms: Instant = 0):
        self._now = start_ms
        self._heap: list[ScheduledCall] = []
        self._seq = itertools.count()

    def now(self) -> Instant:
        return self._now

    def call_at(self, at_ms: Instant, action: Callable[[], None]) -> ScheduledCall:
        handle = ScheduledCall(max(at_ms, self._now), next(self._seq), action)
        heapq.heappush(self._heap, handle)
        return handle

    def call_later(self, delay_ms: DurationMs, action: Callable[[], None]) -> ScheduledCall:
        return self.call_at(self._now + delay_ms, action)

    def pending(self) -> int:
        return sum(1 for h in self._heap if not h.cancelled)

    def run_until(self, t_end: Instant) -> None:
        """Execute every event scheduled at or before t_end, then land on t_end."""
        while self._heap and self._heap[0].at <= t_end:
            handle = heapq.heappop(self._heap)
            if handle.cancelled:
                continue
            self._now = handle.at
            handle.action()
        if t_end > self._now:
            self._now = t_end

    def run_all(self, limit: int = 1_000_000) -> None:
        """Drain the queue completely (bounded, to surface runaway schedules)."""
        for _ in range(limit):
            if not self._heap:
                return
            handle = heapq.heappop(self._heap)
            if handle.cancelled:
                continue
            self._now = handle.at
            handle.action()
        raise RuntimeError(f"event queue did not drain within {limit} events")


class _WallTimer:
    __slots__ = ("_timer",)

    def __init__(self, timer: threading.Timer):
        self._timer = timer

    def cancel(self) -> None:
        self._timer.cancel()


class WallClock:
    """Monotonic wall time in milliseconds with thread-based one-shot timers."""

    def now(self) -> Instant:
        return int(time.monotonic() * 1000)

    def call_later(self, delay_ms: DurationMs, action: Callable[[], None]) -> _WallTimer:
        timer = threading.Timer(delay_ms / 1000.0, action)
        timer.daemon = True
        timer.start()
        return _WallTimer(timer)

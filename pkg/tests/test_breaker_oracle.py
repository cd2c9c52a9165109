"""Rolling-window statistics checked against a brute-force replay oracle.

The oracle rescans the full outcome trace at every query, computing window
membership at bucket granularity from scratch. It is deliberately independent
of the incremental ring-buffer implementation it checks.
"""
import random

import pytest

from breakwater.breaker import BreakerParams, Outcome, RollingStats, should_trip

OUTCOMES = (Outcome.SUCCESS, Outcome.FAILURE, Outcome.TIMEOUT)


def oracle_counts(trace, now, window_ms, bucket_count):
    """Recount the whole trace: an event is live iff its bucket index is one
    of the most recent `bucket_count` bucket indices at query time."""
    width = window_ms // bucket_count
    oldest_live_bucket = now // width - (bucket_count - 1)
    successes = failures = timeouts = 0
    for t, outcome in trace:
        if t > now or t // width < oldest_live_bucket:
            continue
        if outcome is Outcome.SUCCESS:
            successes += 1
        elif outcome is Outcome.FAILURE:
            failures += 1
        else:
            timeouts += 1
    return successes, failures, timeouts


def oracle_error_rate(trace, now, window_ms, bucket_count):
    s, f, t = oracle_counts(trace, now, window_ms, bucket_count)
    total = s + f + t
    if total == 0:
        return 0.0, 0
    return (f + t) / total, total


def oracle_should_trip(trace, now, params):
    rate, total = oracle_error_rate(trace, now, params.rolling_window_ms, params.bucket_count)
    return total >= params.min_request_volume and rate >= params.trip_threshold


def random_trace(rng, *, events, max_step_ms):
    trace = []
    t = rng.randrange(0, 5_000)
    for _ in range(events):
        t += rng.randrange(0, max_step_ms)
        trace.append((t, rng.choice(OUTCOMES)))
    return trace


def test_error_rate_matches_oracle_on_random_traces():
    # All instants handed to the stats (records and queries alike) are
    # monotone, per the contract; queries sit between consecutive events.
    rng = random.Random(0xB0C1)
    params = BreakerParams(rolling_window_ms=600, bucket_count=6, min_request_volume=5)
    for _ in range(300):
        trace = random_trace(rng, events=40, max_step_ms=180)
        stats = RollingStats(params.rolling_window_ms, params.bucket_count)
        for i, (t, outcome) in enumerate(trace):
            stats.record(outcome, t)
            if rng.random() < 0.25:
                upper = trace[i + 1][0] if i + 1 < len(trace) else t + 900
                q = rng.randrange(t, upper + 1)
                assert stats.error_rate(q) == oracle_error_rate(
                    trace[: i + 1], q, params.rolling_window_ms, params.bucket_count
                )
                assert should_trip(stats, params, q) == oracle_should_trip(trace[: i + 1], q, params)


def test_counts_match_oracle_across_bucket_expiry():
    params = BreakerParams(rolling_window_ms=1000, bucket_count=10)
    stats = RollingStats(1000, 10)
    trace = [(0, Outcome.FAILURE), (450, Outcome.SUCCESS), (990, Outcome.SUCCESS)]
    for t, o in trace:
        stats.record(o, t)
    # Query points straddle the expiry of the t=0 event at bucket granularity.
    for q in (990, 1000, 1050, 1100, 1500, 2100):
        assert stats.counts(q) == oracle_counts(trace, q, 1000, 10)
        assert stats.error_rate(q) == oracle_error_rate(trace, q, 1000, 10)


def test_window_soundness_bounds():
    # Recorded at t, an event never influences queries at now - t >= window + width,
    # and always counts when now - t < window - width.
    window, buckets = 600, 6
    width = window // buckets
    for t in (0, 37, 99, 100, 101, 250):
        stats = RollingStats(window, buckets)
        stats.record(Outcome.FAILURE, t)
        assert stats.counts(t + window - width - 1)[1] == 1
        assert stats.counts(t + window + width)[1] == 0


@pytest.mark.parametrize("window,buckets", [(600, 6), (1000, 10), (60000, 10)])
def test_reset_empties_the_window(window, buckets):
    stats = RollingStats(window, buckets)
    for t in range(0, window, window // buckets):
        stats.record(Outcome.FAILURE, t)
    stats.reset(window)
    assert stats.error_rate(window) == (0.0, 0)

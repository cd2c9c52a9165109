"""Envelope, fault, and interface vocabulary."""
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from breakwater.errors import EnvelopeError
from breakwater.model import (
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


def test_augment_marks_interface():
    iface = interface({"getProduct"})
    out = augment_interface(iface)
    assert out.augmented is True
    assert out.operations == frozenset({"getProduct"})
    assert iface.augmented is False  # input untouched


def test_augment_is_idempotent():
    iface = augment_interface(interface({"a", "b"}))
    assert augment_interface(iface) == iface


@given(st.sets(st.text(min_size=1, max_size=12), min_size=1, max_size=50))
def test_augment_preserves_operation_set(ops):
    iface = interface(ops)
    out = augment_interface(iface)
    assert out.operations == iface.operations
    assert out.augmented


def test_interface_rejects_empty():
    with pytest.raises(EnvelopeError):
        InterfaceDescriptor(frozenset())


def test_fault_reply_copies_correlation_and_operation():
    req = make_request("7", "x")
    fault = make_fault_reply(req, FaultInfo(CB_FAULT, "circuit open", Origin.BREAKER))
    assert fault.kind is Kind.FAULT
    assert fault.correlation_id == "7"
    assert fault.operation == "x"
    assert fault.fault.name == CB_FAULT


def test_fault_reply_carries_timeout_origin():
    req = make_request("9", "op")
    fault = make_fault_reply(req, FaultInfo(CB_FAULT, "call timeout", Origin.TIMEOUT))
    assert fault.fault.origin is Origin.TIMEOUT
    assert fault.fault.detail == "call timeout"


def test_fault_reply_rejects_non_requests():
    req = make_request("1", "x")
    res = make_response(req)
    with pytest.raises(EnvelopeError):
        make_fault_reply(res, FaultInfo("Any", "", Origin.BACKEND))


def test_cbfault_origin_is_restricted():
    with pytest.raises(EnvelopeError):
        FaultInfo(CB_FAULT, "bad", Origin.BACKEND)
    with pytest.raises(EnvelopeError):
        FaultInfo(CB_FAULT, "bad", Origin.TRANSPORT)
    FaultInfo(CB_FAULT, "ok", Origin.BREAKER)
    FaultInfo(CB_FAULT, "ok", Origin.TIMEOUT)
    FaultInfo("OutOfStock", "ok", Origin.BACKEND)


def test_envelope_validation():
    with pytest.raises(EnvelopeError):
        MessageEnvelope("1", Kind.FAULT, "x").validate()  # fault kind without info
    with pytest.raises(EnvelopeError):
        MessageEnvelope("1", Kind.REQUEST, "").validate()  # request without operation
    with pytest.raises(EnvelopeError):
        make_request("", "x")
    ok = MessageEnvelope("1", Kind.RESPONSE, "x", payload={"n": 1})
    ok.validate()


def test_augment_is_pure_under_random_inputs():
    rng = random.Random(3)
    for _ in range(50):
        ops = frozenset(f"op{rng.randrange(1000)}" for _ in range(rng.randrange(1, 20)))
        iface = InterfaceDescriptor(ops)
        first = augment_interface(iface)
        second = augment_interface(iface)
        assert first == second
        assert iface.operations == ops

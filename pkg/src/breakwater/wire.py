"""Newline-delimited frame codec with a canonical byte encoding.

One envelope per line, JSON-shaped, version-tagged. The top-level key order
is fixed (v, id, kind, op, api, client, payload, fault), absent optionals are
omitted, payload keys are sorted, and whitespace is minimal — so equal
envelopes always produce equal bytes. Unknown fields are ignored on decode
for forward compatibility; any version other than 1 is rejected.
"""
from __future__ import annotations

import json
from typing import Any

from .errors import BreakwaterError, EnvelopeError
from .model import FaultInfo, Kind, MessageEnvelope, Origin

PROTOCOL_VERSION = 1


class EncodeError(BreakwaterError):
    """The envelope is invalid or its payload has no canonical representation."""


class DecodeError(BreakwaterError):
    """A frame could not be decoded. Never fatal to a connection: the caller
    skips the offending line and keeps reading."""

    def __init__(self, reason: str, message: str, position: int | None = None):
        super().__init__(message)
        self.reason = reason  # "malformed" | "unsupported_version" | "invalid"
        self.position = position


def canonical_json(value: Any) -> str:
    """Deterministic JSON for structured values: sorted keys, no whitespace."""
    try:
        return json.dumps(value, sort_keys=True, separators=(",", ":"), allow_nan=False)
    except (TypeError, ValueError) as exc:
        raise EncodeError(f"value has no canonical encoding: {exc}") from exc


def encode(envelope: MessageEnvelope) -> bytes:
    """Serialize one envelope to its canonical single-line frame."""
    try:
        envelope.validate()
    except EnvelopeError as exc:
        raise EncodeError(str(exc)) from exc
    parts = [
        f'"v":{PROTOCOL_VERSION}',
        f'"id":{canonical_json(envelope.correlation_id)}',
        f'"kind":{canonical_json(envelope.kind.value)}',
        f'"op":{canonical_json(envelope.operation)}',
    ]
    if envelope.api is not None:
        parts.append(f'"api":{canonical_json(envelope.api)}')
    if envelope.client_id is not None:
        parts.append(f'"client":{canonical_json(envelope.client_id)}')
    if envelope.payload is not None:
        parts.append(f'"payload":{canonical_json(envelope.payload)}')
    if envelope.fault is not None:
        fault = (
            f'{{"name":{canonical_json(envelope.fault.name)}'
            f',"detail":{canonical_json(envelope.fault.detail)}'
            f',"origin":{canonical_json(envelope.fault.origin.value)}}}'
        )
        parts.append(f'"fault":{fault}')
    return ("{" + ",".join(parts) + "}\n").encode("utf-8")


_KINDS = {k.value: k for k in Kind}
_ORIGINS = {o.value: o for o in Origin}


def _require(obj: dict, field: str, types, position: int | None = None):
    if field not in obj:
        raise DecodeError("invalid", f"missing required field {field!r}", position)
    value = obj[field]
    if not isinstance(value, types):
        raise DecodeError("invalid", f"field {field!r} has the wrong type", position)
    return value


def decode(line: bytes | str) -> MessageEnvelope:
    """Parse one frame line back into an envelope."""
    if isinstance(line, bytes):
        try:
            line = line.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DecodeError("malformed", f"frame is not valid UTF-8: {exc}", exc.start) from exc
    text = line.strip("\r\n")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DecodeError("malformed", f"frame is not valid JSON: {exc.msg}", exc.pos) from exc
    if not isinstance(obj, dict):
        raise DecodeError("malformed", "frame must be a JSON object")
    version = _require(obj, "v", int)
    if version != PROTOCOL_VERSION:
        raise DecodeError("unsupported_version", f"unsupported frame version {version}")
    correlation_id = _require(obj, "id", str)
    kind_text = _require(obj, "kind", str)
    if kind_text not in _KINDS:
        raise DecodeError("invalid", f"unknown kind {kind_text!r}")
    kind = _KINDS[kind_text]
    operation = _require(obj, "op", str)
    api = obj.get("api")
    client = obj.get("client")
    if api is not None and not isinstance(api, str):
        raise DecodeError("invalid", "field 'api' has the wrong type")
    if client is not None and not isinstance(client, str):
        raise DecodeError("invalid", "field 'client' has the wrong type")
    fault = None
    if kind is Kind.FAULT:
        fault_obj = _require(obj, "fault", dict)
        origin_text = _require(fault_obj, "origin", str, None)
        if origin_text not in _ORIGINS:
            raise DecodeError("invalid", f"unknown fault origin {origin_text!r}")
        try:
            fault = FaultInfo(
                _require(fault_obj, "name", str),
                _require(fault_obj, "detail", str),
                _ORIGINS[origin_text],
            )
        except EnvelopeError as exc:
            raise DecodeError("invalid", str(exc)) from exc
    envelope = MessageEnvelope(
        correlation_id=correlation_id,
        kind=kind,
        operation=operation,
        api=api,
        client_id=client,
        payload=obj.get("payload"),
        fault=fault,
    )
    try:
        envelope.validate()
    except EnvelopeError as exc:
        raise DecodeError("invalid", str(exc)) from exc
    return envelope

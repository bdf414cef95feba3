"""Reading and writing the ``.psf`` field format.

A file is one line of JSON (the header) terminated by a newline, followed by
little-endian float64 pairs ``(re, im)`` in row-major order.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import PhaseSpaceError
from .grid import Axis, PhaseSpaceField, SampledSignal, Symbol4Field

DTYPE_TAG = "complex128-le-interleaved"
FORMAT_VERSION = 1


class PsfFormatError(PhaseSpaceError, IOError):
    """Malformed ``.psf`` content."""


def _kind(obj) -> str:
    if isinstance(obj, SampledSignal):
        return "signal"
    if isinstance(obj, PhaseSpaceField):
        return "field"
    if isinstance(obj, Symbol4Field):
        return "symbol4"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_bytes(obj, meta: dict | None = None) -> bytes:
    kind = _kind(obj)
    axes = [obj.axis] if isinstance(obj, SampledSignal) else list(obj.axes)
    header = {
        "format": "psf",
        "version": FORMAT_VERSION,
        "kind": kind,
        "dim": 1,
        "dtype": DTYPE_TAG,
        "axes": [a.to_dict() for a in axes],
        "meta": meta or {},
    }
    head = json.dumps(header, sort_keys=True).encode("utf-8") + b"\n"
    vals = np.ascontiguousarray(obj.values, dtype=np.complex128)
    body = vals.view(np.float64).astype("<f8", copy=False).tobytes()
    return head + body


def from_bytes(data: bytes):
    nl = data.find(b"\n")
    if nl < 0:
        raise PsfFormatError("missing header line")
    try:
        header = json.loads(data[:nl].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise PsfFormatError(f"bad header: {exc}") from exc
    if header.get("format") != "psf" or header.get("dtype") != DTYPE_TAG:
        raise PsfFormatError("unsupported header")
    axes = [Axis(int(a["n"]), float(a["extent"])) for a in header["axes"]]
    shape = tuple(a.n for a in axes)
    raw = np.frombuffer(data[nl + 1:], dtype="<f8")
    if raw.size != 2 * int(np.prod(shape)):
        raise PsfFormatError("payload size does not match header axes")
    vals = raw.astype(np.float64).view(np.complex128).reshape(shape)
    kind = header.get("kind")
    if kind == "signal" and len(axes) == 1:
        obj = SampledSignal(axes[0], vals.copy())
    elif kind == "field" and len(axes) == 2:
        obj = PhaseSpaceField(tuple(axes), vals.copy())
    elif kind == "symbol4" and len(axes) == 4:
        obj = Symbol4Field(tuple(axes), vals.copy())
    else:
        raise PsfFormatError(f"inconsistent kind {kind!r} for {len(axes)} axes")
    return obj, header.get("meta", {})


def write_psf(path, obj, meta: dict | None = None) -> None:
    Path(path).write_bytes(to_bytes(obj, meta))


def read_psf(path):
    """Return ``(object, meta)`` from a ``.psf`` file."""
    return from_bytes(Path(path).read_bytes())

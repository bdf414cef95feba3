import json

import numpy as np
import pytest

from phasespace.grid import Axis, PhaseSpaceField, SampledSignal, Symbol4Field
from phasespace.psf import PsfFormatError, from_bytes, read_psf, to_bytes, write_psf
from phasespace.signals import chirped_gaussian


def _random_field(seed=0):
    rng = np.random.default_rng(seed)
    ax = Axis(16, 2.0)
    return PhaseSpaceField((ax, ax.dual()), rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16)))


def test_field_round_trip_is_bit_exact(tmp_path):
    F = _random_field()
    path = tmp_path / "f.psf"
    write_psf(path, F, {"note": "x"})
    G, meta = read_psf(path)
    assert isinstance(G, PhaseSpaceField)
    assert np.array_equal(G.values, F.values)
    assert all(a.close_to(b) for a, b in zip(G.axes, F.axes))
    assert meta == {"note": "x"}


def test_signal_round_trip():
    f = chirped_gaussian(Axis(32, 3.0), 0.7)
    g, _ = from_bytes(to_bytes(f))
    assert isinstance(g, SampledSignal)
    assert np.array_equal(g.values, f.values)


def test_symbol4_round_trip():
    ax = Axis(8, 1.0)
    axes = (ax, ax.dual(), ax.dual(), ax)
    vals = np.arange(8 ** 4, dtype=float).reshape(8, 8, 8, 8) * (1 + 1j)
    s, _ = from_bytes(to_bytes(Symbol4Field(axes, vals)))
    assert isinstance(s, Symbol4Field)
    assert np.array_equal(s.values, vals)


def test_header_layout():
    data = to_bytes(_random_field())
    header = json.loads(data[:data.index(b"\n")])
    assert header["format"] == "psf"
    assert header["kind"] == "field"
    assert header["axes"][0] == {"n": 16, "extent": 2.0}
    assert len(data) - data.index(b"\n") - 1 == 16 * 16 * 16


def test_serialization_is_deterministic():
    assert to_bytes(_random_field(3), {"b": 1, "a": 2}) == to_bytes(_random_field(3), {"a": 2, "b": 1})


@pytest.mark.parametrize("data", [b"no newline", b"{not json\n", b'{"format": "other"}\n'])
def test_bad_header(data):
    with pytest.raises(PsfFormatError):
        from_bytes(data)


def test_truncated_payload():
    data = to_bytes(_random_field())
    with pytest.raises(PsfFormatError):
        from_bytes(data[:-8])


def test_unsupported_object():
    with pytest.raises(TypeError):
        to_bytes(np.zeros(3))

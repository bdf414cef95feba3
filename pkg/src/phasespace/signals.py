"""Built-in test signals on a centered axis."""
from __future__ import annotations

import numpy as np
from scipy.special import erfc, eval_hermite, gammaln

from .errors import DomainError
from .grid import Axis, SampledSignal


def gaussian(axis: Axis, lam: float = 1.0, center: float = 0.0, freq: float = 0.0) -> SampledSignal:
    """``exp(-pi lam (t - center)^2) exp(2 pi i freq t)``."""
    if lam <= 0:
        raise DomainError("gaussian needs lam > 0")
    t = axis.points
    return SampledSignal(axis, np.exp(-np.pi * lam * (t - center) ** 2 + 2j * np.pi * freq * t))


def hermite(axis: Axis, k: int) -> SampledSignal:
    """L2-normalized Hermite function of order ``k`` adapted to ``exp(-pi t^2)``."""
    if k < 0:
        raise DomainError("hermite order must be >= 0")
    t = axis.points
    s = np.sqrt(2 * np.pi) * t
    lognorm = 0.25 * np.log(2.0) - 0.5 * (k * np.log(2.0) + gammaln(k + 1))
    vals = np.exp(lognorm) * eval_hermite(k, s) * np.exp(-np.pi * t ** 2)
    return SampledSignal(axis, vals)


def chirped_gaussian(axis: Axis, c: float = 1.0, lam: float = 1.0) -> SampledSignal:
    """``exp(-pi (lam + i c) t^2)``."""
    t = axis.points
    return SampledSignal(axis, np.exp(-np.pi * (lam + 1j * c) * t ** 2))


def delta_like(axis: Axis, width: float | None = None, center: float = 0.0) -> SampledSignal:
    """Unit-mass narrow Gaussian standing in for a Dirac mass (default width ``2 step``)."""
    w = 2 * axis.step if width is None else float(width)
    if w <= 0:
        raise DomainError("width must be positive")
    t = axis.points
    return SampledSignal(axis, np.exp(-np.pi * ((t - center) / w) ** 2) / w)


def constant(axis: Axis, value: complex = 1.0) -> SampledSignal:
    return SampledSignal(axis, np.full(axis.n, value, dtype=complex))


def _smooth_step(s: np.ndarray) -> np.ndarray:
    """C-infinity transition from 0 (s <= 0) to 1 (s >= 1)."""
    s = np.clip(s, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(s > 0, np.exp(-1.0 / np.where(s > 0, s, 1.0)), 0.0)
        b = np.where(s < 1, np.exp(-1.0 / np.where(s < 1, 1.0 - s, 1.0)), 0.0)
    return a / (a + b)


def bump(axis: Axis, edge: float = 3.0) -> SampledSignal:
    """Smooth ramp on ``[-1, -1/2]``, equal to 1 on ``[-1/2, 0)``, zero for ``t > 0``.

    The jump at the origin is an ``erfc`` edge ``edge`` grid steps wide, so it
    is resolved by the band-limited model.  ``edge=0`` samples a hard jump
    (midpoint value 1/2).
    """
    t = axis.points
    ramp = np.where(t < 0, _smooth_step(2.0 * (t + 1.0)), 0.0)
    if edge > 0:
        w = edge * axis.step
        vals = _smooth_step(2.0 * (t + 1.0)) * 0.5 * erfc(np.sqrt(np.pi) * t / w)
    else:
        vals = np.where(t == 0, 0.5, ramp)
    return SampledSignal(axis, vals.astype(complex))


def ghost_partner(f: SampledSignal) -> SampledSignal:
    """``t -> -2 pi fhat(t)`` evaluated by direct quadrature on the signal grid."""
    t = f.axis.points
    kern = np.exp(-2j * np.pi * np.outer(t, t))
    fhat = kern @ f.values * f.axis.step
    return f.with_values(-2 * np.pi * fhat)


FAMILIES = {
    "gaussian": gaussian,
    "hermite": hermite,
    "chirped-gaussian": chirped_gaussian,
    "bump": bump,
    "delta-like": delta_like,
}


def make_signal(axis: Axis, family: str, **params) -> SampledSignal:
    """Build a named signal family (``gaussian``, ``hermite``, ...)."""
    try:
        fn = FAMILIES[family]
    except KeyError:
        raise DomainError(f"unknown signal family {family!r}") from None
    return fn(axis, **params)

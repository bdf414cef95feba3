"""Sampling grids, centered Fourier transforms and band-limited resampling.

All grids are centered: sample ``k`` of an axis with ``n`` points and extent
``R`` sits at ``t_k = (k - n/2) * step`` with ``step = 2R/n``, so the origin is
always a grid point.  The continuous Fourier transform uses the kernel
``exp(-2 pi i t w)`` and every discrete sum that stands for an integral carries
the explicit quadrature weight (the grid step).

Off-grid evaluation follows the periodic band-limited model: a sampled signal
is identified with the trigonometric polynomial that interpolates it on one
period ``[-R, R)``.  The Nyquist coefficient is split symmetrically so that
real samples have a real interpolant.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

from .errors import GridMismatchError, NumericalGuardError, SingularMatrixError, SizingError, DomainError

THREADS_ENV = "PHASESPACE_THREADS"
MAX_4D_ENTRIES = 32 ** 4
_CHUNK = 1 << 14


def fft_workers() -> int:
    """Worker count for the FFT backend, read from ``PHASESPACE_THREADS``."""
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _is_pow2(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Axis:
    """Centered uniform axis with ``n`` samples covering ``[-extent, extent)``."""

    n: int
    extent: float

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or not _is_pow2(int(self.n)) or self.n < 8:
            raise SizingError(f"axis size must be a power of two >= 8, got {self.n}")
        if not np.isfinite(self.extent) or self.extent <= 0:
            raise SizingError(f"axis extent must be positive, got {self.extent}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "extent", float(self.extent))

    @property
    def step(self) -> float:
        return 2.0 * self.extent / self.n

    @property
    def dual_step(self) -> float:
        return 1.0 / (self.n * self.step)

    @property
    def points(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.step

    def dual(self) -> "Axis":
        """Frequency axis paired with this one by the discrete transform."""
        return Axis(self.n, 0.5 / self.step)

    def close_to(self, other: "Axis", rtol: float = 1e-12) -> bool:
        return self.n == other.n and abs(self.extent - other.extent) <= rtol * max(self.extent, other.extent)

    def to_dict(self) -> dict:
        return {"n": self.n, "extent": self.extent}


def square_axis(n: int) -> Axis:
    """Axis whose step equals its dual step (``step**2 = 1/n``)."""
    return Axis(n, 0.5 * np.sqrt(n))


def _as_complex(values) -> np.ndarray:
    arr = np.asarray(values, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise DomainError("non-finite sample values")
    return arr


@dataclass(frozen=True)
class SampledSignal:
    """Complex samples of a function on a centered axis."""

    axis: Axis
    values: np.ndarray
    dim: int = 1

    def __post_init__(self):
        vals = _as_complex(self.values)
        if vals.shape != (self.axis.n,):
            raise GridMismatchError(f"expected {self.axis.n} samples, got shape {vals.shape}")
        object.__setattr__(self, "values", vals)

    @property
    def t(self) -> np.ndarray:
        return self.axis.points

    def with_values(self, values) -> "SampledSignal":
        return SampledSignal(self.axis, values, self.dim)

    def inner(self, other: "SampledSignal") -> complex:
        """Quadrature inner product, linear in the first slot."""
        _check_same_axis(self.axis, other.axis)
        return complex(np.sum(self.values * np.conj(other.values)) * self.axis.step)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.axis.step))

    def conj(self) -> "SampledSignal":
        return self.with_values(np.conj(self.values))


@dataclass(frozen=True)
class PhaseSpaceField:
    """Samples of a function of ``z = (x, xi)`` on a pair of axes."""

    axes: tuple
    values: np.ndarray

    def __post_init__(self):
        vals = _as_complex(self.values)
        ax = tuple(self.axes)
        if len(ax) != 2 or vals.shape != (ax[0].n, ax[1].n):
            raise GridMismatchError("field shape does not match its axes")
        object.__setattr__(self, "axes", ax)
        object.__setattr__(self, "values", vals)

    @property
    def cell(self) -> float:
        return self.axes[0].step * self.axes[1].step

    def mesh(self):
        return np.meshgrid(self.axes[0].points, self.axes[1].points, indexing="ij")

    def with_values(self, values) -> "PhaseSpaceField":
        return PhaseSpaceField(self.axes, values)

    def inner(self, other: "PhaseSpaceField") -> complex:
        _check_same_axes(self.axes, other.axes)
        return complex(np.sum(self.values * np.conj(other.values)) * self.cell)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.cell))


@dataclass(frozen=True)
class Symbol4Field:
    """Samples of a function of ``(x, xi, u, v)``; ``u, v`` are dual to ``x, xi``."""

    axes: tuple
    values: np.ndarray

    def __post_init__(self):
        ax = tuple(self.axes)
        if len(ax) != 4:
            raise GridMismatchError("a 4D field needs four axes")
        size = int(np.prod([a.n for a in ax]))
        if size > MAX_4D_ENTRIES:
            raise NumericalGuardError(f"4D field of {size} entries exceeds the guard of {MAX_4D_ENTRIES}")
        vals = _as_complex(self.values)
        if vals.shape != tuple(a.n for a in ax):
            raise GridMismatchError("4D field shape does not match its axes")
        object.__setattr__(self, "axes", ax)
        object.__setattr__(self, "values", vals)

    @classmethod
    def over(cls, x_axis: Axis, xi_axis: Axis, values) -> "Symbol4Field":
        return cls((x_axis, xi_axis, x_axis.dual(), xi_axis.dual()), values)


@dataclass(frozen=True)
class TensorField:
    """Lazy tensor product ``left(x) * right(y)`` of two sampled signals."""

    left: SampledSignal
    right: SampledSignal

    @property
    def axes(self):
        return (self.left.axis, self.right.axis)

    def materialize(self) -> PhaseSpaceField:
        return PhaseSpaceField(self.axes, np.outer(self.left.values, self.right.values))


def _check_same_axis(a: Axis, b: Axis):
    if not a.close_to(b):
        raise GridMismatchError(f"axis mismatch: {a} vs {b}")


def _check_same_axes(a, b):
    if len(a) != len(b):
        raise GridMismatchError("different number of axes")
    for p, q in zip(a, b):
        _check_same_axis(p, q)


# ---------------------------------------------------------------------------
# centered transforms on raw arrays


def cdft(values: np.ndarray, step: float, axis: int = -1) -> np.ndarray:
    """Centered forward DFT along ``axis`` with quadrature weight ``step``."""
    v = sfft.ifftshift(values, axes=axis)
    v = sfft.fft(v, axis=axis, workers=fft_workers())
    return sfft.fftshift(v, axes=axis) * step


def icdft(values: np.ndarray, dual_step: float, axis: int = -1) -> np.ndarray:
    """Inverse of :func:`cdft`; ``dual_step`` is the step of the transformed axis."""
    n = values.shape[axis]
    v = sfft.ifftshift(values, axes=axis)
    v = sfft.ifft(v, axis=axis, workers=fft_workers())
    return sfft.fftshift(v, axes=axis) * (n * dual_step)


def cdftn(values: np.ndarray, steps, axes) -> np.ndarray:
    v = sfft.ifftshift(values, axes=axes)
    v = sfft.fftn(v, axes=axes, workers=fft_workers())
    return sfft.fftshift(v, axes=axes) * float(np.prod(steps))


def icdftn(values: np.ndarray, dual_steps, axes) -> np.ndarray:
    n = np.prod([values.shape[a] for a in axes])
    v = sfft.ifftshift(values, axes=axes)
    v = sfft.ifftn(v, axes=axes, workers=fft_workers())
    return sfft.fftshift(v, axes=axes) * (n * float(np.prod(dual_steps)))


def reflect_samples(values: np.ndarray, axis: int = -1) -> np.ndarray:
    """Samples of ``t -> f(-t)``; exact on a centered grid (periodic at the edge)."""
    n = values.shape[axis]
    idx = (-np.arange(n) + 2 * (n // 2)) % n
    return np.take(values, idx, axis=axis)


def inside(points, axis: Axis) -> np.ndarray:
    """Mask of points lying in the half-open period ``[-R, R)`` of an axis."""
    tol = 1e-9 * axis.step
    p = np.asarray(points)
    return (p >= -axis.extent - tol) & (p < axis.extent - tol)


def shift_phases(axis: Axis, shifts: np.ndarray) -> np.ndarray:
    """Spectral factors ``P[m, s]`` that turn the spectrum of ``f`` into that of ``f(. + shifts[m])``."""
    w = axis.dual().points
    ph = np.exp(2j * np.pi * np.outer(shifts, w))
    ph[:, 0] = np.cos(2 * np.pi * shifts * w[0])
    return ph


def shifted_samples(values: np.ndarray, axis: Axis, shifts, periodic: bool = True) -> np.ndarray:
    """Matrix ``M[m, k] = f(t_k + shifts[m])`` under the band-limited model.

    With ``periodic=False`` the signal is taken to vanish outside ``[-R, R)``.
    """
    shifts = np.atleast_1d(np.asarray(shifts, dtype=float))
    spec = cdft(values, axis.step)
    out = icdft(spec[None, :] * shift_phases(axis, shifts), axis.dual_step, axis=-1)
    if not periodic:
        out *= inside(axis.points[None, :] + shifts[:, None], axis)
    return out


def bl_eval(values: np.ndarray, axis: Axis, points, periodic: bool = True) -> np.ndarray:
    """Evaluate the band-limited interpolant of ``values`` at arbitrary points."""
    pts = np.asarray(points, dtype=float)
    flat = pts.ravel()
    spec = cdft(values, axis.step)
    w = axis.dual().points
    out = np.empty(flat.shape, dtype=complex)
    for s in range(0, flat.size, _CHUNK):
        p = flat[s:s + _CHUNK]
        e = np.exp(2j * np.pi * np.outer(p, w))
        e[:, 0] = np.cos(2 * np.pi * p * w[0])
        out[s:s + _CHUNK] = e @ spec
    out *= axis.dual_step
    if not periodic:
        out *= inside(flat, axis)
    return out.reshape(pts.shape)


def bl_eval2(values: np.ndarray, axes, p, q, periodic: bool = True) -> np.ndarray:
    """Evaluate the 2D band-limited interpolant at points ``(p, q)``."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    shape = np.broadcast(p, q).shape
    pf = np.broadcast_to(p, shape).ravel()
    qf = np.broadcast_to(q, shape).ravel()
    a0, a1 = axes
    spec = cdftn(values, (a0.step, a1.step), (0, 1))
    w0 = a0.dual().points
    w1 = a1.dual().points
    out = np.empty(pf.size, dtype=complex)
    chunk = max(256, _CHUNK * 64 // max(a0.n, a1.n))
    for s in range(0, pf.size, chunk):
        pp = pf[s:s + chunk]
        qq = qf[s:s + chunk]
        e1 = np.exp(2j * np.pi * np.outer(qq, w1))
        e1[:, 0] = np.cos(2 * np.pi * qq * w1[0])
        rows = e1 @ spec.T
        e0 = np.exp(2j * np.pi * np.outer(pp, w0))
        e0[:, 0] = np.cos(2 * np.pi * pp * w0[0])
        out[s:s + chunk] = np.sum(e0 * rows, axis=1)
    out *= a0.dual_step * a1.dual_step
    if not periodic:
        out *= inside(pf, a0) & inside(qf, a1)
    return out.reshape(shape)


# ---------------------------------------------------------------------------
# signal level operations


def dft_forward(s: SampledSignal) -> SampledSignal:
    """Continuous-transform approximation ``sum_t f(t) exp(-2 pi i t w) step``."""
    return SampledSignal(s.axis.dual(), cdft(s.values, s.axis.step), s.dim)


def dft_inverse(s: SampledSignal) -> SampledSignal:
    """Inverse of :func:`dft_forward`; the input lives on a frequency axis."""
    return SampledSignal(s.axis.dual(), icdft(s.values, s.axis.step), s.dim)


def fractional_shift(s: SampledSignal, amount: float) -> SampledSignal:
    """Translate a signal: returns samples of ``t -> f(t - amount)``."""
    vals = shifted_samples(s.values, s.axis, [-float(amount)])[0]
    return s.with_values(vals)


def reflect(s: SampledSignal) -> SampledSignal:
    return s.with_values(reflect_samples(s.values))


# ---------------------------------------------------------------------------
# phase-space level operations


def partial_dft_2(F) -> PhaseSpaceField:
    """Forward transform along the second variable only."""
    if isinstance(F, TensorField):
        F = F.materialize()
    a0, a1 = F.axes
    return PhaseSpaceField((a0, a1.dual()), cdft(F.values, a1.step, axis=1))


def partial_idft_2(F: PhaseSpaceField) -> PhaseSpaceField:
    a0, a1 = F.axes
    return PhaseSpaceField((a0, a1.dual()), icdft(F.values, a1.step, axis=1))


def dft_2d(F: PhaseSpaceField) -> PhaseSpaceField:
    a0, a1 = F.axes
    return PhaseSpaceField((a0.dual(), a1.dual()), cdftn(F.values, (a0.step, a1.step), (0, 1)))


def idft_2d(F: PhaseSpaceField) -> PhaseSpaceField:
    a0, a1 = F.axes
    return PhaseSpaceField((a0.dual(), a1.dual()), icdftn(F.values, (a0.step, a1.step), (0, 1)))


def _linear_samples(sig: SampledSignal, a: float, b: float, xs: Axis, ys: Axis, periodic: bool) -> np.ndarray:
    """Matrix ``M[i, j] = f(a x_i + b y_j)`` for a sampled signal ``f``."""
    ax = sig.axis
    x = xs.points
    y = ys.points
    if abs(a) == 1.0 and xs.close_to(ax):
        base = sig.values if a == 1.0 else reflect_samples(sig.values)
        # f(a x + b y) = base(x + a b y)
        out = shifted_samples(base, ax, a * b * y).T
    elif abs(b) == 1.0 and ys.close_to(ax):
        base = sig.values if b == 1.0 else reflect_samples(sig.values)
        out = shifted_samples(base, ax, b * a * x)
    elif b == 0.0:
        out = np.repeat(bl_eval(sig.values, ax, a * x)[:, None], ys.n, axis=1)
    elif a == 0.0:
        out = np.repeat(bl_eval(sig.values, ax, b * y)[None, :], xs.n, axis=0)
    else:
        out = bl_eval(sig.values, ax, a * x[:, None] + b * y[None, :])
    if not periodic:
        out = out * inside(a * x[:, None] + b * y[None, :], ax)
    return out


def coord_change(F, L, out_axes=None, periodic: bool = False) -> PhaseSpaceField:
    """Linear change of variables ``sqrt|det L| * F(L (x, y))``.

    Parameters
    ----------
    F : PhaseSpaceField or TensorField
        Input field. Tensor products are evaluated factor by factor, which is
        much cheaper than 2D interpolation.
    L : array_like, shape (2, 2)
        Invertible real matrix.
    out_axes : pair of Axis, optional
        Output grid. Defaults to the input grid.
    periodic : bool
        If False (default) the input is taken to vanish outside its grid
        window; otherwise it is extended periodically.

    Returns
    -------
    PhaseSpaceField
    """
    L = np.asarray(L, dtype=float)
    if L.shape != (2, 2):
        raise GridMismatchError("coord_change expects a 2x2 matrix for d=1")
    det = float(np.linalg.det(L))
    if abs(det) < 1e-14 * max(1.0, np.abs(L).max() ** 2):
        raise SingularMatrixError("coordinate change matrix is singular")
    axes = tuple(out_axes) if out_axes is not None else tuple(F.axes)
    xs, ys = axes
    scale = np.sqrt(abs(det))
    if isinstance(F, TensorField):
        left = _linear_samples(F.left, L[0, 0], L[0, 1], xs, ys, periodic)
        right = _linear_samples(F.right, L[1, 0], L[1, 1], xs, ys, periodic)
        return PhaseSpaceField(axes, scale * left * right)
    if np.allclose(L, np.eye(2), rtol=0, atol=0) and all(p.close_to(q) for p, q in zip(axes, F.axes)):
        return PhaseSpaceField(axes, F.values.copy())
    X, Y = np.meshgrid(xs.points, ys.points, indexing="ij")
    P = L[0, 0] * X + L[0, 1] * Y
    Q = L[1, 0] * X + L[1, 1] * Y
    return PhaseSpaceField(axes, scale * bl_eval2(F.values, F.axes, P, Q, periodic))


def chirp_multiply(F: PhaseSpaceField, C) -> PhaseSpaceField:
    """Pointwise product with ``exp(i pi z.Cz)`` for a symmetric ``C``."""
    C = np.asarray(C, dtype=float)
    if C.shape != (2, 2):
        raise GridMismatchError("chirp matrix must be 2x2 for d=1")
    if not np.allclose(C, C.T, rtol=0, atol=1e-14 * max(1.0, np.abs(C).max())):
        raise DomainError("chirp matrix must be symmetric")
    if isinstance(F, TensorField):
        F = F.materialize()
    X, Y = F.mesh()
    quad = C[0, 0] * X * X + 2 * C[0, 1] * X * Y + C[1, 1] * Y * Y
    return F.with_values(F.values * np.exp(1j * np.pi * quad))


def quadratic_multiplier(B, axes):
    """Values of ``exp(-i pi zeta.B zeta)`` on the dual grid of ``axes``."""
    B = np.asarray(B, dtype=float)
    z1 = axes[0].dual().points[:, None]
    z2 = axes[1].dual().points[None, :]
    return np.exp(-1j * np.pi * (B[0, 0] * z1 * z1 + 2 * B[0, 1] * z1 * z2 + B[1, 1] * z2 * z2))


def fourier_multiply(F: PhaseSpaceField, B) -> PhaseSpaceField:
    """Apply the Fourier multiplier ``exp(-i pi zeta.B zeta)`` to a field."""
    B = np.asarray(B, dtype=float)
    if not np.allclose(B, B.T, rtol=0, atol=1e-14 * max(1.0, np.abs(B).max())):
        raise DomainError("multiplier matrix must be symmetric")
    if isinstance(F, TensorField):
        F = F.materialize()
    a0, a1 = F.axes
    spec = cdftn(F.values, (a0.step, a1.step), (0, 1))
    spec *= quadratic_multiplier(B, F.axes)
    return F.with_values(icdftn(spec, (a0.dual_step, a1.dual_step), (0, 1)))


def convolve(F: PhaseSpaceField, G: PhaseSpaceField) -> PhaseSpaceField:
    """Periodic convolution ``(F * G)(z) = sum_w F(z - w) G(w) dw``."""
    _check_same_axes(F.axes, G.axes)
    a0, a1 = F.axes
    steps = (a0.step, a1.step)
    spec = cdftn(F.values, steps, (0, 1)) * cdftn(G.values, steps, (0, 1))
    return F.with_values(icdftn(spec, (a0.dual_step, a1.dual_step), (0, 1)))


def reflect_field(F: PhaseSpaceField) -> PhaseSpaceField:
    return F.with_values(reflect_samples(reflect_samples(F.values, 0), 1))

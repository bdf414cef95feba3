"""Time-frequency representations: STFT, tau-Wigner family and related tools.

Every representation is returned as a :class:`~phasespace.grid.PhaseSpaceField`
whose first axis is the signal axis (position ``x``) and whose second axis is
its dual (frequency ``xi``).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GridMismatchError
from .grid import (
    Axis,
    PhaseSpaceField,
    SampledSignal,
    TensorField,
    cdft,
    convolve,
    coord_change,
    icdft,
    partial_dft_2,
    reflect_field,
    reflect_samples,
    bl_eval,
    shifted_samples,
    fractional_shift,
    dft_forward,
)

NEAR_ORTHOGONAL = 1e-10


@dataclass(frozen=True)
class TauParam:
    """Interpolation parameter of the tau-Wigner family."""

    tau: float

    def __post_init__(self):
        t = float(self.tau)
        if not (0.0 <= t <= 1.0) or not np.isfinite(t):
            raise DomainError(f"tau must lie in [0, 1], got {self.tau}")
        object.__setattr__(self, "tau", t)

    @property
    def is_endpoint(self) -> bool:
        return self.tau in (0.0, 1.0)


def _tau(tau) -> float:
    return tau.tau if isinstance(tau, TauParam) else TauParam(tau).tau


def _interior(tau) -> float:
    t = _tau(tau)
    if t in (0.0, 1.0):
        raise DomainError("operation is undefined at tau = 0 or tau = 1")
    return t


def _pair(f: SampledSignal, g: SampledSignal | None) -> SampledSignal:
    if g is None:
        return f
    if not f.axis.close_to(g.axis):
        raise GridMismatchError("f and g must share an axis")
    return g


def l_tau(tau: float) -> np.ndarray:
    """Matrix of the coordinate change ``(x, t) -> (x + tau t, x - (1 - tau) t)``."""
    return np.array([[1.0, tau], [1.0, -(1.0 - tau)]])


def stft(f: SampledSignal, g: SampledSignal) -> PhaseSpaceField:
    """Short-time Fourier transform ``V_g f(x, w)`` on the grid.

    The window is translated by whole grid steps (circular index shifts), so
    the only approximation is the quadrature of the time integral.
    """
    g = _pair(f, g)
    ax = f.axis
    n = ax.n
    k = np.arange(n)
    raw = k[None, :] - k[:, None] + n // 2
    prod = f.values[None, :] * np.conj(g.values[raw % n]) * ((raw >= 0) & (raw < n))
    return PhaseSpaceField((ax, ax.dual()), cdft(prod, ax.step, axis=1))


def stft_at(f: SampledSignal, g: SampledSignal, X, Xi) -> np.ndarray:
    """Direct quadrature of ``V_g f`` on the tensor grid ``X x Xi`` (arbitrary points)."""
    g = _pair(f, g)
    ax = f.axis
    X = np.atleast_1d(np.asarray(X, dtype=float))
    Xi = np.atleast_1d(np.asarray(Xi, dtype=float))
    win = shifted_samples(g.values, ax, -X, periodic=False)  # g(t - X)
    prod = f.values[None, :] * np.conj(win)
    kern = np.exp(-2j * np.pi * np.outer(ax.points, Xi))
    return prod @ kern * ax.step


def rihaczek(f: SampledSignal, g: SampledSignal | None = None, conjugate: bool = False) -> PhaseSpaceField:
    """Closed-form endpoint members of the family (``tau = 0``, or ``tau = 1`` if ``conjugate``)."""
    g = _pair(f, g)
    ax = f.axis
    x = ax.points[:, None]
    xi = ax.dual().points[None, :]
    if not conjugate:
        ghat = dft_forward(g).values
        vals = np.exp(-2j * np.pi * x * xi) * f.values[:, None] * np.conj(ghat)[None, :]
    else:
        fhat = dft_forward(f).values
        vals = np.exp(2j * np.pi * x * xi) * np.conj(g.values)[:, None] * fhat[None, :]
    return PhaseSpaceField((ax, ax.dual()), vals)


def _wigner_folded(f: SampledSignal, g: SampledSignal, tau: float) -> PhaseSpaceField:
    # Two points of the window are at most 2R apart, so lags in [-2R, 2R)
    # see the whole product.  Folding that lag axis onto one period samples
    # the lag transform exactly on the frequency grid (samples outside the
    # window are zero, so the fold adds no aliases).
    ax = f.axis
    n = ax.n
    lag = Axis(2 * n, 2 * ax.extent)
    h = coord_change(TensorField(f, g.conj()), l_tau(tau), out_axes=(ax, lag)).values
    k1 = np.arange(n) + n // 2
    k2 = np.where(k1 >= n, k1 - n, k1 + n)
    folded = h[:, k1] + h[:, k2]
    return partial_dft_2(PhaseSpaceField((ax, ax), folded))


def tau_wigner(f: SampledSignal, g: SampledSignal | None = None, tau=0.5) -> PhaseSpaceField:
    """Cross tau-Wigner distribution ``W_tau(f, g)``.

    Computed as a partial Fourier transform of the coordinate-changed tensor
    ``f (x) conj(g)`` over a doubled lag range.  The endpoints use the closed
    Rihaczek forms.
    """
    g = _pair(f, g)
    t = _tau(tau)
    if t == 0.0:
        return rihaczek(f, g)
    if t == 1.0:
        return rihaczek(f, g, conjugate=True)
    return _wigner_folded(f, g, t)


def wigner(f: SampledSignal, g: SampledSignal | None = None) -> PhaseSpaceField:
    return tau_wigner(f, g, 0.5)


def q_tau(f: SampledSignal, tau, inverse: bool = False) -> SampledSignal:
    """Dilation-reflection ``f(-((1 - tau)/tau) t)`` (or its inverse)."""
    t = _interior(tau)
    if t == 0.5:
        return f.with_values(reflect_samples(f.values))
    c = -(t / (1 - t)) if inverse else -((1 - t) / t)
    return f.with_values(bl_eval(f.values, f.axis, c * f.axis.points, periodic=False))


def stft_wigner_bridge_check(f: SampledSignal, g: SampledSignal, tau, window: float = 0.5) -> float:
    """Largest gap between ``W_tau(f, g)`` and its STFT expression on a central window.

    The STFT side is evaluated by direct quadrature at the mapped points
    ``(x/(1 - tau), xi/tau)``, independently of the Wigner code path.
    """
    g = _pair(f, g)
    t = _interior(tau)
    W = tau_wigner(f, g, t)
    ax = f.axis
    x = ax.points
    xi = ax.dual().points
    ix = np.nonzero(np.abs(x / (1 - t)) <= window * ax.extent)[0]
    il = np.nonzero(np.abs(xi / t) <= window * ax.dual().extent)[0]
    gq = q_tau(g, t)
    V = stft_at(f, gq, x[ix] / (1 - t), xi[il] / t)
    phase = np.exp(2j * np.pi * np.outer(x[ix], xi[il]) / t) / t
    rhs = phase * V
    lhs = W.values[np.ix_(ix, il)]
    return float(np.max(np.abs(lhs - rhs))) if lhs.size else 0.0


def invert_tau_wigner(W: PhaseSpaceField, g1: SampledSignal, g2: SampledSignal, tau) -> SampledSignal:
    """Recover ``f`` from ``W = W_tau(f, g1)`` with a second window ``g2``.

    Discretizes the reconstruction integral over the whole phase-space grid.
    """
    t = _interior(tau)
    ax = g1.axis
    if not W.axes[0].close_to(ax) or not g2.axis.close_to(ax):
        raise GridMismatchError("field and windows must share the signal axis")
    ip = g2.inner(g1)
    if abs(ip) < NEAR_ORTHOGONAL * g1.norm() * g2.norm():
        raise DomainError("windows are numerically orthogonal")
    x = ax.points
    xi = W.axes[1].points
    gam = q_tau(g2, t).values
    S = shifted_samples(gam, ax, -x / (1 - t), periodic=False)  # gam(t_m - x_k/(1-tau))
    W2 = W.values * np.exp(-2j * np.pi * np.outer(x, xi) / t)
    E = np.exp(2j * np.pi * np.outer(xi, x) / t)
    A = W2 @ E
    vals = np.sum(A * S, axis=0) * ax.step * W.axes[1].step / (t * ip)
    return SampledSignal(ax, vals)


def _spectral_derivative(values: np.ndarray, axis_obj: Axis, axis: int) -> np.ndarray:
    """Apply ``D = -i d/dz`` along one axis (Nyquist mode dropped)."""
    s = axis_obj.dual().points.copy()
    s[0] = 0.0
    shape = [1, 1]
    shape[axis] = -1
    spec = cdft(values, axis_obj.step, axis=axis) * (2 * np.pi * s).reshape(shape)
    return icdft(spec, axis_obj.dual_step, axis=axis)


def moyal_apply(W: PhaseSpaceField, which: str, tau) -> PhaseSpaceField:
    """First-order Moyal operators acting on a tau-Wigner field.

    ``which="position"`` gives ``(x - tau/(2 pi) D_xi) W`` (the image of
    multiplication by ``x``); ``which="frequency"`` gives
    ``(2 pi xi + (1 - tau) D_x) W`` (the image of ``D = -i d/dt``).
    """
    t = _tau(tau)
    X, XI = W.mesh()
    if which == "position":
        vals = X * W.values - t / (2 * np.pi) * _spectral_derivative(W.values, W.axes[1], 1)
    elif which == "frequency":
        vals = 2 * np.pi * XI * W.values + (1 - t) * _spectral_derivative(W.values, W.axes[0], 0)
    else:
        raise DomainError(f"unknown Moyal operator {which!r}")
    return W.with_values(vals)


def spectrogram_from_wigner(f: SampledSignal, g: SampledSignal, tau) -> PhaseSpaceField:
    """Spectrogram ``|V_g f|^2`` as a convolution of ``W_tau f`` with a window kernel.

    The kernel is the reflected conjugate of ``W_tau g`` (equivalently the
    reflection of ``W_(1-tau) g``).
    """
    g = _pair(f, g)
    t = _tau(tau)
    Wf = tau_wigner(f, f, t)
    Wg = tau_wigner(g, g, t)
    psi = reflect_field(Wg.with_values(np.conj(Wg.values)))
    return convolve(psi, Wf)


def grossmann_royer(psi: SampledSignal, z) -> SampledSignal:
    """Grossmann-Royer operator ``exp(4 pi i xi (t - x)) psi(2x - t)`` at ``z = (x, xi)``."""
    x, xi = float(z[0]), float(z[1])
    refl = psi.with_values(reflect_samples(psi.values))
    moved = fractional_shift(refl, 2 * x)
    t = psi.axis.points
    return psi.with_values(np.exp(4j * np.pi * xi * (t - x)) * moved.values)


def t_matrix(tau: float, d: int = 1) -> np.ndarray:
    """Block matrix ``[[0, (1-tau) I], [-tau I, 0]]``."""
    I = np.eye(d)
    Z = np.zeros((d, d))
    return np.block([[Z, (1 - tau) * I], [-tau * I, Z]])

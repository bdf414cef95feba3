"""Weyl and tau quantization, symbol transport and the Wigner kernel.

Operators are realized through their lag kernels.  For a symbol ``a(z, zeta)``
the lag kernel is ``a_check(z, s) = int a(z, zeta) exp(2 pi i s.zeta) dzeta``;
the tau-operator then acts as

    Op_tau(a) F(z) = sum_s a_check(z - tau s, s) F(z - s) ds

with the lag ``s`` running over one centered period (circular shifts).  The
same code serves signals (``z = x``) and phase-space fields (``z = (x, xi)``).

Trigonometric symbols (:class:`TrigSymbol`, :class:`TrigSymbol4`) are kept as
lists of exponential modes, so they can be evaluated exactly anywhere and act
on sampled data without interpolation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GridMismatchError, NumericalGuardError
from .grid import (
    MAX_4D_ENTRIES,
    Axis,
    PhaseSpaceField,
    SampledSignal,
    Symbol4Field,
    bl_eval2,
    cdft,
    cdftn,
    icdft,
    icdftn,
    shift_phases,
)

MAX_KERNEL_SIDE = 32


# ---------------------------------------------------------------------------
# trigonometric symbols


@dataclass(frozen=True)
class TrigSymbol:
    """``a(x, xi) = sum_k c_k exp(2 pi i (p_k x + q_k xi))``.

    ``modes`` is a tuple of ``(c, p, q)`` triples.
    """

    modes: tuple

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple((complex(c), float(p), float(q)) for c, p, q in self.modes))

    def __call__(self, x, xi):
        x = np.asarray(x, dtype=float)
        xi = np.asarray(xi, dtype=float)
        out = np.zeros(np.broadcast(x, xi).shape, dtype=complex)
        for c, p, q in self.modes:
            out += c * np.exp(2j * np.pi * (p * x + q * xi))
        return out

    def sample(self, axes) -> PhaseSpaceField:
        x = axes[0].points[:, None]
        xi = axes[1].points[None, :]
        return PhaseSpaceField(tuple(axes), self(x, xi))

    def conj(self) -> "TrigSymbol":
        """Symbol of the adjoint operator, ``conj(a)``."""
        return TrigSymbol(tuple((np.conj(c), -p, -q) for c, p, q in self.modes))

    def star(self) -> "TrigSymbol":
        """``conj(a(y, -eta))``: the symbol with ``conj(Op(a) g) = Op(a*) conj(g)``."""
        return TrigSymbol(tuple((np.conj(c), -p, q) for c, p, q in self.modes))

    @property
    def is_real(self) -> bool:
        other = {(round(p, 12), round(q, 12)): c for c, p, q in self.conj().modes}
        mine = {(round(p, 12), round(q, 12)): c for c, p, q in self.modes}
        return mine.keys() == other.keys() and all(abs(mine[k] - other[k]) < 1e-14 for k in mine)


def real_trig_symbol(rng, axes, max_index: int = 3, n_modes: int = 3, multiple: int = 4,
                     const: float = 1.0) -> TrigSymbol:
    """Random real trigonometric symbol with grid-compatible frequencies.

    Frequencies are ``multiple * j * dual_step`` in ``x`` and
    ``multiple * k * step`` in ``xi`` with ``|j|, |k| <= max_index``, so tau
    fractions of the induced shifts stay on the grid when ``multiple`` is a
    multiple of the tau denominator.
    """
    xa, _ = axes
    pstep = multiple * xa.dual_step
    qstep = multiple * xa.step
    modes = [(const, 0.0, 0.0)]
    for _ in range(n_modes):
        j, k = rng.integers(-max_index, max_index + 1, size=2)
        if j == 0 and k == 0:
            k = 1
        c = complex(rng.normal(), rng.normal()) * 0.3
        modes.append((c, j * pstep, k * qstep))
        modes.append((np.conj(c), -j * pstep, -k * qstep))
    return TrigSymbol(tuple(modes))


@dataclass(frozen=True)
class TrigSymbol4:
    """``b(z, zeta) = sum_k c_k exp(2 pi i (P_k.z + Q_k.zeta))`` on ``R^4``.

    ``modes`` holds ``(c, (P1, P2), (Q1, Q2))``; ``z = (x, xi)`` and
    ``zeta = (u, v)`` is dual to ``z``.
    """

    modes: tuple

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(
            (complex(c), (float(P[0]), float(P[1])), (float(Q[0]), float(Q[1]))) for c, P, Q in self.modes))

    def __call__(self, x, xi, u, v):
        out = 0j
        for c, P, Q in self.modes:
            out = out + c * np.exp(2j * np.pi * (P[0] * x + P[1] * xi + Q[0] * u + Q[1] * v))
        return out

    def __mul__(self, other: "TrigSymbol4") -> "TrigSymbol4":
        acc = {}
        for c1, P1, Q1 in self.modes:
            for c2, P2, Q2 in other.modes:
                P = (P1[0] + P2[0], P1[1] + P2[1])
                Q = (Q1[0] + Q2[0], Q1[1] + Q2[1])
                key = tuple(round(v, 12) for v in P + Q)
                if key in acc:
                    acc[key] = (acc[key][0] + c1 * c2, P, Q)
                else:
                    acc[key] = (c1 * c2, P, Q)
        return TrigSymbol4(tuple(acc.values()))

    def sample(self, axes) -> Symbol4Field:
        """Exact samples on a 4D grid (separable evaluation per mode)."""
        axes = tuple(axes)
        size = int(np.prod([a.n for a in axes]))
        if size > MAX_4D_ENTRIES:
            raise NumericalGuardError(f"4D grid of {size} entries exceeds the guard of {MAX_4D_ENTRIES}")
        pts = [a.points for a in axes]
        out = np.zeros(tuple(a.n for a in axes), dtype=complex)
        for c, P, Q in self.modes:
            e = [np.exp(2j * np.pi * f * p) for f, p in zip((P[0], P[1], Q[0], Q[1]), pts)]
            out += c * (np.multiply.outer(np.multiply.outer(e[0], e[1]), np.multiply.outer(e[2], e[3])))
        return Symbol4Field(axes, out)

    def to_tau(self, tau: float) -> "TrigSymbol4":
        """tau-symbol of the operator whose Weyl symbol is ``self``."""
        return TrigSymbol4(tuple(
            (c * np.exp(-2j * np.pi * (tau - 0.5) * (P[0] * Q[0] + P[1] * Q[1])), P, Q) for c, P, Q in self.modes))

    def weighted(self, N: int) -> "TrigSymbol4":
        """``(1 - Laplacian_zeta / (4 pi^2))^N`` applied mode by mode."""
        if N < 0:
            raise DomainError("N must be >= 0")
        return TrigSymbol4(tuple((c * (1 + Q[0] ** 2 + Q[1] ** 2) ** N, P, Q) for c, P, Q in self.modes))


# ---------------------------------------------------------------------------
# 1D operators


def _check_symbol_axes(a: PhaseSpaceField, axis: Axis):
    if not a.axes[0].close_to(axis) or not a.axes[1].close_to(axis.dual()):
        raise GridMismatchError("symbol grid must be (signal axis, its dual)")


def _lag_kernel_1d(a, axis: Axis, tau: float) -> np.ndarray:
    """``M[i, m] = a_check(x_i - tau s_m, s_m)`` with ``s_m`` the centered lags."""
    s = axis.points
    if isinstance(a, TrigSymbol):
        x = axis.points[:, None]
        M = np.zeros((axis.n, axis.n), dtype=complex)
        for c, p, q in a.modes:
            # the xi-mode exp(2 pi i q xi) has lag kernel delta(s + q)
            m = int(round(-q / axis.step)) + axis.n // 2
            if abs(-q - s[m % axis.n]) > 1e-9 * axis.step or not 0 <= m < axis.n:
                raise GridMismatchError("trigonometric symbol has a momentum frequency off the lag grid")
            M[:, m] += c * np.exp(2j * np.pi * p * (x[:, 0] - tau * s[m])) / axis.step
        return M
    _check_symbol_axes(a, axis)
    check = icdft(a.values, a.axes[1].step, axis=1)  # (z, s)
    if tau == 0.0:
        return check
    spec = cdft(check, axis.step, axis=0) * shift_phases(axis, -tau * s).T
    return icdft(spec, axis.dual_step, axis=0)


def _roll_index(n: int) -> np.ndarray:
    """``idx[i, m]`` = index of ``z_i - s_m`` on the periodic grid."""
    i = np.arange(n)[:, None]
    m = np.arange(n)[None, :]
    return (i - m + n // 2) % n


def tau_matrix(a, axis: Axis, tau: float = 0.5) -> np.ndarray:
    """Matrix of ``Op_tau(a)`` on samples, quadrature weight included."""
    M = _lag_kernel_1d(a, axis, float(tau))
    idx = _roll_index(axis.n)
    K = np.zeros((axis.n, axis.n), dtype=complex)
    rows = np.repeat(np.arange(axis.n)[:, None], axis.n, axis=1)
    np.add.at(K, (rows, idx), M)
    return K * axis.step


def tau_apply(a, f: SampledSignal, tau=0.5) -> SampledSignal:
    """``Op_tau(a) f`` with the midpoint rule ``(1 - tau) x + tau y``."""
    tau = float(tau)
    if not 0.0 <= tau <= 1.0:
        raise DomainError("tau must lie in [0, 1]")
    M = _lag_kernel_1d(a, f.axis, tau)
    vals = np.sum(M * f.values[_roll_index(f.axis.n)], axis=1) * f.axis.step
    return f.with_values(vals)


def weyl_apply(a, f: SampledSignal) -> SampledSignal:
    """Weyl operator ``Op_w(a) f``."""
    return tau_apply(a, f, 0.5)


def tau_convert(a, tau1: float, tau2: float):
    """Symbol ``a2`` with ``Op_tau2(a2) = Op_tau1(a)``.

    Multiplies the symplectic spectrum by ``exp(-2 pi i (tau2 - tau1) zeta1 zeta2)``.
    """
    if isinstance(a, TrigSymbol):
        return TrigSymbol(tuple((c * np.exp(-2j * np.pi * (tau2 - tau1) * p * q), p, q) for c, p, q in a.modes))
    ax0, ax1 = a.axes
    spec = cdftn(a.values, (ax0.step, ax1.step), (0, 1))
    w1 = ax0.dual().points[:, None]
    w2 = ax1.dual().points[None, :]
    spec *= np.exp(-2j * np.pi * (tau2 - tau1) * w1 * w2)
    return a.with_values(icdftn(spec, (ax0.dual_step, ax1.dual_step), (0, 1)))


# ---------------------------------------------------------------------------
# symbol transport


def _as_trig(a) -> TrigSymbol | None:
    return a if isinstance(a, TrigSymbol) else None


def transport_modes(a: TrigSymbol, tau1: float, which: str = "b") -> TrigSymbol4:
    """Transported symbols in mode form.

    ``b(x, xi, u, v) = a(x - tau1 v, xi + (1 - tau1) u)``,
    ``b~ = conj a(x + (1 - tau1) v, xi - tau1 u)`` and ``c = b b~``.
    """
    t = float(tau1)
    b = TrigSymbol4(tuple((c, (p, q), (q * (1 - t), -p * t)) for c, p, q in a.modes))
    bt = TrigSymbol4(tuple((np.conj(c), (-p, -q), (q * t, -p * (1 - t))) for c, p, q in a.modes))
    if which == "b":
        return b
    if which == "b_tilde":
        return bt
    if which == "c":
        return b * bt
    raise DomainError(f"unknown transported symbol {which!r}")


def symbol4_axes(x_axis: Axis) -> tuple:
    """4D grid ``(x, xi, u, v)`` attached to phase space over ``x_axis``."""
    xi = x_axis.dual()
    return (x_axis, xi, x_axis.dual(), xi.dual())


def _transport_grid(a: PhaseSpaceField, tau1: float, which: str) -> Symbol4Field:
    axes = symbol4_axes(a.axes[0])
    size = int(np.prod([ax.n for ax in axes]))
    if size > MAX_4D_ENTRIES:
        raise NumericalGuardError(f"4D grid of {size} entries exceeds the guard of {MAX_4D_ENTRIES}")
    X, XI, U, V = np.meshgrid(*[ax.points for ax in axes], indexing="ij", sparse=True)
    t = float(tau1)

    def ev(p, q):
        P, Q = np.broadcast_arrays(p, q)
        return bl_eval2(a.values, a.axes, P, Q)

    b = ev(X - t * V, XI + (1 - t) * U) if which in ("b", "c") else None
    bt = np.conj(ev(X + (1 - t) * V, XI - t * U)) if which in ("b_tilde", "c") else None
    vals = {"b": b, "b_tilde": bt}.get(which)
    if which == "c":
        vals = b * bt
    if vals is None:
        raise DomainError(f"unknown transported symbol {which!r}")
    return Symbol4Field(axes, vals)


def transport_b(a, tau1: float, x_axis: Axis | None = None) -> Symbol4Field:
    """``b(x, xi, u, v) = a(x - tau1 v, xi + (1 - tau1) u)`` on the 4D grid."""
    return _transport(a, tau1, "b", x_axis)


def transport_b_tilde(a, tau1: float, x_axis: Axis | None = None) -> Symbol4Field:
    """``b~(x, xi, u, v) = conj a(x + (1 - tau1) v, xi - tau1 u)``."""
    return _transport(a, tau1, "b_tilde", x_axis)


def transport_c(a, tau1: float, x_axis: Axis | None = None) -> Symbol4Field:
    """``c = b * b~``, the symbol with ``W_tau(Op_w(a) f) = Op_w(c) W_tau f``."""
    return _transport(a, tau1, "c", x_axis)


def _transport(a, tau1, which, x_axis):
    if isinstance(a, TrigSymbol):
        if x_axis is None:
            raise DomainError("a trigonometric symbol needs x_axis to be sampled")
        return transport_modes(a, tau1, which).sample(symbol4_axes(x_axis))
    return _transport_grid(a, tau1, which)


def tau_convert_4(b: Symbol4Field, tau1: float, tau2: float) -> Symbol4Field:
    """4D version of :func:`tau_convert` (position ``(x, xi)``, momentum ``(u, v)``)."""
    ax = b.axes
    steps = tuple(a.step for a in ax)
    spec = cdftn(b.values, steps, (0, 1, 2, 3))
    w = np.meshgrid(*[a.dual().points for a in ax], indexing="ij", sparse=True)
    spec *= np.exp(-2j * np.pi * (tau2 - tau1) * (w[0] * w[2] + w[1] * w[3]))
    return Symbol4Field(ax, icdftn(spec, tuple(a.dual_step for a in ax), (0, 1, 2, 3)))


def transport_general(a, tau1: float, tau2: float, x_axis: Axis | None = None):
    """tau2-symbol ``b2`` with ``Op_tau2(b2) W_tau1(f, g) = W_tau1(Op_w(a) f, g)``.

    For trigonometric ``a`` the result is returned in mode form
    (:class:`TrigSymbol4`) when ``x_axis`` is None, otherwise sampled.
    """
    if isinstance(a, TrigSymbol):
        modes = transport_modes(a, tau1, "b").to_tau(tau2)
        return modes if x_axis is None else modes.sample(symbol4_axes(x_axis))
    return tau_convert_4(transport_b(a, tau1), 0.5, tau2)


# ---------------------------------------------------------------------------
# operators on phase space


def _check_4d(b: Symbol4Field, F: PhaseSpaceField):
    ax = b.axes
    if not (ax[0].close_to(F.axes[0]) and ax[1].close_to(F.axes[1])
            and ax[2].close_to(F.axes[0].dual()) and ax[3].close_to(F.axes[1].dual())):
        raise GridMismatchError("4D symbol grid must be (x, xi, dual x, dual xi) of the field grid")


def lag_kernel_2d(b, axes, tau: float = 0.5) -> np.ndarray:
    """``M[z1, z2, m1, m2] = b_check(z - tau s_m, s_m)`` on the phase-space grid ``axes``."""
    a0, a1 = axes
    if isinstance(b, TrigSymbol4):
        M = np.zeros((a0.n, a1.n, a0.n, a1.n), dtype=complex)
        z0 = a0.points
        z1 = a1.points
        cell = a0.step * a1.step
        for c, P, Q in b.modes:
            m0 = int(round(-Q[0] / a0.step)) + a0.n // 2
            m1 = int(round(-Q[1] / a1.step)) + a1.n // 2
            if not (0 <= m0 < a0.n and 0 <= m1 < a1.n):
                raise GridMismatchError("symbol momentum frequency lies outside the lag window")
            if abs(a0.points[m0] + Q[0]) > 1e-9 * a0.step or abs(a1.points[m1] + Q[1]) > 1e-9 * a1.step:
                raise GridMismatchError("symbol momentum frequency is off the lag grid")
            s0, s1 = a0.points[m0], a1.points[m1]
            M[:, :, m0, m1] += c * np.outer(np.exp(2j * np.pi * P[0] * (z0 - tau * s0)),
                                            np.exp(2j * np.pi * P[1] * (z1 - tau * s1))) / cell
        return M
    ax = b.axes
    check = icdftn(b.values, (ax[2].step, ax[3].step), (2, 3))
    if tau == 0.0:
        return check
    spec = cdftn(check, (a0.step, a1.step), (0, 1))
    P0 = shift_phases(a0, -tau * a0.points)  # (m0, w0)
    P1 = shift_phases(a1, -tau * a1.points)  # (m1, w1)
    spec *= P0.T[:, None, :, None] * P1.T[None, :, None, :]
    return icdftn(spec, (a0.dual_step, a1.dual_step), (0, 1))


def _gather_2d(F: np.ndarray) -> np.ndarray:
    n0, n1 = F.shape
    i0 = _roll_index(n0)
    i1 = _roll_index(n1)
    return F[i0[:, None, :, None], i1[None, :, None, :]]


def tau_apply_2d(b, F: PhaseSpaceField, tau: float = 0.5) -> PhaseSpaceField:
    """``Op_tau(b) F`` for a phase-space field ``F``."""
    if isinstance(b, Symbol4Field):
        _check_4d(b, F)
    M = lag_kernel_2d(b, F.axes, tau)
    vals = np.einsum("ijkl,ijkl->ij", M, _gather_2d(F.values)) * F.cell
    return F.with_values(vals)


def weyl_apply_2d(b, F: PhaseSpaceField) -> PhaseSpaceField:
    """Weyl operator with a 4D symbol acting on a phase-space field."""
    return tau_apply_2d(b, F, 0.5)


def trig_apply_2d(b: TrigSymbol4, F: PhaseSpaceField, tau: float = 0.5) -> PhaseSpaceField:
    """Mode-by-mode action ``exp(2 pi i P.z) exp(2 pi i tau P.Q) F(z + Q)``.

    Shifts use the periodic band-limited model, so off-grid momenta are allowed.
    """
    a0, a1 = F.axes
    z0 = a0.points[:, None]
    z1 = a1.points[None, :]
    spec = cdftn(F.values, (a0.step, a1.step), (0, 1))
    out = np.zeros_like(F.values)
    for c, P, Q in b.modes:
        ph = shift_phases(a0, np.array([Q[0]]))[0][:, None] * shift_phases(a1, np.array([Q[1]]))[0][None, :]
        moved = icdftn(spec * ph, (a0.dual_step, a1.dual_step), (0, 1))
        out += c * np.exp(2j * np.pi * tau * (P[0] * Q[0] + P[1] * Q[1])) \
            * np.exp(2j * np.pi * (P[0] * z0 + P[1] * z1)) * moved
    return F.with_values(out)


def kernel_matrix_2d(b, axes, tau: float = 0.5) -> np.ndarray:
    """Dense kernel ``K[z, w]`` (flattened, quadrature weight included)."""
    a0, a1 = axes
    if max(a0.n, a1.n) > MAX_KERNEL_SIDE:
        raise NumericalGuardError(f"kernel route is limited to {MAX_KERNEL_SIDE} points per axis")
    M = lag_kernel_2d(b, axes, tau)
    n0, n1 = a0.n, a1.n
    i0 = _roll_index(n0)
    i1 = _roll_index(n1)
    K = np.zeros((n0, n1, n0, n1), dtype=complex)
    Z0, Z1, M0, M1 = np.meshgrid(np.arange(n0), np.arange(n1), np.arange(n0), np.arange(n1), indexing="ij")
    K[Z0, Z1, i0[Z0, M0], i1[Z1, M1]] = M
    return K.reshape(n0 * n1, n0 * n1) * a0.step * a1.step


@dataclass(frozen=True)
class WignerKernel:
    """Dense phase-space kernel with quadrature weight folded into ``matrix``."""

    matrix: np.ndarray
    axes: tuple
    source: object = None

    def apply(self, W: PhaseSpaceField) -> PhaseSpaceField:
        if not all(p.close_to(q) for p, q in zip(self.axes, W.axes)):
            raise GridMismatchError("kernel and field grids differ")
        return W.with_values((self.matrix @ W.values.ravel()).reshape(W.values.shape))

    def off_diagonal_max(self) -> float:
        K = self.matrix.copy()
        np.fill_diagonal(K, 0)
        return float(np.max(np.abs(K)))

    def values(self) -> np.ndarray:
        """Kernel values ``k(z, w)`` without the quadrature weight."""
        return self.matrix / (self.axes[0].step * self.axes[1].step)


def wigner_kernel(a, tau: float = 0.5, x_axis: Axis | None = None) -> WignerKernel:
    """Kernel ``k`` with ``W_tau(Op_w(a) f) = k W_tau f``, built from ``c = transport_c(a, tau)``."""
    if isinstance(a, TrigSymbol):
        if x_axis is None:
            raise DomainError("a trigonometric symbol needs x_axis")
        c = transport_modes(a, tau, "c")
    else:
        x_axis = a.axes[0]
        c = transport_c(a, tau)
    axes = (x_axis, x_axis.dual())
    return WignerKernel(kernel_matrix_2d(c, axes), axes, c)


def lag_grid_2d(axes):
    """Lag coordinates ``(s1, s2)`` matching :func:`lag_kernel_2d` indices."""
    return np.meshgrid(axes[0].points, axes[1].points, indexing="ij")


def weighted_symbol_cN(c: Symbol4Field, N: int) -> Symbol4Field:
    """``(1 - Laplacian_zeta / (4 pi^2))^N c`` computed spectrally in ``zeta = (u, v)``."""
    if N < 0:
        raise DomainError("N must be >= 0")
    if N == 0:
        return c
    ax = c.axes
    check = icdftn(c.values, (ax[2].step, ax[3].step), (2, 3))
    s0 = ax[2].dual().points.copy()
    s1 = ax[3].dual().points.copy()
    w = (1 + s0[:, None] ** 2 + s1[None, :] ** 2) ** N
    check *= w[None, None, :, :]
    return Symbol4Field(ax, cdftn(check, (ax[2].dual().step, ax[3].dual().step), (2, 3)))


def japanese_bracket(axes) -> np.ndarray:
    """``<z - w>^2`` for the flattened dense kernel layout."""
    Z0, Z1 = np.meshgrid(axes[0].points, axes[1].points, indexing="ij")
    z0 = Z0.ravel()
    z1 = Z1.ravel()
    d0 = z0[:, None] - z0[None, :]
    d1 = z1[:, None] - z1[None, :]
    # lags are taken on the centered period, as in the kernel layout
    p0 = 2 * axes[0].extent
    p1 = 2 * axes[1].extent
    d0 = (d0 + axes[0].extent) % p0 - axes[0].extent
    d1 = (d1 + axes[1].extent) % p1 - axes[1].extent
    return 1 + d0 ** 2 + d1 ** 2

"""Weighted mixed norms, modulation-norm surrogates and wave-front estimation."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DomainError
from .grid import Axis, PhaseSpaceField, SampledSignal, cdftn
from .signals import bump, ghost_partner, gaussian
from .tfr import _interior, q_tau, stft, tau_wigner


# ---------------------------------------------------------------------------
# weights and norms


@dataclass(frozen=True)
class WeightSpec:
    """Polynomial weight ``v_s(z) = (1 + |z|^2)^(s/2)``.

    With ``tau`` set, the weight is composed with ``B_tau``:
    ``m_tau(x, xi) = v_s(x/(1 - tau), xi/tau)``.  ``part`` restricts the
    weight to the position (``"x"``) or frequency (``"xi"``) variable.
    """

    s: float = 0.0
    tau: float | None = None
    part: str = "both"

    def __post_init__(self):
        if self.part not in ("both", "x", "xi"):
            raise DomainError(f"unknown weight part {self.part!r}")
        if self.tau is not None:
            _interior(self.tau)

    def __call__(self, x, xi) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        xi = np.asarray(xi, dtype=float)
        if self.tau is not None:
            x = x / (1 - self.tau)
            xi = xi / self.tau
        if self.part == "x":
            xi = np.zeros_like(xi)
        elif self.part == "xi":
            x = np.zeros_like(x)
        return (1.0 + x ** 2 + xi ** 2) ** (self.s / 2)

    def composed(self, tau: float) -> "WeightSpec":
        return WeightSpec(self.s, tau, self.part)


def _lp(vals: np.ndarray, p: float, step: float, axis: int) -> np.ndarray:
    if np.isinf(p):
        return np.max(vals, axis=axis)
    return (np.sum(vals ** p, axis=axis) * step) ** (1.0 / p)


def mixed_norm(F: PhaseSpaceField, p: float = 2.0, q: float = 2.0, m: WeightSpec | None = None) -> float:
    """Discrete ``L^{p,q}_m`` norm: inner ``p``-norm in ``x``, outer ``q``-norm in ``xi``."""
    for e in (p, q):
        if not (np.isinf(e) or e >= 1):
            raise DomainError("exponents must lie in [1, inf]")
    X, XI = F.mesh()
    w = 1.0 if m is None else m(X, XI)
    vals = np.abs(F.values) * w
    a0, a1 = F.axes
    inner = _lp(vals, p, a0.step, axis=0)
    return float(_lp(inner, q, a1.step, axis=0))


def modnorm_stft(f: SampledSignal, g: SampledSignal, p=2.0, q=2.0, s: float = 0.0) -> float:
    """``||V_g f||_{L^{p,q}_{v_s}}`` on the grid."""
    return mixed_norm(stft(f, g), p, q, WeightSpec(s))


def modnorm_tau(f: SampledSignal, g: SampledSignal, tau, p=2.0, q=2.0, s: float = 0.0) -> float:
    """Modulation norm of ``f`` (window ``g``) computed from ``W_tau(f, Q_tau^{-1} g)``.

    Uses ``||V_g f||_{L^{p,q}_m} = tau^(1 - 1/q) (1 - tau)^(-1/p)
    ||W_tau(f, Q_tau^{-1} g)||_{L^{p,q}_{m_tau}}`` (``d = 1``).
    """
    t = _interior(tau)
    h = q_tau(g, t, inverse=True)
    W = tau_wigner(f, h, t)
    inv_p = 0.0 if np.isinf(p) else 1.0 / p
    inv_q = 0.0 if np.isinf(q) else 1.0 / q
    const = t ** (1 - inv_q) * (1 - t) ** (-inv_p)
    return const * mixed_norm(W, p, q, WeightSpec(s, t))


def field_modnorm(F: PhaseSpaceField, p: float = 1.0, s: float = 0.0, stride: int = 1) -> float:
    """``M^p_{v_s (x) 1}`` surrogate of a phase-space field.

    Takes the 2D STFT of ``F`` with the Gaussian window ``exp(-pi |z|^2)``
    (window centers on every ``stride``-th grid point, weight on the centers)
    and returns its mixed ``L^p`` norm over ``R^4``.
    """
    a0, a1 = F.axes
    Z0, Z1 = F.mesh()
    c0 = a0.points[::stride]
    c1 = a1.points[::stride]
    wsum = 0.0
    for x0 in c0:
        for x1 in c1:
            win = np.exp(-np.pi * ((Z0 - x0) ** 2 + (Z1 - x1) ** 2))
            V = cdftn(F.values * win, (a0.step, a1.step), (0, 1))
            dual_cell = a0.dual_step * a1.dual_step
            weight = (1.0 + x0 ** 2 + x1 ** 2) ** (s / 2)
            if np.isinf(p):
                wsum = max(wsum, weight * np.max(np.abs(V)))
            else:
                wsum += weight ** p * np.sum(np.abs(V) ** p) * dual_cell
    if np.isinf(p):
        return float(wsum)
    return float((wsum * a0.step * a1.step * stride ** 2) ** (1.0 / p))


def signal_modnorm(f: SampledSignal, p: float = 1.0, s: float = 0.0) -> float:
    """``M^p_{v_s}`` surrogate with the Gaussian window."""
    return mixed_norm(stft(f, gaussian(f.axis)), p, p, WeightSpec(s))


# ---------------------------------------------------------------------------
# wave-front estimation


@dataclass(frozen=True)
class ConeConfig:
    """Parameters of the conic decay estimator.

    ``outer_radius=None`` means half the grid extent, ``min(R_x, R_xi)/2``:
    a Wigner distribution evaluates the signal at ``x +- t/2``, so only that
    disk is free of window-edge effects.  ``inner_fraction`` sets
    ``r0 = inner_fraction * outer_radius`` (a quarter of the extent by default).
    """

    directions: int = 64
    half_angle: float = np.pi / 16
    inner_fraction: float = 0.5
    outer_radius: float | None = None
    orders: tuple = (1, 2, 3)
    threshold: float = 4.0
    bins: int = 12
    floor: float = 1e-9

    def __post_init__(self):
        if not 0 < self.half_angle < np.pi / 2:
            raise DomainError("cone half-angle must lie in (0, pi/2)")
        if not 0 < self.inner_fraction < 1:
            raise DomainError("inner radius must be smaller than the outer radius")
        if self.directions < 1 or self.bins < 2:
            raise DomainError("need at least one direction and two radial bins")
        if len(self.orders) == 0:
            raise DomainError("orders must be non-empty")
        object.__setattr__(self, "orders", tuple(int(n) for n in self.orders))

    def radii(self, axes) -> tuple:
        R = self.outer_radius if self.outer_radius is not None else 0.5 * min(axes[0].extent, axes[1].extent)
        return self.inner_fraction * R, R


@dataclass
class DirectionRecord:
    theta: float
    exponent: float
    integrals: dict
    flagged: bool


@dataclass
class WaveFrontReport:
    records: list
    meta: dict = field(default_factory=dict)

    @property
    def flags(self) -> np.ndarray:
        return np.array([r.flagged for r in self.records], dtype=bool)

    @property
    def thetas(self) -> np.ndarray:
        return np.array([r.theta for r in self.records])

    @property
    def exponents(self) -> np.ndarray:
        return np.array([r.exponent for r in self.records])

    def flagged_indices(self) -> set:
        return {i for i, r in enumerate(self.records) if r.flagged}

    def to_dict(self) -> dict:
        recs = []
        for r in self.records:
            d = asdict(r)
            d["exponent"] = None if not np.isfinite(r.exponent) else r.exponent
            d["integrals"] = {str(k): v for k, v in r.integrals.items()}
            recs.append(d)
        return {"meta": self.meta, "directions": recs}

    def to_csv(self) -> str:
        orders = sorted(self.records[0].integrals) if self.records else []
        lines = ["theta,exponent,flagged," + ",".join(f"I_{n}" for n in orders)]
        for r in self.records:
            vals = ",".join(f"{r.integrals[n]:.12e}" for n in orders)
            lines.append(f"{r.theta:.12f},{r.exponent:.6f},{int(r.flagged)},{vals}")
        return "\n".join(lines) + "\n"


def _angle_gap(phi: np.ndarray, theta: float) -> np.ndarray:
    return np.abs((phi - theta + np.pi) % (2 * np.pi) - np.pi)


def wavefront(F: PhaseSpaceField, cfg: ConeConfig | None = None, meta: dict | None = None) -> WaveFrontReport:
    """Per-direction decay of ``|F|`` in cones ``|angle - theta| < half_angle``.

    For each direction the cone is cut to the annulus ``[r0, R]``; the weights
    taper as ``cos^2`` in angle.  The radial profile is the weighted RMS of
    ``|F|`` per radial bin and its log-log slope is the decay exponent.  A bin
    below ``floor * max|F|`` counts as decay to numerical zero (exponent
    ``-inf``).  A direction is flagged when the exponent exceeds
    ``-threshold``.
    """
    cfg = ConeConfig() if cfg is None else cfg
    X, XI = F.mesh()
    r = np.hypot(X, XI)
    phi = np.arctan2(XI, X)
    r0, R = cfg.radii(F.axes)
    if not r0 < R:
        raise DomainError("degenerate annulus")
    amp2 = np.abs(F.values) ** 2
    peak = float(np.sqrt(amp2.max())) if amp2.size else 0.0
    edges = np.linspace(r0, R, cfg.bins + 1)
    centers = 0.5 * (edges[1:] + edges[:-1])
    ring = (r >= r0) & (r <= R)
    bin_idx = np.clip(np.searchsorted(edges, r, side="right") - 1, 0, cfg.bins - 1)
    records = []
    for j in range(cfg.directions):
        theta = 2 * np.pi * j / cfg.directions
        gap = _angle_gap(phi, theta)
        w = np.where(ring & (gap < cfg.half_angle), np.cos(0.5 * np.pi * gap / cfg.half_angle) ** 2, 0.0)
        integrals = {n: float(np.sum(r ** (2 * n) * amp2 * w) * F.cell) for n in cfg.orders}
        wsum = np.bincount(bin_idx.ravel(), weights=w.ravel(), minlength=cfg.bins)
        esum = np.bincount(bin_idx.ravel(), weights=(w * amp2).ravel(), minlength=cfg.bins)
        ok = wsum > 0
        if peak == 0.0 or ok.sum() < 2:
            alpha = -np.inf
        else:
            rms = np.sqrt(esum[ok] / wsum[ok])
            if np.any(rms <= cfg.floor * peak):
                alpha = -np.inf
            else:
                alpha = float(np.polyfit(np.log(centers[ok]), np.log(rms), 1)[0])
        records.append(DirectionRecord(theta, alpha, integrals, bool(alpha > -cfg.threshold)))
    info = {"config": {k: (list(v) if isinstance(v, tuple) else v) for k, v in asdict(cfg).items()},
            "grid": [a.to_dict() for a in F.axes]}
    info.update(meta or {})
    return WaveFrontReport(records, info)


def representation(f: SampledSignal, rep: str = "wigner", tau: float = 0.5, window: SampledSignal | None = None):
    """Phase-space field used for wave-front estimation: ``W_tau f`` or ``|V_g f|^2``."""
    if rep == "wigner":
        return tau_wigner(f, f, tau)
    if rep == "gabor":
        g = gaussian(f.axis) if window is None else window
        V = stft(f, g)
        return V.with_values(np.abs(V.values) ** 2)
    raise DomainError(f"unknown representation {rep!r}")


def signal_wavefront(f: SampledSignal, rep: str = "wigner", tau: float = 0.5, cfg: ConeConfig | None = None,
                     window: SampledSignal | None = None) -> WaveFrontReport:
    meta = {"representation": rep, "tau": tau if rep == "wigner" else None}
    return wavefront(representation(f, rep, tau, window), cfg, meta)


def axis_directions(cfg: ConeConfig) -> set:
    """Indices of directions whose cone contains a coordinate axis."""
    out = set()
    for j in range(cfg.directions):
        theta = 2 * np.pi * j / cfg.directions
        for ax_angle in (0.0, np.pi / 2, np.pi, 3 * np.pi / 2):
            # a cone whose edge only touches the axis (zero taper weight) does not count
            if _angle_gap(np.array(theta), ax_angle) < cfg.half_angle * (1 - 1e-9):
                out.add(j)
    return out


def diagonal_directions(cfg: ConeConfig) -> set:
    """Indices of directions closest to the four diagonals."""
    out = set()
    for k in range(4):
        ang = np.pi / 4 + k * np.pi / 2
        j = int(round(ang / (2 * np.pi) * cfg.directions)) % cfg.directions
        out.add(j)
    return out


@dataclass
class GhostResult:
    signal: SampledSignal
    gabor: WaveFrontReport
    wigner: WaveFrontReport


def ghost_demo(n: int = 1024, extent: float = 8.0, cfg: ConeConfig | None = None) -> GhostResult:
    """Bump ``f`` plus ``g = -2 pi fhat``: Gabor versus Wigner wave fronts.

    The axis is oversampled (``extent**2 < n/4``) so the annulus stays well
    below the frequency where the grid-resolved jump of ``f`` rolls off.
    """
    ax = Axis(n, extent)
    f = bump(ax)
    g = ghost_partner(f)
    h = f.with_values(f.values + g.values)
    cfg = ConeConfig() if cfg is None else cfg
    return GhostResult(h, signal_wavefront(h, "gabor", cfg=cfg), signal_wavefront(h, "wigner", 0.5, cfg))

"""Fast invariant suite behind ``phasespace selfcheck``.

Each check returns ``(name, passed, detail)``; grids are kept small so the
whole suite runs in a few seconds.
"""
from __future__ import annotations

import numpy as np

from .grid import TensorField, square_axis
from .signals import chirped_gaussian, gaussian, hermite


def _rel(a, b) -> float:
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300))


def check_moyal():
    from .tfr import tau_wigner
    ax = square_axis(128)
    f1, g1, f2, g2 = gaussian(ax), hermite(ax, 1), chirped_gaussian(ax, 1.0), gaussian(ax, 2.0)
    worst = 0.0
    for tau in (0.0, 0.25, 0.5, 0.75, 1.0):
        lhs = tau_wigner(f1, g1, tau).inner(tau_wigner(f2, g2, tau))
        rhs = f1.inner(f2) * np.conj(g1.inner(g2))
        worst = max(worst, abs(lhs - rhs))
    return "moyal", bool(worst <= 1e-9), f"max gap {worst:.2e}"


def check_gaussian():
    from .tfr import wigner
    ax = square_axis(128)
    X, XI = np.meshgrid(ax.points, ax.dual().points, indexing="ij")
    lam = 2.0
    W = wigner(gaussian(ax, lam), gaussian(ax)).values
    ref = 2 / np.sqrt(lam + 1) * np.exp(-4 * np.pi * (lam * X ** 2 + XI ** 2) / (lam + 1)
                                         + 4j * np.pi * (lam - 1) * X * XI / (lam + 1))
    err = float(np.max(np.abs(W - ref)) / np.max(np.abs(ref)))
    return "gaussian closed form", err <= 1e-8, f"relative error {err:.2e}"


def check_bridge():
    from .tfr import stft_wigner_bridge_check
    ax = square_axis(128)
    gap = max(stft_wigner_bridge_check(gaussian(ax), chirped_gaussian(ax, 0.5), t) for t in (0.25, 0.5, 0.75))
    return "stft bridge", gap <= 1e-6, f"max gap {gap:.2e}"


def check_inversion():
    from .tfr import invert_tau_wigner, tau_wigner
    ax = square_axis(256)
    f = chirped_gaussian(ax, 0.7)
    g1, g2 = gaussian(ax), gaussian(ax, 2.0)
    err = _rel(invert_tau_wigner(tau_wigner(f, g1, 0.3), g1, g2, 0.3).values, f.values)
    return "inversion", err <= 1e-6, f"relative error {err:.2e}"


def check_plans():
    from .symplectic import a_st, a_tau, a_wigner, is_covariant
    from .tfr import stft, tau_wigner
    ax = square_axis(64)
    f, g = gaussian(ax), chirped_gaussian(ax, 1.0)
    e1 = float(np.max(np.abs(a_wigner(a_tau(0.3), f, g).values - tau_wigner(f, g, 0.3).values)))
    e2 = float(np.max(np.abs(a_wigner(a_st(), f, g).values - stft(f, g).values)))
    cls = bool(is_covariant(a_tau(0.3))) and not bool(is_covariant(a_st()))
    ok = e1 <= 1e-8 and e2 <= 1e-8 and cls
    return "metaplectic plans", ok, f"A_tau {e1:.1e}, A_ST {e2:.1e}, covariance {cls}"


def check_cohen():
    from .symplectic import CohenMultiplier, tau_b
    from .tfr import tau_wigner, wigner
    ax = square_axis(128)
    f = chirped_gaussian(ax, 0.5)
    err = float(np.max(np.abs(CohenMultiplier(tau_b(0.25)).apply(wigner(f)).values - tau_wigner(f, None, 0.25).values)))
    return "cohen multiplier", err <= 1e-7, f"max gap {err:.2e}"


def check_transport():
    from .quantization import real_trig_symbol, trig_apply_2d, transport_modes, weyl_apply
    from .tfr import tau_wigner
    ax = square_axis(32)
    a = real_trig_symbol(np.random.default_rng(3), (ax, ax.dual()), max_index=1)
    f, g = gaussian(ax), hermite(ax, 1)
    worst = 0.0
    for tau in (0.25, 0.5, 0.75):
        lhs = tau_wigner(weyl_apply(a, f), g, tau)
        rhs = trig_apply_2d(transport_modes(a, tau, "b"), tau_wigner(f, g, tau))
        worst = max(worst, _rel(rhs.values, lhs.values))
    return "symbol transport", worst <= 1e-5, f"relative error {worst:.2e}"


def check_free_particle():
    from .symplectic import apply_metaplectic, free_particle_plan, free_propagate, shear_field
    from .tfr import tau_wigner
    ax = square_axis(256)
    u0 = gaussian(ax)
    t, tau = 0.02, 0.3
    lhs = tau_wigner(free_propagate(u0, t), None, tau)
    rhs = shear_field(apply_metaplectic(free_particle_plan(tau, t), TensorField(u0, u0.conj())), 4 * np.pi * t)
    inner = np.ix_(np.abs(ax.points) <= ax.extent / 2, np.abs(ax.dual().points) <= ax.dual().extent / 2)
    err = _rel(rhs.values[inner], lhs.values[inner])
    return "free particle", err <= 1e-5, f"relative error {err:.2e}"


def check_wavefront():
    from .analysis import signal_wavefront
    ax = square_axis(256)
    r = signal_wavefront(gaussian(ax), "wigner", 0.5)
    n = int(r.flags.sum())
    return "gaussian wave front", n == 0, f"{n} flagged directions"


CHECKS = (check_moyal, check_gaussian, check_bridge, check_inversion, check_plans, check_cohen,
          check_transport, check_free_particle, check_wavefront)


def run_checks():
    out = []
    for fn in CHECKS:
        try:
            out.append(fn())
        except Exception as exc:  # a crash is a failed check, reported as such
            out.append((fn.__name__, False, f"{type(exc).__name__}: {exc}"))
    return out

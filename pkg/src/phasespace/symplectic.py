"""Symplectic matrices, metaplectic plans and Cohen-class kernels.

Phase space of ``R^{2d}`` is ordered as ``(x, y, xi, eta)``; a metaplectic
operator acts on functions ``F(x, y)``.  Only ``d = 1`` is exercised, but the
matrix builders accept any ``d``.

Elementary factors and their operators:

* ``[[I, 0], [C, I]]``   -> multiplication by ``exp(i pi z.Cz)``
* ``[[I, B], [0, I]]``   -> Fourier multiplier ``exp(-i pi zeta.B zeta)``
* ``diag(L^-1, L^T)``    -> ``sqrt|det L| F(L z)``
* ``J``                  -> full Fourier transform
* ``FT2``                -> partial Fourier transform in ``y``
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GridMismatchError, NotSymplecticError, SingularMatrixError
from .grid import (
    Axis,
    PhaseSpaceField,
    TensorField,
    cdft,
    chirp_multiply,
    coord_change,
    dft_2d,
    fourier_multiply,
    icdft,
    idft_2d,
    partial_dft_2,
    partial_idft_2,
    quadratic_multiplier,
    shift_phases,
)

SYMPLECTIC_TOL = 1e-10


def j_matrix(n: int) -> np.ndarray:
    """Standard symplectic form ``[[0, I], [-I, 0]]`` of size ``2n``."""
    I = np.eye(n)
    Z = np.zeros((n, n))
    return np.block([[Z, I], [-I, Z]])


def symplectic_defect(M) -> float:
    """``max |M^T J M - J|``."""
    M = np.asarray(M, dtype=float)
    J = j_matrix(M.shape[0] // 2)
    return float(np.max(np.abs(M.T @ J @ M - J)))


def is_symplectic(M, tol: float = SYMPLECTIC_TOL) -> bool:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        return False
    return symplectic_defect(M) <= tol


@dataclass(frozen=True)
class SymplecticMatrix:
    """Real ``2n x 2n`` matrix satisfying ``M^T J M = J``."""

    entries: np.ndarray
    label: str = ""

    def __post_init__(self):
        M = np.array(self.entries, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
            raise GridMismatchError(f"symplectic matrix must be square of even size, got {M.shape}")
        if not np.all(np.isfinite(M)):
            raise DomainError("matrix has non-finite entries")
        defect = symplectic_defect(M)
        if defect > SYMPLECTIC_TOL:
            raise NotSymplecticError(f"{self.label or 'matrix'} is not symplectic (defect {defect:.3e})")
        M.setflags(write=False)
        object.__setattr__(self, "entries", M)

    @property
    def n(self) -> int:
        return self.entries.shape[0] // 2

    def block(self, i: int, j: int, size: int) -> np.ndarray:
        """Block ``(i, j)`` (1-based) of a partition into ``size x size`` blocks."""
        return self.entries[(i - 1) * size:i * size, (j - 1) * size:j * size]

    def inverse(self) -> "SymplecticMatrix":
        # M^{-1} = -J M^T J for symplectic M
        J = j_matrix(self.n)
        return SymplecticMatrix(-J @ self.entries.T @ J, f"{self.label}^-1" if self.label else "")

    def __matmul__(self, other: "SymplecticMatrix") -> "SymplecticMatrix":
        return SymplecticMatrix(self.entries @ other.entries)

    def to_json(self) -> str:
        return json.dumps({"label": self.label, "entries": self.entries.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "SymplecticMatrix":
        obj = json.loads(text)
        if isinstance(obj, list):
            return cls(np.array(obj, dtype=float))
        return cls(np.array(obj["entries"], dtype=float), obj.get("label", ""))


# ---------------------------------------------------------------------------
# matrix families


def d_l(L) -> np.ndarray:
    """``diag(L^{-1}, L^T)`` for an invertible ``L``."""
    L = np.asarray(L, dtype=float)
    if abs(np.linalg.det(L)) < 1e-14:
        raise SingularMatrixError("L must be invertible")
    Z = np.zeros_like(L)
    return np.block([[np.linalg.inv(L), Z], [Z, L.T]])


def a_ft2(d: int = 1) -> np.ndarray:
    """Matrix of the partial Fourier transform in the second variable."""
    I = np.eye(d)
    Z = np.zeros((d, d))
    a11 = np.block([[I, Z], [Z, Z]])
    a12 = np.block([[Z, Z], [Z, I]])
    return np.block([[a11, a12], [-a12, a11]])


def l_tau_matrix(tau: float, d: int = 1) -> np.ndarray:
    I = np.eye(d)
    return np.block([[I, tau * I], [I, -(1 - tau) * I]])


def l_stft(d: int = 1) -> np.ndarray:
    """``L`` with ``F(L(x, y)) = F(y, y - x)``."""
    I = np.eye(d)
    return np.block([[np.zeros((d, d)), I], [-I, I]])


def a_from_l(L) -> np.ndarray:
    """``A_FT2 D_L``, the matrix whose operator is ``F2 T_L``."""
    L = np.asarray(L, dtype=float)
    return a_ft2(L.shape[0] // 2) @ d_l(L)


def a_tau(tau: float, d: int = 1) -> np.ndarray:
    I = np.eye(d)
    Z = np.zeros((d, d))
    return np.block([
        [(1 - tau) * I, tau * I, Z, Z],
        [Z, Z, tau * I, -(1 - tau) * I],
        [Z, Z, I, I],
        [-I, I, Z, Z],
    ])


def a_tau_inverse(tau: float, d: int = 1) -> np.ndarray:
    I = np.eye(d)
    Z = np.zeros((d, d))
    return np.block([
        [I, Z, Z, -tau * I],
        [I, Z, Z, (1 - tau) * I],
        [Z, I, (1 - tau) * I, Z],
        [Z, -I, tau * I, Z],
    ])


def a_st(d: int = 1) -> np.ndarray:
    I = np.eye(d)
    Z = np.zeros((d, d))
    return np.block([
        [I, -I, Z, Z],
        [Z, Z, I, I],
        [Z, Z, Z, -I],
        [-I, Z, Z, Z],
    ])


def c_tau(tau: float, d: int = 1) -> np.ndarray:
    I = np.eye(d)
    Z = np.zeros((d, d))
    return (tau - 0.5) * np.block([[Z, I], [I, Z]])


def n_tau(tau: float, d: int = 1) -> np.ndarray:
    I = np.eye(2 * d)
    Z = np.zeros((2 * d, 2 * d))
    return np.block([[I, Z], [c_tau(tau, d), I]])


def b_tau(tau: float, d: int = 1) -> np.ndarray:
    """``diag(I/(1 - tau), I/tau)``, the change of variables between ``W_tau`` and the STFT."""
    if not 0.0 < tau < 1.0:
        raise DomainError("B_tau needs tau in (0, 1)")
    return np.diag(np.r_[np.full(d, 1 / (1 - tau)), np.full(d, 1 / tau)])


def t_tau(tau: float, d: int = 1) -> np.ndarray:
    """``[[0, (1 - tau) I], [-tau I, 0]]``."""
    I = np.eye(d)
    Z = np.zeros((d, d))
    return np.block([[Z, (1 - tau) * I], [-tau * I, Z]])


_SYMPLECTIC_KINDS = ("A_tau", "A_tau_inv", "A_ST", "N_tau", "J", "D_L", "A_FT2")


def build_matrix(kind: str, tau: float | None = None, L=None, d: int = 1):
    """Construct a named matrix.

    Symplectic families come back as :class:`SymplecticMatrix` (checked on
    construction); ``B_tau`` and ``T_tau`` are returned as plain arrays.
    """
    needs_tau = kind in ("A_tau", "A_tau_inv", "N_tau", "B_tau", "T_tau")
    if needs_tau and tau is None:
        raise DomainError(f"{kind} needs tau")
    if kind == "A_tau":
        M = a_tau(tau, d)
    elif kind == "A_tau_inv":
        M = a_tau_inverse(tau, d)
    elif kind == "A_ST":
        M = a_st(d)
    elif kind == "N_tau":
        M = n_tau(tau, d)
    elif kind == "J":
        M = j_matrix(2 * d)
    elif kind == "D_L":
        if L is None:
            raise DomainError("D_L needs L")
        M = d_l(L)
    elif kind == "A_FT2":
        M = a_ft2(d)
    elif kind == "B_tau":
        return b_tau(tau, d)
    elif kind == "T_tau":
        return t_tau(tau, d)
    else:
        raise DomainError(f"unknown matrix kind {kind!r}")
    label = f"{kind}({tau})" if needs_tau else kind
    return SymplecticMatrix(M, label)


# ---------------------------------------------------------------------------
# covariance


@dataclass
class CovarianceReport:
    """Outcome of the block test; ``residuals`` maps block names to max deviation."""

    covariant: bool
    residuals: dict
    failing: list

    def __bool__(self):
        return self.covariant


def _as_array(A) -> np.ndarray:
    return A.entries if isinstance(A, SymplecticMatrix) else np.asarray(A, dtype=float)


def is_covariant(A, tol: float = SYMPLECTIC_TOL) -> CovarianceReport:
    """Test whether ``W_A(pi(z) f) = T_z W_A f``.

    Equivalent to ``A (z1, z1, z2, -z2) = (z1, z2, 0, 0)`` for all ``z1, z2``
    together with ``A`` symplectic.  The report lists the block relations
    (1-based ``Aij`` names) that fail.
    """
    M = _as_array(A)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 4:
        raise GridMismatchError(f"covariance test needs a 4d x 4d matrix, got {M.shape}")
    d = M.shape[0] // 4
    I = np.eye(d)

    def blk(i, j):
        return M[(i - 1) * d:i * d, (j - 1) * d:j * d]

    rel = {
        "A12": blk(1, 2) - (I - blk(1, 1)),
        "A14": blk(1, 4) - blk(1, 3),
        "A22": blk(2, 2) + blk(2, 1),
        "A23": blk(2, 3) - (I - blk(1, 1).T),
        "A24": blk(2, 4) + blk(1, 1).T,
        "A32": blk(3, 2) + blk(3, 1),
        "A34": blk(3, 4) - blk(3, 3),
        "A42": blk(4, 2) + blk(4, 1),
        "A44": blk(4, 4) - blk(4, 3),
    }
    residuals = {k: float(np.max(np.abs(v))) for k, v in rel.items()}
    residuals["symplectic"] = symplectic_defect(M)
    failing = [k for k, v in residuals.items() if v > tol]
    return CovarianceReport(not failing, residuals, failing)


def covariant_b(A) -> np.ndarray:
    """Symmetric ``B`` with ``A A_{1/2}^{-1} = [[I, B], [0, I]]``."""
    M = _as_array(A)
    rep = is_covariant(M)
    if not rep:
        raise DomainError(f"matrix is not covariant (failing blocks: {', '.join(rep.failing)})")
    d = M.shape[0] // 4
    At = M @ a_tau_inverse(0.5, d)
    B = At[:2 * d, 2 * d:]
    return 0.5 * (B + B.T)


def factor_ft2_dilation(A, tol: float = 1e-12):
    """Return ``L`` if ``A = A_FT2 D_L``, else ``None``."""
    M = _as_array(A)
    if M.shape[0] % 4:
        return None
    d = M.shape[0] // 4
    h = 2 * d
    # top-left 2d block is A11 L^{-1}: first d rows of L^{-1};
    # bottom-left is -A12 L^{-1}: last d rows of L^{-1}, negated.
    Linv = np.vstack([M[:d, :h], -M[h + d:, :h]])
    if abs(np.linalg.det(Linv)) < 1e-14:
        return None
    L = np.linalg.inv(Linv)
    if np.max(np.abs(a_from_l(L) - M)) > tol * max(1.0, np.abs(M).max()):
        return None
    return L


# ---------------------------------------------------------------------------
# plans


FACTOR_KINDS = ("coord-change", "chirp", "partial-dft-2", "partial-idft-2",
                "fourier-multiplier", "full-dft", "full-idft", "scalar-phase")


@dataclass(frozen=True)
class Factor:
    """One elementary step of a metaplectic plan."""

    kind: str
    matrix: tuple | None = None
    value: complex | None = None

    def __post_init__(self):
        if self.kind not in FACTOR_KINDS:
            raise DomainError(f"unknown factor kind {self.kind!r}")
        if self.kind in ("coord-change", "chirp", "fourier-multiplier"):
            if self.matrix is None:
                raise DomainError(f"{self.kind} needs a matrix")
            m = np.asarray(self.matrix, dtype=float)
            if m.shape != (2, 2):
                raise GridMismatchError("factor matrices are 2x2 for d=1")
            object.__setattr__(self, "matrix", tuple(map(tuple, m.tolist())))
        if self.kind == "scalar-phase" and self.value is None:
            raise DomainError("scalar-phase needs a value")

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.matrix is not None:
            out["matrix"] = [list(r) for r in self.matrix]
        if self.value is not None:
            out["value"] = [complex(self.value).real, complex(self.value).imag]
        return out

    @classmethod
    def from_dict(cls, obj: dict) -> "Factor":
        val = obj.get("value")
        if val is not None:
            val = complex(val[0], val[1])
        return cls(obj["kind"], obj.get("matrix"), val)


@dataclass(frozen=True)
class MetaplecticPlan:
    """Ordered list of factors, applied first to last."""

    factors: tuple = ()
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    def then(self, other: "MetaplecticPlan") -> "MetaplecticPlan":
        """Plan that applies ``self`` and then ``other``."""
        return MetaplecticPlan(self.factors + other.factors, " then ".join(s for s in (self.label, other.label) if s))

    @property
    def is_unitary(self) -> bool:
        return all(f.kind != "scalar-phase" or abs(abs(f.value) - 1) < 1e-14 for f in self.factors)

    def to_dict(self) -> dict:
        return {"label": self.label, "factors": [f.to_dict() for f in self.factors]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj: dict) -> "MetaplecticPlan":
        return cls(tuple(Factor.from_dict(f) for f in obj["factors"]), obj.get("label", ""))


def apply_metaplectic(plan: MetaplecticPlan, F) -> PhaseSpaceField:
    """Run the factors of ``plan`` on ``F`` (a field or a lazy tensor product)."""
    for fac in plan.factors:
        k = fac.kind
        if k == "coord-change":
            F = coord_change(F, np.array(fac.matrix))
            continue
        if isinstance(F, TensorField):
            F = F.materialize()
        if k == "chirp":
            F = chirp_multiply(F, np.array(fac.matrix))
        elif k == "partial-dft-2":
            F = partial_dft_2(F)
        elif k == "partial-idft-2":
            F = partial_idft_2(F)
        elif k == "fourier-multiplier":
            F = fourier_multiply(F, np.array(fac.matrix))
        elif k == "full-dft":
            F = dft_2d(F)
        elif k == "full-idft":
            F = idft_2d(F)
        elif k == "scalar-phase":
            F = F.with_values(F.values * fac.value)
    if isinstance(F, TensorField):
        F = F.materialize()
    return F


def _is_identity(M, tol=1e-14) -> bool:
    return np.max(np.abs(M - np.eye(M.shape[0]))) <= tol


def plan_for_matrix(A) -> MetaplecticPlan:
    """Plan for the matrix families with a known factorization.

    Handles the identity, ``J``, lower and upper unitriangular matrices,
    ``D_L``, ``A_FT2 D_L`` (which includes ``A_tau`` and ``A_ST``) and
    covariant matrices.  Anything else needs a caller-supplied plan.
    """
    M = _as_array(A)
    if M.shape != (4, 4):
        raise GridMismatchError("plans are implemented for d=1 (4x4 matrices)")
    if not is_symplectic(M):
        raise NotSymplecticError("matrix is not symplectic")
    tl, tr, bl, br = M[:2, :2], M[:2, 2:], M[2:, :2], M[2:, 2:]
    Z = np.zeros((2, 2))
    I = np.eye(2)
    if _is_identity(M):
        return MetaplecticPlan((), "identity")
    if np.allclose(M, j_matrix(2), atol=1e-14):
        return MetaplecticPlan((Factor("full-dft"),), "J")
    if np.allclose(tl, I, atol=1e-14) and np.allclose(br, I, atol=1e-14):
        if np.allclose(tr, Z, atol=1e-14):
            return MetaplecticPlan((Factor("chirp", bl),), "lower")
        if np.allclose(bl, Z, atol=1e-14):
            return MetaplecticPlan((Factor("fourier-multiplier", tr),), "upper")
    if np.allclose(tr, Z, atol=1e-14) and np.allclose(bl, Z, atol=1e-14):
        return MetaplecticPlan((Factor("coord-change", np.linalg.inv(tl)),), "D_L")
    L = factor_ft2_dilation(M)
    if L is not None:
        return MetaplecticPlan((Factor("coord-change", L), Factor("partial-dft-2")), "FT2 D_L")
    if is_covariant(M):
        plan, _ = plan_for_covariant(M)
        return plan
    raise DomainError("no factorization available for this matrix; supply a MetaplecticPlan")


def a_wigner(A, f, g=None, plan: MetaplecticPlan | None = None) -> PhaseSpaceField:
    """``mu(A)(f (x) conj g)``."""
    g = f if g is None else g
    plan = plan_for_matrix(A) if plan is None else plan
    return apply_metaplectic(plan, TensorField(f, g.conj()))


# ---------------------------------------------------------------------------
# Cohen class


@dataclass(frozen=True)
class CohenMultiplier:
    """Fourier multiplier ``zeta -> exp(-i pi zeta.B zeta)`` of a Cohen kernel."""

    B: np.ndarray

    def __post_init__(self):
        B = np.array(self.B, dtype=float)
        if B.ndim != 2 or B.shape[0] != B.shape[1]:
            raise GridMismatchError("B must be square")
        if not np.allclose(B, B.T, rtol=0, atol=1e-14 * max(1.0, np.abs(B).max())):
            raise DomainError("B must be symmetric")
        B.setflags(write=False)
        object.__setattr__(self, "B", B)

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.B)

    @property
    def signature(self) -> int:
        """Positive minus negative eigenvalue count."""
        ev = self.eigenvalues
        tol = 1e-12 * max(1.0, np.abs(ev).max())
        return int(np.sum(ev > tol) - np.sum(ev < -tol))

    @property
    def nullity(self) -> int:
        ev = self.eigenvalues
        tol = 1e-12 * max(1.0, np.abs(ev).max())
        return int(np.sum(np.abs(ev) <= tol))

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.B))

    def __call__(self, zeta1, zeta2) -> np.ndarray:
        B = self.B
        q = B[0, 0] * zeta1 ** 2 + 2 * B[0, 1] * zeta1 * zeta2 + B[1, 1] * zeta2 ** 2
        return np.exp(-1j * np.pi * q)

    def on_grid(self, axes) -> np.ndarray:
        """Multiplier samples on the dual grid of ``axes``."""
        return quadratic_multiplier(self.B, axes)

    def apply(self, F: PhaseSpaceField) -> PhaseSpaceField:
        return fourier_multiply(F, self.B)

    def plan(self) -> MetaplecticPlan:
        return MetaplecticPlan((Factor("fourier-multiplier", self.B),), "cohen multiplier")


def wigner_plan() -> MetaplecticPlan:
    return MetaplecticPlan((Factor("coord-change", l_tau_matrix(0.5)), Factor("partial-dft-2")), "wigner")


def plan_for_covariant(A):
    """Wigner plan followed by the Cohen multiplier of ``A A_{1/2}^{-1}``.

    Returns ``(plan, CohenMultiplier)``.
    """
    B = covariant_b(A)
    mult = CohenMultiplier(B)
    return wigner_plan().then(mult.plan()), mult


def tau_b(tau: float) -> np.ndarray:
    b = tau - 0.5
    return np.array([[0.0, b], [b, 0.0]])


@dataclass
class CohenKernel:
    """Cohen kernel of a covariant representation.

    ``multiplier`` is always present.  ``chirp`` holds the closed-form kernel
    sampled on ``chirp_axes`` when ``det B != 0``; ``dirac`` marks ``B = 0``.
    """

    multiplier: CohenMultiplier
    dirac: bool
    chirp: PhaseSpaceField | None = None
    chirp_axes: tuple | None = None


def chirp_matched_axes(B, n: int):
    """Square grid on which ``exp(i pi z.B^{-1}z)`` has an exact discrete transform.

    Requires ``B`` antidiagonal; the chirp is ``exp(2 pi i a x xi)`` with
    ``a = 1/B[0,1]`` and the grid satisfies ``step_x * step_xi = 1/(|a| n)``.
    """
    B = np.asarray(B, dtype=float)
    if abs(B[0, 0]) > 0 or abs(B[1, 1]) > 0 or B[0, 1] == 0:
        raise DomainError("chirp-matched grids need an antidiagonal, invertible B")
    a = 1.0 / B[0, 1]
    step = 1.0 / np.sqrt(abs(a) * n)
    ax = Axis(n, 0.5 * n * step)
    return ax, ax


def closed_form_kernel(B, axes) -> np.ndarray:
    """``|det B|^{-1/2} exp(-i pi sgn/4) exp(i pi z.B^{-1} z)`` sampled on ``axes``."""
    mult = CohenMultiplier(B)
    Binv = np.linalg.inv(mult.B)
    X, XI = np.meshgrid(axes[0].points, axes[1].points, indexing="ij")
    q = Binv[0, 0] * X * X + 2 * Binv[0, 1] * X * XI + Binv[1, 1] * XI * XI
    pref = abs(mult.det) ** -0.5 * np.exp(-1j * np.pi * mult.signature / 4)
    return pref * np.exp(1j * np.pi * q)


def cohen_kernel(tau: float | None = None, B=None, n: int = 256) -> CohenKernel:
    """Cohen kernel for ``W_tau`` (``tau`` given) or for a symmetric ``B``."""
    if (tau is None) == (B is None):
        raise DomainError("give exactly one of tau or B")
    B = tau_b(tau) if tau is not None else np.asarray(B, dtype=float)
    mult = CohenMultiplier(B)
    if np.max(np.abs(mult.B)) == 0.0:
        return CohenKernel(mult, True)
    if abs(mult.det) < 1e-14:
        return CohenKernel(mult, False)
    try:
        axes = chirp_matched_axes(mult.B, n)
    except DomainError:
        axes = (Axis(n, 0.5 * np.sqrt(n)),) * 2
    return CohenKernel(mult, False, PhaseSpaceField(axes, closed_form_kernel(mult.B, axes)), axes)


# ---------------------------------------------------------------------------
# N_tau operators and the free particle


def n_tau_operator(tau: float, F: PhaseSpaceField, inverse_transpose: bool = False) -> PhaseSpaceField:
    """Apply ``mu(N_tau)`` (a chirp) or ``mu(N_tau^{-T})`` (a Fourier multiplier)."""
    M = n_tau(tau)
    if inverse_transpose:
        M = np.linalg.inv(M).T
    return apply_metaplectic(plan_for_matrix(M), F)


def free_particle_plan(tau: float, t: float, form: str = "cohen") -> MetaplecticPlan:
    """Plan producing ``W_{tau,t}``, the Cohen-class form with kernel ``sigma_tau(x + 4 pi t xi, xi)``.

    ``form="cohen"`` applies the tau-Wigner plan followed by the multiplier
    ``exp(8 pi^2 i t (tau - 1/2) zeta_1^2)``.  ``form="chirp"`` inserts the
    lag chirp ``exp(2 pi i t (1 - 2 tau) y^2)`` between the coordinate change
    and the partial transform instead; it agrees with the Cohen form only at
    ``tau = 1/2`` or ``t = 0``.
    """
    L = l_tau_matrix(tau)
    base = (Factor("coord-change", L),)
    if form == "chirp":
        C = np.array([[0.0, 0.0], [0.0, 2.0 * t * (1 - 2 * tau)]])
        facs = base + ((Factor("chirp", C),) if C[1, 1] != 0 else ()) + (Factor("partial-dft-2"),)
        return MetaplecticPlan(facs, f"free particle chirp tau={tau} t={t}")
    if form != "cohen":
        raise DomainError(f"unknown free-particle form {form!r}")
    b11 = -8 * np.pi * t * (tau - 0.5)
    facs = base + (Factor("partial-dft-2"),)
    if b11 != 0:
        facs = facs + (Factor("fourier-multiplier", np.array([[b11, 0.0], [0.0, 0.0]])),)
    return MetaplecticPlan(facs, f"free particle tau={tau} t={t}")


def free_propagate(u0, t: float):
    """Solution of ``i u_t + u_xx = 0`` at time ``t`` by exact Fourier propagation."""
    ax = u0.axis
    w = ax.dual().points
    spec = cdft(u0.values, ax.step) * np.exp(-4j * np.pi ** 2 * w ** 2 * t)
    return u0.with_values(icdft(spec, ax.dual_step))


def shear_field(F: PhaseSpaceField, c: float) -> PhaseSpaceField:
    """``F(x - c xi, xi)`` by a spectral shift of each column."""
    a0, a1 = F.axes
    spec = cdft(F.values, a0.step, axis=0) * shift_phases(a0, -c * a1.points).T
    return F.with_values(icdft(spec, a0.dual_step, axis=0))

"""Discrete phase-space analysis: tau-Wigner and A-Wigner representations,
metaplectic plans, Weyl/tau quantization with symbol transport, and a conic
wave-front estimator on uniform grids."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DomainError,
    GridMismatchError,
    NotSymplecticError,
    NumericalGuardError,
    PhaseSpaceError,
    SingularMatrixError,
    SizingError,
)
from .grid import Axis, PhaseSpaceField, SampledSignal, Symbol4Field, TensorField, square_axis  # noqa: E402
from .tfr import stft, tau_wigner, wigner  # noqa: E402

__all__ = [
    "__version__",
    "Axis",
    "PhaseSpaceField",
    "SampledSignal",
    "Symbol4Field",
    "TensorField",
    "square_axis",
    "stft",
    "tau_wigner",
    "wigner",
    "PhaseSpaceError",
    "SizingError",
    "GridMismatchError",
    "DomainError",
    "SingularMatrixError",
    "NotSymplecticError",
    "NumericalGuardError",
]

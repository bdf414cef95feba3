"""Exception types shared across the package."""


class PhaseSpaceError(Exception):
    """Base class for all package errors."""


class SizingError(PhaseSpaceError, ValueError):
    """Grid size is not admissible (e.g. not a power of two)."""


class GridMismatchError(PhaseSpaceError, ValueError):
    """Operands live on incompatible grids."""


class DomainError(PhaseSpaceError, ValueError):
    """A parameter lies outside the domain of an operation."""


class SingularMatrixError(PhaseSpaceError, ValueError):
    """A matrix that must be invertible is singular."""


class NotSymplecticError(PhaseSpaceError, ValueError):
    """A matrix fails the symplectic invariant."""


class NumericalGuardError(PhaseSpaceError, RuntimeError):
    """A memory or conditioning guard tripped."""

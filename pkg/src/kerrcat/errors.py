"""Exception types raised by the simulation modules."""


class KerrCatError(Exception):
    """Base class for all library errors."""


class DomainError(KerrCatError, ValueError):
    """Parameters outside the region where a quantity is defined."""


class UnnormalizableStateError(KerrCatError):
    """A heralded branch has (numerically) zero probability."""


class DegenerateBasisError(KerrCatError):
    """The odd cat component is numerically empty, so the cat basis is undefined."""


class IntegrationError(KerrCatError):
    """The master-equation integrator broke a state invariant."""

"""Exception types raised by the benchmark routines."""


class DomainError(ValueError):
    """An argument lies outside the domain where a solution is defined."""


class ConvergenceError(ArithmeticError):
    """An adaptive quadrature failed to reach its tolerance."""


class MonotonicityError(ValueError):
    """A quantity assumed strictly increasing in the scattering ratio is not."""

"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a formula is defined."""


class ComplexUError(DomainError):
    """The angular auxiliaries u, B, C are not real; no bound state of this family."""


class DegenerateRadicandError(ValueError):
    """The radicand of pi(s) is constant in s for every k."""


class NoPhysicalBranchError(ValueError):
    """No NU branch has a negative tau derivative (or none is real)."""


class NoSignChangeError(ValueError):
    """The quantization residual has the same sign at both bracket ends."""


class IterationLimitError(RuntimeError):
    """A root finder did not converge within its iteration budget."""


class GridTooSmallError(ValueError):
    """The finite-difference box cannot hold the requested bound states."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature hit its depth limit without converging."""


class ConfigError(ValueError):
    """A run configuration file is malformed."""


class BranchAmbiguityWarning(UserWarning):
    """Several NU branches qualified; the smallest lambda_bar was taken."""

"""Exception hierarchy shared across the package."""


class ZeroMapError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(ZeroMapError):
    """Invalid parameters, modes, or domains (maps to CLI code 'invalid_params')."""


class DegenerateBasisError(ZeroMapError):
    """The mixed product basis is singular; a nondegeneracy constraint is violated."""


class SingularMatrixError(ZeroMapError):
    """A linear system has no unique solution."""


class PoleError(ZeroMapError):
    """A moment ratio was evaluated at a pole of its denominator."""


class OracleError(ZeroMapError):
    """A measure oracle was asked for a divergent or undefined configuration."""

"""Exception types shared across the package.

The CLI maps these onto exit codes: configuration and usage problems
exit 1, file/format problems exit 2, numerical failures exit 3.
"""


class DimensionMismatch(ValueError):
    """Operands have incompatible shapes."""


class ConfigError(ValueError):
    """Invalid solver, weight, or experiment configuration."""


class InputError(ValueError):
    """Input data violates a precondition (e.g. non-finite entries)."""


class FormatError(ValueError):
    """File is not a supported image or tensor format."""


class SymmetryViolation(ValueError):
    """A spectrum that should be conjugate-symmetric is not.

    Raised by the inverse transform as a guard: losing symmetry means
    some upstream step treated mirrored frequency slices inconsistently.
    """


class NumericFailure(RuntimeError):
    """A numerical routine (e.g. an SVD) failed to converge."""

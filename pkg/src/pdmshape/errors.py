"""Exception and warning types shared across the package."""


class PdmshapeError(Exception):
    """Base class for all package-specific errors."""


class UnknownFamilyError(PdmshapeError, ValueError):
    """Requested family id is not in the catalog."""


class InvalidParamsError(PdmshapeError, ValueError):
    """Parameter set violates the family validity predicate."""


class DomainError(PdmshapeError, ValueError):
    """Evaluation point lies outside the family domain."""


class GridError(PdmshapeError, ValueError):
    """Grid construction or grid/operator compatibility failure."""


class RegimeError(PdmshapeError, ValueError):
    """Operation requested in a supersymmetry regime it does not support."""


class WindowError(PdmshapeError, ValueError):
    """Parameter-lattice window exhausted or too small for the request."""


class NonNormalizableError(PdmshapeError, RuntimeError):
    """State norm fails to converge on the requested domain."""


class SpectrumTruncationError(PdmshapeError, ValueError):
    """Level index lies beyond the truncation point of the chain spectrum."""


class ConfigError(PdmshapeError, ValueError):
    """Malformed CLI or config-file input."""


class NumericalBreakdownError(PdmshapeError, RuntimeError):
    """A non-finite value was encountered during a computation."""


class ValidityWarning(UserWarning):
    """A parameter step left the family validity region."""

"""Exception and warning types shared across the package."""


class HyperschrodError(Exception):
    """Base class; ``code`` is the machine-readable tag used by the CLI."""

    code = "ERROR"


class InputError(HyperschrodError, ValueError):
    code = "INVALID_INPUT"


class UnsupportedSpace(InputError):
    code = "UNSUPPORTED_SPACE"


class DomainError(InputError):
    code = "DOMAIN_ERROR"


class GridError(InputError):
    code = "GRID_MISMATCH"


class ParamError(InputError):
    code = "INVALID_PARAMS"


class KernelUndefined(InputError):
    code = "KERNEL_UNDEFINED"


class NumericalError(HyperschrodError, ArithmeticError):
    code = "NUMERICAL_FAILURE"


class PoleError(NumericalError):
    code = "POLE"

    def __init__(self, message, factor=None):
        super().__init__(message)
        self.factor = factor


class DensityUndefined(PoleError):
    code = "DENSITY_UNDEFINED"


class XiAccuracyError(NumericalError):
    code = "XI_ACCURACY"

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class FitError(NumericalError):
    code = "FIT_FAILED"


class NumericalWarning(UserWarning):
    pass


class TailWarning(NumericalWarning):
    """Input has not decayed at the end of its grid; truncation error is not negligible."""


class AliasWarning(NumericalWarning):
    """Field is not small at the periodic boundary; wrap-around contaminates the result."""

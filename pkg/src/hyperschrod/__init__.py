"""Spherical transforms, Schroedinger propagators and uncertainty functionals
on noncompact symmetric spaces (H^2..H^5 and SL(3,C)/SU(3))."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    AliasWarning,
    DomainError,
    FitError,
    GridError,
    InputError,
    KernelUndefined,
    NumericalError,
    ParamError,
    PoleError,
    TailWarning,
    UnsupportedSpace,
    XiAccuracyError,
)
from .symmetric_space import RadialProfile, SpaceDescriptor, build_space  # noqa: E402

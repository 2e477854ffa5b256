"""Numerical toolkit for Hermite expansions, Weyl transforms and decay certificates."""

from .errors import (
    CalibrationError,
    DegeneratePairing,
    HkitError,
    InvalidArgument,
    InvalidConfig,
    InvalidGrid,
    ParseError,
    PreconditionViolation,
)
from .grids import GridSpec, PhaseSpaceFunction, SampledFunction, gauss_hermite_grid, uniform_grid
from .special import HermiteCoefficients, hermite_coeffs, synthesize_on_grid
from .suites import Config, run_suite

__version__ = "0.1.0"

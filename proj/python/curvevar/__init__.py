"""Curvature functionals of surfaces in space forms."""

from ._curvevar import *  # noqa: F401,F403
from ._curvevar import NumericalError, Surface, ValidationError  # noqa: F401

__version__ = "0.1.0"

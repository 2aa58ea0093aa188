"""Singular hyperplane sections of the four-qubit Segre variety and the D4 deformation picture."""

from .scalar import Scalar, parse_scalar
from .states import FourQubitState

__all__ = ["Scalar", "parse_scalar", "FourQubitState"]
__version__ = "0.1.0"

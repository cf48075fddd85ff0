"""Toeplitz determinants, Fisher-Hartwig asymptotics and their applications."""

from ._core import *  # noqa: F401,F403
from ._core import InputError, NumericalError, LogDet, Symbol, Prediction

__version__ = "0.1.0"

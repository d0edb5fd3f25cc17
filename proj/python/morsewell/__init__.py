"""Bound states of Morse-type and piecewise one-dimensional potentials.

Units are hbar = 2m = 1: the equation is -psi'' + V(x) psi = E psi and a
bound state has E = -k^2.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"

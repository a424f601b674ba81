"""Radial harmonic analysis on free groups F_r.

Word arithmetic and balls in the Cayley tree (:mod:`freeradial.words`),
radial functions (:mod:`freeradial.radial`), spherical functions and the
spherical transform (:mod:`freeradial.spherical`), the dual convolution of
radial measures for r = 2 (:mod:`freeradial.hypergroup`) and operator norms
on truncated trees (:mod:`freeradial.opnorm`).
"""

from .errors import DomainError, FormatError, FreeRadialError, ResourceCapError
from .radial import RadialFunction, TreeFunction, radialize, xi
from .spherical import SphericalParameter, gauss_rule, invert, spherical_values, transform
from .words import BallIndex, multiply, reduce_word

__version__ = "0.1.0"

__all__ = [
    "BallIndex",
    "DomainError",
    "FormatError",
    "FreeRadialError",
    "RadialFunction",
    "ResourceCapError",
    "SphericalParameter",
    "TreeFunction",
    "gauss_rule",
    "invert",
    "multiply",
    "radialize",
    "reduce_word",
    "spherical_values",
    "transform",
    "xi",
]

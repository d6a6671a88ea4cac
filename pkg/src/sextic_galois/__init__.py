"""Galois groups of sextic trinomials x^6 + a x^3 + b."""

from .fields import (
    FiniteField,
    QuadNumber,
    QuadraticField,
    Rationals,
    contains_primitive_cube_root,
    is_cube,
    is_square,
    make_field,
)
from .poly import Polynomial, factor_degrees, poly_gcd

__version__ = "0.1.0"

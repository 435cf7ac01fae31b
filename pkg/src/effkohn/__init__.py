"""Exact computer algebra for the effective Kohn algorithm on special domains."""

from .groebner import (
    Ideal,
    MonomialOrder,
    TypeCapExceeded,
    TypeReport,
    buchberger,
    colength,
    contains_poly,
    contains_power_of_max_ideal,
    effective_type,
    elimination_ideal,
    normal_form,
)
from .poly import (
    GaussianRational,
    ParseError,
    Polynomial,
    Ring,
    jacobian_det,
    linear_coordinate_change,
    parse_poly,
    partial_derivative,
    poly_gcd,
    squarefree_part,
    vanishing_order,
)

__version__ = "0.1.0"

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from effkohn.poly import (
    GaussianRational,
    ParseError,
    Ring,
    divides,
    jacobian_det,
    linear_coordinate_change,
    parse_poly,
    partial_derivative,
    poly_gcd,
    squarefree_part,
    vanishing_order,
)

from conftest import P, ZW, random_poly


def test_parse_single_term():
    p = P("z^2")
    assert list(p.items()) == [((2, 0), GaussianRational(1))]


def test_parse_two_terms():
    p = P("w^3 + w*z^5")
    assert len(p) == 2
    assert p == P("w^3") + P("z^5*w")


def test_parse_gaussian_coefficient():
    ((mon, c),) = list(P("(1/2+3/4i)*z*w").items())
    assert mon == (1, 1)
    assert c == GaussianRational("1/2", "3/4")


@pytest.mark.parametrize("bad", ["z^", "z + + w", "x*z", "(z", "z^-1", ""])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_poly(bad, ZW)


def test_arithmetic_examples():
    assert P("(z+w)*(z-w)") == P("z^2 - w^2")
    p = P("3*z^2*w - 1/7*w + (0+1i)*z")
    assert (p + (-1) * p).is_zero()
    assert 1 * p == p


def test_partial_derivatives():
    assert partial_derivative(P("w^3 + w*z^5"), 1) == P("3*w^2 + z^5")
    assert partial_derivative(P("z^2"), 0) == P("2*z")
    assert partial_derivative(P("w"), 0).is_zero()


def test_jacobian_examples():
    assert jacobian_det([P("z^2"), P("w^3 + w*z^5")], [0, 1]) == P("2*z*(3*w^2 + z^5)")
    assert jacobian_det([P("z"), P("w")], [0, 1]) == P("1")
    assert jacobian_det([P("z^2"), P("w^3")], [0, 1]) == P("6*z*w^2")


def test_vanishing_order():
    assert vanishing_order(P("6*z*w^2 + 2*z^6")) == 3
    assert vanishing_order(P("1")) == 0
    assert vanishing_order(ZW.zero()) == math.inf


def test_gcd_examples():
    assert poly_gcd(P("z^2*w"), P("z*w^2")) == P("z*w")
    assert poly_gcd(P("3*z + 6*w"), ZW.zero()) == P("z + 2*w")
    assert poly_gcd(P("z^2 - w^2"), P("z - w")) == P("z - w")


def test_squarefree_examples():
    assert squarefree_part(P("48*z^3")) == (P("z"), 3)
    assert squarefree_part(P("z^2*w^4")) == (P("z*w"), 4)
    g = P("z*(3*w^2 + z^5)")
    root, m = squarefree_part(g)
    assert m == 1 and divides(root, g) and divides(g, root)


def test_coordinate_change_examples():
    assert linear_coordinate_change(P("z"), [[1, 0], [0, 1]]) == P("z")
    assert linear_coordinate_change(P("z"), [[0, 1], [1, 0]]) == P("w")
    assert linear_coordinate_change(P("z*w"), [[1, 1], [0, 1]]) == P("z*w + w^2")


def test_str_round_trip():
    p = P("(2-1/3i)*z^3*w + 5*w^2 - (0+1i)")
    assert parse_poly(str(p), ZW) == p


# -- properties ---------------------------------------------------------------

seeds = st.integers(min_value=0, max_value=2**32)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_ring_axioms(seed):
    rng = random.Random(seed)
    a, b, c = (random_poly(rng, ZW, 4, 4, min_degree=0) for _ in range(3))
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_leibniz_and_jacobian_alternating(seed):
    rng = random.Random(seed)
    a, b = random_poly(rng, ZW), random_poly(rng, ZW)
    for v in (0, 1):
        assert partial_derivative(a * b, v) == partial_derivative(a, v) * b + a * partial_derivative(b, v)
    assert jacobian_det([a, b], [0, 1]) == -jacobian_det([b, a], [0, 1])


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_gcd_divides_and_squarefree(seed):
    rng = random.Random(seed)
    a, b, c = random_poly(rng, ZW, 3), random_poly(rng, ZW, 3), random_poly(rng, ZW, 2)
    g = poly_gcd(a * c, b * c)
    assert divides(g, a * c) and divides(g, b * c)
    assert divides(c, g)
    root, _ = squarefree_part(c**2)
    r1, _ = squarefree_part(c)
    assert divides(root, r1) and divides(r1, root)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_vanishing_order_multiplicative(seed):
    rng = random.Random(seed)
    a, b = random_poly(rng, ZW, 4, min_degree=0), random_poly(rng, ZW, 4, min_degree=0)
    assert vanishing_order(a * b) == vanishing_order(a) + vanishing_order(b)


def test_ring_rejects_duplicates():
    with pytest.raises(ValueError):
        Ring(["z", "z"])

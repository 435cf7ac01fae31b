import random

import pytest

from effkohn.bound import check_map, default_ring, perturb, random_monomial_map, random_trials
from effkohn.kohn import ProcedureError, compare_classic, run_algorithm
from effkohn.kohn.classic import classic_j1
from effkohn.poly import Ring, parse_poly

from conftest import P, family


def test_bound_examples():
    r = check_map([P("z^2"), P("w^3")], exponents=(2, 3))
    assert (r.colength, r.order, r.passed, r.closed_form_ok) == (6, 3, True, True)
    assert r.render() == "(z^2, w^3): lambda=6, ord Jac=3, pass"
    r = check_map([P("z"), P("w")])
    assert (r.colength, r.order, r.passed) == (1, 0, True)


def test_bound_skips_infinite_colength():
    r = check_map([P("z^2"), P("z*w")])
    assert r.skipped and not r.passed
    assert "skipped" in r.render()


def test_bound_needs_square_map():
    with pytest.raises(ValueError):
        check_map([P("z"), P("w"), P("z*w")])


def test_bound_local_colength_ignores_far_points():
    # z^2 - z has a second root at z = 1
    r = check_map([P("z^2 - z^3"), P("w")])
    assert r.colength == 2 and r.order == 1


def test_random_trials_deterministic():
    a = [x.render() for x in random_trials(4, 10, 3)]
    b = [x.render() for x in random_trials(4, 10, 3)]
    assert a == b and len(a) == 13


def test_perturbed_maps_keep_finite_colength():
    rng = random.Random(2)
    ring = default_ring(3)
    fs, exps = random_monomial_map(rng, ring)
    assert len(exps) == 3
    assert len(perturb(rng, fs)) == 3


def test_classic_j1_family():
    h, g, j1 = classic_j1(family(2, 3, 5))
    assert h == P("2*z*(3*w^2 + z^5)")
    assert g == P("z*(3*w^2 + z^5)")
    assert len(j1) == 3


def test_classic_minimal_power_grows_with_K():
    # z^K sits in J1 only through the generators, and the least power turns out to be K + 2
    for K in (5, 9):
        cmp = compare_classic(family(2, 3, K))
        assert cmp.minimal_power == K + 2


def test_classic_comparison_carries_modified_epsilon():
    t = run_algorithm(family(2, 3, 5))
    cmp = compare_classic(family(2, 3, 5), t)
    assert str(cmp.modified_epsilon) == "1/192"
    assert "classic: minimal power of z in J1 = z^7" in cmp.render()


def test_classic_rejects_other_shapes():
    R = Ring(["x", "y", "z"])
    with pytest.raises(ProcedureError):
        classic_j1([parse_poly("x", R), parse_poly("y", R)])

import random
from fractions import Fraction
from pathlib import Path

import pytest

import effkohn.kohn.driver as driver
from effkohn.groebner import TypeCapExceeded
from effkohn.kohn import (
    AlgorithmFailure,
    Config,
    Derivation,
    Trace,
    audit_trace,
    coordinate_change,
    generic_combination,
    induction_step,
    initial_multipliers,
    root_taking,
    run_algorithm,
)
from effkohn.kohn.induction import GenericityFailure, weierstrass_extract
from effkohn.kohn.trace import Multiplier
from effkohn.poly import Ring, parse_poly

from conftest import P, family, random_finite_type

GOLDEN = Path(__file__).parent / "data" / "family_2_3_5.jsonl"

FAMILY_KINDS = [
    "InitJacobian",
    "GenJacobianFull",
    "GenJacobianFull",
    "RootTaking",
    "IdealElement",
    "AdjustPreMultiplier",
    "GenJacobianFull",
    "RootTaking",
    "GenJacobianFull",
    "Termination",
]


def test_family_matches_golden():
    t = run_algorithm(family(2, 3, 5))
    assert t.to_jsonl() == GOLDEN.read_text()
    assert t.kinds() == FAMILY_KINDS
    assert t.status == "terminated" and t.final_epsilon == Fraction(1, 192)


@pytest.mark.parametrize("K", [9, 50])
def test_family_shape_independent_of_K(K):
    base = run_algorithm(family(2, 3, 5))
    t = run_algorithm(family(2, 3, K))
    assert t.kinds() == base.kinds()
    assert [s.epsilon for s in t.steps] == [s.epsilon for s in base.steps]


def test_coordinates_terminate_immediately():
    t = run_algorithm([P("z"), P("w")])
    assert t.kinds() == ["InitJacobian", "Termination"]
    assert t.final_epsilon == Fraction(1, 2)


def test_deterministic_for_fixed_seed():
    fs = [P("z^3"), P("-2*z*w^2 + 2*w^3 - z*w")]
    a = run_algorithm(fs, Config(seed=7)).to_jsonl()
    b = run_algorithm(fs, Config(seed=7)).to_jsonl()
    assert a == b


def test_jsonl_round_trip():
    t = run_algorithm(family(2, 3, 5))
    back = Trace.from_jsonl(t.to_jsonl())
    assert back.to_jsonl() == t.to_jsonl()
    assert back.final_epsilon == t.final_epsilon


def test_not_finite_type_rejected():
    with pytest.raises(TypeCapExceeded):
        run_algorithm([P("z^2")])


@pytest.mark.parametrize("bad", [["z^2 + 1", "w"], ["0", "w"]])
def test_invalid_generators(bad):
    with pytest.raises(ValueError):
        run_algorithm([P(g) for g in bad])


def test_degree_budget_gives_partial_trace():
    with pytest.raises(AlgorithmFailure) as info:
        run_algorithm(family(2, 3, 5), Config(degree_cap=3))
    t = info.value.trace
    assert t.status == "failed" and "cap" in t.reason
    assert audit_trace(Trace.from_jsonl(t.to_jsonl())).clean


def test_three_variables():
    R = Ring(["x", "y", "z"])
    for gens in (["x^2", "y^2", "z^2"], ["x*y", "x^2 + y^2", "z^2"], ["x^3", "y^3", "z^3", "x*y*z"]):
        t = run_algorithm([parse_poly(g, R) for g in gens])
        assert t.status == "terminated"
        assert audit_trace(Trace.from_jsonl(t.to_jsonl())).clean


def test_random_two_variable_problems_terminate():
    rng = random.Random(3)
    done = 0
    while done < 10:
        fs = random_finite_type(rng, 2, 4)
        try:
            t = run_algorithm(fs, Config(seed=done))
        except TypeCapExceeded:
            continue
        assert t.status == "terminated"
        assert audit_trace(t).clean
        done += 1


@pytest.mark.parametrize("gens", [["z^2", "w^2"], ["z*w", "z^2 + w^2"], ["z^2", "w^3"]])
def test_general_induction_path(monkeypatch, gens):
    # switch off the shortcuts so the Weierstrass induction does all the work
    monkeypatch.setattr(driver, "_l_phase", lambda d, c: False)
    monkeypatch.setattr(driver, "_greedy", lambda d: False)
    t = run_algorithm([P(g) for g in gens], Config(max_retries=40))
    assert t.status == "terminated"
    assert "WeierstrassExtraction" in t.kinds()
    assert audit_trace(Trace.from_jsonl(t.to_jsonl())).clean


# -- induction pieces ---------------------------------------------------------


def test_weierstrass_examples():
    d = Derivation([P("z^3"), P("w")])
    _, data = weierstrass_extract(d, [Multiplier(P("z"), Fraction(1, 2), 1)], [d.f(1)], 0)
    assert (data.W, data.degree) == (data.W.ring.var(0), 1)
    _, data = weierstrass_extract(d, [Multiplier(P("z^2 - w^3"), Fraction(1, 2), 1)], [d.f(1)], 0)
    y = data.W.ring.var(2)
    z = data.W.ring.var(0)
    assert data.degree == 2 and data.W in (z**2 - y**3, y**3 - z**2)


def test_weierstrass_needs_generic_coordinates():
    d = Derivation([P("z^3"), P("w")])
    with pytest.raises(GenericityFailure):
        weierstrass_extract(d, [Multiplier(P("z*w"), Fraction(1, 2), 1)], [d.f(1)], 0)
    # after z -> z + w the product is monic of degree 2 in w
    d = Derivation([P("z^3"), P("z")])
    _, data = weierstrass_extract(d, [Multiplier(P("(z + w)*w"), Fraction(1, 2), 1)], [d.f(1)], 1)
    assert data.degree == 2


def test_induction_step_on_squares():
    # in the given coordinates zw is not Weierstrass; a random linear change fixes that
    rng = random.Random(1)
    for _ in range(10):
        d = Derivation([P("z^2"), P("w^2")])
        coordinate_change(d, driver.random_invertible(rng, 2))
        (h,) = [m for m in initial_multipliers(d) if m.poly.total_degree() == 2]
        hs = [root_taking(d, h)]
        try:
            m = induction_step(d, hs, [generic_combination(d, rng)])
        except GenericityFailure:
            continue
        assert not m.poly.is_zero()
        assert audit_trace(d.trace).clean
        return
    pytest.fail("no generic choice found in 10 draws")

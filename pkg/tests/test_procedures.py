from fractions import Fraction

import pytest

from effkohn.groebner import Ideal
from effkohn.kohn import (
    Derivation,
    Multiplier,
    ProcedureError,
    ZeroJacobian,
    adjust_premultiplier,
    audit_trace,
    classic_radical_step,
    gen_jacobian,
    ideal_element,
    ideal_element_from_membership,
    initial_multipliers,
    iterate_L_operator,
    root_taking,
    terminate,
)
from effkohn.kohn.procedures import adjust_cap, ideal_epsilon, jacobian_epsilon

from conftest import P, family

F = Fraction


def fake(poly, eps, step=1):
    return Multiplier(P(poly), F(eps), step)


def test_ledger_rules():
    assert jacobian_epsilon([]) == F(1, 2)
    assert jacobian_epsilon([F(1, 24), F(1)]) == F(1, 48)
    assert ideal_epsilon([(F(1, 2), True), (F(1, 4), True)]) == F(1, 4)
    assert ideal_epsilon([(F(1, 2), True), (F(1, 4), False)]) == F(1, 2)
    with pytest.raises(ProcedureError):
        ideal_epsilon([(F(1, 2), False)])
    assert adjust_cap([]) == 1
    assert adjust_cap([(F(1, 24), True)]) == F(1, 24)


def test_initial_multipliers_family():
    d = Derivation(family(2, 3, 5))
    ms = initial_multipliers(d)
    full = [m for m in ms if m.poly == P("2*z*(3*w^2 + z^5)")]
    assert full and full[0].epsilon == F(1, 2)


def test_initial_multipliers_coordinates():
    d = Derivation([P("z"), P("w")])
    assert [(m.poly, m.epsilon) for m in initial_multipliers(d)] == [(P("1"), F(1, 2))]


def test_initial_multipliers_partial_when_full_vanishes():
    d = Derivation([P("z^2"), P("z^3")])
    polys = [m.poly for m in initial_multipliers(d)]
    assert polys == [P("2*z"), P("3*z^2")]
    assert all(m.epsilon == F(1, 2) for m in initial_multipliers(Derivation([P("z^2"), P("z^3")])))


def test_iterate_L_operator():
    d = Derivation(family(2, 3, 5))
    hs = iterate_L_operator(d, d.f(0), d.f(1), 3)
    assert [h.poly for h in hs] == [P("2*z*(3*w^2 + z^5)"), P("24*z^2*w"), P("48*z^3")]
    assert [h.epsilon for h in hs] == [F(1, 2), F(1, 4), F(1, 8)]


def test_iterate_L_operator_stops_on_zero():
    d = Derivation([P("z^2"), P("z^3 + w")])
    hs = iterate_L_operator(d, d.f(0), d.f(1), 4)
    assert [h.poly for h in hs] == [P("2*z")]
    d = Derivation([P("z^2"), P("z^3")])
    with pytest.raises(ZeroJacobian):
        iterate_L_operator(d, d.f(0), d.f(1), 2)


def test_root_taking_examples():
    d = Derivation(family(2, 3, 5))
    r = root_taking(d, fake("48*z^3", "1/8"))
    assert (r.poly, r.epsilon) == (P("z"), F(1, 24))
    r = root_taking(d, fake("z^2*w^4", "1/2"))
    assert (r.poly, r.epsilon) == (P("z*w"), F(1, 8))
    r = root_taking(d, fake("z*(3*w^2 + z^5)", "1/2"))
    assert r.poly == P("z^6 + 3*z*w^2") and r.epsilon == F(1, 2)
    assert d.steps[-1].witness["m"] == 1


def test_ideal_element_examples():
    d = Derivation(family(2, 3, 5))
    z = fake("z", "1/24")
    m = ideal_element(d, [z], [P("w*z^4")])
    assert (m.poly, m.epsilon) == (P("w*z^5"), F(1, 24))
    f1 = fake("z^2", "1/2")
    assert ideal_element(d, [f1], [P("1")]).epsilon == F(1, 2)
    m = ideal_element(d, [fake("z", "1/2"), fake("w", "1/4", 2)], [P("1"), P("1")])
    assert (m.poly, m.epsilon) == (P("z + w"), F(1, 4))


def test_ideal_element_rejects_bad_identity():
    d = Derivation(family(2, 3, 5))
    with pytest.raises(ProcedureError):
        ideal_element(d, [fake("z", 1)], [P("w")], target=P("w^2"))
    with pytest.raises(ProcedureError):
        ideal_element(d, [fake("z", 1)], [P("w")], target=P("z*w"), denominator=P("z"))


def test_ideal_element_local_denominator():
    d = Derivation(family(2, 3, 5))
    m = ideal_element_from_membership(d, [fake("z*(1 - w)", "1/2")], P("z"), local=True)
    assert m.poly == P("z")
    assert P(d.steps[-1].witness["denominator"]).constant_term()
    with pytest.raises(ProcedureError):
        ideal_element_from_membership(d, [fake("z^2", "1/2")], P("z"), local=True)


def test_gen_jacobian_examples():
    d = Derivation(family(2, 3, 5))
    z = fake("z", "1/24")
    w3 = adjust_premultiplier(d, [0, 1], [fake("w*z^5", "1/24", 2)], [P("1")])
    assert w3.poly == P("w^3") and w3.epsilon_cap == F(1, 24)
    j = gen_jacobian(d, [z, w3])
    assert (j.poly, j.epsilon) == (P("3*w^2"), F(1, 48))
    j = gen_jacobian(d, [fake("z", 1), fake("w", 1, 2)])
    assert (j.poly, j.epsilon) == (P("1"), F(1, 2))
    with pytest.raises(ZeroJacobian):
        gen_jacobian(d, [fake("z", 1), fake("z^2", 1, 2)])


def test_gen_jacobian_from_premultipliers_matches_initial():
    d = Derivation(family(2, 3, 5))
    j = gen_jacobian(d, d.premultipliers())
    assert j.poly == P("2*z*(3*w^2 + z^5)") and j.epsilon == F(1, 2)


def test_terminate():
    d = Derivation([P("z"), P("w")])
    (one,) = initial_multipliers(d)
    out = terminate(d, one)
    assert out.poly == P("1") and d.trace.status == "terminated"
    with pytest.raises(ProcedureError):
        terminate(Derivation([P("z"), P("w")]), fake("z", 1))


def test_hand_built_family_derivation_audits_clean():
    d = Derivation(family(2, 3, 5))
    (h,) = [m for m in initial_multipliers(d) if m.poly.total_degree() == 6]
    hs = iterate_L_operator(d, d.f(0), d.f(1), 3)[1:]
    z = root_taking(d, hs[-1])
    wz5 = ideal_element(d, [z], [P("w*z^4")])
    w3 = adjust_premultiplier(d, [0, 1], [wz5], [P("1")])
    w = root_taking(d, gen_jacobian(d, [z, w3]))
    terminate(d, gen_jacobian(d, [z, w]))
    assert (z.epsilon, w.epsilon, d.trace.final_epsilon) == (F(1, 24), F(1, 96), F(1, 192))
    assert audit_trace(d.trace).clean


def test_classic_radical_examples():
    assert classic_radical_step(Ideal([P("2*z*(3*w^2 + z^5)")])) == P("z^6 + 3*z*w^2")
    assert classic_radical_step(Ideal([P("z^3")])) == P("z")
    g = P("z*(3*w^2 + z^5)")
    assert classic_radical_step(Ideal([g])) == P("z^6 + 3*z*w^2")
    with pytest.raises(ProcedureError):
        classic_radical_step(Ideal([P("z"), P("w")]))

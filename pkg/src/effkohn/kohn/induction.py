"""The induction procedure: Weierstrass polynomials, the relation g and the
iterated differential operator, plus the finishing stage that turns an
m-primary set of multipliers into the coordinate functions and then 1.

One induction stage works with multipliers h_1..h_nu and generic
pre-multipliers h_{nu+1}..h_{n+1}.  Auxiliary variables y_k stand for the
pre-multipliers.  For each slot j <= nu elimination gives W_j(z_j, y) whose
substitution W_j(z_j, h) lies in (h_1..h_nu).  With

    D   = d(h_{nu+1..n+1}) / d(z_{nu+1..n+1})
    D_s = prod_{j != s} (d W_j / d z_j)(z_j, h) * D

the Jacobian of (W_1.., Psi in slot s, .., h_{nu+1..}) equals
(d Psi / d z_s)(z_s, h) * D_s, and a relation g(h) = sum A_i h_i + B D_s lets
g * d Psi / d z_s be written as an ideal element of the h_i and that
Jacobian.  After p = deg_{z_s} W_s rounds the z_s-dependence is gone and a
root of p! * lc(h) * g(h)^p is the new multiplier.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from gmpy2 import mpq

from ..groebner import Ideal, contains_poly, elimination_ideal, lift, local_type, max_ideal_power
from ..poly import Polynomial, Ring, jacobian_det
from .procedures import (
    Derivation,
    ProcedureError,
    gen_jacobian,
    ideal_element,
    ideal_element_from_membership,
    is_linear_form,
    root_taking,
    terminate,
)
from .trace import ELIMINATION_RELATION, WEIERSTRASS, Multiplier, PreMultiplier

log = logging.getLogger(__name__)


class GenericityFailure(ProcedureError):
    """A random choice was not generic enough; the caller should redraw."""


def aux_ring(ring: Ring, count: int) -> tuple[Ring, list[int]]:
    names = ring.fresh_names("y", count)
    big = ring.extend(names)
    return big, list(range(ring.nvars, ring.nvars + count))


def _substitution(ring: Ring, aux: Sequence) -> list[Polynomial]:
    return ring.gens() + [a.poly for a in aux]


def leading_in(W: Polynomial, k: int) -> tuple[int, Polynomial]:
    """Degree of W in variable k and its coefficient there (a polynomial)."""
    p = W.degree_in(k)
    terms = {}
    for e, c in W.items():
        if e[k] == p:
            ne = list(e)
            ne[k] = 0
            terms[tuple(ne)] = c
    return p, Polynomial(W.ring, terms)


@dataclass
class WeierstrassData:
    slot: int
    W: Polynomial
    degree: int
    leading: Polynomial
    composed: Polynomial
    cofactors: list[Polynomial]


def weierstrass_polynomial(hs: Sequence, aux: Sequence, j: int, big: Ring) -> WeierstrassData:
    """Minimal z_j-degree W(z_j, y) in the elimination ideal with lc(0) != 0.

    The elimination runs without cofactor tracking; the cofactors of W(z_j, h)
    are recovered afterwards by lifting in the base ring, which is far cheaper.
    """
    ring = hs[0].poly.ring
    v = ring.nvars
    ys = list(range(v, big.nvars))
    gens = [h.poly.embed(big) for h in hs]
    gens += [big.var(y) - a.poly.embed(big) for y, a in zip(ys, aux)]
    elim = elimination_ideal(Ideal(gens, big), [j] + ys)
    best = None
    for W in elim.generators:
        p, lc = leading_in(W, j)
        if p == 0 or not lc.constant_term():
            continue
        rank = (p, len(W), W.total_degree())
        if best is None or rank < best[0]:
            best = (rank, W, p, lc)
    if best is None:
        raise GenericityFailure(f"no Weierstrass polynomial in {ring.names[j]}")
    _, W, p, lc = best
    subs = _substitution(ring, aux)
    composed = W.compose(subs, ring)
    if composed.is_zero():
        raise GenericityFailure("Weierstrass polynomial vanishes after substitution")
    cofs = lift(Ideal([h.poly for h in hs], ring), composed)
    if cofs is None:
        raise ProcedureError("Weierstrass polynomial does not lift to the multipliers")
    return WeierstrassData(j, W, p, lc, composed, cofs)


def weierstrass_extract(d: Derivation, hs: Sequence[Multiplier], aux: Sequence[PreMultiplier], j: int):
    """Emit the Weierstrass step for slot ``j``; returns (multiplier W(z_j, h), data)."""
    big, _ = aux_ring(d.ring, len(aux))
    data = weierstrass_polynomial(hs, aux, j, big)
    total = d.ring.zero()
    for h, c in zip(hs, data.cofactors):
        total = total + c * h.poly
    if total != data.composed:
        raise ProcedureError("Weierstrass cofactor identity failed")
    used = [h.epsilon for h, c in zip(hs, data.cofactors) if c]
    if not used:
        raise GenericityFailure("Weierstrass polynomial lies outside the multiplier ideal")
    witness = {
        "variable": d.ring.names[j],
        "aux_variables": list(big.names[d.nvars :]),
        "substitution": [a.ref for a in aux],
        "W": str(data.W),
        "degree": data.degree,
        "cofactors": [str(c) for c in data.cofactors],
    }
    inputs = [h.ref for h in hs] + [a.ref for a in aux]
    m = d.emit_multiplier(WEIERSTRASS, inputs, witness, data.composed, min(used))
    return m, data


def relation_polynomial(hs, aux, Ds: Polynomial, big: Ring):
    """g(y) with g(h) = sum A_i h_i + B * Ds; returns (g, A list, B) over the base ring."""
    ring = Ds.ring
    v = ring.nvars
    ys = list(range(v, big.nvars))
    gens = [h.poly.embed(big) for h in hs] + [Ds.embed(big)]
    gens += [big.var(y) - a.poly.embed(big) for y, a in zip(ys, aux)]
    elim = elimination_ideal(Ideal(gens, big), ys)
    if elim.is_zero:
        raise GenericityFailure("no relation among the pre-multipliers on the minor locus")
    g = min(elim.generators, key=lambda g: (g.total_degree(), len(g)))
    subs = _substitution(ring, aux)
    cof = lift(Ideal([h.poly for h in hs] + [Ds], ring), g.compose(subs, ring))
    if cof is None:
        raise ProcedureError("relation does not lift")
    return g, cof[: len(hs)], cof[len(hs)]


def induction_step(d: Derivation, hs: Sequence[Multiplier], aux: Sequence[PreMultiplier]) -> Multiplier:
    """One induction stage: from multipliers h_1..h_nu and generic pre-multipliers
    h_{nu+1..n+1}, derive a multiplier that is a root of g(h_{nu+1..n+1})."""
    hs, aux = list(hs), list(aux)
    ring = d.ring
    nu = len(hs)
    if nu + len(aux) != d.nvars or not aux:
        raise ProcedureError("need nu multipliers and n+1-nu pre-multipliers")
    big, _ = aux_ring(ring, len(aux))
    subs = _substitution(ring, aux)

    ws = [weierstrass_extract(d, hs, aux, j) for j in range(nu)]
    s = min(range(nu), key=lambda j: (ws[j][1].degree, j))
    D = jacobian_det([a.poly for a in aux], list(range(nu, d.nvars)))
    if D.is_zero():
        raise GenericityFailure("pre-multipliers are dependent in the remaining variables")
    Ds = D
    for j in range(nu):
        if j != s:
            Ds = Ds * ws[j][1].W.diff(j).compose(subs, ring)

    g, A, B = relation_polynomial(hs, aux, Ds, big)
    g_sub = g.compose(subs, ring)
    check = B * Ds
    for a, h in zip(A, hs):
        check = check + a * h.poly
    if check != g_sub:
        raise ProcedureError("relation identity failed")
    d.emit(
        ELIMINATION_RELATION,
        [h.ref for h in hs] + [a.ref for a in aux] + [ws[j][0].ref for j in range(nu) if j != s],
        {
            "aux_variables": list(big.names[d.nvars :]),
            "substitution": [a.ref for a in aux],
            "slot": ring.names[s],
            "g": str(g),
            "D": str(Ds),
            "cofactors": [str(a) for a in A],
            "D_cofactor": str(B),
        },
        g_sub,
        None,
    )

    psi = ws[s][1].W.embed(big)
    psi_m = ws[s][0]
    p = ws[s][1].degree
    gb = g
    for _ in range(p):
        items = []
        for j in range(nu):
            items.append(psi_m if j == s else ws[j][0])
        items += aux
        J = gen_jacobian(d, items)
        dpsi = psi.diff(s)
        dpsi_sub = dpsi.compose(subs, ring)
        if J.poly != dpsi_sub * Ds:
            raise ProcedureError("chain-rule factorisation of the Jacobian failed")
        psi = gb * dpsi
        cof = [a * dpsi_sub for a in A] + [B]
        nonzero = [(F, c) for F, c in zip(list(hs) + [J], cof) if c]
        if not nonzero:
            raise GenericityFailure("iterated operator collapsed to zero")
        psi_m = ideal_element(d, [F for F, _ in nonzero], [c for _, c in nonzero])
    if psi.degree_in(s):
        raise ProcedureError("slot variable survived the iteration")
    if psi_m.poly.constant_term():
        return psi_m
    return root_taking(d, psi_m)


# ---------------------------------------------------------------------------
# finishing: coordinate functions, their Jacobian, and 1


def _coeff_vector(p: Polynomial) -> list:
    v = p.ring.nvars
    out = [mpq(0)] * v
    for e, c in p.items():
        if sum(e) == 1:
            out[e.index(1)] = c
    return out


def _independent(vectors: list[list]) -> bool:
    rows = [list(r) for r in vectors]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = 1 / rows[rank][col]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col] * inv
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank == len(rows)


COMPACT_TERMS = 40


def _best_power(pool: list[Multiplier], j: int, cap: int, degree: int | None = None):
    """Over prefixes of the pool (strongest first) pick (prefix, k) maximizing eps/k
    where z_j^k lies in the local ideal of the prefix.

    Compact multipliers (few terms, total degree at most ``degree``) are tried
    first; the long chain intermediates make the local computations expensive
    and rarely help.
    """
    compact = [
        m for m in pool
        if len(m.poly) <= COMPACT_TERMS and (degree is None or m.poly.total_degree() <= degree)
    ]
    for cands in (compact, pool):
        best = _scan_prefixes(cands, j, cap)
        if best is not None:
            return best
    return None


def _scan_prefixes(pool: list[Multiplier], j: int, cap: int):
    if not pool:
        return None
    ring = pool[0].poly.ring
    zj = ring.var(j)
    best = None
    for end in range(1, len(pool) + 1):
        if end < len(pool) and pool[end].epsilon == pool[end - 1].epsilon:
            continue
        prefix = pool[:end]
        # eps/k <= eps of the weakest member, so later prefixes cannot win
        if best is not None and prefix[-1].epsilon <= best[0]:
            break
        I = Ideal([m.poly for m in prefix], ring)
        tau = local_type(I, cap)
        if tau is None:
            continue
        J = Ideal(list(I.generators) + max_ideal_power(ring, tau), ring)
        k = next(k for k in range(1, tau + 1) if contains_poly(J, zj**k))
        score = prefix[-1].epsilon / k
        if best is None or score > best[0]:
            best = (score, prefix, k)
    return best


def finisher(d: Derivation, cap: int = 64) -> Multiplier:
    """Derive n+1 independent linear multipliers, take their Jacobian, reach 1."""
    pool = d.multipliers()
    units = [m for m in pool if m.poly.constant_term()]
    if units:
        return terminate(d, units[0])
    linear: list[Multiplier] = []
    for m in pool:
        if is_linear_form(m.poly) and _independent([_coeff_vector(x.poly) for x in linear + [m]]):
            linear.append(m)
        if len(linear) == d.nvars:
            break
    for j in range(d.nvars):
        if len(linear) == d.nvars:
            break
        zj = d.ring.var(j)
        if not _independent([_coeff_vector(x.poly) for x in linear] + [_coeff_vector(zj)]):
            continue
        best = _best_power(d.multipliers(), j, cap, 2 * max(f.total_degree() for f in d.fs) + 2)
        if best is None:
            raise GenericityFailure("multipliers do not generate an m-primary local ideal")
        _, prefix, k = best
        m = ideal_element_from_membership(d, prefix, zj**k, local=True)
        if k > 1:
            m = root_taking(d, m)
        linear.append(m)
    J = gen_jacobian(d, linear)
    return terminate(d, J)

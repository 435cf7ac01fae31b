"""Ideal arithmetic: reduced Groebner bases, membership, elimination, colength, type."""

from __future__ import annotations

import heapq
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from gmpy2 import mpq

from .poly import (
    GaussianRational,
    Polynomial,
    Ring,
    _divides,
    divexact,
    monomials_of_degree,
    poly_gcd,
    vanishing_order,
)

DEFAULT_TYPE_CAP = 64


class TypeCapExceeded(ArithmeticError):
    """No power of the maximal ideal up to the cap lies in the ideal."""


class NotZeroDimensional(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# monomial orders


def _grevlex_neg(e):
    return (-sum(e),) + tuple(reversed(e))


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order.

    ``kind`` is ``"grevlex"``, ``"lex"`` or ``"block"``.  A block order compares
    the eliminated variables first (grevlex), then the rest (grevlex).  By
    default the eliminated block is the first ``split`` variables; ``eliminate``
    names an arbitrary index set instead.
    """

    kind: str = "grevlex"
    split: int = 0
    eliminate: tuple[int, ...] | None = None

    @classmethod
    def block(cls, k: int) -> "MonomialOrder":
        return cls("block", split=k)

    @classmethod
    def eliminating(cls, indices) -> "MonomialOrder":
        return cls("block", eliminate=tuple(sorted(indices)))

    def elim_set(self, nvars: int) -> tuple[int, ...]:
        if self.eliminate is not None:
            return self.eliminate
        return tuple(range(self.split))

    def negkey(self, nvars: int):
        """Tuple key that is *smaller* for larger monomials (heap friendly)."""
        if self.kind == "grevlex":
            return _grevlex_neg
        if self.kind == "lex":
            return lambda e: tuple(-x for x in e)
        if self.kind == "block":
            first = self.elim_set(nvars)
            rest = tuple(k for k in range(nvars) if k not in first)
            return lambda e: _grevlex_neg([e[k] for k in first]) + _grevlex_neg([e[k] for k in rest])
        raise ValueError(f"unknown monomial order {self.kind!r}")

    def key(self, nvars: int):
        """Tuple key that is *larger* for larger monomials."""
        nk = self.negkey(nvars)
        return lambda e: tuple(-x for x in nk(e))


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


# ---------------------------------------------------------------------------
# internal Groebner machinery on term dicts


def _inv(c):
    return 1 / c if isinstance(c, GaussianRational) else mpq(1) / c


class _GP:
    """Working polynomial: term dict with cached leading data and optional cofactors."""

    __slots__ = ("terms", "lm", "lc", "cof")

    def __init__(self, terms, negkey, cof=None):
        self.terms = terms
        self.lm = min(terms, key=negkey)
        self.lc = terms[self.lm]
        self.cof = cof


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _coprime(a, b):
    return all(not (x and y) for x, y in zip(a, b))


def _sub_multiple(f: dict, g: dict, shift, factor, heap, negkey, trunc=None):
    """f -= factor * x^shift * g, in place; new exponents pushed onto heap.

    With ``trunc`` set, terms of that total degree or more are dropped (they
    reduce to zero against the m^trunc monomials in the basis).
    """
    for ge, gc in g.items():
        ne = tuple([x + y for x, y in zip(ge, shift)])
        if trunc is not None and sum(ne) >= trunc:
            continue
        s = f.get(ne)
        if s is None:
            f[ne] = -(gc * factor)
            if heap is not None:
                heapq.heappush(heap, (negkey(ne), ne))
        else:
            v = s - gc * factor
            if v:
                f[ne] = v
            else:
                del f[ne]


def _cof_sub(cof, gcof, shift, factor, ring):
    return [c - g.mul_term(shift, factor) for c, g in zip(cof, gcof)]


def _reduce(terms: dict, basis: list[_GP], negkey, ring: Ring, cof=None, full=True, trunc=None):
    """Reduce ``terms`` modulo ``basis``; returns (remainder dict, cofactors)."""
    f = dict(terms)
    heap = [(negkey(e), e) for e in f]
    heapq.heapify(heap)
    rem = {}
    while heap:
        _, e = heapq.heappop(heap)
        c = f.get(e)
        if c is None:
            continue
        # discard stale duplicate heap entries
        while heap and heap[0][1] == e:
            heapq.heappop(heap)
        for g in basis:
            if _divides(g.lm, e):
                shift = tuple(x - y for x, y in zip(e, g.lm))
                factor = c * _inv(g.lc)
                _sub_multiple(f, g.terms, shift, factor, heap, negkey, trunc)
                if cof is not None:
                    cof = _cof_sub(cof, g.cof, shift, factor, ring)
                break
        else:
            rem[e] = c
            del f[e]
            if not full:
                rem.update(f)
                return rem, cof
    return rem, cof


def _spoly(f: _GP, g: _GP, negkey, ring: Ring, trunc=None):
    lcm = _lcm(f.lm, g.lm)
    sf = tuple(x - y for x, y in zip(lcm, f.lm))
    sg = tuple(x - y for x, y in zip(lcm, g.lm))
    a, b = _inv(f.lc), _inv(g.lc)
    out = {}
    for e, c in f.terms.items():
        out[tuple([x + y for x, y in zip(e, sf)])] = c * a
    for e, c in g.terms.items():
        ne = tuple([x + y for x, y in zip(e, sg)])
        v = out.get(ne, 0) - c * b
        if v:
            out[ne] = v
        else:
            out.pop(ne, None)
    cof = None
    if f.cof is not None:
        cof = [x.mul_term(sf, a) - y.mul_term(sg, b) for x, y in zip(f.cof, g.cof)]
    if trunc is not None:
        out = {e: c for e, c in out.items() if sum(e) < trunc}
    return out, cof


def _truncated_groebner(gens: Sequence[Polynomial], K: int, order: MonomialOrder) -> list[_GP]:
    """Reduced basis of an ideal that contains m^K, by linear algebra modulo m^K.

    (I + m^K)/m^K is spanned by the truncations of x^a * g, so its reduced row
    echelon form (columns ordered by the monomial order) gives every leading
    monomial below degree K.  The leading ideal is generated by those pivots
    and the degree-K monomials; each minimal generator below degree K comes with
    its fully reduced echelon row.  Buchberger's coefficient growth is avoided.
    """
    ring = gens[0].ring
    nv = ring.nvars
    negkey = order.negkey(nv)
    cols = sorted((e for d in range(K) for e in monomials_of_degree(nv, d)), key=negkey)
    index = {e: k for k, e in enumerate(cols)}
    rows: dict[int, dict] = {}

    def add(v: dict) -> None:
        # eliminate leading entries against stored pivots, largest monomial first
        while v:
            lead = min(v)
            row = rows.get(lead)
            if row is None:
                inv = _inv(v[lead])
                rows[lead] = {k: c * inv for k, c in v.items()}
                return
            f = v[lead]
            for k, c in row.items():
                t = v.get(k, 0) - f * c
                if t:
                    v[k] = t
                else:
                    v.pop(k, None)

    for g in gens:
        if g.is_zero() or g.total_degree() >= K and len(g) == 1:
            continue
        low = vanishing_order(g)
        for d in range(K - low):
            for a in monomials_of_degree(nv, d):
                v = {}
                for e, c in g.items():
                    ne = tuple([x + y for x, y in zip(e, a)])
                    if sum(ne) < K:
                        v[index[ne]] = c
                if v:
                    add(v)

    # back substitution: afterwards each row meets pivot columns only at its own pivot
    for p in sorted(rows, reverse=True):
        row = rows[p]
        for k in sorted(k for k in row if k != p and k in rows):
            f = row.get(k)
            if f:
                for j, c in rows[k].items():
                    t = row.get(j, 0) - f * c
                    if t:
                        row[j] = t
                    else:
                        row.pop(j, None)

    leads = [cols[p] for p in rows] + monomials_of_degree(nv, K)
    out = []
    for p, row in rows.items():
        e = cols[p]
        if any(q != e and _divides(q, e) for q in leads):
            continue
        out.append(_GP({cols[k]: c for k, c in row.items()}, negkey))
    pivots = [cols[p] for p in rows]
    for e in monomials_of_degree(nv, K):
        if not any(_divides(q, e) for q in pivots):
            out.append(_GP({e: ring.one().constant_term()}, negkey))
    out.sort(key=lambda g: negkey(g.lm))
    return out


def _full_power_degree(gens: Sequence[Polynomial]) -> int | None:
    """Least K such that every monomial of degree K is among the generators."""
    mons: dict[int, set] = {}
    for g in gens:
        if len(g) == 1:
            (e, _), = g.items()
            mons.setdefault(sum(e), set()).add(e)
    nv = gens[0].ring.nvars
    for K in sorted(mons):
        if K and len(mons[K]) == len(monomials_of_degree(nv, K)):
            return K
    return None


def _groebner(gens: Sequence[Polynomial], order: MonomialOrder, track: bool = False):
    """Reduced Groebner basis as a list of _GP (monic, sorted by descending lm)."""
    ring = gens[0].ring
    nv = ring.nvars
    negkey = order.negkey(nv)
    store: list[_GP] = []
    active: list[int] = []
    pairs: list[tuple[int, int]] = []

    def update(hi: int):
        nonlocal active, pairs
        h = store[hi]
        C = [(hi, g) for g in active]
        D: list[tuple[int, int]] = []
        while C:
            p = C.pop(0)
            g1 = store[p[1]]
            lcm1 = _lcm(h.lm, g1.lm)
            if _coprime(h.lm, g1.lm):
                D.append(p)
                continue
            dominated = any(
                _divides(_lcm(h.lm, store[q[1]].lm), lcm1) for q in C
            ) or any(_divides(_lcm(h.lm, store[q[1]].lm), lcm1) for q in D)
            if not dominated:
                D.append(p)
        E = [p for p in D if not _coprime(h.lm, store[p[1]].lm)]
        keep = []
        for a, b in pairs:
            l12 = _lcm(store[a].lm, store[b].lm)
            if (
                _divides(h.lm, l12)
                and _lcm(store[a].lm, h.lm) != l12
                and _lcm(store[b].lm, h.lm) != l12
            ):
                continue
            keep.append((a, b))
        pairs = keep + E
        active = [g for g in active if not _divides(h.lm, store[g].lm)] + [hi]

    trunc = None if track else _full_power_degree(gens)
    if trunc is not None:
        return _truncated_groebner(gens, trunc, order)
    todo = list(range(len(gens)))
    if trunc is not None:
        # the monomials of m^K go in first and are never truncated themselves
        todo.sort(key=lambda k: not (len(gens[k]) == 1 and gens[k].total_degree() >= trunc))
    for k in todo:
        p = gens[k]
        if p.is_zero():
            continue
        cof = None
        if track:
            cof = [ring.one() if j == k else ring.zero() for j in range(len(gens))]
        terms, cof = _reduce(p._terms, [store[i] for i in active], negkey, ring, cof, trunc=trunc)
        if not terms:
            continue
        store.append(_GP(terms, negkey, cof))
        update(len(store) - 1)

    while pairs:
        # normal strategy: smallest lcm first
        pairs.sort(key=lambda ab: (sum(_lcm(store[ab[0]].lm, store[ab[1]].lm)),
                                   negkey(_lcm(store[ab[0]].lm, store[ab[1]].lm))),
                   reverse=True)
        a, b = pairs.pop()
        s, cof = _spoly(store[a], store[b], negkey, ring, trunc)
        if not s:
            continue
        terms, cof = _reduce(s, [store[i] for i in active], negkey, ring, cof, trunc=trunc)
        if terms:
            store.append(_GP(terms, negkey, cof))
            update(len(store) - 1)

    basis = [store[i] for i in active]
    # interreduce and normalise
    out: list[_GP] = []
    for idx, g in enumerate(basis):
        others = basis[:idx] + basis[idx + 1:]
        terms, cof = _reduce(g.terms, others, negkey, ring, g.cof, trunc=trunc)
        inv = _inv(terms[g.lm])
        terms = {e: c * inv for e, c in terms.items()}
        if cof is not None:
            cof = [c.scale(inv) for c in cof]
        out.append(_GP(terms, negkey, cof))
    # later members were reduced against earlier unreduced ones; repeat once for safety
    final: list[_GP] = []
    for idx, g in enumerate(out):
        others = out[:idx] + out[idx + 1:]
        terms, cof = _reduce(g.terms, others, negkey, ring, g.cof, trunc=trunc)
        final.append(_GP(terms, negkey, cof))
    final.sort(key=lambda g: negkey(g.lm))
    return final


# ---------------------------------------------------------------------------
# ideals


class Ideal:
    """Ideal of a polynomial ring given by generators, with per-order basis caches.

    The zero ideal can only be built through :meth:`Ideal.zero`.
    """

    def __init__(self, generators: Sequence[Polynomial], ring: Ring | None = None):
        gens = list(generators)
        if not gens:
            raise ValueError("an ideal needs at least one generator")
        ring = ring or gens[0].ring
        for g in gens:
            if g.ring != ring:
                raise ValueError("generators live in different rings")
        if all(g.is_zero() for g in gens):
            raise ValueError("the zero ideal is not a valid input")
        self.ring = ring
        self.generators = tuple(gens)
        self._bases: dict = {}
        self._tracked: dict = {}
        self._lock = threading.Lock()

    @classmethod
    def zero(cls, ring: Ring) -> "Ideal":
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.generators = ()
        obj._bases = {}
        obj._tracked = {}
        obj._lock = threading.Lock()
        return obj

    @property
    def is_zero(self) -> bool:
        return not self.generators

    def __repr__(self):
        return f"Ideal({', '.join(map(str, self.generators))})"

    def _gb(self, order: MonomialOrder, track: bool = False) -> list[_GP]:
        cache = self._tracked if track else self._bases
        with self._lock:
            if order not in cache:
                cache[order] = _groebner(self.generators, order, track=track) if self.generators else []
            return cache[order]

    def groebner_basis(self, order: MonomialOrder = GREVLEX) -> list[Polynomial]:
        return [Polynomial(self.ring, g.terms) for g in self._gb(order)]

    def __add__(self, other: "Ideal") -> "Ideal":
        return Ideal(list(self.generators) + list(other.generators), self.ring)


def buchberger(I: Ideal, order: MonomialOrder = GREVLEX) -> list[Polynomial]:
    """Reduced Groebner basis of ``I`` (monic, descending leading monomials)."""
    return I.groebner_basis(order)


def _as_gp(basis: Sequence[Polynomial], order: MonomialOrder) -> list[_GP]:
    if not basis:
        return []
    negkey = order.negkey(basis[0].ring.nvars)
    return [_GP(dict(b._terms), negkey) for b in basis if b]


def normal_form(p: Polynomial, basis, order: MonomialOrder = GREVLEX) -> Polynomial:
    """Remainder of ``p`` under multivariate division by a Groebner basis."""
    if isinstance(basis, Ideal):
        gps = basis._gb(order)
    else:
        gps = _as_gp(list(basis), order)
    if p.is_zero():
        return p
    rem, _ = _reduce(p._terms, gps, order.negkey(p.ring.nvars), p.ring)
    return Polynomial(p.ring, rem)


def contains_poly(I: Ideal, p: Polynomial) -> bool:
    if p.is_zero():
        return True
    if I.is_zero:
        return False
    return normal_form(p, I).is_zero()


def lift(I: Ideal, p: Polynomial, order: MonomialOrder = GREVLEX) -> list[Polynomial] | None:
    """Cofactors G with p = sum G_i * I.generators[i], or None when p is not in I."""
    ring = I.ring
    if p.is_zero():
        return [ring.zero() for _ in I.generators]
    if I.is_zero:
        return None
    if len(I.generators) == 1:
        from .poly import divmod_poly

        q, r = divmod_poly(p, I.generators[0])
        return [q] if r.is_zero() else None
    gps = I._gb(order, track=True)
    cof0 = [ring.zero() for _ in I.generators]
    # reduce while accumulating the quotient combination of basis cofactors
    rem, cof = _reduce(p._terms, gps, order.negkey(ring.nvars), ring, cof0)
    if rem:
        return None
    # _reduce subtracted multiples, so p = -cof . gens
    return [-c for c in cof]


def contains_power_of_max_ideal(I: Ideal, k: int) -> bool:
    """True iff every monomial of total degree ``k`` lies in ``I``."""
    if k < 1:
        raise ValueError("k must be positive")
    if I.is_zero:
        return False
    ring = I.ring
    gps = I._gb(GREVLEX)
    negkey = GREVLEX.negkey(ring.nvars)
    for e in monomials_of_degree(ring.nvars, k):
        rem, _ = _reduce({e: mpq(1)}, gps, negkey, ring, full=False)
        if rem:
            return False
    return True


@dataclass(frozen=True)
class TypeReport:
    """Effective type p* and the bracket p*/(n+3) <= p <= p* for the finite type p."""

    p_star: int
    nvars: int

    @property
    def lower_bound_p(self) -> Fraction:
        return Fraction(self.p_star, self.nvars + 2)

    @property
    def upper_bound_p(self) -> int:
        return self.p_star

    def render(self) -> str:
        lo = self.lower_bound_p
        los = str(lo.numerator) if lo.denominator == 1 else f"{lo.numerator}/{lo.denominator}"
        return f"p* = {self.p_star}; p in [{los}, {self.p_star}]"


def _pure_power_bound(I: Ideal) -> int | None:
    """Upper bound for p* read off the leading-term staircase, None if infinite."""
    gps = I._gb(GREVLEX)
    nv = I.ring.nvars
    pure = []
    for k in range(nv):
        best = None
        for g in gps:
            if g.lm[k] and sum(g.lm) == g.lm[k]:
                best = g.lm[k] if best is None else min(best, g.lm[k])
        if best is None:
            return None
        pure.append(best)
    return sum(p - 1 for p in pure) + 1


def effective_type(I: Ideal, cap: int = DEFAULT_TYPE_CAP) -> TypeReport:
    """Least k with m^k contained in I (searching k = 1..cap)."""
    if I.is_zero:
        raise TypeCapExceeded("zero ideal")
    ring = I.ring
    fail = TypeCapExceeded(f"no power of the maximal ideal up to {cap} lies in the ideal")
    if _pure_power_bound(I) is None:
        raise fail
    # supported at the origin iff every variable is nilpotent modulo I
    dim = len(standard_monomials(I))
    for k in range(ring.nvars):
        if not contains_poly(I, ring.var(k) ** dim):
            raise fail
    for k in range(1, cap + 1):
        if contains_power_of_max_ideal(I, k):
            return TypeReport(k, ring.nvars)
    raise TypeCapExceeded(f"no power of the maximal ideal up to {cap} lies in the ideal")


def standard_monomials(I: Ideal) -> list[tuple]:
    gps = I._gb(GREVLEX)
    nv = I.ring.nvars
    bound = _pure_power_bound(I)
    if bound is None:
        raise NotZeroDimensional("ideal is not zero-dimensional")
    lms = [g.lm for g in gps]
    out = []
    for d in range(bound + 1):
        for e in monomials_of_degree(nv, d):
            if not any(_divides(l, e) for l in lms):
                out.append(e)
    return out


def colength(I: Ideal, cap: int = DEFAULT_TYPE_CAP) -> int:
    """Dimension of the quotient algebra (requires the ideal to contain a power of m)."""
    try:
        effective_type(I, cap)
    except TypeCapExceeded as exc:
        raise NotZeroDimensional(str(exc)) from None
    return len(standard_monomials(I))


def elimination_ideal(I: Ideal, keep: Sequence[int]) -> Ideal:
    """Elements of I involving only the variables in ``keep``, via a block order."""
    keep = set(keep)
    nv = I.ring.nvars
    elim = [k for k in range(nv) if k not in keep]
    if not elim:
        return I
    order = MonomialOrder.eliminating(elim)
    basis = I.groebner_basis(order)
    kept = [g for g in basis if not any(g.degree_in(k) > 0 for k in elim)]
    if not kept:
        return Ideal.zero(I.ring)
    return Ideal(kept, I.ring)


def eliminate_with_cofactors(I: Ideal, keep: Sequence[int]) -> list[tuple[Polynomial, list[Polynomial]]]:
    """Elimination basis elements paired with their expressions in I's generators."""
    keep = set(keep)
    nv = I.ring.nvars
    elim = [k for k in range(nv) if k not in keep]
    order = MonomialOrder.eliminating(elim)
    out = []
    for g in I._gb(order, track=True):
        if any(e[k] for e in g.terms for k in elim):
            continue
        out.append((Polynomial(I.ring, g.terms), list(g.cof)))
    return out


# ---------------------------------------------------------------------------
# local (germ at the origin) helpers


def max_ideal_power(ring: Ring, k: int) -> list[Polynomial]:
    return [ring.monomial(e) for e in monomials_of_degree(ring.nvars, k)]


def saturation_by_variable(I: Ideal, k: int) -> Ideal:
    """I : z_k^infinity, via I + (1 - t z_k) with t eliminated."""
    ring = I.ring
    t = ring.fresh_names("t", 1)[0]
    big = ring.extend([t])
    gens = [g.embed(big) for g in I.generators]
    gens.append(big.one() - big.var(ring.nvars) * big.var(k))
    E = elimination_ideal(Ideal(gens, big), range(ring.nvars))
    if E.is_zero:
        return Ideal.zero(ring)
    return Ideal([g.compose(ring.gens() + [ring.zero()], ring) for g in E.generators], ring)


def is_isolated_at_origin(I: Ideal) -> bool:
    """True iff the origin is an isolated point of V(I) (local ideal m-primary).

    V(I) minus the origin has closure equal to the union of V(I : z_k^inf), so
    the origin is isolated iff no such saturation vanishes there.
    """
    if any(g.constant_term() for g in I.generators):
        return True
    if I.ring.nvars == 2:
        # in the plane V(I) = V(gcd) plus finitely many points
        g = I.generators[0]
        for h in I.generators[1:]:
            g = poly_gcd(g, h)
        return bool(g.constant_term())
    if _pure_power_bound(I) is not None:
        return True
    for k in range(I.ring.nvars):
        S = saturation_by_variable(I, k)
        if S.is_zero or not any(g.constant_term() for g in S.groebner_basis()):
            return False
    return True


def local_type(I: Ideal, cap: int = DEFAULT_TYPE_CAP) -> int | None:
    """Least k with m^k inside the localisation of I at the origin, or None up to cap.

    Uses m^k in I_loc  <=>  m^k in I + m^K for any K > k (Nakayama); the ideal
    I + m^K is supported at the origin, so polynomial membership decides it.
    """
    if I.is_zero or not is_isolated_at_origin(I):
        return None
    ring = I.ring
    K = 4
    while True:
        K = min(K, cap + 1)
        J = Ideal(list(I.generators) + max_ideal_power(ring, K), ring)
        for k in range(1, K):
            if contains_power_of_max_ideal(J, k):
                return k
        if K > cap:
            return None
        K *= 2


def local_colength(I: Ideal, cap: int = DEFAULT_TYPE_CAP) -> int | None:
    """Dimension of the local algebra at the origin, None if not m-primary there.

    Once m^tau lies in the local ideal, I + m^tau has the same localisation
    and is supported at the origin, so its global colength is the answer.
    """
    tau = local_type(I, cap)
    if tau is None:
        return None
    return colength(Ideal(list(I.generators) + max_ideal_power(I.ring, tau), I.ring), max(cap, tau))


def intersection(I: Ideal, J: Ideal) -> Ideal:
    ring = I.ring
    t = ring.fresh_names("t", 1)[0]
    big = ring.extend([t])
    tv = big.var(ring.nvars)
    gens = [tv * g.embed(big) for g in I.generators]
    gens += [(big.one() - tv) * g.embed(big) for g in J.generators]
    E = elimination_ideal(Ideal(gens, big), range(ring.nvars))
    if E.is_zero:
        return Ideal.zero(ring)
    back = [g.compose(ring.gens() + [ring.zero()], ring) for g in E.generators]
    return Ideal(back, ring)


def quotient(I: Ideal, f: Polynomial) -> Ideal:
    """The colon ideal I : f."""
    if f.is_zero():
        return Ideal([I.ring.one()])
    inter = intersection(I, Ideal([f]))
    return Ideal([divexact(g, f) for g in inter.generators], I.ring)


def _unit_in_quotient(I: Ideal, target: Polynomial) -> Polynomial | None:
    """For zero-dimensional I: u with u(0) != 0 and u * target in I, found as a
    kernel vector of multiplication by target on C[z]/I.  Evaluation at the
    origin reads off the coefficient of the standard monomial 1."""
    ring = I.ring
    basis = standard_monomials(I)
    index = {e: i for i, e in enumerate(basis)}
    one = (0,) * ring.nvars
    # columns: images of the basis monomials, one equation per basis monomial
    rows: dict[int, dict[int, object]] = {}
    for j, b in enumerate(basis):
        img = normal_form(target.mul_term(b, 1), I)
        for e, c in img.items():
            rows.setdefault(index[e], {})[j] = c
    # solve M c = 0 with c_one = 1: eliminate over the other unknowns
    j1 = index[one]
    pivots: dict[int, dict] = {}
    for row in rows.values():
        row = dict(row)
        for col, prow in pivots.items():
            c = row.get(col)
            if c:
                for k, v in prow.items():
                    w = row.get(k, 0) - c * v
                    if w:
                        row[k] = w
                    else:
                        row.pop(k, None)
        free = [k for k in row if k != j1]
        if not free:
            if row.get(j1):
                return None  # forces c_one = 0
            continue
        col = min(free)
        inv = _inv(row[col])
        row = {k: v * inv for k, v in row.items()}
        for other in pivots.values():
            c = other.get(col)
            if c:
                for k, v in row.items():
                    w = other.get(k, 0) - c * v
                    if w:
                        other[k] = w
                    else:
                        other.pop(k, None)
        pivots[col] = row
    # free unknowns other than c_one are set to 0
    coeffs = {one: mpq(1)}
    for col, row in pivots.items():
        v = -row.get(j1, 0)
        if v:
            coeffs[basis[col]] = v
    return Polynomial(ring, coeffs)


def local_unit_multiple(I: Ideal, target: Polynomial) -> Polynomial | None:
    """Some e with e(0) != 0 and e * target in I, or None (target not in I_loc)."""
    if contains_poly(I, target):
        return I.ring.one()
    ring = I.ring
    if _pure_power_bound(I) is not None:
        return _unit_in_quotient(I, target)
    if ring.nvars == 2:
        # I = g * I' with I' zero-dimensional; e = g * u
        g = I.generators[0]
        for h in I.generators[1:]:
            g = poly_gcd(g, h)
        rest = Ideal([divexact(f, g) for f in I.generators], ring)
        if g.constant_term() and _pure_power_bound(rest) is not None:
            u = _unit_in_quotient(rest, target)
            return None if u is None else g * u
    Q = quotient(I, target)
    cands = [g for g in Q.groebner_basis() if g.constant_term()]
    cands += [g for g in Q.generators if g.constant_term()]
    if not cands:
        return None
    return min(cands, key=lambda g: (len(g), g.total_degree()))

"""Brute-force linear-algebra oracles, independent of the Groebner machinery.

Everything here works on the finite-dimensional space of polynomials of total
degree at most ``d`` and decides questions by exact Gaussian elimination.
These are slow on purpose; they exist to cross-check the engine.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from gmpy2 import mpq

from .poly import GaussianRational, Polynomial, monomials_of_degree


class OracleCapError(ValueError):
    """The requested question is outside what the degree cap can decide."""


@dataclass
class TruncationFrame:
    """All monomials of total degree <= ``degree`` in ``nvars`` variables."""

    nvars: int
    degree: int
    basis: list = field(init=False)
    index: dict = field(init=False)

    def __post_init__(self):
        self.basis = [e for d in range(self.degree + 1) for e in monomials_of_degree(self.nvars, d)]
        self.index = {e: k for k, e in enumerate(self.basis)}
        assert len(self.basis) == comb(self.degree + self.nvars, self.nvars)


def _inv(c):
    return 1 / c if isinstance(c, GaussianRational) else mpq(1) / c


class _Echelon:
    """Incremental row echelon form of sparse vectors {column: value}."""

    def __init__(self):
        self.rows: dict[int, dict] = {}

    def reduce(self, v: dict) -> dict:
        v = dict(v)
        out = {}
        while v:
            lead = min(v)
            row = self.rows.get(lead)
            if row is None:
                out[lead] = v.pop(lead)
                continue
            f = v[lead]
            # every column of ``row`` is >= lead, so ``out`` is never touched
            for k, c in row.items():
                s = v.get(k, 0) - f * c
                if s:
                    v[k] = s
                else:
                    v.pop(k, None)
        return out

    def add(self, v: dict) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        lead = min(v)
        inv = _inv(v[lead])
        self.rows[lead] = {k: c * inv for k, c in v.items()}
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


def _vector(p: Polynomial, frame: TruncationFrame, below: int | None = None) -> dict:
    out = {}
    for e, c in p.items():
        if below is not None and sum(e) >= below:
            continue
        out[frame.index[e]] = c
    return out


class _TruncatedSpan:
    """Span of {m * g : deg(m * g) <= d} inside the truncation frame."""

    def __init__(self, gens: Sequence[Polynomial], d: int):
        gens = [g for g in gens if g]
        if not gens:
            raise OracleCapError("no nonzero generators")
        ring = gens[0].ring
        if d < max(g.total_degree() for g in gens):
            raise OracleCapError("degree cap below a generator degree")
        self.ring = ring
        self.d = d
        self.frame = TruncationFrame(ring.nvars, d)
        self.ech = _Echelon()
        for g in gens:
            room = d - g.total_degree()
            for deg in range(room + 1):
                for e in monomials_of_degree(ring.nvars, deg):
                    self.ech.add(_vector(g.mul_term(e, 1), self.frame))

    def contains(self, p: Polynomial) -> bool:
        if p.total_degree() > self.d:
            raise OracleCapError(f"probe degree {p.total_degree()} exceeds cap {self.d}")
        return not self.ech.reduce(_vector(p, self.frame))


def member_linalg(gens: Sequence[Polynomial], p: Polynomial, d: int) -> bool:
    """Is p a combination sum G_i g_i with every deg(G_i g_i) <= d?"""
    return _TruncatedSpan(gens, d).contains(p)


def _type_with_span(span: _TruncatedSpan, d: int) -> int:
    nv = span.ring.nvars
    for k in range(1, d + 1):
        if all(span.contains(span.ring.monomial(e)) for e in monomials_of_degree(nv, k)):
            return k
    raise OracleCapError(f"no power of the maximal ideal is visible up to degree {d}")


def type_bruteforce(gens: Sequence[Polynomial], d: int) -> int:
    """Least k <= d such that every degree-k monomial is a degree-d-truncated member."""
    return _type_with_span(_TruncatedSpan(gens, d), d)


def colength_staircase(gens: Sequence[Polynomial], d: int) -> int:
    """dim C[z]/I computed as dim(C[z]/m^k) - dim((I + m^k)/m^k), once m^k is in I."""
    span = _TruncatedSpan(gens, d)
    k = _type_with_span(span, d)
    ring = span.ring
    gens = [g for g in gens if g]
    frame = TruncationFrame(ring.nvars, k - 1 + max(g.total_degree() for g in gens))
    ech = _Echelon()
    for g in gens:
        for deg in range(k):
            for e in monomials_of_degree(ring.nvars, deg):
                v = _vector(g.mul_term(e, 1), frame, below=k)
                if v:
                    ech.add(v)
    return comb(k - 1 + ring.nvars, ring.nvars) - ech.rank

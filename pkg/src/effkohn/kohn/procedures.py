"""The allowable procedures and the epsilon ledger.

Every procedure appends one witnessed step to a :class:`Derivation` and hands
back the resulting multiplier (or pre-multiplier).  The witness stored with a
step is enough for :func:`effkohn.kohn.audit.audit_trace` to re-check it
without repeating any search.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from ..groebner import Ideal, lift, local_unit_multiple
from ..poly import (
    Polynomial,
    Ring,
    divexact,
    format_coeff,
    jacobian_det,
    linear_coordinate_change,
    matrix_det,
    squarefree_part,
    vanishing_order,
)
from .trace import (
    ADJUST,
    COORDINATE_CHANGE,
    GEN_JACOBIAN_FULL,
    GEN_JACOBIAN_PARTIAL,
    IDEAL_ELEMENT,
    INIT_JACOBIAN,
    MULTIPLIER_KINDS,
    ROOT_TAKING,
    TERMINATION,
    DerivationStep,
    Multiplier,
    PreMultiplier,
    Trace,
    item_order,
)

log = logging.getLogger(__name__)

HALF = Fraction(1, 2)


class ProcedureError(ValueError):
    """A procedure's precondition failed (zero Jacobian, identity mismatch, ...)."""


class ZeroJacobian(ProcedureError):
    pass


class BudgetExceeded(RuntimeError):
    """An intermediate polynomial outgrew the configured degree cap."""


# ---------------------------------------------------------------------------
# ledger rules (shared with the auditor)


def jacobian_epsilon(orders: Sequence[Fraction]) -> Fraction:
    return HALF * min([Fraction(1)] + list(orders))


def ideal_epsilon(orders_with_cofactors: Sequence[tuple[Fraction, bool]]) -> Fraction:
    used = [e for e, nonzero in orders_with_cofactors if nonzero]
    if not used:
        raise ProcedureError("ideal element with all cofactors zero")
    return min(used)


def adjust_cap(orders_with_cofactors: Sequence[tuple[Fraction, bool]]) -> Fraction:
    return min([Fraction(1)] + [e for e, nonzero in orders_with_cofactors if nonzero])


# ---------------------------------------------------------------------------


class Derivation:
    """Mutable algorithm state: the growing trace plus the multiplier pool.

    ``fs`` are the generators in the current coordinates; they equal the input
    generators unless a coordinate change opened the trace.
    """

    def __init__(
        self,
        generators: Sequence[Polynomial],
        ring: Ring | None = None,
        seed: int = 0,
        config: dict | None = None,
        degree_cap: int | None = None,
    ):
        gens = list(generators)
        if not gens:
            raise ValueError("need at least one generator")
        self.ring = ring or gens[0].ring
        self.fs = gens
        self.trace = Trace(self.ring, list(gens), seed=seed, config=dict(config or {}))
        self.degree_cap = degree_cap
        self._pool: dict[Polynomial, Multiplier] = {}

    @property
    def nvars(self) -> int:
        return self.ring.nvars

    @property
    def steps(self) -> list[DerivationStep]:
        return self.trace.steps

    def f(self, j: int) -> PreMultiplier:
        return PreMultiplier(self.fs[j], "initial", Fraction(1), f"f{j + 1}")

    def premultipliers(self) -> list[PreMultiplier]:
        return [self.f(j) for j in range(len(self.fs))]

    def multipliers(self) -> list[Multiplier]:
        """Pool of distinct multipliers, strongest first."""
        return sorted(self._pool.values(), key=lambda m: (-m.epsilon, m.poly.total_degree(), len(m.poly), m.step))

    def known(self, p: Polynomial) -> Multiplier | None:
        return self._pool.get(p)

    # -- bookkeeping -----------------------------------------------------------
    def mark(self) -> int:
        return len(self.steps)

    def rollback(self, mark: int) -> None:
        del self.steps[mark:]
        self.trace.status = "running"
        self._pool = {}
        for s in self.steps:
            self._remember(s)

    def _remember(self, s: DerivationStep) -> None:
        if s.kind in MULTIPLIER_KINDS and s.kind != TERMINATION and s.output is not None:
            old = self._pool.get(s.output)
            if old is None or old.epsilon < s.epsilon:
                self._pool[s.output] = Multiplier(s.output, s.epsilon, s.id)

    def check_size(self, p: Polynomial) -> None:
        if self.degree_cap is not None and p.total_degree() > self.degree_cap:
            raise BudgetExceeded(f"intermediate degree {p.total_degree()} exceeds cap {self.degree_cap}")

    def emit(self, kind, inputs, witness, output, epsilon) -> DerivationStep:
        if output is not None:
            self.check_size(output)
        s = DerivationStep(len(self.steps) + 1, kind, list(inputs), witness, output, epsilon)
        self.steps.append(s)
        self._remember(s)
        log.debug("step %d %s -> %s [eps %s]", s.id, kind, output, epsilon)
        return s

    def emit_multiplier(self, kind, inputs, witness, output, epsilon) -> Multiplier:
        old = self._pool.get(output)
        if old is not None and old.epsilon >= epsilon:
            return old
        s = self.emit(kind, inputs, witness, output, epsilon)
        return Multiplier(output, epsilon, s.id)


def _s(p: Polynomial) -> str:
    return str(p)


# ---------------------------------------------------------------------------
# (i) Jacobians


def gen_jacobian(d: Derivation, items: Sequence, vars: Sequence[int] | None = None) -> Multiplier:
    """Jacobian determinant of multipliers / pre-multipliers, order 1/2 * min(1, ...)."""
    items = list(items)
    v = d.nvars
    if vars is None:
        vars = list(range(len(items)))
    vars = list(vars)
    if len(items) != len(vars) or len(items) not in (v - 1, v) or vars != list(range(len(items))):
        raise ProcedureError("Jacobians use (z_1..z_n) or (z_1..z_{n+1})")
    det = jacobian_det([it.poly for it in items], vars)
    if det.is_zero():
        raise ZeroJacobian("Jacobian determinant vanishes identically")
    if all(isinstance(it, PreMultiplier) and it.kind == "initial" for it in items):
        kind = INIT_JACOBIAN
    elif len(items) == v:
        kind = GEN_JACOBIAN_FULL
    else:
        kind = GEN_JACOBIAN_PARTIAL
    eps = jacobian_epsilon([item_order(it) for it in items])
    witness = {"variables": [d.ring.names[k] for k in vars]}
    return d.emit_multiplier(kind, [it.ref for it in items], witness, det, eps)


def initial_multipliers(d: Derivation) -> list[Multiplier]:
    """All nonzero Jacobians of n- and (n+1)-subsets of the generators, each of order 1/2."""
    v = d.nvars
    if v < 2:
        raise ProcedureError("need at least two variables")
    for f in d.fs:
        if f.constant_term():
            raise ProcedureError(f"generator {f} does not vanish at the origin")
    pres = d.premultipliers()
    out: dict[Polynomial, Multiplier] = {}
    for size in (v - 1, v):
        for sub in combinations(pres, size):
            try:
                m = gen_jacobian(d, sub)
            except ZeroJacobian:
                continue
            if m.poly not in out or out[m.poly].epsilon < m.epsilon:
                out[m.poly] = m
    if not out:
        log.warning("every candidate Jacobian vanishes identically")
    return list(out.values())


def iterate_L_operator(d: Derivation, pivot, target, count: int) -> list[Multiplier]:
    """h_k = Jac(pivot, h_{k-1}) for k = 1..count with h_0 = target; stops at a zero iterate."""
    out: list[Multiplier] = []
    prev = target
    for _ in range(count):
        try:
            h = gen_jacobian(d, [pivot, prev])
        except ZeroJacobian:
            if not out:
                raise
            break
        out.append(h)
        prev = h
    return out


# ---------------------------------------------------------------------------
# (ii) ideal elements


def ideal_element(
    d: Derivation,
    gens: Sequence[Multiplier],
    cofactors: Sequence[Polynomial],
    target: Polynomial | None = None,
    denominator: Polynomial | None = None,
) -> Multiplier:
    """Multiplier sum G_i F_i; with a ``denominator`` e (e(0) != 0) the identity is
    e * target = sum G_i F_i, i.e. the cofactors are the germs G_i / e."""
    gens = list(gens)
    cofactors = list(cofactors)
    if len(gens) != len(cofactors) or not gens:
        raise ProcedureError("one cofactor per generator is required")
    total = d.ring.zero()
    for F, G in zip(gens, cofactors):
        if not isinstance(F, Multiplier):
            raise ProcedureError("ideal elements are formed from multipliers only")
        if G:
            total = total + G * F.poly
    e = denominator if denominator is not None else d.ring.one()
    if not e.constant_term():
        raise ProcedureError("denominator must not vanish at the origin")
    if target is None:
        if denominator is not None:
            target = divexact(total, e)
        else:
            target = total
    if target.is_zero():
        raise ProcedureError("ideal element is zero")
    if e * target != total:
        raise ProcedureError("cofactor identity does not hold")
    eps = ideal_epsilon([(F.epsilon, bool(G)) for F, G in zip(gens, cofactors)])
    witness = {"cofactors": [_s(G) for G in cofactors]}
    if denominator is not None and denominator != d.ring.one():
        witness["denominator"] = _s(e)
    return d.emit_multiplier(IDEAL_ELEMENT, [F.ref for F in gens], witness, target, eps)


def ideal_element_from_membership(
    d: Derivation, gens: Sequence[Multiplier], target: Polynomial, local: bool = False
) -> Multiplier:
    """Synthesize cofactors by Groebner division; ``local`` allows a unit denominator."""
    gens = list(gens)
    I = Ideal([F.poly for F in gens], d.ring)
    e = d.ring.one()
    if local:
        e = local_unit_multiple(I, target)
        if e is None:
            raise ProcedureError(f"{target} is not in the local ideal of the multipliers")
    cof = lift(I, e * target)
    if cof is None:
        raise ProcedureError(f"{target} is not in the ideal of the multipliers")
    return ideal_element(d, gens, cof, target, e if local else None)


# ---------------------------------------------------------------------------
# (iii) root taking


def root_taking(d: Derivation, F: Multiplier) -> Multiplier:
    """Square-free part of F with order eps/m, m the maximal factor multiplicity."""
    if F.poly.is_constant():
        raise ProcedureError("root taking on a constant; use termination instead")
    sf, m = squarefree_part(F.poly)
    Q = divexact(sf**m, F.poly)
    witness = {"m": m, "cofactor": _s(Q), "squarefree": True}
    return d.emit_multiplier(ROOT_TAKING, [F.ref], witness, sf, F.epsilon / m)


def root_by_relation(d: Derivation, F: Multiplier, root: Polynomial, m: int, cofactor: Polynomial) -> Multiplier:
    """Root taking witnessed only by root^m = cofactor * F (no square-free claim)."""
    if root**m != cofactor * F.poly:
        raise ProcedureError("root relation does not hold")
    witness = {"m": m, "cofactor": _s(cofactor), "squarefree": False}
    return d.emit_multiplier(ROOT_TAKING, [F.ref], witness, root, F.epsilon / m)


# ---------------------------------------------------------------------------
# pre-multiplier adjustment, coordinates, termination


def adjust_premultiplier(
    d: Derivation,
    coefficients: Sequence,
    multipliers: Sequence[Multiplier] = (),
    cofactors: Sequence[Polynomial] = (),
) -> PreMultiplier:
    """sum c_j f_j - sum G_i F_i with constants c_j; cap = min(1, eps(F_i) used)."""
    coefficients = list(coefficients)
    if len(coefficients) != len(d.fs):
        raise ProcedureError("one coefficient per generator is required")
    consts = [d.ring.const(c) for c in coefficients]
    out = d.ring.zero()
    f_inputs, coef_strs = [], []
    for j, c in enumerate(consts):
        if c:
            out = out + c * d.fs[j]
            f_inputs.append(f"f{j + 1}")
            coef_strs.append(format_coeff(c.constant_term()))
    for F, G in zip(multipliers, cofactors):
        out = out - G * F.poly
    if out.is_zero():
        raise ProcedureError("adjusted pre-multiplier is zero")
    cap = adjust_cap([(F.epsilon, bool(G)) for F, G in zip(multipliers, cofactors)])
    if not multipliers and len(f_inputs) == 1 and coef_strs[0] == "1":
        # plain f_j: nothing to record
        j = int(f_inputs[0][1:]) - 1
        return d.f(j)
    witness = {"coefficients": coef_strs, "cofactors": [_s(G) for G in cofactors]}
    s = d.emit(ADJUST, f_inputs + [F.ref for F in multipliers], witness, out, cap)
    return PreMultiplier(out, "adjusted", cap, s.id)


def generic_combination(d: Derivation, rng, box: int = 3) -> PreMultiplier:
    """A random C-linear combination of the generators with small integer weights."""
    while True:
        coeffs = [rng.randint(-box, box) for _ in d.fs]
        if any(coeffs):
            break
    return adjust_premultiplier(d, coeffs)


def coordinate_change(d: Derivation, A: Sequence[Sequence]) -> None:
    """Pass to generic linear coordinates; only allowed before any other step."""
    if d.steps:
        raise ProcedureError("coordinate changes must open the trace")
    if not matrix_det(A):
        raise ProcedureError("singular coordinate change")
    d.fs = [linear_coordinate_change(f, A) for f in d.fs]
    witness = {"matrix": [[format_coeff(d.ring.const(a).constant_term()) for a in row] for row in A]}
    d.emit(COORDINATE_CHANGE, [], witness, None, None)


def terminate(d: Derivation, F: Multiplier) -> Multiplier:
    """From a multiplier F with F(0) != 0, the constant 1 is a multiplier (1 = F^{-1} F)."""
    c = F.poly.constant_term()
    if not c:
        raise ProcedureError("termination needs a multiplier that is a unit at the origin")
    one = d.ring.one()
    if F.poly.is_constant():
        witness = {"denominator": "1", "cofactor": _s(d.ring.const(1 / c))}
    else:
        witness = {"denominator": _s(F.poly), "cofactor": "1"}
    s = d.emit(TERMINATION, [F.ref], witness, one, F.epsilon)
    d.trace.status = "terminated"
    return Multiplier(one, F.epsilon, s.id)


# ---------------------------------------------------------------------------
# the original algorithm's radical, for comparison only


def classic_radical_step(I: Ideal) -> Polynomial:
    """Radical of a principal ideal: the square-free part of its generator."""
    gens = [g for g in I.generators if g]
    if len(gens) != 1:
        basis = I.groebner_basis()
        if len(basis) != 1:
            raise ProcedureError("only principal ideals are supported")
        gens = basis
    sf, _ = squarefree_part(gens[0])
    return sf


def is_linear_form(p: Polynomial) -> bool:
    return not p.is_zero() and p.total_degree() == 1 and vanishing_order(p) == 1

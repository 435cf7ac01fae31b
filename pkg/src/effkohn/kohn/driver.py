"""run_algorithm: choose procedures until the constant 1 is derived."""

from __future__ import annotations

import logging
import random
from dataclasses import asdict, dataclass
from itertools import combinations
from typing import Sequence

from ..groebner import DEFAULT_TYPE_CAP, Ideal, contains_poly, effective_type, local_type, normal_form
from ..poly import Polynomial, Ring, divexact, jacobian_det, squarefree_part, vanishing_order
from .induction import GenericityFailure, finisher, induction_step
from .procedures import (
    BudgetExceeded,
    Derivation,
    ProcedureError,
    ZeroJacobian,
    adjust_premultiplier,
    coordinate_change,
    gen_jacobian,
    generic_combination,
    ideal_element,
    ideal_element_from_membership,
    is_linear_form,
    root_taking,
    terminate,
)
from .trace import Multiplier, Trace

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Config:
    seed: int = 0
    max_retries: int = 16
    type_cap: int = DEFAULT_TYPE_CAP
    degree_cap: int | None = 400

    def to_dict(self) -> dict:
        return asdict(self)


class AlgorithmFailure(RuntimeError):
    """The run stopped without deriving 1; ``trace`` holds the partial derivation."""

    def __init__(self, message: str, trace: Trace):
        super().__init__(message)
        self.trace = trace


class _Retries:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self, why: str) -> None:
        self.used += 1
        log.info("genericity retry %d/%d: %s", self.used, self.limit, why)
        if self.used > self.limit:
            raise _Exhausted(why)


class _Exhausted(Exception):
    pass


def _check_inputs(fs: Sequence[Polynomial]) -> Ring:
    if not fs:
        raise ValueError("no generators")
    ring = fs[0].ring
    if ring.nvars < 2:
        raise ValueError("need at least two variables (n + 1 >= 2)")
    for f in fs:
        if f.ring != ring:
            raise ValueError("generators live in different rings")
        if f.is_zero():
            raise ValueError("zero generator")
        if f.constant_term():
            raise ValueError(f"generator {f} does not vanish at the origin")
    return ring


def run_algorithm(fs: Sequence[Polynomial], config: Config | None = None) -> Trace:
    """Derive the constant 1 from the generators; deterministic for a fixed seed.

    Raises TypeCapExceeded when the generators are not visibly of finite type
    and AlgorithmFailure (carrying the partial trace) when the retry or degree
    budget runs out.
    """
    config = config or Config()
    fs = list(fs)
    ring = _check_inputs(fs)
    report = effective_type(Ideal(fs, ring), cap=config.type_cap)
    rng = random.Random(config.seed)
    retries = _Retries(config.max_retries)
    matrix = None
    while True:
        d = Derivation(fs, ring, seed=config.seed, config=config.to_dict(), degree_cap=config.degree_cap)
        d.trace.p_star = report.p_star
        try:
            if matrix is not None:
                coordinate_change(d, matrix)
            _strategy(d, rng, retries, config)
            return d.trace
        except GenericityFailure as exc:
            try:
                retries.spend(str(exc))
            except _Exhausted:
                d.trace.status, d.trace.reason = "failed", f"retry budget exhausted: {exc}"
                raise AlgorithmFailure(d.trace.reason, d.trace) from None
            matrix = random_invertible(rng, ring.nvars)
        except _Exhausted as exc:
            d.trace.status, d.trace.reason = "failed", f"retry budget exhausted: {exc}"
            raise AlgorithmFailure(d.trace.reason, d.trace) from None
        except BudgetExceeded as exc:
            d.trace.status, d.trace.reason = "failed", str(exc)
            raise AlgorithmFailure(str(exc), d.trace) from None


def random_invertible(rng: random.Random, n: int, box: int = 2) -> list[list[int]]:
    from ..poly import matrix_det

    while True:
        A = [[rng.randint(-box, box) for _ in range(n)] for _ in range(n)]
        if matrix_det(A):
            return A


# ---------------------------------------------------------------------------


def _strategy(d: Derivation, rng, retries: _Retries, config: Config) -> None:
    if d.nvars == 2 and _l_phase(d, config):
        return
    if _greedy(d):
        return
    _general(d, rng, retries, config)


def _pivot_order(d: Derivation):
    pres = d.premultipliers()
    return sorted(pres, key=lambda p: (vanishing_order(p.poly), int(p.ref[1:])))


def _l_phase(d: Derivation, config: Config) -> bool:
    """Two-variable path: iterate Jac(pivot, .) until a linear root appears, strip
    the target modulo that linear multiplier and differentiate once more."""
    mark = d.mark()
    pres = _pivot_order(d)
    pivot = pres[0]
    for target in pres[1:]:
        try:
            if _l_attempt(d, pivot, target, config):
                return True
        except (ZeroJacobian, GenericityFailure) as exc:
            log.info("L-operator path abandoned: %s", exc)
        d.rollback(mark)
    return False


def _linear_root(d: Derivation, h: Multiplier) -> Multiplier | None:
    # c * l^m is homogeneous; skip the gcd work otherwise
    if len({sum(e) for e, _ in h.poly.items()}) != 1:
        return None
    sf, m = squarefree_part(h.poly)
    if not is_linear_form(sf):
        return None
    return root_taking(d, h) if m > 1 else h


def _l_attempt(d: Derivation, pivot, target, config: Config) -> bool:
    kmax = target.poly.total_degree() + pivot.poly.total_degree()
    prev, ell = target, None
    for _ in range(kmax):
        h = gen_jacobian(d, [pivot, prev])
        if h.poly.constant_term():
            terminate(d, h)
            return True
        ell = _linear_root(d, h)
        if ell is not None:
            break
        prev = h
    if ell is None:
        return False

    others = [target] + [p for p in d.premultipliers() if p.ref != target.ref]
    for T in others:
        r = normal_form(T.poly, [ell.poly])
        if r.is_zero():
            continue
        if r != T.poly:
            ie = ideal_element(d, [ell], [divexact(T.poly - r, ell.poly)])
            coeffs = [0] * len(d.fs)
            coeffs[int(T.ref[1:]) - 1] = 1
            adj = adjust_premultiplier(d, coeffs, [ie], [d.ring.one()])
        else:
            adj = T
        h2 = gen_jacobian(d, [ell, adj])
        if h2.poly.constant_term():
            terminate(d, h2)
            return True
        ell2 = _linear_root(d, h2)
        if ell2 is not None:
            try:
                J = gen_jacobian(d, [ell, ell2])
            except ZeroJacobian:
                J = None
            if J is not None and J.poly.constant_term():
                terminate(d, J)
                return True
        finisher(d, config.type_cap)
        return True
    return False


GREEDY_POOL = 6
GREEDY_TERMS = 60


def _greedy(d: Derivation) -> bool:
    """Jacobian-and-root search: each round takes the best new root among the
    Jacobians of small multipliers and (possibly reduced) pre-multipliers.

    A root counts as new only outside the ideal of the current multipliers, so
    that ideal grows strictly every round.  Rolls back and returns False when
    no new root turns up within the round budget.
    """
    mark = d.mark()
    for _ in range(6 * d.nvars):
        pool = [m for m in d.multipliers() if len(m.poly) <= GREEDY_TERMS]
        units = [m for m in pool if m.poly.constant_term()]
        if units:
            terminate(d, units[0])
            return True
        pool.sort(key=lambda m: (vanishing_order(m.poly), m.poly.total_degree(), len(m.poly), -m.epsilon))
        small = pool[:GREEDY_POOL]
        ideal = Ideal([m.poly for m in pool], d.ring) if pool else None
        items = [("m", m, m.poly) for m in small]
        for pre in d.premultipliers():
            items.append(("f", pre, pre.poly))
            if ideal is not None:
                r = normal_form(pre.poly, ideal)
                if r and r != pre.poly:
                    items.append(("r", pre, r))
        best = None
        for sub in combinations(items, d.nvars):
            det = jacobian_det([it[2] for it in sub], list(range(d.nvars)))
            if det.is_zero() or len(det) > GREEDY_TERMS:
                continue
            sf, _ = squarefree_part(det)
            if ideal is not None and contains_poly(ideal, sf):
                continue
            key = (vanishing_order(sf), sf.total_degree(), len(sf), len(det))
            if best is None or key < best[0]:
                best = (key, sub)
        if best is None:
            break
        chosen = []
        for tag, obj, poly in best[1]:
            if tag == "r":
                ie = ideal_element_from_membership(d, pool, obj.poly - poly)
                coeffs = [0] * len(d.fs)
                coeffs[int(obj.ref[1:]) - 1] = 1
                obj = adjust_premultiplier(d, coeffs, [ie], [d.ring.one()])
            chosen.append(obj)
        J = gen_jacobian(d, chosen)
        if J.poly.constant_term():
            terminate(d, J)
            return True
        _, m = squarefree_part(J.poly)
        if m > 1:
            root_taking(d, J)
    d.rollback(mark)
    return False


def _seed_jacobian(d: Derivation, rng, retries: _Retries) -> Multiplier:
    pres = d.premultipliers()
    best = None
    for sub in combinations(pres, d.nvars):
        det = jacobian_det([p.poly for p in sub], list(range(d.nvars)))
        if det.is_zero():
            continue
        key = (vanishing_order(det), det.total_degree(), len(det))
        if best is None or key < best[0]:
            best = (key, sub)
    if best is not None:
        return gen_jacobian(d, best[1])
    while True:
        mark = d.mark()
        combos = [generic_combination(d, rng) for _ in range(d.nvars)]
        try:
            return gen_jacobian(d, combos)
        except ZeroJacobian:
            d.rollback(mark)
            retries.spend("dependent generic combinations")


def _general(d: Derivation, rng, retries: _Retries, config: Config) -> None:
    J = _seed_jacobian(d, rng, retries)
    if J.poly.constant_term():
        terminate(d, J)
        return
    _, m = squarefree_part(J.poly)
    h1 = root_taking(d, J) if m > 1 else J
    hs = [h1]
    while len(hs) < d.nvars:
        hs.append(_stage(d, hs, rng, retries, config))
        if hs[-1].poly.constant_term():
            terminate(d, hs[-1])
            return
    finisher(d, config.type_cap)


STAGE_REDRAWS = 3


def _stage(d: Derivation, hs, rng, retries: _Retries, config: Config) -> Multiplier:
    """One induction stage with fresh combinations; after a few failed draws the
    coordinates themselves are blamed and the run restarts in new ones."""
    last = None
    for _ in range(STAGE_REDRAWS):
        mark = d.mark()
        aux = [generic_combination(d, rng) for _ in range(d.nvars - len(hs))]
        if local_type(Ideal([h.poly for h in hs] + [a.poly for a in aux], d.ring), config.type_cap) is None:
            d.rollback(mark)
            last = "combination does not cut the multiplier locus to the origin"
            retries.spend(last)
            continue
        try:
            return induction_step(d, hs, aux)
        except (GenericityFailure, ZeroJacobian) as exc:
            d.rollback(mark)
            last = str(exc)
            retries.spend(last)
    raise GenericityFailure(f"coordinates look non-generic: {last}")

"""Independent re-verification of a derivation trace.

Every step is re-checked from its witness alone: determinants are recomputed,
cofactor identities are multiplied out and every epsilon is re-derived from the
ledger rules.  Nothing is searched for, so a clean report means each step is
an instance of an allowable procedure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..groebner import Ideal, local_colength
from ..poly import (
    Polynomial,
    Ring,
    jacobian_det,
    linear_coordinate_change,
    matrix_det,
    parse_poly,
    squarefree_part,
    vanishing_order,
)
from .procedures import adjust_cap, ideal_epsilon, jacobian_epsilon
from .trace import (
    ADJUST,
    AUXILIARY_KINDS,
    COORDINATE_CHANGE,
    ELIMINATION_RELATION,
    GEN_JACOBIAN_FULL,
    GEN_JACOBIAN_PARTIAL,
    IDEAL_ELEMENT,
    INIT_JACOBIAN,
    JACOBIAN_KINDS,
    ROOT_TAKING,
    STEP_KINDS,
    TERMINATION,
    WEIERSTRASS,
    DerivationStep,
    Trace,
)

# the order-bound check is skipped for Jacobian inputs longer than this
BOUND_TERMS = 40
BOUND_CAP = 32


@dataclass(frozen=True)
class Violation:
    step: int | None
    rule: str
    message: str

    def __str__(self):
        where = "trace" if self.step is None else f"step {self.step}"
        return f"{where}: [{self.rule}] {self.message}"


@dataclass
class AuditReport:
    clean: bool
    violations: list[Violation] = field(default_factory=list)
    checked: int = 0
    bound_checked: int = 0

    def summary(self) -> str:
        head = "clean" if self.clean else f"{len(self.violations)} violation(s)"
        return f"audit: {head}; {self.checked} step(s) checked, {self.bound_checked} order-bound check(s)"


class _Fail(Exception):
    def __init__(self, rule: str, message: str):
        super().__init__(message)
        self.rule = rule


def _need(cond: bool, rule: str, message: str) -> None:
    if not cond:
        raise _Fail(rule, message)


class _Item:
    """A resolved input: a multiplier, or a pre-multiplier with its cap."""

    def __init__(self, poly: Polynomial, order: Fraction, kind: str):
        self.poly = poly
        self.order = order
        self.kind = kind  # "initial", "adjusted" or "multiplier"


class _Auditor:
    def __init__(self, trace: Trace, check_order_bound: bool):
        self.t = trace
        self.ring: Ring = trace.ring
        self.fs = list(trace.generators)
        self.check_order_bound = check_order_bound
        self.done: dict[int, DerivationStep] = {}
        self.report = AuditReport(clean=True)

    # -- input resolution ---------------------------------------------------------
    def resolve(self, ref) -> _Item:
        if isinstance(ref, str):
            _need(ref.startswith("f") and ref[1:].isdigit(), "input", f"malformed reference {ref!r}")
            j = int(ref[1:])
            _need(1 <= j <= len(self.fs), "input", f"no generator {ref}")
            return _Item(self.fs[j - 1], Fraction(1), "initial")
        _need(isinstance(ref, int), "input", f"malformed reference {ref!r}")
        s = self.done.get(ref)
        _need(s is not None, "input", f"step {ref} is not an earlier step")
        _need(s.kind not in AUXILIARY_KINDS, "input", f"step {ref} ({s.kind}) is auxiliary")
        _need(s.kind != TERMINATION, "input", f"step {ref} is a termination")
        if s.kind == ADJUST:
            return _Item(s.output, s.epsilon, "adjusted")
        return _Item(s.output, s.epsilon, "multiplier")

    def multiplier(self, ref) -> _Item:
        it = self.resolve(ref)
        _need(it.kind == "multiplier", "input", f"{ref!r} is not a multiplier")
        return it

    def poly(self, text: str, ring: Ring | None = None) -> Polynomial:
        try:
            return parse_poly(text, ring or self.ring)
        except Exception as exc:
            raise _Fail("witness", f"unparsable polynomial {text!r}: {exc}") from None

    def expect_eps(self, s: DerivationStep, eps: Fraction) -> None:
        _need(s.epsilon == eps, "epsilon", f"recorded epsilon {s.epsilon}, ledger gives {eps}")

    def expect_output(self, s: DerivationStep, p: Polynomial) -> None:
        _need(s.output is not None, "output", "missing output")
        _need(s.output == p, "output", f"recorded output {s.output}, recomputed {p}")

    # -- per-kind checks -------------------------------------------------------------
    def check(self, s: DerivationStep) -> None:
        _need(s.kind in STEP_KINDS, "kind", f"unknown step kind {s.kind!r}")
        if s.kind != COORDINATE_CHANGE:
            _need(s.kind not in JACOBIAN_KINDS or s.output is not None, "output", "missing output")
        getattr(self, "_" + s.kind)(s)

    def _jacobian(self, s: DerivationStep) -> None:
        items = [self.resolve(r) for r in s.inputs]
        names = list(s.witness.get("variables", []))
        v = self.ring.nvars
        _need(len(names) == len(items), "jacobian", "one variable per input is required")
        _need(len(items) in (v - 1, v), "jacobian", "Jacobians use n or n+1 functions")
        _need(names == list(self.ring.names[: len(items)]), "jacobian", f"variables {names} are not z_1..z_{len(items)}")
        all_initial = all(it.kind == "initial" for it in items)
        if s.kind == INIT_JACOBIAN:
            _need(all_initial, "kind", "InitJacobian inputs must all be generators")
        else:
            _need(not all_initial, "kind", f"{s.kind} of generators only should be InitJacobian")
            want = GEN_JACOBIAN_FULL if len(items) == v else GEN_JACOBIAN_PARTIAL
            _need(s.kind == want, "kind", f"{len(items)} inputs make a {want}")
        det = jacobian_det([it.poly for it in items], list(range(len(items))))
        _need(not det.is_zero(), "jacobian", "determinant vanishes")
        self.expect_output(s, det)
        self.expect_eps(s, jacobian_epsilon([it.order for it in items]))
        if self.check_order_bound and len(items) == v:
            self.order_bound(s, items, det)

    _InitJacobian = _jacobian
    _GenJacobianFull = _jacobian
    _GenJacobianPartial = _jacobian

    def order_bound(self, s: DerivationStep, items, det: Polynomial) -> None:
        # a finite map germ with lambda sheets has a Jacobian of order <= lambda - 1
        if any(len(it.poly) > BOUND_TERMS for it in items):
            return
        lam = local_colength(Ideal([it.poly for it in items], self.ring), BOUND_CAP)
        if lam is None:
            return
        self.report.bound_checked += 1
        order = vanishing_order(det)
        _need(order <= lam - 1, "order-bound", f"Jacobian vanishes to order {order} > colength - 1 = {lam - 1}")

    def _IdealElement(self, s: DerivationStep) -> None:
        _need(s.inputs, "ideal", "no generators")
        gens = [self.multiplier(r) for r in s.inputs]
        cofs = [self.poly(c) for c in s.witness.get("cofactors", [])]
        _need(len(cofs) == len(gens), "ideal", "one cofactor per generator is required")
        e = self.poly(s.witness.get("denominator", "1"))
        _need(bool(e.constant_term()), "ideal", "denominator vanishes at the origin")
        total = self.ring.zero()
        for F, G in zip(gens, cofs):
            total = total + G * F.poly
        _need(s.output is not None and not s.output.is_zero(), "output", "ideal element must be nonzero")
        _need(e * s.output == total, "identity", "denominator * output != sum of cofactor * generator")
        self.expect_eps(s, ideal_epsilon([(F.order, bool(G)) for F, G in zip(gens, cofs)]))

    def _RootTaking(self, s: DerivationStep) -> None:
        _need(len(s.inputs) == 1, "root", "root taking has exactly one input")
        F = self.multiplier(s.inputs[0])
        m = s.witness.get("m")
        _need(isinstance(m, int) and m >= 1, "root", f"bad exponent {m!r}")
        Q = self.poly(s.witness.get("cofactor", "0"))
        _need(s.output is not None, "output", "missing output")
        _need(s.output**m == Q * F.poly, "identity", "output^m != cofactor * input")
        if s.witness.get("squarefree"):
            sf, _ = squarefree_part(F.poly)
            self.expect_output(s, sf)
        self.expect_eps(s, F.order / m)

    def _AdjustPreMultiplier(self, s: DerivationStep) -> None:
        coefs = s.witness.get("coefficients", [])
        cofs = [self.poly(c) for c in s.witness.get("cofactors", [])]
        nf = len(coefs)
        _need(nf + len(cofs) == len(s.inputs), "adjust", "inputs do not match coefficients and cofactors")
        out = self.ring.zero()
        for ref, c in zip(s.inputs[:nf], coefs):
            it = self.resolve(ref)
            _need(it.kind == "initial", "adjust", f"{ref!r} is not a generator")
            out = out + self.poly(c) * it.poly
        used = []
        for ref, G in zip(s.inputs[nf:], cofs):
            F = self.multiplier(ref)
            out = out - G * F.poly
            used.append((F.order, bool(G)))
        _need(not out.is_zero(), "output", "adjusted pre-multiplier is zero")
        self.expect_output(s, out)
        self.expect_eps(s, adjust_cap(used))

    def _aux_ring(self, names) -> Ring:
        _need(len(set(names)) == len(names), "witness", "repeated auxiliary variable")
        _need(not set(names) & set(self.ring.names), "witness", "auxiliary variables clash with the ring")
        return self.ring.extend(names)

    def _premult(self, ref) -> Polynomial:
        it = self.resolve(ref)
        _need(it.kind in ("initial", "adjusted"), "input", f"{ref!r} is not a pre-multiplier")
        return it.poly

    def _WeierstrassExtraction(self, s: DerivationStep) -> None:
        w = s.witness
        subs_refs = list(w.get("substitution", []))
        big = self._aux_ring(list(w.get("aux_variables", [])))
        _need(len(subs_refs) == big.nvars - self.ring.nvars, "witness", "one substitution per auxiliary variable")
        var = w.get("variable")
        _need(var in self.ring.names, "witness", f"unknown variable {var!r}")
        j = self.ring.names.index(var)
        W = self.poly(w.get("W", "0"), big)
        allowed = {j} | set(range(self.ring.nvars, big.nvars))
        _need(all(not e[k] for e, _ in W.items() for k in range(big.nvars) if k not in allowed),
              "weierstrass", "W involves variables other than the slot and the auxiliaries")
        p = W.degree_in(j)
        _need(p >= 1 and p == w.get("degree"), "weierstrass", f"recorded degree {w.get('degree')}, W has degree {p}")
        lc = {e: c for e, c in W.items() if e[j] == p}
        zero = tuple(0 if k != j else p for k in range(big.nvars))
        _need(zero in lc, "weierstrass", "leading coefficient vanishes at the origin")
        nu = len(s.inputs) - len(subs_refs)
        _need(nu >= 1 and list(s.inputs[nu:]) == subs_refs, "input", "inputs must be the multipliers then the substitution")
        hs = [self.multiplier(r) for r in s.inputs[:nu]]
        aux = [self._premult(r) for r in subs_refs]
        composed = W.compose(self.ring.gens() + aux, self.ring)
        self.expect_output(s, composed)
        cofs = [self.poly(c) for c in w.get("cofactors", [])]
        _need(len(cofs) == nu, "weierstrass", "one cofactor per multiplier is required")
        total = self.ring.zero()
        for h, c in zip(hs, cofs):
            total = total + c * h.poly
        _need(total == composed, "identity", "W(z, h) != sum of cofactor * multiplier")
        self.expect_eps(s, ideal_epsilon([(h.order, bool(c)) for h, c in zip(hs, cofs)]))

    def _EliminationRelation(self, s: DerivationStep) -> None:
        w = s.witness
        subs_refs = list(w.get("substitution", []))
        big = self._aux_ring(list(w.get("aux_variables", [])))
        naux = len(subs_refs)
        _need(naux == big.nvars - self.ring.nvars and naux >= 1, "witness", "one substitution per auxiliary variable")
        nu = self.ring.nvars - naux
        _need(len(s.inputs) == 2 * nu - 1 + naux, "input", "expected multipliers, substitution and Weierstrass steps")
        _need(list(s.inputs[nu : nu + naux]) == subs_refs, "input", "substitution does not match the inputs")
        hs = [self.multiplier(r) for r in s.inputs[:nu]]
        aux = [self._premult(r) for r in subs_refs]
        slot = w.get("slot")
        _need(slot in self.ring.names[:nu], "witness", f"bad slot {slot!r}")
        s_idx = self.ring.names.index(slot)
        subs = self.ring.gens() + aux
        D = jacobian_det(aux, list(range(nu, self.ring.nvars)))
        others = [j for j in range(nu) if j != s_idx]
        for j, ref in zip(others, s.inputs[nu + naux :]):
            ws = self.done.get(ref)
            _need(ws is not None and ws.kind == WEIERSTRASS, "input", f"{ref!r} is not a Weierstrass step")
            _need(ws.witness.get("variable") == self.ring.names[j], "input", f"step {ref} is not for {self.ring.names[j]}")
            _need(ws.witness.get("substitution") == subs_refs, "input", f"step {ref} uses another substitution")
            wbig = self._aux_ring(list(ws.witness.get("aux_variables", [])))
            W = self.poly(ws.witness["W"], wbig)
            D = D * W.diff(j).compose(subs, self.ring)
        _need(self.poly(w.get("D", "0")) == D, "relation", "recorded D does not match the Jacobian minor")
        g = self.poly(w.get("g", "0"), big)
        _need(not g.is_zero(), "relation", "relation g is zero")
        _need(all(not e[k] for e, _ in g.items() for k in range(self.ring.nvars)), "relation", "g involves base variables")
        g_sub = g.compose(subs, self.ring)
        self.expect_output(s, g_sub)
        A = [self.poly(c) for c in w.get("cofactors", [])]
        _need(len(A) == nu, "relation", "one cofactor per multiplier is required")
        total = self.poly(w.get("D_cofactor", "0")) * D
        for a, h in zip(A, hs):
            total = total + a * h.poly
        _need(total == g_sub, "identity", "g(h) != sum A_i h_i + B D")
        _need(s.epsilon is None, "epsilon", "auxiliary steps carry no epsilon")

    def _CoordinateChange(self, s: DerivationStep) -> None:
        _need(s.id == 1, "order", "a coordinate change must open the trace")
        _need(not s.inputs and s.output is None and s.epsilon is None, "witness", "coordinate changes have no inputs, output or epsilon")
        rows = s.witness.get("matrix")
        n = self.ring.nvars
        _need(isinstance(rows, list) and len(rows) == n and all(len(r) == n for r in rows), "witness", "bad matrix shape")
        A = [[self.poly(str(x)).constant_term() for x in r] for r in rows]
        _need(bool(matrix_det(A)), "witness", "singular coordinate change")
        self.fs = [linear_coordinate_change(f, A) for f in self.fs]

    def _Termination(self, s: DerivationStep) -> None:
        _need(len(s.inputs) == 1, "termination", "termination has exactly one input")
        F = self.multiplier(s.inputs[0])
        e = self.poly(s.witness.get("denominator", "1"))
        G = self.poly(s.witness.get("cofactor", "0"))
        _need(bool(e.constant_term()), "termination", "denominator vanishes at the origin")
        _need(e == G * F.poly, "identity", "denominator * 1 != cofactor * input")
        self.expect_output(s, self.ring.one())
        self.expect_eps(s, F.order)

    # -- driver ---------------------------------------------------------------------------
    def run(self) -> AuditReport:
        rep = self.report
        for pos, s in enumerate(self.t.steps, start=1):
            try:
                _need(s.id == pos, "order", f"step ids must run 1, 2, ...; found {s.id} at position {pos}")
                _need(not any(x.kind == TERMINATION for x in self.done.values()), "order", "step after termination")
                self.check(s)
            except _Fail as exc:
                rep.violations.append(Violation(s.id, exc.rule, str(exc)))
            except Exception as exc:  # malformed witness data
                rep.violations.append(Violation(s.id, "witness", f"{type(exc).__name__}: {exc}"))
            rep.checked += 1
            self.done[s.id] = s
        if self.t.status == "terminated":
            last = self.t.steps[-1] if self.t.steps else None
            if last is None or last.kind != TERMINATION or last.output != self.ring.one():
                rep.violations.append(Violation(None, "termination", "terminated trace does not end in the constant 1"))
        rep.clean = not rep.violations
        return rep


def audit_trace(trace: Trace, check_order_bound: bool = True) -> AuditReport:
    """Re-verify every step of ``trace``; an empty trace is trivially clean."""
    return _Auditor(trace, check_order_bound).run()

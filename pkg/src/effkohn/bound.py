"""The Jacobian order bound for finite map germs.

If F = (f_1, .., f_{n+1}) has an isolated zero at the origin with colength
lambda (the number of sheets), its Jacobian determinant vanishes there to
order at most lambda - 1.  This module checks the bound on given maps and
generates random monomial and perturbed test maps.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import prod
from typing import Sequence

from .groebner import DEFAULT_TYPE_CAP, Ideal, local_colength
from .poly import Polynomial, Ring, jacobian_det, monomials_of_degree, vanishing_order


@dataclass
class BoundResult:
    map: list[Polynomial]
    colength: int | None
    order: int | None
    exponents: tuple[int, ...] | None = None

    @property
    def skipped(self) -> bool:
        return self.colength is None

    @property
    def passed(self) -> bool:
        return not self.skipped and self.order is not None and self.order <= self.colength - 1

    @property
    def closed_form_ok(self) -> bool | None:
        """For a monomial map: lambda = prod e_i and ord = sum (e_i - 1)."""
        if self.exponents is None:
            return None
        return self.colength == prod(self.exponents) and self.order == sum(e - 1 for e in self.exponents)

    def render(self) -> str:
        head = "(" + ", ".join(str(f) for f in self.map) + ")"
        if self.skipped:
            return f"{head}: skipped, colength is not finite at the origin"
        verdict = "pass" if self.passed else "FAIL"
        return f"{head}: lambda={self.colength}, ord Jac={self.order}, {verdict}"

    def to_dict(self) -> dict:
        return {
            "map": [str(f) for f in self.map],
            "colength": self.colength,
            "order": self.order,
            "skipped": self.skipped,
            "passed": self.passed,
        }


def check_map(fs: Sequence[Polynomial], cap: int = DEFAULT_TYPE_CAP, exponents=None) -> BoundResult:
    fs = list(fs)
    ring = fs[0].ring
    if len(fs) != ring.nvars:
        raise ValueError(f"a map germ needs {ring.nvars} components, got {len(fs)}")
    lam = local_colength(Ideal(fs, ring), cap)
    if lam is None:
        return BoundResult(fs, None, None, exponents)
    det = jacobian_det(fs, list(range(ring.nvars)))
    order = None if det.is_zero() else vanishing_order(det)
    return BoundResult(fs, lam, order, exponents)


def default_ring(nvars: int) -> Ring:
    return Ring(["z", "w"] if nvars == 2 else [f"z{k + 1}" for k in range(nvars)])


def random_monomial_map(rng: random.Random, ring: Ring, emax: int = 4) -> tuple[list[Polynomial], tuple[int, ...]]:
    """(z_1^{e_1}, .., z_v^{e_v}) with 1 <= e_i <= emax."""
    exps = tuple(rng.randint(1, emax) for _ in range(ring.nvars))
    fs = []
    for k, e in enumerate(exps):
        mon = [0] * ring.nvars
        mon[k] = e
        fs.append(ring.monomial(mon))
    return fs, exps


def perturb(rng: random.Random, fs: Sequence[Polynomial], extra: int = 2, box: int = 3, max_degree: int = 5) -> list[Polynomial]:
    """Add a few random nonconstant terms with small integer coefficients."""
    ring = fs[0].ring
    out = []
    for f in fs:
        g = f
        for _ in range(rng.randint(1, extra)):
            deg = rng.randint(1, max_degree)
            mon = rng.choice(monomials_of_degree(ring.nvars, deg))
            c = rng.choice([c for c in range(-box, box + 1) if c])
            g = g + ring.monomial(mon, c)
        out.append(g if g else f)
    return out


def random_trials(seed: int, monomial: int, perturbed: int, emax: int = 4, nvars: Sequence[int] = (2, 3), cap: int = DEFAULT_TYPE_CAP):
    """Yield BoundResults: ``monomial`` monomial maps then ``perturbed`` perturbed ones.

    Perturbed maps without finite colength are redrawn, so every yielded
    perturbed result has a verified colength.
    """
    rng = random.Random(seed)
    for _ in range(monomial):
        ring = default_ring(rng.choice(list(nvars)))
        fs, exps = random_monomial_map(rng, ring, emax)
        yield check_map(fs, cap, exps)
    made = 0
    while made < perturbed:
        ring = default_ring(rng.choice(list(nvars)))
        fs, _ = random_monomial_map(rng, ring, emax)
        res = check_map(perturb(rng, fs), cap)
        if res.skipped:
            continue
        made += 1
        yield res

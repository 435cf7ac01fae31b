"""One step of the original algorithm next to the effective one.

For the two-variable family (z^M, w^N + w z^K) the original algorithm takes
the principal radical g of the first Jacobian and forms

    J_1 = (g, d(F_1, g)/d(z, w), d(F_2, g)/d(z, w)).

The size of the root needed to reach z from J_1 grows with K.  The modified
algorithm's final epsilon does not.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..groebner import Ideal, contains_poly
from ..poly import Polynomial, jacobian_det
from .procedures import ProcedureError, classic_radical_step


@dataclass
class ClassicComparison:
    jacobian: Polynomial
    radical: Polynomial
    j1: list[Polynomial]
    minimal_power: int | None
    search_limit: int
    modified_epsilon: Fraction | None
    modified_kinds: list[str]

    def to_dict(self) -> dict:
        return {
            "jacobian": str(self.jacobian),
            "radical": str(self.radical),
            "J1": [str(g) for g in self.j1],
            "classic_minimal_power": self.minimal_power,
            "search_limit": self.search_limit,
            "modified_final_epsilon": None if self.modified_epsilon is None else str(self.modified_epsilon),
            "modified_steps": len(self.modified_kinds),
        }

    def render(self) -> str:
        power = (
            f"z^{self.minimal_power}"
            if self.minimal_power is not None
            else f"no power of z up to {self.search_limit}"
        )
        eps = "none" if self.modified_epsilon is None else str(self.modified_epsilon)
        return "\n".join(
            [
                f"classic: h = {self.jacobian}",
                f"classic: radical g = {self.radical}",
                f"classic: J1 = ({', '.join(str(g) for g in self.j1)})",
                f"classic: minimal power of z in J1 = {power}",
                f"modified: {len(self.modified_kinds)} steps, final epsilon = {eps}",
            ]
        )


def classic_j1(fs: Sequence[Polynomial]) -> tuple[Polynomial, Polynomial, list[Polynomial]]:
    """(h, g, generators of J_1) for two generators in two variables."""
    if len(fs) != 2 or fs[0].ring.nvars != 2:
        raise ProcedureError("the classic comparison needs two generators in two variables")
    f1, f2 = fs
    h = jacobian_det([f1, f2], [0, 1])
    if h.is_zero():
        raise ProcedureError("the first Jacobian vanishes")
    g = classic_radical_step(Ideal([h]))
    j1 = [g] + [p for p in (jacobian_det([f1, g], [0, 1]), jacobian_det([f2, g], [0, 1])) if p]
    return h, g, j1


def minimal_power_in(I: Ideal, var: int, limit: int) -> int | None:
    z = I.ring.var(var)
    for k in range(1, limit + 1):
        if contains_poly(I, z**k):
            return k
    return None


def compare_classic(fs: Sequence[Polynomial], trace=None, limit: int = 256) -> ClassicComparison:
    h, g, j1 = classic_j1(fs)
    k = minimal_power_in(Ideal(j1), 0, limit)
    return ClassicComparison(
        jacobian=h,
        radical=g,
        j1=j1,
        minimal_power=k,
        search_limit=limit,
        modified_epsilon=None if trace is None else trace.final_epsilon,
        modified_kinds=[] if trace is None else trace.kinds(),
    )

"""Multipliers, pre-multipliers, derivation steps and the JSON Lines trace format."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable

from ..poly import Polynomial, Ring, parse_poly

# step kinds
INIT_JACOBIAN = "InitJacobian"
GEN_JACOBIAN_PARTIAL = "GenJacobianPartial"
GEN_JACOBIAN_FULL = "GenJacobianFull"
IDEAL_ELEMENT = "IdealElement"
ROOT_TAKING = "RootTaking"
WEIERSTRASS = "WeierstrassExtraction"
ELIMINATION_RELATION = "EliminationRelation"
COORDINATE_CHANGE = "CoordinateChange"
ADJUST = "AdjustPreMultiplier"
TERMINATION = "Termination"

STEP_KINDS = (
    INIT_JACOBIAN,
    GEN_JACOBIAN_PARTIAL,
    GEN_JACOBIAN_FULL,
    IDEAL_ELEMENT,
    ROOT_TAKING,
    WEIERSTRASS,
    ELIMINATION_RELATION,
    COORDINATE_CHANGE,
    ADJUST,
    TERMINATION,
)
JACOBIAN_KINDS = frozenset({INIT_JACOBIAN, GEN_JACOBIAN_PARTIAL, GEN_JACOBIAN_FULL})
MULTIPLIER_KINDS = JACOBIAN_KINDS | {IDEAL_ELEMENT, ROOT_TAKING, WEIERSTRASS, TERMINATION}
AUXILIARY_KINDS = frozenset({ELIMINATION_RELATION, COORDINATE_CHANGE})

# labels used by the human-readable rendering
PROCEDURE_LABELS = {
    INIT_JACOBIAN: "(i) Jacobian of the generators",
    GEN_JACOBIAN_PARTIAL: "(i) partial Jacobian",
    GEN_JACOBIAN_FULL: "(i) Jacobian",
    IDEAL_ELEMENT: "(ii) ideal element",
    ROOT_TAKING: "(iii) root taking",
    WEIERSTRASS: "(ii) Weierstrass polynomial (induction)",
    ELIMINATION_RELATION: "relation g (induction)",
    COORDINATE_CHANGE: "generic linear coordinates",
    ADJUST: "adjusted pre-multiplier",
    TERMINATION: "termination: constant 1",
}

IDEAL_ELEMENT_RULE = "ideal-element epsilon = min over multipliers with nonzero cofactor"


def fmt_fraction(q: Fraction | None) -> str | None:
    if q is None:
        return None
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(s: str | None) -> Fraction | None:
    if s is None:
        return None
    return Fraction(s)


@dataclass(frozen=True)
class Multiplier:
    """A polynomial certified as a multiplier of order ``epsilon`` by step ``step``."""

    poly: Polynomial
    epsilon: Fraction
    step: int

    def __post_init__(self):
        if self.poly.is_zero():
            raise ValueError("a multiplier cannot be zero")
        if not 0 < self.epsilon <= 1:
            raise ValueError(f"epsilon {self.epsilon} outside (0, 1]")

    @property
    def ref(self) -> int:
        return self.step


@dataclass(frozen=True)
class PreMultiplier:
    """Raw material for Jacobians: an input f_j or an adjusted combination.

    ``ref`` is ``"f<j>"`` for an initial pre-multiplier and the producing step
    id for an adjusted one.
    """

    poly: Polynomial
    kind: str
    epsilon_cap: Fraction
    ref: Any

    def __post_init__(self):
        if self.kind not in ("initial", "adjusted"):
            raise ValueError(f"unknown pre-multiplier kind {self.kind!r}")
        if self.kind == "initial" and self.epsilon_cap != 1:
            raise ValueError("initial pre-multipliers carry cap 1")
        if not 0 < self.epsilon_cap <= 1:
            raise ValueError("epsilon cap outside (0, 1]")


def item_order(item) -> Fraction:
    """Contribution of a Jacobian input to the 1/2 * min(...) rule."""
    if isinstance(item, Multiplier):
        return item.epsilon
    return item.epsilon_cap


@dataclass
class DerivationStep:
    id: int
    kind: str
    inputs: list
    witness: dict
    output: Polynomial | None
    epsilon: Fraction | None

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "inputs": list(self.inputs),
            "witness": self.witness,
            "output": None if self.output is None else str(self.output),
            "epsilon": fmt_fraction(self.epsilon),
        }


@dataclass
class Trace:
    """Ordered record of procedure applications for one run."""

    ring: Ring
    generators: list[Polynomial]
    steps: list[DerivationStep] = field(default_factory=list)
    status: str = "running"
    reason: str | None = None
    seed: int = 0
    config: dict = field(default_factory=dict)
    p_star: int | None = None

    @property
    def terminated(self) -> bool:
        return self.status == "terminated"

    @property
    def final_epsilon(self) -> Fraction | None:
        if self.terminated and self.steps:
            return self.steps[-1].epsilon
        return None

    def step(self, sid: int) -> DerivationStep:
        s = self.steps[sid - 1]
        assert s.id == sid
        return s

    def kinds(self) -> list[str]:
        return [s.kind for s in self.steps]

    # -- serialisation -------------------------------------------------------
    def header(self) -> dict:
        return {
            "variables": list(self.ring.names),
            "generators": [str(g) for g in self.generators],
            "seed": self.seed,
            "config": self.config,
        }

    def footer(self) -> dict:
        out = {
            "status": self.status,
            "final_epsilon": fmt_fraction(self.final_epsilon),
            "p_star": self.p_star,
            "ideal_element_rule": IDEAL_ELEMENT_RULE,
        }
        if self.reason:
            out["reason"] = self.reason
        return out

    def to_jsonl(self) -> str:
        lines = [self.header()] + [s.to_json() for s in self.steps] + [self.footer()]
        return "\n".join(json.dumps(x, sort_keys=False) for x in lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str | Iterable[str]) -> "Trace":
        lines = text.splitlines() if isinstance(text, str) else list(text)
        objs = [json.loads(l) for l in lines if l.strip()]
        if not objs:
            raise ValueError("empty trace")
        head = objs[0]
        ring = Ring(head["variables"])
        t = cls(
            ring=ring,
            generators=[parse_poly(g, ring) for g in head["generators"]],
            seed=head.get("seed", 0),
            config=head.get("config", {}),
        )
        body = objs[1:]
        if body and "status" in body[-1] and "kind" not in body[-1]:
            foot = body.pop()
            t.status = foot["status"]
            t.reason = foot.get("reason")
            t.p_star = foot.get("p_star")
        for o in body:
            out = o.get("output")
            t.steps.append(
                DerivationStep(
                    id=o["id"],
                    kind=o["kind"],
                    inputs=list(o["inputs"]),
                    witness=o.get("witness", {}),
                    output=None if out is None else parse_poly(out, ring),
                    epsilon=parse_fraction(o.get("epsilon")),
                )
            )
        return t

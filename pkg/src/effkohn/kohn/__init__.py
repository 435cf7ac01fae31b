"""The effective Kohn algorithm: procedures, induction, driver and auditor."""

from .audit import AuditReport, Violation, audit_trace
from .classic import ClassicComparison, classic_j1, compare_classic
from .driver import AlgorithmFailure, Config, run_algorithm
from .induction import GenericityFailure, finisher, induction_step, weierstrass_extract
from .procedures import (
    BudgetExceeded,
    Derivation,
    ProcedureError,
    ZeroJacobian,
    adjust_premultiplier,
    classic_radical_step,
    coordinate_change,
    gen_jacobian,
    generic_combination,
    ideal_element,
    ideal_element_from_membership,
    initial_multipliers,
    iterate_L_operator,
    root_taking,
    terminate,
)
from .trace import DerivationStep, Multiplier, PreMultiplier, Trace

__all__ = [
    "AlgorithmFailure",
    "AuditReport",
    "BudgetExceeded",
    "ClassicComparison",
    "Config",
    "Derivation",
    "DerivationStep",
    "GenericityFailure",
    "Multiplier",
    "PreMultiplier",
    "ProcedureError",
    "Trace",
    "Violation",
    "ZeroJacobian",
    "adjust_premultiplier",
    "audit_trace",
    "classic_j1",
    "classic_radical_step",
    "compare_classic",
    "coordinate_change",
    "finisher",
    "gen_jacobian",
    "generic_combination",
    "ideal_element",
    "ideal_element_from_membership",
    "induction_step",
    "initial_multipliers",
    "iterate_L_operator",
    "root_taking",
    "run_algorithm",
    "terminate",
    "weierstrass_extract",
]

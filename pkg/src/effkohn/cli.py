"""effkohn command line: type reports, runs, the Jacobian bound harness, the
classic comparison and the brute-force oracles.

Exit codes: 0 ok, 2 parse error, 3 type cap exceeded, 4 budget exhausted,
5 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import __version__
from .bound import check_map, random_trials
from .groebner import Ideal, TypeCapExceeded, effective_type
from .kohn import AlgorithmFailure, BudgetExceeded, Config, Trace, audit_trace, run_algorithm
from .kohn.classic import compare_classic
from .kohn.procedures import ProcedureError
from .kohn.trace import PROCEDURE_LABELS
from .oracle import OracleCapError, colength_staircase, member_linalg, type_bruteforce
from .poly import Polynomial, Ring, parse_poly

EXIT_OK, EXIT_PARSE, EXIT_TYPE_CAP, EXIT_BUDGET, EXIT_USAGE = 0, 2, 3, 4, 5

log = logging.getLogger("effkohn")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    # argparse would exit with 2, which is reserved for parse errors
    def error(self, message):
        raise CliError(EXIT_USAGE, f"usage: {message}")


# ---------------------------------------------------------------------------
# problem files


@dataclass
class Problem:
    ring: Ring
    generators: list[Polynomial]
    config: dict = field(default_factory=dict)
    source: str = "<input>"


CONFIG_KEYS = ("seed", "max_retries", "type_cap", "degree_cap")


def load_problem(path: str, require_origin: bool = True) -> Problem:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise CliError(EXIT_USAGE, f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_PARSE, f"{path}: invalid JSON: {exc}") from None
    return problem_from_dict(data, path, require_origin)


def problem_from_dict(data, source: str = "<input>", require_origin: bool = True) -> Problem:
    if not isinstance(data, dict):
        raise CliError(EXIT_PARSE, f"{source}: a problem is a JSON object")
    names, gens = data.get("variables"), data.get("generators")
    if not isinstance(names, list) or not all(isinstance(n, str) for n in names) or len(names) < 2:
        raise CliError(EXIT_PARSE, f"{source}: 'variables' must list at least two names")
    if not isinstance(gens, list) or not gens or not all(isinstance(g, str) for g in gens):
        raise CliError(EXIT_PARSE, f"{source}: 'generators' must be a nonempty list of strings")
    try:
        ring = Ring(names)
    except ValueError as exc:
        raise CliError(EXIT_PARSE, f"{source}: {exc}") from None
    polys = []
    for g in gens:
        try:
            p = parse_poly(g, ring)
        except ValueError as exc:
            raise CliError(EXIT_PARSE, f"{source}: cannot parse {g!r}: {exc}") from None
        if p.is_zero():
            raise CliError(EXIT_PARSE, f"{source}: generator {g!r} is zero")
        if require_origin and p.constant_term():
            raise CliError(EXIT_PARSE, f"{source}: generator {g!r} does not vanish at the origin")
        polys.append(p)
    config = data.get("config") or {}
    if not isinstance(config, dict) or set(config) - set(CONFIG_KEYS):
        raise CliError(EXIT_PARSE, f"{source}: config keys must be among {', '.join(CONFIG_KEYS)}")
    return Problem(ring, polys, dict(config), source)


def make_config(problem: Problem, args) -> Config:
    values = dict(problem.config)
    for key in CONFIG_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    try:
        cfg = Config(**values)
    except TypeError as exc:
        raise CliError(EXIT_PARSE, f"bad config: {exc}") from None
    for key in ("seed", "max_retries", "type_cap"):
        if not isinstance(getattr(cfg, key), int) or getattr(cfg, key) < 0:
            raise CliError(EXIT_PARSE, f"config {key} must be a nonnegative integer")
    return cfg


def atomic_write(path: str | Path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(text)


# ---------------------------------------------------------------------------
# rendering


def render_trace(t: Trace) -> str:
    lines = [
        f"variables: {', '.join(t.ring.names)}",
        "generators: " + ", ".join(f"f{j + 1} = {g}" for j, g in enumerate(t.generators)),
        f"seed: {t.seed}",
    ]
    if t.p_star is not None:
        lines.append(f"effective type p* = {t.p_star}")
    lines.append("")
    for s in t.steps:
        label = PROCEDURE_LABELS.get(s.kind, s.kind)
        ins = ", ".join(str(r) if isinstance(r, str) else f"#{r}" for r in s.inputs) or "-"
        out = "" if s.output is None else f" -> {s.output}"
        eps = "" if s.epsilon is None else f"  [eps {s.epsilon}]"
        lines.append(f"#{s.id:<3} {label} from ({ins}){out}{eps}")
    lines.append("")
    lines.append(summary_line(t))
    return "\n".join(lines)


def summary_line(t: Trace) -> str:
    eps = t.final_epsilon
    tail = f"final epsilon {eps}" if eps is not None else f"reason: {t.reason}"
    return f"status {t.status}; {len(t.steps)} steps; {tail}"


def _text_path(trace_path: Path) -> Path:
    return trace_path.with_suffix(".txt") if trace_path.suffix == ".jsonl" else Path(str(trace_path) + ".txt")


def _write_trace(args, t: Trace) -> None:
    if not args.trace:
        return
    path = Path(args.trace)
    atomic_write(path, t.to_jsonl())
    atomic_write(_text_path(path), render_trace(t) + "\n")


# ---------------------------------------------------------------------------
# commands


def cmd_type(args) -> int:
    prob = load_problem(args.problem)
    cap = args.type_cap if args.type_cap is not None else prob.config.get("type_cap", 64)
    try:
        rep = effective_type(Ideal(prob.generators, prob.ring), cap=cap)
    except TypeCapExceeded as exc:
        raise CliError(EXIT_TYPE_CAP, f"type cap exceeded: {exc}") from None
    _emit(
        args,
        {"p_star": rep.p_star, "p_lower": str(rep.lower_bound_p), "p_upper": rep.upper_bound_p},
        rep.render(),
    )
    return EXIT_OK


def _run(prob: Problem, cfg: Config) -> Trace:
    try:
        return run_algorithm(prob.generators, cfg)
    except TypeCapExceeded as exc:
        raise CliError(EXIT_TYPE_CAP, f"type cap exceeded: {exc}") from None


def cmd_run(args) -> int:
    prob = load_problem(args.problem)
    cfg = make_config(prob, args)
    try:
        t = _run(prob, cfg)
    except AlgorithmFailure as exc:
        _write_trace(args, exc.trace)
        _emit(args, {"status": "failed", "reason": str(exc), "steps": len(exc.trace.steps)}, render_trace(exc.trace))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    _write_trace(args, t)
    payload = {
        "status": t.status,
        "steps": len(t.steps),
        "final_epsilon": None if t.final_epsilon is None else str(t.final_epsilon),
        "p_star": t.p_star,
        "kinds": t.kinds(),
    }
    if args.audit:
        rep = audit_trace(Trace.from_jsonl(t.to_jsonl()))
        payload["audit"] = {"clean": rep.clean, "violations": [str(v) for v in rep.violations]}
    text = render_trace(t)
    if args.audit:
        text += "\n" + rep.summary()
    _emit(args, payload, text)
    return EXIT_OK


def cmd_audit(args) -> int:
    try:
        text = Path(args.trace_file).read_text()
    except OSError as exc:
        raise CliError(EXIT_USAGE, f"cannot read {args.trace_file}: {exc.strerror}") from None
    try:
        t = Trace.from_jsonl(text)
    except (ValueError, KeyError) as exc:
        raise CliError(EXIT_PARSE, f"{args.trace_file}: bad trace: {exc}") from None
    rep = audit_trace(t)
    _emit(
        args,
        {"clean": rep.clean, "checked": rep.checked, "violations": [str(v) for v in rep.violations]},
        "\n".join([rep.summary()] + [f"  {v}" for v in rep.violations]),
    )
    return EXIT_OK if rep.clean else 1


def cmd_check_jacobian_bound(args) -> int:
    cap = args.type_cap if args.type_cap is not None else 64
    if args.problem:
        prob = load_problem(args.problem)
        try:
            results = [check_map(prob.generators, cap)]
        except ValueError as exc:
            raise CliError(EXIT_USAGE, str(exc)) from None
    else:
        seed = args.seed if args.seed is not None else 0
        results = list(random_trials(seed, args.trials, args.perturbed, emax=args.max_exponent, cap=cap))
    lines, failed = [], 0
    for k, r in enumerate(results, start=1):
        lines.append(f"trial {k}: {r.render()}")
        failed += (not r.skipped) and not r.passed
    checked = sum(not r.skipped for r in results)
    lines.append(f"{checked} checked, {failed} failed, {len(results) - checked} skipped")
    _emit(args, {"trials": [r.to_dict() for r in results], "failed": failed}, "\n".join(lines))
    return EXIT_OK if failed == 0 else 1


def cmd_compare_classic(args) -> int:
    prob = load_problem(args.problem)
    if prob.ring.nvars != 2 or len(prob.generators) != 2:
        raise CliError(EXIT_USAGE, "compare-classic needs two generators in two variables")
    cfg = make_config(prob, args)
    try:
        t = _run(prob, cfg)
    except AlgorithmFailure as exc:
        t = exc.trace
    try:
        cmp = compare_classic(prob.generators, t, limit=args.limit)
    except ProcedureError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None
    _emit(args, cmp.to_dict(), cmp.render())
    return EXIT_OK


def cmd_oracle(args) -> int:
    prob = load_problem(args.problem, require_origin=False)
    try:
        if args.what == "member":
            if not args.probe:
                raise CliError(EXIT_USAGE, "oracle member needs --probe")
            try:
                p = parse_poly(args.probe, prob.ring)
            except ValueError as exc:
                raise CliError(EXIT_PARSE, f"cannot parse probe: {exc}") from None
            ans = member_linalg(prob.generators, p, args.cap)
            _emit(args, {"member": ans}, "member" if ans else "not a member")
        elif args.what == "colength":
            n = colength_staircase(prob.generators, args.cap)
            _emit(args, {"colength": n}, f"colength = {n}")
        else:
            k = type_bruteforce(prob.generators, args.cap)
            _emit(args, {"p_star": k}, f"p* = {k}")
    except OracleCapError as exc:
        raise CliError(EXIT_TYPE_CAP, f"oracle cap: {exc}") from None
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, help="random seed for generic choices")
    common.add_argument("--max-retries", dest="max_retries", type=int, help="genericity retry budget")
    common.add_argument("--type-cap", dest="type_cap", type=int, help="largest power of m to search")
    common.add_argument("--degree-cap", dest="degree_cap", type=int, help="largest intermediate degree")
    common.add_argument("--trace", help="write the trace (JSON Lines) here, plus a .txt rendering")
    common.add_argument("--format", choices=("text", "json"), default="text")

    p = _Parser(prog="effkohn", description="Exact effective Kohn algorithm engine.")
    p.add_argument("--version", action="version", version=f"effkohn {__version__}")
    p.add_argument("--log-level", default="WARNING")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("type", parents=[common], help="effective type p* and the bracket for p")
    s.add_argument("problem")
    s.set_defaults(func=cmd_type)

    s = sub.add_parser("run", parents=[common], help="derive the constant 1")
    s.add_argument("problem")
    s.add_argument("--audit", action="store_true", help="audit the trace after the run")
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("audit", parents=[common], help="re-verify a trace file")
    s.add_argument("trace_file")
    s.set_defaults(func=cmd_audit)

    s = sub.add_parser("check-jacobian-bound", parents=[common], help="ord Jac <= colength - 1 on test maps")
    s.add_argument("problem", nargs="?", help="a map given as a problem file; random maps otherwise")
    s.add_argument("--trials", type=int, default=100, help="random monomial maps")
    s.add_argument("--perturbed", type=int, default=20, help="random perturbed maps")
    s.add_argument("--max-exponent", dest="max_exponent", type=int, default=4)
    s.set_defaults(func=cmd_check_jacobian_bound)

    s = sub.add_parser("compare-classic", parents=[common], help="one classic radical step next to the effective run")
    s.add_argument("problem")
    s.add_argument("--limit", type=int, default=256, help="largest power of z to test in J1")
    s.set_defaults(func=cmd_compare_classic)

    s = sub.add_parser("oracle", parents=[common], help="brute-force linear algebra checks")
    s.add_argument("what", choices=("member", "colength", "type"))
    s.add_argument("problem")
    s.add_argument("--probe", help="polynomial to test (member)")
    s.add_argument("--cap", type=int, default=12, help="degree cap of the truncation")
    s.set_defaults(func=cmd_oracle)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING))
        if not getattr(args, "command", None):
            raise CliError(EXIT_USAGE, "usage: a command is required (see effkohn --help)")
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())

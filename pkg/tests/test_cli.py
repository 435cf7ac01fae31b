import json
from pathlib import Path

import pytest

from effkohn.cli import main
from effkohn.kohn import Trace, audit_trace


def problem(tmp_path: Path, gens, variables=("z", "w"), config=None, name="p.json") -> str:
    data = {"variables": list(variables), "generators": list(gens)}
    if config is not None:
        data["config"] = config
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_type_examples(tmp_path, capsys):
    code, out, _ = run(["type", problem(tmp_path, ["z^3", "w^4"])], capsys)
    assert code == 0 and out.strip() == "p* = 6; p in [3/2, 6]"
    code, out, _ = run(["type", problem(tmp_path, ["z", "w"])], capsys)
    assert out.strip() == "p* = 1; p in [1/4, 1]"


def test_type_cap_exit(tmp_path, capsys):
    code, _, err = run(["type", problem(tmp_path, ["z^2"])], capsys)
    assert code == 3 and "type cap" in err


def test_type_json(tmp_path, capsys):
    code, out, _ = run(["type", problem(tmp_path, ["z^2", "w^2"]), "--format", "json"], capsys)
    assert json.loads(out) == {"p_star": 3, "p_lower": "3/4", "p_upper": 3}


@pytest.mark.parametrize(
    "content",
    [
        "{not json",
        json.dumps({"variables": ["z"], "generators": ["z"]}),
        json.dumps({"variables": ["z", "w"], "generators": []}),
        json.dumps({"variables": ["z", "w"], "generators": ["z^"]}),
        json.dumps({"variables": ["z", "w"], "generators": ["x*z"]}),
        json.dumps({"variables": ["z", "w"], "generators": ["z + 1", "w"]}),
        json.dumps({"variables": ["z", "w"], "generators": ["z", "w"], "config": {"colour": 1}}),
    ],
)
def test_parse_errors_exit_2(tmp_path, capsys, content):
    path = tmp_path / "bad.json"
    path.write_text(content)
    code, _, err = run(["run", str(path)], capsys)
    assert code == 2 and err.startswith("error:")


def test_usage_errors_exit_5(tmp_path, capsys):
    assert run([], capsys)[0] == 5
    assert run(["frobnicate"], capsys)[0] == 5
    assert run(["run"], capsys)[0] == 5
    assert run(["run", str(tmp_path / "missing.json")], capsys)[0] == 5
    assert run(["type", problem(tmp_path, ["z", "w"]), "--seed", "x"], capsys)[0] == 5


def test_run_writes_trace_and_rendering(tmp_path, capsys):
    trace = tmp_path / "out" / "family.jsonl"
    code, out, _ = run(["run", problem(tmp_path, ["z^2", "w^3 + w*z^5"]), "--trace", str(trace)], capsys)
    assert code == 0
    assert out.strip().endswith("status terminated; 10 steps; final epsilon 1/192")
    assert "(iii) root taking" in out
    t = Trace.from_jsonl(trace.read_text())
    assert audit_trace(t).clean
    assert (tmp_path / "out" / "family.txt").read_text().startswith("variables: z, w")
    assert not [p for p in trace.parent.iterdir() if p.name.startswith(".")]


def test_run_K_independent_summary(tmp_path, capsys):
    lines = []
    for K in (5, 50):
        code, out, _ = run(["run", problem(tmp_path, ["z^2", f"w^3 + w*z^{K}"]), "--format", "json"], capsys)
        data = json.loads(out)
        lines.append((data["status"], data["steps"], data["final_epsilon"], data["kinds"]))
    assert lines[0] == lines[1]


def test_run_coordinates(tmp_path, capsys):
    code, out, _ = run(["run", problem(tmp_path, ["z", "w"]), "--format", "json"], capsys)
    data = json.loads(out)
    assert data["kinds"] == ["InitJacobian", "Termination"] and data["final_epsilon"] == "1/2"


def test_run_audit_flag(tmp_path, capsys):
    code, out, _ = run(["run", problem(tmp_path, ["z^2", "w^2"]), "--audit"], capsys)
    assert code == 0 and "audit: clean" in out


def test_budget_exit_writes_partial_trace(tmp_path, capsys):
    trace = tmp_path / "partial.jsonl"
    prob = problem(tmp_path, ["z^2", "w^3 + w*z^5"], config={"degree_cap": 3})
    code, out, err = run(["run", prob, "--trace", str(trace)], capsys)
    assert code == 4 and "exceeds cap" in err
    assert Trace.from_jsonl(trace.read_text()).status == "failed"


def test_flags_override_config(tmp_path, capsys):
    prob = problem(tmp_path, ["z^2", "w^3 + w*z^5"], config={"degree_cap": 3})
    code, _, _ = run(["run", prob, "--degree-cap", "400"], capsys)
    assert code == 0


def test_audit_command(tmp_path, capsys):
    trace = tmp_path / "t.jsonl"
    run(["run", problem(tmp_path, ["z^2", "w^3 + w*z^5"]), "--trace", str(trace)], capsys)
    code, out, _ = run(["audit", str(trace)], capsys)
    assert code == 0 and out.startswith("audit: clean")
    lines = trace.read_text().splitlines()
    step = json.loads(lines[4])
    step["epsilon"] = "1/2"
    lines[4] = json.dumps(step)
    trace.write_text("\n".join(lines))
    code, out, _ = run(["audit", str(trace)], capsys)
    assert code == 1 and "violation" in out


def test_check_jacobian_bound_single(tmp_path, capsys):
    code, out, _ = run(["check-jacobian-bound", problem(tmp_path, ["z^2", "w^3"])], capsys)
    assert code == 0
    assert "(z^2, w^3): lambda=6, ord Jac=3, pass" in out


def test_check_jacobian_bound_random(capsys):
    code, out, _ = run(["check-jacobian-bound", "--trials", "8", "--perturbed", "2", "--seed", "1"], capsys)
    assert code == 0 and "10 checked, 0 failed" in out


def test_check_jacobian_bound_skips(tmp_path, capsys):
    code, out, _ = run(["check-jacobian-bound", problem(tmp_path, ["z^2", "z*w"])], capsys)
    assert code == 0 and "skipped" in out


def test_compare_classic(tmp_path, capsys):
    code, out, _ = run(["compare-classic", problem(tmp_path, ["z^2", "w^3 + w*z^5"])], capsys)
    assert code == 0
    assert "minimal power of z in J1 = z^7" in out and "final epsilon = 1/192" in out
    code, out, _ = run(["compare-classic", problem(tmp_path, ["z", "w"])], capsys)
    assert code == 0 and "2 steps" in out


def test_compare_classic_rejects_three_variables(tmp_path, capsys):
    prob = problem(tmp_path, ["x", "y", "z"], variables=("x", "y", "z"))
    assert run(["compare-classic", prob], capsys)[0] == 5


def test_oracle_commands(tmp_path, capsys):
    prob = problem(tmp_path, ["z^3", "w^4"])
    assert run(["oracle", "member", prob, "--probe", "z^3*w", "--cap", "8"], capsys)[1].strip() == "member"
    assert run(["oracle", "member", prob, "--probe", "z^2*w^3", "--cap", "8"], capsys)[1].strip() == "not a member"
    assert run(["oracle", "colength", prob], capsys)[1].strip() == "colength = 12"
    assert run(["oracle", "type", prob], capsys)[1].strip() == "p* = 6"
    assert run(["oracle", "member", prob], capsys)[0] == 5
    assert run(["oracle", "member", prob, "--probe", "z^"], capsys)[0] == 2
    assert run(["oracle", "type", problem(tmp_path, ["z^2"], name="q.json"), "--cap", "5"], capsys)[0] == 3


def test_module_entry_point():
    import subprocess
    import sys

    out = subprocess.run([sys.executable, "-m", "effkohn", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.startswith("effkohn ")

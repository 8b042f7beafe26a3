import sys
import textwrap

import pytest

from strong_rainbow.backends import (
    SOLVER_ENV,
    ExhaustiveBackend,
    ExternalBackend,
    NeutralModel,
    ScipyBackend,
    Status,
    bundled_cbc,
    make_backend,
    parse_solution,
    resolve_command,
    write_lp,
)
from strong_rainbow.errors import BackendFailure, SizeGuardExceeded
from strong_rainbow.graph import complete_bipartite, path_graph
from strong_rainbow.model import build_model

needs_cbc = pytest.mark.skipif(bundled_cbc() is None, reason="no CBC executable")


def knapsack_model() -> NeutralModel:
    # min -(3a + 2b + 2c) s.t. 2a + b + c <= 2: best is b = c = 1
    m = NeutralModel()
    a, b, c = (m.add_var(x) for x in "abc")
    m.objective = {a: -3, b: -2, c: -2}
    m.add_row([(a, 2), (b, 1), (c, 1)], "<=", 2, "cap")
    return m


def test_lp_sections_and_fixings():
    ip = build_model(path_graph(3), 2, clique=[0, 1])
    text = write_lp(ip.model)
    heads = [ln for ln in text.splitlines() if ln and not ln.startswith((" ", "\\"))]
    assert heads == ["Minimize", "Subject To", "Bounds", "Binary", "End"]
    assert " x_e0_k1 = 1" in text and " z_k2 = 1" in text


def test_lp_empty_objective():
    ip = build_model(path_graph(3), 2, minimize=False)
    assert "obj: 0 x_e0_k1" in write_lp(ip.model)


def test_scipy_knapsack():
    res = ScipyBackend().solve(knapsack_model())
    assert res.status == Status.OPTIMAL and res.objective == -4
    assert res.values == [0, 1, 1]


def test_scipy_infeasible():
    m = NeutralModel()
    a = m.add_var("a")
    m.add_row([(a, 1)], ">=", 2, "impossible")
    assert ScipyBackend().solve(m).status == Status.INFEASIBLE


def test_parse_generic_format():
    st, vals = parse_solution("status: optimal\n# comment\nx 1\ny 0.0000001\n")
    assert st == Status.OPTIMAL and vals == {"x": 1.0, "y": 1e-7}


def test_parse_cbc_format():
    text = textwrap.dedent("""\
        Optimal - objective value 2.00000000
              0 x_e0_k1                1                       0
              3 x_e1_k2                1                       0
        """)
    st, vals = parse_solution(text)
    assert st == Status.OPTIMAL and vals == {"x_e0_k1": 1.0, "x_e1_k2": 1.0}
    st, _ = parse_solution("Infeasible - objective value 0.00000000\n")
    assert st == Status.INFEASIBLE
    st, _ = parse_solution("Stopped on time - objective value 6.00000000\n")
    assert st == Status.TIME_LIMIT


def test_parse_highs_format():
    text = textwrap.dedent("""\
        Model status
        Optimal

        # Primal solution values
        Feasible
        Objective 2
        # Columns 3
        a 1
        b 0
        c 1
        # Rows 1
        r0 2
        """)
    st, vals = parse_solution(text)
    assert st == Status.OPTIMAL and vals == {"a": 1.0, "b": 0.0, "c": 1.0}


FAKE = """\
import sys
lp, sol = sys.argv[1], sys.argv[2]
assert open(lp).read().startswith("\\\\")
open(sol, "w").write({payload!r})
"""


def _fake_solver(tmp_path, payload: str) -> str:
    script = tmp_path / "fake.py"
    script.write_text(FAKE.format(payload=payload))
    return f"{sys.executable} {script} {{lp}} {{sol}} {{time}}"


def test_external_generic_solution(tmp_path):
    cmd = _fake_solver(tmp_path, "status: optimal\na 0\nb 1\nc 1\n")
    res = ExternalBackend(cmd).solve(knapsack_model(), time_limit=5)
    assert res.status == Status.OPTIMAL and res.values == [0, 1, 1]


def test_external_row_violation_is_rejected(tmp_path):
    cmd = _fake_solver(tmp_path, "status: optimal\na 1\nb 1\nc 1\n")
    res = ExternalBackend(cmd).solve(knapsack_model(), time_limit=5)
    assert res.status == Status.ERROR and "cap" in res.message


def test_external_non_binary_value(tmp_path):
    cmd = _fake_solver(tmp_path, "status: optimal\na 0.5\nb 1\nc 0\n")
    res = ExternalBackend(cmd).solve(knapsack_model(), time_limit=5)
    assert res.status == Status.ERROR and "not binary" in res.message


def test_external_tolerance_accepted(tmp_path):
    cmd = _fake_solver(tmp_path, "status: optimal\na 0.0000004\nb 0.9999996\nc 1\n")
    res = ExternalBackend(cmd).solve(knapsack_model(), time_limit=5)
    assert res.status == Status.OPTIMAL and res.values == [0, 1, 1]


def test_external_missing_binary():
    with pytest.raises(BackendFailure):
        ExternalBackend("no-such-solver-xyz {lp} {sol}").solve(knapsack_model())


def test_command_resolution(monkeypatch):
    monkeypatch.delenv(SOLVER_ENV, raising=False)
    assert resolve_command(None) is None
    monkeypatch.setenv(SOLVER_ENV, "mysolver {lp} {sol}")
    assert resolve_command(None) == "mysolver {lp} {sol}"
    assert make_backend("auto").name == "external"
    with pytest.raises(ValueError):
        resolve_command("mysolver {lp}")
    assert "--model_file" in resolve_command("highs")
    monkeypatch.delenv(SOLVER_ENV)
    assert make_backend("auto").name == "scipy-highs"


def test_exhaustive_guard():
    ip = build_model(complete_bipartite(3, 5), 4)
    with pytest.raises(SizeGuardExceeded):
        ExhaustiveBackend().solve_ip(ip)


@needs_cbc
def test_cbc_real_run():
    be = ExternalBackend("cbc")
    res = be.solve(knapsack_model(), time_limit=30)
    assert res.status == Status.OPTIMAL and res.objective == -4
    ip = build_model(complete_bipartite(2, 4), 4)
    res = be.solve_ip(ip, time_limit=60)
    assert res.status == Status.OPTIMAL and res.objective == 2
    ip = build_model(complete_bipartite(2, 9), 2, minimize=False)
    assert be.solve_ip(ip, time_limit=60).status == Status.INFEASIBLE

import json
import math
from collections import Counter
from pathlib import Path

import pytest

from strong_rainbow import load_karate
from strong_rainbow.auxgraph import build_aux_graph, lower_bound, max_clique
from strong_rainbow.backends import ExhaustiveBackend, ScipyBackend, Status, write_lp
from strong_rainbow.coloring import brute_force_coloring, verify_strong_rainbow
from strong_rainbow.graph import (
    complete_bipartite,
    complete_graph,
    cycle_graph,
    path_graph,
    star_graph,
)
from strong_rainbow.model import (
    CSV_COLUMNS,
    build_model,
    compute_retained_pairs,
    csv_header,
    instance_stats,
    solve,
    solve_bottom_up,
    solve_direct,
)
from strong_rainbow.paths import all_shortest_paths
from oracles import named_clique_graph, oracle_corpus, oracle_src

DATA = Path(__file__).parent / "data"


def test_p3_naive_counts_and_golden_lp():
    ip = build_model(path_graph(3), 2)
    assert (ip.model.num_vars, len(ip.model.rows)) == (9, 16)
    assert write_lp(ip.model) == (DATA / "p3_k2_naive.lp").read_text()


@pytest.mark.parametrize("g", [load_karate(), cycle_graph(7), complete_bipartite(3, 4), star_graph(5)])
@pytest.mark.parametrize("K0", [1, 3])
def test_naive_size_formulas(g, K0):
    ip = build_model(g, K0)
    P = sum(len(v) for v in all_shortest_paths(g).values())
    n, m = g.n, g.m
    assert ip.model.num_vars == P + (m + 1) * K0
    assert len(ip.model.rows) == (P + m + 1) * K0 + math.comb(n, 2) + m - 1


def test_row_structure_per_path():
    g = complete_bipartite(2, 3)
    ip = build_model(g, 3)
    fam = Counter(r.family for r in ip.model.rows)
    assert fam["c"] == len(ip.paths) * 3
    d_rows = [r for r in ip.model.rows if r.family == "d"]
    covered = Counter(j for r in d_rows for j, _ in r.coeffs)
    assert sorted(covered) == sorted(ip.y) and set(covered.values()) == {1}


def test_elimination_examples():
    kept, elim = compute_retained_pairs(path_graph(3))
    assert kept == [(0, 2)] and elim == {(0, 1): (0, 2), (1, 2): (0, 2)}
    assert compute_retained_pairs(cycle_graph(4))[1] == {}
    ip = build_model(path_graph(3), 2, eliminate=True)
    assert len(ip.y) == 1 and sum(r.family == "d" for r in ip.model.rows) == 1


def test_elimination_witnesses_are_retained():
    for g in oracle_corpus(50, base_seed=11):
        kept, elim = compute_retained_pairs(g)
        assert set(elim.values()) <= set(kept)
        assert not set(kept) & set(elim)


def test_stats_examples():
    s = instance_stats(path_graph(3))
    assert (s.paths, s.paths_retained, round(s.pct_retained, 2)) == (3, 1, 33.33)
    s = instance_stats(cycle_graph(4))
    assert (s.paths, s.paths_retained, s.pct_retained) == (8, 8, 100.0)
    s = instance_stats(star_graph(4))
    assert (s.paths, s.paths_retained, s.pct_retained) == (10, 6, 60.0)


def test_clique_fixing_on_named_graph():
    g = named_clique_graph()
    clique = max_clique(build_aux_graph(g))
    K0 = 7
    ip = build_model(g, K0, clique=clique)
    fixed = ip.model.fixed
    for i, e in enumerate(clique.vertices, 1):
        for k in range(1, K0 + 1):
            assert fixed[ip.x[e][k - 1]] == int(k == i)
    assert [fixed.get(ip.z[k]) for k in range(K0)] == [1] * 5 + [None] * 2
    assert len([j for j in fixed if ip.model.names[j].startswith("x_")]) == 5 * K0


def test_clique_larger_than_budget_rejected():
    with pytest.raises(ValueError):
        build_model(star_graph(4), 3, clique=[0, 1, 2, 3])


def test_values_from_coloring_satisfy_rows():
    g = cycle_graph(5)
    ip = build_model(g, 3)
    good = brute_force_coloring(g)
    assert not ip.model.violations(ip.values_from_coloring(good.colors))
    bad = ip.values_from_coloring([1, 2, 3, 1, 2])  # pair (0, 3) sees 2, 2
    assert [r for r in ip.model.violations(bad)] == ["d_0_3"]


@pytest.mark.parametrize("method", ["naive", "enhanced", "bottom_up"])
@pytest.mark.parametrize(
    "g, src",
    [(complete_graph(2), 1), (path_graph(3), 2), (complete_bipartite(2, 9), 3), (cycle_graph(6), 3)],
)
def test_methods_known_values(method, g, src):
    rep = solve(g, method=method)
    assert rep.solved and rep.src == src
    assert verify_strong_rainbow(g, rep.coloring) and rep.coloring.k == src


def test_bottom_up_rounds_k29():
    rep = solve_bottom_up(complete_bipartite(2, 9))
    assert [(r["K0"], r["status"]) for r in rep.rounds] == [(2, "infeasible"), (3, "feasible")]


def test_bottom_up_with_objective_flag():
    rep = solve_bottom_up(complete_bipartite(2, 9), objective=True)
    assert rep.src == 3 and rep.rounds[-1]["status"] == "optimal"


def test_karate_enhanced():
    rep = solve_direct(load_karate(), method="enhanced")
    assert rep.src == 6 and rep.heur_ub >= 6 and rep.stats.init_lb == 6


def test_supplied_upper_bound_too_small():
    # below the lower bound: no model is built at all
    rep = solve_direct(star_graph(4), upper_bound=3)
    assert rep.status == "infeasible" and rep.src is None
    # above the lower bound but below src: the solver must prove it
    rep = solve_direct(complete_bipartite(2, 9), upper_bound=2)
    assert rep.status == "infeasible" and rep.lower == 3


def test_exhaustive_backend_agrees():
    small = [g for g in oracle_corpus(60, base_seed=400) if g.m <= 14]
    assert len(small) >= 30
    for g in small:
        a = solve(g, ExhaustiveBackend(), method="enhanced").src
        b = solve(g, ExhaustiveBackend(), method="bottom_up").src
        assert a == b == oracle_src(g)


def test_timeout_reports_bounds():
    from strong_rainbow.generators import GenSpec

    g = GenSpec("BER", (2, 25, 0.9), 0, 2).generate()
    rep = solve_direct(g, method="naive", time_limit=0.5, seed=0)
    if rep.solved:
        pytest.skip("solver finished inside the tiny time limit")
    assert rep.status == "time_limit" and rep.upper is not None
    assert rep.time_or_bounds().startswith("[")


def test_bottom_up_timeout_keeps_lower_bound():
    from strong_rainbow.generators import GenSpec

    g = GenSpec("BER", (2, 25, 0.95), 0, 2).generate()
    rep = solve_bottom_up(g, time_limit=0.5)
    if rep.solved:
        pytest.skip("solver finished inside the tiny time limit")
    assert rep.upper is None and rep.lower >= rep.stats.init_lb
    assert rep.time_or_bounds() == f"[{rep.lower},-]"


def test_report_serialization():
    g = complete_bipartite(2, 4)
    rep = solve(g, method="enhanced", seed=0)
    d = json.loads(rep.to_json(g))
    assert d["src"] == 2 and d["coloring"]["colors"] == 2
    row = rep.csv_row().strip().split(",")
    assert len(row) == len(CSV_COLUMNS) == len(csv_header().strip().split(","))
    assert row[CSV_COLUMNS.index("method")] == "enhanced"
    timing = row[CSV_COLUMNS.index("time_or_bounds")]
    assert len(timing.split(".")[1]) == 3


def test_csv_rows_stable_modulo_timing():
    g = load_karate()
    drop = {CSV_COLUMNS.index("heur_time"), CSV_COLUMNS.index("time_or_bounds")}
    rows = [
        [x for i, x in enumerate(solve(g, method="enhanced", seed=5).csv_values()) if i not in drop]
        for _ in range(2)
    ]
    assert rows[0] == rows[1]

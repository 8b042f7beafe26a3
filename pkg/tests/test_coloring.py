import json
import random

import pytest

from strong_rainbow import load_karate
from strong_rainbow.coloring import (
    Coloring,
    ColoringSearch,
    brute_force_coloring,
    brute_force_src,
    coloring_from_json,
    coloring_to_json,
    read_coloring,
    verify_strong_rainbow,
    write_coloring,
)
from strong_rainbow.errors import GraphFormatError, TimeLimitExceeded
from strong_rainbow.graph import complete_bipartite, complete_graph, cycle_graph, path_graph, star_graph
from strong_rainbow.heuristic import run_heuristic
from strong_rainbow.paths import all_shortest_paths
from oracles import oracle_corpus, oracle_is_strong_rainbow, oracle_src


def test_coloring_requires_contiguous_colors():
    with pytest.raises(ValueError):
        Coloring((1, 3))
    assert Coloring.compact([5, 9, 5]).colors == (1, 2, 1)


def test_c4_alternating_is_valid_and_mono_is_not():
    g = cycle_graph(4)
    cols = [0] * 4
    for e, (u, v) in enumerate(g.edges):
        cols[e] = 1 if {u, v} in ({0, 1}, {2, 3}) else 2
    assert verify_strong_rainbow(g, cols)
    bad = verify_strong_rainbow(g, [1, 1, 1, 1])
    assert not bad and bad.witness is not None


def test_verifier_matches_oracle_on_random_colorings():
    rng = random.Random(3)
    for g in oracle_corpus(60, base_seed=77):
        for _ in range(5):
            cols = [rng.randint(1, 3) for _ in range(g.m)]
            assert bool(verify_strong_rainbow(g, cols)) == oracle_is_strong_rainbow(g, cols)


def test_witness_pair_really_fails():
    g = load_karate()
    cols = [1 + e % 4 for e in range(g.m)]
    v = verify_strong_rainbow(g, cols)
    assert not v
    from oracles import nx_paths, path_edges

    u, w = v.witness
    for p in nx_paths(g, u, w):
        cs = [cols[e] for e in path_edges(g, p)]
        assert len(set(cs)) < len(cs)


@pytest.mark.parametrize(
    "g, src",
    [
        (path_graph(4), 3),
        (star_graph(5), 5),
        (complete_graph(5), 1),
        (cycle_graph(4), 2),
        (cycle_graph(6), 3),
        (complete_bipartite(2, 4), 2),
    ],
)
def test_brute_force_known_values(g, src):
    c = brute_force_coloring(g)
    assert c.k == src and verify_strong_rainbow(g, c)


def test_brute_force_matches_independent_oracle():
    for g in oracle_corpus(80, base_seed=5):
        assert brute_force_src(g) == oracle_src(g)


def test_search_deadline():
    import time

    g = load_karate()
    search = ColoringSearch(g, all_shortest_paths(g))
    with pytest.raises(TimeLimitExceeded):
        search.run(5, deadline=time.monotonic() - 1)


def test_json_round_trip(tmp_path):
    g = load_karate()
    c = run_heuristic(g, seed=1).coloring
    path = tmp_path / "c.json"
    write_coloring(path, g, c, "heuristic")
    data = json.loads(path.read_text())
    assert data["colors"] == c.k and data["method"] == "heuristic"
    assert data["graph_hash"] == g.digest()
    assert read_coloring(path, g) == c


def test_json_errors():
    g = cycle_graph(4)
    good = coloring_to_json(g, Coloring((1, 2, 1, 2)))
    missing = dict(good, assignment=good["assignment"][:-1])
    with pytest.raises(GraphFormatError, match="no color"):
        coloring_from_json(g, missing)
    unknown = dict(good, assignment=good["assignment"] + [{"u": "0", "v": "2", "color": 1}])
    with pytest.raises(GraphFormatError, match="not in the graph"):
        coloring_from_json(g, unknown)
    shifted = dict(good, assignment=[dict(a, color=a["color"] + 10) for a in good["assignment"]])
    assert coloring_from_json(g, shifted).colors == (1, 2, 1, 2)

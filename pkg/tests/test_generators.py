import math

import networkx as nx
import numpy as np
import pytest

from strong_rainbow.errors import EmptyGraphError
from strong_rainbow.generators import GenSpec, gen_ber, gen_er, gen_ws, percent_label, write_instances
from strong_rainbow.model import solve
from oracles import to_nx


def test_names():
    assert GenSpec("ER", (80, 0.032), 7, 3).name == "ER_80_3.2_3"
    assert GenSpec("ws", (100, 20, 0.01)).name == "WS_100_20_1_0"
    assert GenSpec("BER", (2, 25, 0.95), 0, 4).name == "BER_2_25_95_4"
    assert percent_label(0.06) == "6"


@pytest.mark.parametrize(
    "family, params",
    [("WS", (10, 3, 0.1)), ("WS", (10, 10, 0.1)), ("ER", (5, 1.5)), ("ER", (1, 0.5)), ("BER", (0, 3, 0.5)), ("XX", (1,))],
)
def test_parameter_validation(family, params):
    with pytest.raises(ValueError):
        GenSpec(family, params)


def test_determinism_and_stream_split():
    a = GenSpec("ER", (30, 0.2), 9, 1).generate()
    b = GenSpec("ER", (30, 0.2), 9, 1).generate()
    c = GenSpec("ER", (30, 0.2), 9, 2).generate()
    assert a.edges == b.edges and a.edges != c.edges


def test_er_extremes():
    g = gen_er(6, 1.0)
    assert g.m == 15
    with pytest.raises(EmptyGraphError):
        gen_er(6, 0.0)


def test_er_mean_edge_count():
    counts = [gen_er(80, 0.06, rng=np.random.default_rng([1, i]), name="").m for i in range(100)]
    # a dropped small component only removes edges, so compare against raw G(n,p) loosely
    mean, var = math.comb(80, 2) * 0.06, math.comb(80, 2) * 0.06 * 0.94
    assert abs(np.mean(counts) - mean) < 3 * math.sqrt(var / 100) + 2


def test_ws_lattice_and_edge_count():
    g = gen_ws(12, 4, 0.0)
    assert g.m == 24 and all(len(a) == 4 for a in g.adjacency)
    assert nx.is_isomorphic(to_nx(g), nx.circulant_graph(12, [1, 2]))
    assert gen_ws(100, 20, 0.01, seed=5).m == 1000


def test_ws_rewiring_rate():
    n, k, p = 60, 4, 0.1
    lattice = {(min(u, (u + j) % n), max(u, (u + j) % n)) for u in range(n) for j in (1, 2)}
    moved = []
    for i in range(60):
        g = gen_ws(n, k, p, rng=np.random.default_rng([2, i]))
        if g.n == n:
            moved.append(len(set(g.edges) - lattice))
    expect, sd = n * k / 2 * p, math.sqrt(n * k / 2 * p * (1 - p) / len(moved))
    assert abs(np.mean(moved) - expect) < 4 * sd


def test_ber_is_bipartite_and_complete_at_p1():
    g = gen_ber(4, 6, 0.7, seed=2)
    assert nx.is_bipartite(to_nx(g))
    full = gen_ber(2, 9, 1.0)
    assert full.m == 18 and solve(full, method="bottom_up").src == 3


def test_ber_envelope_edges():
    ms = [GenSpec("BER", (2, 25, 0.95), 0, i).generate().m for i in range(40)]
    assert 40 <= min(ms) and max(ms) <= 50


def test_write_instances(tmp_path):
    gs = [GenSpec("ER", (10, 0.5), 1, i).generate() for i in range(3)]
    paths = write_instances(gs, tmp_path)
    assert [p.name for p in paths] == [f"ER_10_50_{i}.txt" for i in range(3)]

import pytest

from strong_rainbow import load_karate
from strong_rainbow.errors import EmptyGraphError, GraphFormatError
from strong_rainbow.graph import (
    Graph,
    complete_bipartite,
    cycle_graph,
    diameter,
    k4_chain,
    parse_edge_list,
    path_graph,
    petersen_graph,
    read_edge_list,
    star_graph,
)
from oracles import to_nx
import networkx as nx


def test_parse_skips_comments_and_merges_duplicates():
    g = parse_edge_list("# header\n% other\n\na b\nb a\nb c\nc c\n")
    assert g.n == 3 and g.m == 2
    assert g.labels == ("a", "b", "c")


def test_parse_rejects_malformed_line():
    with pytest.raises(GraphFormatError, match="line 2"):
        parse_edge_list("1 2\n1 2 3\n")


def test_only_loops_is_empty():
    with pytest.raises(EmptyGraphError):
        parse_edge_list("1 1\n2 2\n")


def test_largest_component_kept(caplog):
    g = parse_edge_list("1 2\n2 3\n3 1\n7 8\n")
    assert g.n == 3 and g.dropped_vertices == 2
    assert "largest component" in caplog.text


def test_isolated_vertices_dropped_silently(caplog):
    g = Graph.from_edges([(0, 1)], n=4)
    assert g.n == 2 and g.dropped_vertices == 2
    assert "largest component" not in caplog.text


def test_serialize_round_trip(tmp_path):
    g = load_karate()
    p = tmp_path / "k.txt"
    p.write_text(g.serialize())
    h = read_edge_list(p)
    as_labels = lambda x: {frozenset((x.labels[u], x.labels[v])) for u, v in x.edges}
    assert as_labels(h) == as_labels(g)
    assert h.digest() == g.digest()
    assert h.name == "k"


def test_karate_shape():
    g = load_karate()
    assert (g.n, g.m, diameter(g)) == (34, 78, 5)


@pytest.mark.parametrize(
    "g, diam",
    [
        (path_graph(5), 4),
        (cycle_graph(7), 3),
        (star_graph(6), 2),
        (complete_bipartite(2, 9), 2),
        (k4_chain(3), 4),
        (petersen_graph(), 2),
    ],
)
def test_constructions_match_networkx(g, diam):
    assert diameter(g) == diam == nx.diameter(to_nx(g))


def test_k4_chain_sizes():
    for k in (1, 2, 3):
        g = k4_chain(k)
        # k+1 copies of K4, consecutive copies sharing one edge
        assert g.n == 2 * (k + 1) + 2
        assert g.m == 6 * (k + 1) - k


def test_relabel_keeps_structure():
    g = petersen_graph()
    perm = list(reversed(range(g.n)))
    h = g.relabeled(perm)
    assert nx.is_isomorphic(to_nx(g), to_nx(h))
    assert h.m == g.m

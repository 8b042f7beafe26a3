"""Shortest-path DAGs, separating edges/vertices, path enumeration and sampling.

For a root ``u`` the DAG ``D_u`` keeps every edge ``ab`` of G oriented so
that ``d(u, a) + 1 == d(u, b)``. Every shortest ``(u, v)``-path is a directed
root-to-``v`` path in ``D_u``, so one BFS per root answers all the
shortest-path questions the rest of the package asks.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator

from .errors import PathBudgetExceeded
from .graph import Graph

#: Default bound on the sum of path lengths over all enumerated shortest paths.
DEFAULT_PATH_BUDGET = 5_000_000


@dataclass(frozen=True)
class ShortestPathDag:
    """All shortest paths out of ``root``.

    ``preds[v]`` are the DAG in-neighbours of ``v`` (one step closer to the
    root), ``succs[v]`` the out-neighbours. ``counts[v]`` is the exact number
    of shortest ``(root, v)``-paths as a Python int.
    """

    root: int
    dist: tuple[int, ...]
    layers: tuple[tuple[int, ...], ...]
    preds: tuple[tuple[int, ...], ...]
    succs: tuple[tuple[int, ...], ...]
    counts: tuple[int, ...]


@dataclass(frozen=True)
class SeparationRecord:
    """Edges and vertices lying on every shortest path between ``pair``."""

    pair: tuple[int, int]
    edges: frozenset[int]
    vertices: frozenset[int]
    count: int


@dataclass(frozen=True)
class ShortestPath:
    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    @property
    def pair(self) -> tuple[int, int]:
        a, b = self.vertices[0], self.vertices[-1]
        return (a, b) if a < b else (b, a)

    def __len__(self) -> int:
        return len(self.edges)


def build_dag(g: Graph, u: int) -> ShortestPathDag:
    """Layered BFS from ``u`` where a vertex may be discovered by several parents."""
    n = g.n
    dist = [-1] * n
    dist[u] = 0
    counts = [0] * n
    counts[u] = 1
    preds: list[list[int]] = [[] for _ in range(n)]
    succs: list[list[int]] = [[] for _ in range(n)]
    layers = [[u]]
    adj = g.adjacency
    frontier = [u]
    while frontier:
        nxt = []
        for a in frontier:
            da = dist[a] + 1
            for b in adj[a]:
                if dist[b] < 0:
                    dist[b] = da
                    nxt.append(b)
                if dist[b] == da:
                    preds[b].append(a)
                    succs[a].append(b)
                    counts[b] += counts[a]
        if nxt:
            nxt.sort()
            layers.append(nxt)
        frontier = nxt
    return ShortestPathDag(
        root=u,
        dist=tuple(dist),
        layers=tuple(tuple(layer) for layer in layers),
        preds=tuple(tuple(sorted(p)) for p in preds),
        succs=tuple(tuple(sorted(s)) for s in succs),
        counts=tuple(counts),
    )


def build_all_dags(g: Graph) -> list[ShortestPathDag]:
    return [build_dag(g, u) for u in range(g.n)]


def separation(g: Graph, dag: ShortestPathDag, v: int) -> SeparationRecord:
    """Separating edges/vertices and path count for ``(dag.root, v)``.

    Sweeps the DAG backwards from ``v`` one distance layer at a time. The
    frontier ``L`` is the set of ancestors of ``v`` at the current layer; an
    edge separates when both it and the layer above it are singletons, and a
    vertex separates when it is alone in its layer. ``r`` accumulates the
    number of shortest ``(j, v)``-paths for each ``j`` on the way up, so the
    value reached at the root is the pair's path count.
    """
    u = dag.root
    if v == u:
        raise ValueError("separation needs two distinct vertices")
    key = (u, v) if u < v else (v, u)
    if dag.dist[v] == 1:
        return SeparationRecord(key, frozenset([g.edge_id(u, v)]), frozenset(), 1)

    preds, succs = dag.preds, dag.succs
    L = [v]
    r = {v: 1}
    e_sep = set()
    v_sep = set()
    while u not in L:
        N = sorted({j for i in L for j in preds[i]})
        in_L = set(L)
        for j in N:
            r[j] = sum(r[i] for i in succs[j] if i in in_L)
        if len(L) == 1 and len(N) == 1:
            e_sep.add(g.edge_id(N[0], L[0]))
        if len(N) == 1 and N[0] != u:
            v_sep.add(N[0])
        L = N
    return SeparationRecord(key, frozenset(e_sep), frozenset(v_sep), r[u])


def all_separations(
    g: Graph, dags: list[ShortestPathDag] | None = None
) -> dict[tuple[int, int], SeparationRecord]:
    """Separation records for every unordered pair ``u < v``."""
    if dags is None:
        dags = build_all_dags(g)
    out = {}
    for u in range(g.n):
        dag = dags[u]
        for v in range(u + 1, g.n):
            out[(u, v)] = separation(g, dag, v)
    return out


def _backward_paths(dag: ShortestPathDag, v: int) -> Iterator[list[int]]:
    """Yield vertex lists ``v .. root`` by DFS along predecessors."""
    root, preds = dag.root, dag.preds
    stack = [(v, 0)]
    trail: list[int] = []
    while stack:
        x, depth = stack.pop()
        del trail[depth:]
        trail.append(x)
        if x == root:
            yield list(trail)
            continue
        for w in reversed(preds[x]):
            stack.append((w, depth + 1))


def _as_path(g: Graph, seq: list[int]) -> ShortestPath:
    return ShortestPath(
        tuple(seq), tuple(g.edge_id(a, b) for a, b in zip(seq, seq[1:]))
    )


def enumerate_shortest_paths(
    g: Graph,
    u: int,
    v: int,
    cap: int = 1_000_000,
    dag: ShortestPathDag | None = None,
) -> list[ShortestPath]:
    """Every shortest ``(u, v)``-path, oriented ``u -> v``, lexicographically sorted.

    Raises:
        PathBudgetExceeded: the pair has more than ``cap`` shortest paths.
    """
    if u == v:
        raise ValueError("u and v must differ")
    if dag is None or dag.root != u:
        dag = build_dag(g, u)
    r = dag.counts[v]
    if r > cap:
        raise PathBudgetExceeded(
            f"pair ({u}, {v}) has {r} shortest paths, more than the cap of {cap}"
        )
    seqs = sorted(seq[::-1] for seq in _backward_paths(dag, v))
    return [_as_path(g, s) for s in seqs]


def count_path_incidences(g: Graph, dags: list[ShortestPathDag]) -> tuple[int, int]:
    """``(number of shortest paths, sum of their lengths)`` over pairs ``u < v``."""
    total = incid = 0
    for u in range(g.n):
        dag = dags[u]
        for v in range(u + 1, g.n):
            total += dag.counts[v]
            incid += dag.counts[v] * dag.dist[v]
    return total, incid


def all_shortest_paths(
    g: Graph,
    dags: list[ShortestPathDag] | None = None,
    budget: int = DEFAULT_PATH_BUDGET,
) -> dict[tuple[int, int], list[ShortestPath]]:
    """Shortest paths for every pair ``u < v``.

    ``budget`` caps the total number of path-edge incidences; it is checked
    from the path counts before anything is enumerated.
    """
    if dags is None:
        dags = build_all_dags(g)
    _, incid = count_path_incidences(g, dags)
    if incid > budget:
        raise PathBudgetExceeded(
            f"{incid} path-edge incidences exceed the budget of {budget}"
        )
    return {
        (u, v): enumerate_shortest_paths(g, u, v, cap=budget, dag=dags[u])
        for u in range(g.n)
        for v in range(u + 1, g.n)
    }


def sample_shortest_path(
    g: Graph, dag: ShortestPathDag, v: int, rng: random.Random
) -> ShortestPath:
    """Draw a shortest ``(root, v)``-path uniformly at random.

    Walks from ``v`` back to the root, picking each predecessor ``w`` with
    probability ``counts[w] / sum(counts[preds])``. Draws are exact integer
    draws, so the result is exactly uniform however large the counts get.
    """
    if v == dag.root:
        raise ValueError("v must differ from the root")
    counts, preds = dag.counts, dag.preds
    seq = [v]
    x = v
    while x != dag.root:
        ps = preds[x]
        if len(ps) == 1:
            x = ps[0]
        else:
            pick = rng.randrange(counts[x])
            for w in ps:
                pick -= counts[w]
                if pick < 0:
                    x = w
                    break
        seq.append(x)
    seq.reverse()
    return _as_path(g, seq)

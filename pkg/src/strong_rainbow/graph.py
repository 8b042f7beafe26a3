"""Canonical simple-graph representation, edge-list I/O and BFS utilities.

Vertices are dense integers ``0..n-1``; the original string labels are kept
for output. Edges are stored as ``(min, max)`` pairs sorted lexicographically,
and an edge's position in that order is its *edge index*. Every other module
refers to edges by index.
"""
from __future__ import annotations

import hashlib
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DisconnectedGraphError, EmptyGraphError, GraphFormatError

logger = logging.getLogger(__name__)

Edge = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph with canonical edge indexing.

    Build instances with :meth:`Graph.from_edges` or :func:`parse_edge_list`
    rather than calling the constructor directly; those normalize the input.
    """

    n: int
    edges: tuple[Edge, ...]
    labels: tuple[str, ...]
    adjacency: tuple[tuple[int, ...], ...]
    dropped_vertices: int = 0
    name: str = ""
    _edge_index: dict[Edge, int] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "_edge_index", {e: i for i, e in enumerate(self.edges)}
        )

    @property
    def m(self) -> int:
        return len(self.edges)

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[int, int]],
        n: int | None = None,
        labels: Sequence[str] | None = None,
        *,
        name: str = "",
        keep_largest_component: bool = True,
    ) -> "Graph":
        """Normalize an integer edge list into a :class:`Graph`.

        Loops are dropped, parallel edges merged and directions ignored. When
        ``keep_largest_component`` is set, only the largest connected
        component survives (ties go to the component holding the smallest
        vertex id) and isolated vertices disappear with it. The surviving
        vertices are renumbered in increasing order of their old ids.
        """
        pairs = set()
        top = -1
        for u, v in edges:
            u, v = int(u), int(v)
            if u < 0 or v < 0:
                raise GraphFormatError(f"negative vertex id in edge ({u}, {v})")
            top = max(top, u, v)
            if u != v:
                pairs.add((min(u, v), max(u, v)))
        if n is None:
            n = top + 1
        elif top >= n:
            raise GraphFormatError(f"vertex id {top} out of range for n={n}")
        if labels is None:
            labels = [str(i) for i in range(n)]
        elif len(labels) != n:
            raise GraphFormatError("labels must have one entry per vertex")
        if not pairs:
            raise EmptyGraphError("graph has no edges after normalization")

        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in pairs:
            adj[u].add(v)
            adj[v].add(u)

        keep = list(range(n))
        dropped = 0
        if keep_largest_component:
            comps = _components(adj)
            best = max(comps, key=lambda c: (len(c), -min(c)))
            keep = sorted(best)
            dropped = n - len(keep)
            if dropped and any(len(c) > 1 for c in comps if c is not best):
                logger.warning(
                    "graph is disconnected; keeping largest component "
                    "(%d of %d vertices)", len(keep), n,
                )

        new_id = {old: i for i, old in enumerate(keep)}
        new_edges = sorted(
            (min(new_id[u], new_id[v]), max(new_id[u], new_id[v]))
            for u, v in pairs
            if u in new_id and v in new_id
        )
        new_adj = [[] for _ in keep]
        for u, v in new_edges:
            new_adj[u].append(v)
            new_adj[v].append(u)
        return cls(
            n=len(keep),
            edges=tuple(new_edges),
            labels=tuple(str(labels[old]) for old in keep),
            adjacency=tuple(tuple(sorted(a)) for a in new_adj),
            dropped_vertices=dropped,
            name=name,
        )

    def edge_id(self, u: int, v: int) -> int:
        """Index of edge ``uv``; raises ``KeyError`` if absent."""
        return self._edge_index[(u, v) if u < v else (v, u)]

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edge_index

    def label_index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    def relabeled(self, perm: Sequence[int]) -> "Graph":
        """Return the isomorphic graph where vertex ``v`` becomes ``perm[v]``."""
        labels = [""] * self.n
        for v, pv in enumerate(perm):
            labels[pv] = self.labels[v]
        return Graph.from_edges(
            ((perm[u], perm[v]) for u, v in self.edges), self.n, labels, name=self.name
        )

    def is_connected(self) -> bool:
        return len(_components([set(a) for a in self.adjacency])) == 1

    def require_connected(self) -> None:
        if not self.is_connected():
            raise DisconnectedGraphError("operation requires a connected graph")

    def serialize(self) -> str:
        """One ``"u v"`` line per edge, canonical order, original labels."""
        lab = self.labels
        return "".join(f"{lab[u]} {lab[v]}\n" for u, v in self.edges)

    def digest(self) -> str:
        """SHA-256 of the sorted label-pair list.

        Independent of vertex numbering, so re-reading a serialized graph
        gives the same digest.
        """
        lab = self.labels
        pairs = sorted(tuple(sorted((lab[u], lab[v]))) for u, v in self.edges)
        return hashlib.sha256("".join(f"{a} {b}\n" for a, b in pairs).encode()).hexdigest()

    def vertex_pairs(self):
        """All unordered pairs ``(u, v)`` with ``u < v``."""
        n = self.n
        return ((u, v) for u in range(n) for v in range(u + 1, n))


def _components(adj: Sequence[Iterable[int]]) -> list[list[int]]:
    seen = [False] * len(adj)
    comps = []
    for s in range(len(adj)):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    stack.append(y)
        comps.append(comp)
    return comps


def parse_edge_list(text: str, *, name: str = "") -> Graph:
    """Parse whitespace-separated ``u v`` lines into a normalized graph.

    Lines starting with ``#`` or ``%`` and blank lines are skipped. Vertex
    tokens are arbitrary strings, numbered in order of first appearance.

    Raises:
        GraphFormatError: a data line does not have exactly two tokens.
        EmptyGraphError: nothing but loops (or nothing at all) was given.
    """
    ids: dict[str, int] = {}
    edges = []
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s[0] in "#%":
            continue
        tok = s.split()
        if len(tok) != 2:
            raise GraphFormatError(
                f"line {lineno}: expected 2 tokens, got {len(tok)}: {line!r}"
            )
        a, b = (ids.setdefault(t, len(ids)) for t in tok)
        edges.append((a, b))
    labels = sorted(ids, key=ids.get)
    return Graph.from_edges(edges, len(labels), labels, name=name)


def read_edge_list(path, *, name: str | None = None) -> Graph:
    from pathlib import Path

    path = Path(path)
    return parse_edge_list(path.read_text(), name=path.stem if name is None else name)


def bfs_distances(g: Graph, u: int) -> list[int]:
    """Hop distances from ``u``; unreachable vertices get ``-1``."""
    if not 0 <= u < g.n:
        raise IndexError(f"vertex {u} out of range")
    dist = [-1] * g.n
    dist[u] = 0
    q = deque([u])
    adj = g.adjacency
    while q:
        x = q.popleft()
        dx = dist[x] + 1
        for y in adj[x]:
            if dist[y] < 0:
                dist[y] = dx
                q.append(y)
    return dist


def all_distances(g: Graph) -> list[list[int]]:
    return [bfs_distances(g, u) for u in range(g.n)]


def diameter(g: Graph) -> int:
    g.require_connected()
    return max(max(bfs_distances(g, u)) for u in range(g.n))


# ---------------------------------------------------------------------------
# small named constructions used in tests, demos and docs


def path_graph(n: int) -> Graph:
    return Graph.from_edges([(i, i + 1) for i in range(n - 1)], n, name=f"P{n}")


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges([(i, (i + 1) % n) for i in range(n)], n, name=f"C{n}")


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(
        [(i, j) for i in range(n) for j in range(i + 1, n)], n, name=f"K{n}"
    )


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges([(0, i) for i in range(1, leaves + 1)], name=f"K1_{leaves}")


def complete_bipartite(s: int, t: int) -> Graph:
    return Graph.from_edges(
        [(i, s + j) for i in range(s) for j in range(t)], s + t, name=f"K{s}_{t}"
    )


def k4_chain(k: int) -> Graph:
    """``k + 1`` copies of K4 glued so consecutive copies share two vertices.

    Copy ``i`` (1-based) spans vertices ``2(i-1) .. 2(i-1)+3``. Diameter is
    ``k + 1`` and no two edges separate a common vertex pair.
    """
    edges = set()
    for i in range(1, k + 2):
        vs = [2 * (i - 1) + j for j in range(4)]
        edges.update((a, b) for a in vs for b in vs if a < b)
    return Graph.from_edges(sorted(edges), name=f"K4chain{k}")


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(outer + spokes + inner, 10, name="petersen")

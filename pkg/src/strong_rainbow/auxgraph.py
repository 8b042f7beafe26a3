"""Auxiliary edge graph H(G), its clique number, and the combined lower bound.

H has one vertex per edge of G. Two edges are adjacent in H when some vertex
pair of G has both of them on every one of its shortest paths; such edges
must receive different colors in any strong rainbow coloring, so cliques in H
bound the answer from below.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import NamedTuple

from .errors import SizeGuardExceeded, TimeLimitExceeded
from .graph import Graph, diameter
from .paths import SeparationRecord, all_separations, build_all_dags


@dataclass(frozen=True)
class AuxiliaryGraph:
    """H(G) as adjacency sets over edge indices of G.

    ``witness[(e1, e2)]`` (``e1 < e2``) is one vertex pair of G separated by
    both edges; it lets callers re-check any H-edge independently.
    """

    size: int
    adjacency: tuple[frozenset[int], ...]
    witness: dict[tuple[int, int], tuple[int, int]]

    @property
    def num_edges(self) -> int:
        return len(self.witness)

    @property
    def density(self) -> float:
        pairs = self.size * (self.size - 1) // 2
        return self.num_edges / pairs if pairs else 0.0

    def edges(self) -> list[tuple[int, int]]:
        return sorted(self.witness)

    def is_clique(self, vertices) -> bool:
        vs = list(vertices)
        adj = self.adjacency
        return all(b in adj[a] for i, a in enumerate(vs) for b in vs[i + 1:])


@dataclass(frozen=True)
class CliqueCertificate:
    vertices: tuple[int, ...]
    exact: bool = True

    @property
    def size(self) -> int:
        return len(self.vertices)


class LowerBound(NamedTuple):
    lb: int
    diameter: int
    omega_prime: int
    clique: CliqueCertificate


def build_aux_graph(
    g: Graph, records: dict[tuple[int, int], SeparationRecord] | None = None
) -> AuxiliaryGraph:
    """Construct H(G) from the separating edge sets of all vertex pairs."""
    g.require_connected()
    if records is None:
        records = all_separations(g)
    adj: list[set[int]] = [set() for _ in range(g.m)]
    witness: dict[tuple[int, int], tuple[int, int]] = {}
    for pair in sorted(records):
        sep = sorted(records[pair].edges)
        for i, a in enumerate(sep):
            for b in sep[i + 1:]:
                if b not in adj[a]:
                    adj[a].add(b)
                    adj[b].add(a)
                    witness[(a, b)] = pair
    return AuxiliaryGraph(g.m, tuple(frozenset(a) for a in adj), witness)


# ---------------------------------------------------------------------------
# maximum clique: branch and bound with greedy-coloring bounds


class _Deadline:
    def __init__(self, seconds: float | None):
        self.at = None if seconds is None else time.monotonic() + seconds
        self.ticks = 0

    def expired(self) -> bool:
        if self.at is None:
            return False
        self.ticks += 1
        if self.ticks & 0xFF:
            return False
        return time.monotonic() > self.at


def _color_bound(cands: list[int], adj) -> tuple[list[int], list[int]]:
    """Greedy sequential coloring of ``cands``.

    Returns the vertices reordered by color class and, for each position, the
    number of classes used up to it. That number bounds the size of any
    clique among the vertices up to that position.
    """
    classes: list[list[int]] = []
    for v in cands:
        nv = adj[v]
        for cls in classes:
            if not any(w in nv for w in cls):
                cls.append(v)
                break
        else:
            classes.append([v])
    order, bounds = [], []
    for k, cls in enumerate(classes, 1):
        order.extend(cls)
        bounds.extend([k] * len(cls))
    return order, bounds


class _CliqueSearch:
    def __init__(self, adj, deadline: _Deadline):
        self.adj = adj
        self.deadline = deadline
        self.best: list[int] = []
        self.timed_out = False

    def expand(self, current: list[int], cands: list[int]) -> None:
        if self.deadline.expired():
            self.timed_out = True
            return
        order, bounds = _color_bound(cands, self.adj)
        for i in range(len(order) - 1, -1, -1):
            if len(current) + bounds[i] <= len(self.best):
                return
            v = order[i]
            current.append(v)
            nv = self.adj[v]
            new = [w for w in order[:i] if w in nv]
            if new:
                self.expand(current, new)
            elif len(current) > len(self.best):
                self.best = list(current)
            current.pop()
            if self.timed_out:
                return

    def exists(self, cands: list[int], need: int) -> bool:
        """Whether ``cands`` contains a clique of size ``need``."""
        if need <= 0:
            return True
        if len(cands) < need:
            return False
        if self.deadline.expired():
            self.timed_out = True
            return False
        order, bounds = _color_bound(cands, self.adj)
        for i in range(len(order) - 1, -1, -1):
            if bounds[i] < need:
                return False
            v = order[i]
            nv = self.adj[v]
            if self.exists([w for w in order[:i] if w in nv], need - 1):
                return True
            if self.timed_out:
                return False
        return False


def max_clique(h: AuxiliaryGraph, time_limit: float | None = None) -> CliqueCertificate:
    """Maximum clique of H, lexicographically smallest among the maximum ones.

    If ``time_limit`` runs out, the best clique found so far is returned with
    ``exact=False``; it is still a valid lower bound.
    """
    if h.size == 0:
        raise ValueError("empty auxiliary graph")
    adj = h.adjacency
    search = _CliqueSearch(adj, _Deadline(time_limit))
    verts = sorted(range(h.size), key=lambda v: len(adj[v]), reverse=True)
    search.best = [verts[0]]
    search.expand([], verts)
    if search.timed_out:
        return CliqueCertificate(tuple(sorted(search.best)), exact=False)
    omega = len(search.best)

    # rebuild the lexicographically smallest clique of that size
    chosen: list[int] = []
    cands = list(range(h.size))
    while len(chosen) < omega:
        for idx, v in enumerate(cands):
            rest = [w for w in cands[idx + 1:] if w in adj[v]]
            if search.exists(rest, omega - len(chosen) - 1):
                chosen.append(v)
                cands = rest
                break
            if search.timed_out:
                return CliqueCertificate(tuple(sorted(search.best)), exact=False)
        else:  # pragma: no cover - omega was witnessed, so some v must extend
            raise AssertionError("clique reconstruction failed")
    return CliqueCertificate(tuple(chosen), exact=True)


def maximal_cliques(h: AuxiliaryGraph, limit: int = 50, min_size: int = 2):
    """Up to ``limit`` maximal cliques of H with at least ``min_size`` vertices.

    Bron-Kerbosch with Tomita pivoting; output order is deterministic.
    """
    adj = h.adjacency
    out: list[tuple[int, ...]] = []

    def bk(r, p, x):
        if len(out) >= limit:
            return
        if not p and not x:
            if len(r) >= min_size:
                out.append(tuple(sorted(r)))
            return
        pivot = max(p | x, key=lambda u: (len(p & adj[u]), -u))
        for v in sorted(p - adj[pivot]):
            bk(r + [v], p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    bk([], set(range(h.size)), set())
    return out


def lower_bound(
    g: Graph,
    h: AuxiliaryGraph | None = None,
    time_limit: float | None = None,
) -> LowerBound:
    """``max(diam(G), omega(H))`` together with both parts and the clique used."""
    if h is None:
        h = build_aux_graph(g)
    clique = max_clique(h, time_limit)
    d = diameter(g)
    return LowerBound(max(d, clique.size), d, clique.size, clique)


def is_geodetic(g: Graph, dags=None) -> bool:
    """True when every vertex pair has exactly one shortest path."""
    g.require_connected()
    if dags is None:
        dags = build_all_dags(g)
    return all(c == 1 for dag in dags for c in dag.counts)


# ---------------------------------------------------------------------------
# exact chromatic number (DSATUR branch and bound), opt-in only

DEFAULT_CHI_GUARD = 128


def exact_coloring(
    h: AuxiliaryGraph,
    time_limit: float | None = None,
    max_vertices: int = DEFAULT_CHI_GUARD,
) -> tuple[int, list[int]]:
    """Optimal proper coloring of H as ``(chi, colors)`` with colors ``1..chi``.

    Raises:
        SizeGuardExceeded: H has more than ``max_vertices`` vertices.
        TimeLimitExceeded: the search did not finish in ``time_limit`` seconds.
    """
    n = h.size
    if n > max_vertices:
        raise SizeGuardExceeded(f"|V(H)| = {n} exceeds the guard of {max_vertices}")
    if n == 0:
        return 0, []
    adj = h.adjacency
    deadline = _Deadline(time_limit)

    # DSATUR greedy gives the first upper bound
    best_colors = _dsatur_greedy(adj, n)
    best_k = max(best_colors)
    lb = max_clique(h).size
    if best_k == lb:
        return best_k, best_colors

    colors = [0] * n
    # saturation[v][c] counts neighbours of v currently colored c
    sat = [dict() for _ in range(n)]

    def pick():
        best_v, key = -1, None
        for v in range(n):
            if colors[v]:
                continue
            kv = (len(sat[v]), len(adj[v]), -v)
            if key is None or kv > key:
                best_v, key = v, kv
        return best_v

    def assign(v, c, delta):
        for w in adj[v]:
            d = sat[w]
            if delta > 0:
                d[c] = d.get(c, 0) + 1
            else:
                d[c] -= 1
                if not d[c]:
                    del d[c]

    def search(colored: int, used: int) -> bool:
        nonlocal best_k, best_colors
        if deadline.expired():
            raise TimeLimitExceeded("chromatic number search timed out")
        if colored == n:
            best_k, best_colors = used, list(colors)
            return best_k == lb
        v = pick()
        for c in range(1, min(used + 1, best_k - 1) + 1):
            if c in sat[v]:
                continue
            colors[v] = c
            assign(v, c, +1)
            done = search(colored + 1, max(used, c))
            assign(v, c, -1)
            colors[v] = 0
            if done:
                return True
        return False

    search(0, 0)
    return best_k, best_colors


def _dsatur_greedy(adj, n: int) -> list[int]:
    colors = [0] * n
    sat: list[set[int]] = [set() for _ in range(n)]
    for _ in range(n):
        v = max(
            (u for u in range(n) if not colors[u]),
            key=lambda u: (len(sat[u]), len(adj[u]), -u),
        )
        c = 1
        while c in sat[v]:
            c += 1
        colors[v] = c
        for w in adj[v]:
            sat[w].add(c)
    return colors


def chromatic_number_exact(
    h: AuxiliaryGraph,
    limit: float | None = None,
    max_vertices: int = DEFAULT_CHI_GUARD,
) -> int:
    """Chromatic number of H. Meant for small H (geodetic cross-checks)."""
    return exact_coloring(h, limit, max_vertices)[0]

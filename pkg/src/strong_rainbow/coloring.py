"""Edge colorings: strong-rainbow verification, exhaustive search and file I/O."""
from __future__ import annotations

import json
import time
from dataclasses import dataclass
from typing import Mapping, NamedTuple, Sequence

from .errors import Exhausted, GraphFormatError, PathBudgetExceeded, TimeLimitExceeded
from .graph import Graph
from .paths import ShortestPath, all_shortest_paths, build_all_dags

DEFAULT_NODE_BUDGET = 10**7


@dataclass(frozen=True)
class Coloring:
    """``colors[e]`` is the color (1-based) of edge index ``e``.

    The colors in use always form the contiguous range ``1..k``.
    """

    colors: tuple[int, ...]

    def __post_init__(self):
        used = set(self.colors)
        if self.colors and used != set(range(1, len(used) + 1)):
            raise ValueError(f"colors must be exactly 1..k, got {sorted(used)}")

    @property
    def k(self) -> int:
        return max(self.colors, default=0)

    @classmethod
    def compact(cls, colors: Sequence[int]) -> "Coloring":
        """Relabel arbitrary positive colors onto ``1..k`` preserving their order."""
        rank = {c: i for i, c in enumerate(sorted(set(colors)), 1)}
        return cls(tuple(rank[c] for c in colors))

    def __getitem__(self, e: int) -> int:
        return self.colors[e]

    def __len__(self) -> int:
        return len(self.colors)


class Verdict(NamedTuple):
    ok: bool
    witness: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_strong_rainbow(
    g: Graph,
    c: Coloring | Sequence[int],
    *,
    dags=None,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> Verdict:
    """Check that every vertex pair has at least one rainbow shortest path.

    Pairs are checked longest first. For each pair a DFS runs backwards over
    the shortest-path DAG, abandoning any partial path that repeats a color;
    failed ``(vertex, color set)`` states are memoized.

    Returns:
        ``Verdict(True)`` or ``Verdict(False, (u, v))`` naming a pair with no
        rainbow shortest path.

    Raises:
        PathBudgetExceeded: one pair needed more than ``node_budget`` DFS
            expansions.
    """
    colors = c.colors if isinstance(c, Coloring) else tuple(c)
    if len(colors) != g.m:
        raise ValueError("coloring must assign a color to every edge")
    if dags is None:
        dags = build_all_dags(g)
    pairs = sorted(
        ((u, v) for u in range(g.n) for v in range(u + 1, g.n)),
        key=lambda p: (-dags[p[0]].dist[p[1]], p),
    )
    eid = g.edge_id
    for u, v in pairs:
        dag = dags[u]
        if not _rainbow_path_exists(dag, v, colors, eid, node_budget):
            return Verdict(False, (u, v))
    return Verdict(True)


def _rainbow_path_exists(dag, v, colors, eid, budget) -> bool:
    root, preds, counts = dag.root, dag.preds, dag.counts
    order = {
        x: sorted(preds[x], key=lambda w: (counts[w], w)) for x in _ancestors(dag, v)
    }
    dead: set[tuple[int, int]] = set()
    expanded = 0

    def dfs(x: int, mask: int) -> bool:
        nonlocal expanded
        if x == root:
            return True
        if (x, mask) in dead:
            return False
        expanded += 1
        if expanded > budget:
            raise PathBudgetExceeded(
                f"verification of pair ({root}, {v}) exceeded {budget} expansions"
            )
        for w in order[x]:
            bit = 1 << colors[eid(w, x)]
            if not mask & bit and dfs(w, mask | bit):
                return True
        dead.add((x, mask))
        return False

    return dfs(v, 0)


def _ancestors(dag, v) -> set[int]:
    seen = {v}
    stack = [v]
    while stack:
        x = stack.pop()
        for w in dag.preds[x]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


# ---------------------------------------------------------------------------
# exhaustive search


class ColoringSearch:
    """Depth-first search for a coloring with at most ``k`` colors.

    Only the pairs in ``pair_paths`` must end up with a rainbow path. Edges
    are colored one at a time; a new color may only be the next unused
    integer, and a branch dies as soon as some required pair has every one of
    its shortest paths already carrying a repeated color.
    """

    def __init__(
        self,
        g: Graph,
        pair_paths: Mapping[tuple[int, int], Sequence[ShortestPath]],
        prefix: Mapping[int, int] | None = None,
    ):
        self.g = g
        self.prefix = dict(prefix or {})
        paths: list[tuple[int, ...]] = []
        owner: list[int] = []
        self.pairs = list(pair_paths)
        for i, pair in enumerate(self.pairs):
            for p in pair_paths[pair]:
                paths.append(p.edges)
                owner.append(i)
        self.paths = paths
        self.owner = owner
        self.on_edge: list[list[int]] = [[] for _ in range(g.m)]
        for pid, es in enumerate(paths):
            for e in es:
                self.on_edge[e].append(pid)
        self.order = self._edge_order()
        self.nodes = 0

    def _edge_order(self) -> list[int]:
        m = self.g.m
        fixed = sorted(self.prefix, key=lambda e: (self.prefix[e], e))
        placed = set(fixed)
        order = list(fixed)
        # greedily continue with the edge sharing most paths with those placed
        touch = [0] * len(self.paths)
        for e in fixed:
            for pid in self.on_edge[e]:
                touch[pid] += 1
        while len(order) < m:
            best, key = -1, None
            for e in range(m):
                if e in placed:
                    continue
                k = (sum(touch[p] for p in self.on_edge[e]), len(self.on_edge[e]), -e)
                if key is None or k > key:
                    best, key = e, k
            order.append(best)
            placed.add(best)
            for pid in self.on_edge[best]:
                touch[pid] += 1
        return order

    def run(
        self, k: int, node_limit: int | None = None, deadline: float | None = None
    ) -> list[int] | None:
        """A color list (indexed by edge) using at most ``k`` colors, or ``None``.

        ``deadline`` is a :func:`time.monotonic` timestamp; passing it raises
        :class:`TimeLimitExceeded` instead of running on.
        """
        m = self.g.m
        if self.prefix and max(self.prefix.values()) > k:
            return None
        color = [0] * m
        mask = [0] * len(self.paths)
        alive_paths = [True] * len(self.paths)
        alive = [0] * len(self.pairs)
        for o in self.owner:
            alive[o] += 1
        if any(a == 0 for a in alive):
            return None
        order = self.order
        on_edge = self.on_edge
        owner = self.owner
        self.nodes = 0

        def place(e: int, c: int, trail: list) -> bool:
            bit = 1 << c
            ok = True
            for pid in on_edge[e]:
                if not alive_paths[pid]:
                    continue
                if mask[pid] & bit:
                    alive_paths[pid] = False
                    o = owner[pid]
                    alive[o] -= 1
                    trail.append((pid, None))
                    if alive[o] == 0:
                        ok = False
                else:
                    mask[pid] |= bit
                    trail.append((pid, bit))
            color[e] = c
            return ok

        def undo(e: int, trail: list) -> None:
            for pid, bit in reversed(trail):
                if bit is None:
                    alive_paths[pid] = True
                    alive[owner[pid]] += 1
                else:
                    mask[pid] &= ~bit
            color[e] = 0

        def dfs(i: int, used: int) -> bool:
            if i == m:
                return True
            self.nodes += 1
            if node_limit is not None and self.nodes > node_limit:
                raise PathBudgetExceeded(f"exhaustive search exceeded {node_limit} nodes")
            if deadline is not None and not self.nodes & 1023 and time.monotonic() > deadline:
                raise TimeLimitExceeded("exhaustive coloring search timed out")
            e = order[i]
            if e in self.prefix:
                choices = [self.prefix[e]]
            else:
                choices = range(1, min(used + 1, k) + 1)
            for c in choices:
                trail: list = []
                if place(e, c, trail) and dfs(i + 1, max(used, c)):
                    return True
                undo(e, trail)
            return False

        if dfs(0, 0):
            return color
        return None


def brute_force_coloring(g: Graph, k_max: int | None = None) -> Coloring:
    """Smallest strong rainbow coloring found by exhaustive search.

    Tries ``k = 1, 2, ...`` in turn. Intended for small graphs only.

    Raises:
        Exhausted: no coloring with ``k_max`` colors or fewer exists.
    """
    g.require_connected()
    if k_max is None:
        k_max = g.m
    search = ColoringSearch(g, all_shortest_paths(g))
    for k in range(1, k_max + 1):
        found = search.run(k)
        if found is not None:
            return Coloring.compact(found)
    raise Exhausted(f"no strong rainbow coloring with at most {k_max} colors")


def brute_force_src(g: Graph, k_max: int | None = None) -> int:
    """Strong rainbow connection number by exhaustive search (small graphs)."""
    return brute_force_coloring(g, k_max).k


# ---------------------------------------------------------------------------
# JSON coloring files


def coloring_to_json(g: Graph, c: Coloring, method: str = "") -> dict:
    lab = g.labels
    return {
        "colors": c.k,
        "assignment": [
            {"u": lab[u], "v": lab[v], "color": c[e]}
            for e, (u, v) in enumerate(g.edges)
        ],
        "method": method,
        "graph_hash": g.digest(),
    }


def write_coloring(path, g: Graph, c: Coloring, method: str = "") -> None:
    from pathlib import Path

    Path(path).write_text(json.dumps(coloring_to_json(g, c, method), indent=1) + "\n")


def coloring_from_json(g: Graph, data: dict) -> Coloring:
    """Rebuild a :class:`Coloring` for ``g`` from the JSON file layout.

    Colors may be any positive integers; they are compacted onto ``1..k``.
    """
    idx = g.label_index()
    colors = [0] * g.m
    for item in data["assignment"]:
        try:
            u, v = idx[str(item["u"])], idx[str(item["v"])]
            e = g.edge_id(u, v)
        except KeyError:
            raise GraphFormatError(
                f"assignment names edge {item['u']}-{item['v']} not in the graph"
            ) from None
        col = int(item["color"])
        if col < 1:
            raise GraphFormatError(f"colors must be positive, got {col}")
        colors[e] = col
    missing = [g.edges[e] for e, col in enumerate(colors) if col == 0]
    if missing:
        u, v = missing[0]
        raise GraphFormatError(
            f"{len(missing)} edges have no color, e.g. {g.labels[u]}-{g.labels[v]}"
        )
    return Coloring.compact(colors)


def read_coloring(path, g: Graph) -> Coloring:
    from pathlib import Path

    return coloring_from_json(g, json.loads(Path(path).read_text()))

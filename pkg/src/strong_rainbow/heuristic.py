"""Randomized strong rainbow coloring heuristic.

Each iteration fixes one uniformly random shortest path per vertex pair and
then colors the edges in random order, reusing an existing color whenever no
fixed path through the edge already carries it. The coloring that makes
every fixed path rainbow is valid by construction, so the best color count
over the iterations is an upper bound on src(G).
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .auxgraph import CliqueCertificate
from .coloring import Coloring
from .graph import Graph
from .paths import ShortestPath, build_all_dags, sample_shortest_path


@dataclass(frozen=True)
class HeuristicResult:
    coloring: Coloring
    best: int
    iterations_run: int
    seed: int | None
    fixed_paths: dict[tuple[int, int], ShortestPath]


def default_max_iter(g: Graph) -> int:
    return max(1, math.ceil(g.n / 5))


def sample_path_fixing(g: Graph, dags, rng: random.Random):
    """One uniformly random shortest path for every pair ``u < v``."""
    return {
        (u, v): sample_shortest_path(g, dags[u], v, rng)
        for u in range(g.n)
        for v in range(u + 1, g.n)
    }


def run_heuristic(
    g: Graph,
    max_iter: int | None = None,
    seed: int | None = None,
    *,
    rng: random.Random | None = None,
    seed_clique: CliqueCertificate | None = None,
    dags=None,
) -> HeuristicResult:
    """Run the random path-fixing heuristic for ``max_iter`` iterations.

    Args:
        g: connected graph.
        max_iter: iterations; defaults to ``ceil(n / 5)``.
        seed: seed for a fresh ``random.Random`` when ``rng`` is not given.
        rng: explicit random stream, takes precedence over ``seed``.
        seed_clique: optional clique of H; its edges are pre-colored
            ``1..|U|`` in certificate order before the random edge loop.

    Returns:
        The best coloring found, its color count, and the path fixing it
        makes rainbow.
    """
    g.require_connected()
    if max_iter is None:
        max_iter = default_max_iter(g)
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    if rng is None:
        rng = random.Random(seed)
    if dags is None:
        dags = build_all_dags(g)
    m = g.m
    pre = list(seed_clique.vertices) if seed_clique is not None else []

    best = m + 1
    best_colors: list[int] | None = None
    best_fixing = None
    for _ in range(max_iter):
        fixing = sample_path_fixing(g, dags, rng)
        through: list[list[tuple[int, ...]]] = [[] for _ in range(m)]
        for p in fixing.values():
            for e in p.edges:
                through[e].append(p.edges)

        color = [0] * m
        for i, e in enumerate(pre, 1):
            color[e] = i
        k = len(pre)
        free = [e for e in range(m) if not color[e]]
        rng.shuffle(free)

        abandoned = False
        for e in free:
            blocked = set()
            for edges in through[e]:
                for f in edges:
                    if color[f]:
                        blocked.add(color[f])
                if len(blocked) >= k:
                    break
            options = [c for c in range(1, k + 1) if c not in blocked]
            if options:
                color[e] = rng.choice(options)
            else:
                k += 1
                if k >= best:
                    abandoned = True
                    break
                color[e] = k
        if not abandoned and k < best:
            best, best_colors, best_fixing = k, color, fixing

    return HeuristicResult(
        coloring=Coloring.compact(best_colors),
        best=best,
        iterations_run=max_iter,
        seed=seed,
        fixed_paths=best_fixing,
    )

"""Seeded random instance families: Erdos-Renyi, Watts-Strogatz, bipartite ER.

Every instance draws from ``numpy.random.default_rng([seed, index])``, so
instance ``i`` of a batch does not depend on how many others were drawn.
Outputs are reduced to their largest connected component.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EmptyGraphError
from .graph import Graph

FAMILIES = ("ER", "WS", "BER")


def percent_label(p: float) -> str:
    """``p`` as a percentage without trailing zeros: 0.06 -> '6', 0.032 -> '3.2'."""
    return format(round(p * 100, 6), "g")


@dataclass(frozen=True)
class GenSpec:
    """One instance request. ``params`` is ``(n, p)``, ``(n, k, p)`` or ``(n1, n2, p)``."""

    family: str
    params: tuple
    seed: int = 0
    index: int = 0

    def __post_init__(self):
        fam = self.family.upper()
        object.__setattr__(self, "family", fam)
        if fam not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        arity = {"ER": 2, "WS": 3, "BER": 3}[fam]
        if len(self.params) != arity:
            raise ValueError(f"{fam} takes {arity} parameters, got {len(self.params)}")
        p = self.params[-1]
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {p}")
        if fam == "ER" and self.params[0] < 2:
            raise ValueError("ER needs n >= 2")
        if fam == "WS":
            n, k, _ = self.params
            if k % 2 or not 2 <= k < n:
                raise ValueError(f"WS needs an even k with 2 <= k < n, got n={n}, k={k}")
        if fam == "BER" and min(self.params[:2]) < 1:
            raise ValueError("BER needs both parts non-empty")

    @property
    def name(self) -> str:
        *ints, p = self.params
        return "_".join([self.family, *map(str, ints), percent_label(p), str(self.index)])

    def rng(self) -> np.random.Generator:
        return np.random.default_rng([self.seed, self.index])

    def generate(self) -> Graph:
        gen = {"ER": gen_er, "WS": gen_ws, "BER": gen_ber}[self.family]
        return gen(*self.params, rng=self.rng(), name=self.name)


def _finish(n: int, edges, name: str) -> Graph:
    if not edges:
        raise EmptyGraphError(f"{name or 'instance'}: no edges were generated")
    return Graph.from_edges(edges, n=n, name=name)


def gen_er(n: int, p: float, seed: int = 0, *, rng=None, name: str = "") -> Graph:
    """G(n, p): every vertex pair is an edge independently with probability ``p``."""
    rng = rng if rng is not None else np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    edges = list(zip(iu[keep].tolist(), ju[keep].tolist()))
    return _finish(n, edges, name)


def gen_ber(n1: int, n2: int, p: float, seed: int = 0, *, rng=None, name: str = "") -> Graph:
    """Bipartite G(n1, n2, p) with parts ``0..n1-1`` and ``n1..n1+n2-1``."""
    rng = rng if rng is not None else np.random.default_rng(seed)
    keep = rng.random((n1, n2)) < p
    a, b = np.nonzero(keep)
    edges = list(zip(a.tolist(), (b + n1).tolist()))
    return _finish(n1 + n2, edges, name)


def gen_ws(n: int, k: int, p: float, seed: int = 0, *, rng=None, name: str = "") -> Graph:
    """Ring lattice of degree ``k`` whose edges are each replaced with probability ``p``.

    A replaced edge is removed and a new edge is drawn uniformly from the
    vertex pairs that are not currently edges. The edge count never changes.
    """
    rng = rng if rng is not None else np.random.default_rng(seed)
    lattice = [(u, (u + j) % n) for u in range(n) for j in range(1, k // 2 + 1)]
    lattice = [(min(u, v), max(u, v)) for u, v in lattice]
    present = set(lattice)
    total_pairs = n * (n - 1) // 2
    for e in lattice:
        if rng.random() >= p:
            continue
        if len(present) >= total_pairs:
            continue  # complete graph: no non-edge to move to
        present.discard(e)
        while True:
            u, v = rng.choice(n, size=2, replace=False).tolist()
            f = (min(u, v), max(u, v))
            if f not in present and f != e:
                break
        present.add(f)
    return _finish(n, sorted(present), name)


def generate_batch(family: str, params, count: int, seed: int = 0) -> list[Graph]:
    return [GenSpec(family, tuple(params), seed, i).generate() for i in range(count)]


def write_instances(graphs, out_dir) -> list[Path]:
    """Write each graph as ``<name>.txt`` edge list into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for g in graphs:
        path = out / f"{g.name}.txt"
        path.write_text(g.serialize())
        paths.append(path)
    return paths

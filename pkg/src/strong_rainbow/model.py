"""Integer programming model for src(G) and the two solution strategies.

Variables (all binary):

* ``x_e{e}_k{k}``: edge ``e`` gets color ``k``;
* ``y_p{i}``: shortest path ``i`` is rainbow;
* ``z_k{k}``: color ``k`` is used.

Row families: ``b`` one color per edge, ``c`` a path marked rainbow has at
most one edge per color, ``d`` every retained pair has a path marked rainbow,
``e`` a used color switches its ``z`` on, ``f`` colors are used in order, and
optional ``cut`` rows allowing at most one edge of an H-clique per color.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Sequence

from .auxgraph import CliqueCertificate, build_aux_graph, lower_bound, maximal_cliques
from .backends import Backend, NeutralModel, ScipyBackend, Status
from .coloring import Coloring, coloring_to_json, verify_strong_rainbow
from .errors import BackendFailure
from .graph import Graph, diameter
from .heuristic import default_max_iter, run_heuristic
from .paths import (
    DEFAULT_PATH_BUDGET,
    SeparationRecord,
    ShortestPath,
    all_separations,
    all_shortest_paths,
    build_all_dags,
)

logger = logging.getLogger(__name__)

DEFAULT_TIME_LIMIT = 3600.0


def compute_retained_pairs(
    g: Graph,
    records: dict[tuple[int, int], SeparationRecord] | None = None,
    dags=None,
) -> tuple[list[tuple[int, int]], dict[tuple[int, int], tuple[int, int]]]:
    """Split vertex pairs into retained and eliminated ones.

    If vertex ``w`` lies on every shortest ``(a, b)``-path, a rainbow
    ``(a, b)``-path already gives rainbow ``(a, w)`` and ``(w, b)`` paths, so
    those two pairs need no constraints of their own. Pairs are visited by
    decreasing distance and only a retained pair may eliminate others, which
    keeps every elimination backed by a pair that is still enforced.

    Returns:
        ``(retained, eliminated)`` where ``eliminated`` maps each dropped pair
        to the retained pair that justifies dropping it.
    """
    if dags is None:
        dags = build_all_dags(g)
    if records is None:
        records = all_separations(g, dags)
    dist = {(u, v): dags[u].dist[v] for u, v in records}
    eliminated: dict[tuple[int, int], tuple[int, int]] = {}
    retained = []
    for pair in sorted(records, key=lambda p: (-dist[p], p)):
        if pair in eliminated:
            continue
        retained.append(pair)
        a, b = pair
        for w in sorted(records[pair].vertices):
            for q in ((min(a, w), max(a, w)), (min(w, b), max(w, b))):
                eliminated.setdefault(q, pair)
    retained.sort()
    return retained, eliminated


@dataclass
class IpModel:
    """A built instance of the model plus everything needed to interpret it."""

    graph: Graph
    K0: int
    model: NeutralModel
    x: list[list[int]]
    z: list[int]
    paths: list[ShortestPath]
    y: list[int]
    pair_paths: dict[tuple[int, int], list[ShortestPath]]
    eliminated: dict[tuple[int, int], tuple[int, int]]
    fixed_clique: tuple[int, ...]
    minimize: bool
    total_paths: int

    def coloring_from_values(self, values: Sequence[int]) -> Coloring:
        colors = []
        for e, xs in enumerate(self.x):
            ks = [k for k, j in enumerate(xs, 1) if values[j]]
            if len(ks) != 1:
                raise BackendFailure(f"edge {e} has {len(ks)} colors in the solution")
            colors.append(ks[0])
        return Coloring.compact(colors)

    def values_from_coloring(self, colors: Sequence[int]) -> list[int]:
        """Translate an edge coloring (colors ``1..K0``) into model variables."""
        values = [0] * self.model.num_vars
        for e, c in enumerate(colors):
            values[self.x[e][c - 1]] = 1
        for c in set(colors):
            values[self.z[c - 1]] = 1
        for p, j in zip(self.paths, self.y):
            cs = [colors[e] for e in p.edges]
            values[j] = int(len(set(cs)) == len(cs))
        return values


def build_model(
    g: Graph,
    K0: int,
    *,
    clique: CliqueCertificate | Sequence[int] | None = None,
    eliminate: bool = False,
    symmetry: bool = True,
    clique_cuts: Sequence[Sequence[int]] = (),
    minimize: bool = True,
    records: dict[tuple[int, int], SeparationRecord] | None = None,
    dags=None,
    pair_paths: dict[tuple[int, int], list[ShortestPath]] | None = None,
    path_budget: int = DEFAULT_PATH_BUDGET,
) -> IpModel:
    """Build the 0/1 model with ``K0`` available colors.

    Args:
        clique: clique of H whose ``i``-th edge is fixed to color ``i``.
        eliminate: drop pairs made redundant by separating vertices.
        symmetry: add ``z_k >= z_{k+1}`` rows.
        clique_cuts: cliques of H, each contributing one row per color.
        minimize: objective ``sum z_k``; otherwise a pure feasibility model.
    """
    if K0 < 1:
        raise ValueError("K0 must be at least 1")
    g.require_connected()
    if dags is None:
        dags = build_all_dags(g)
    if pair_paths is None:
        pair_paths = all_shortest_paths(g, dags, budget=path_budget)
    if eliminate:
        retained, eliminated = compute_retained_pairs(g, records, dags)
    else:
        retained, eliminated = sorted(pair_paths), {}
    fixed = tuple(clique.vertices if isinstance(clique, CliqueCertificate) else clique or ())
    if len(fixed) > K0:
        raise ValueError(f"clique of size {len(fixed)} cannot be fixed with K0={K0}")

    mdl = NeutralModel()
    K = range(1, K0 + 1)
    x = [[mdl.add_var(f"x_e{e}_k{k}") for k in K] for e in range(g.m)]
    kept = {p: pair_paths[p] for p in retained}
    paths = [p for pair in retained for p in kept[pair]]
    y = [mdl.add_var(f"y_p{i}") for i in range(len(paths))]
    z = [mdl.add_var(f"z_k{k}") for k in K]
    if minimize:
        mdl.objective = {j: 1 for j in z}

    for e in range(g.m):
        mdl.add_row([(x[e][k - 1], 1) for k in K], "=", 1, f"b_e{e}", "b")
    for i, p in enumerate(paths):
        L = len(p.edges)
        for k in K:
            coeffs = [(x[e][k - 1], 1) for e in p.edges] + [(y[i], L - 1)]
            mdl.add_row(coeffs, "<=", L, f"c_p{i}_k{k}", "c")
    start = 0
    for pair in retained:
        cnt = len(kept[pair])
        mdl.add_row(
            [(y[i], 1) for i in range(start, start + cnt)], ">=", 1,
            f"d_{pair[0]}_{pair[1]}", "d",
        )
        start += cnt
    for e in range(g.m):
        for k in K:
            mdl.add_row([(x[e][k - 1], 1), (z[k - 1], -1)], "<=", 0, f"e_e{e}_k{k}", "e")
    if symmetry:
        for k in range(1, K0):
            mdl.add_row([(z[k - 1], 1), (z[k], -1)], ">=", 0, f"f_k{k}", "f")
    for q, U in enumerate(clique_cuts):
        if len(U) < 2:
            continue
        for k in K:
            mdl.add_row([(x[e][k - 1], 1) for e in U], "<=", 1, f"cut{q}_k{k}", "cut")

    for i, e in enumerate(fixed, 1):
        for k in K:
            mdl.fix(x[e][k - 1], int(k == i))
        mdl.fix(z[i - 1], 1)

    return IpModel(
        graph=g,
        K0=K0,
        model=mdl,
        x=x,
        z=z,
        paths=paths,
        y=y,
        pair_paths=kept,
        eliminated=eliminated,
        fixed_clique=fixed,
        minimize=minimize,
        total_paths=sum(len(v) for v in pair_paths.values()),
    )


# ---------------------------------------------------------------------------
# instance statistics


@dataclass
class InstanceStats:
    """Size and lower-bound figures of an instance, independent of any solve."""

    instance: str
    n: int
    m: int
    diameter: int
    omega_prime: int
    clique: tuple[int, ...]
    clique_exact: bool
    dens_h: float
    paths: int
    paths_retained: int
    seconds: float

    @property
    def init_lb(self) -> int:
        return max(self.diameter, self.omega_prime)

    @property
    def pct_retained(self) -> float:
        return 100.0 * self.paths_retained / self.paths if self.paths else 100.0


def instance_stats(
    g: Graph, dags=None, records=None, time_limit: float | None = None
) -> InstanceStats:
    """Diameter, omega(H), dens(H) and path counts before and after elimination.

    Path counts come from the DAG path counts, so nothing is enumerated.
    """
    t0 = time.perf_counter()
    g.require_connected()
    if dags is None:
        dags = build_all_dags(g)
    if records is None:
        records = all_separations(g, dags)
    h = build_aux_graph(g, records)
    lb = lower_bound(g, h, time_limit)
    retained, _ = compute_retained_pairs(g, records, dags)
    total = sum(dags[u].counts[v] for u in range(g.n) for v in range(u + 1, g.n))
    kept = sum(dags[u].counts[v] for u, v in retained)
    return InstanceStats(
        instance=g.name,
        n=g.n,
        m=g.m,
        diameter=lb.diameter,
        omega_prime=lb.omega_prime,
        clique=lb.clique.vertices,
        clique_exact=lb.clique.exact,
        dens_h=100.0 * h.density,
        paths=total,
        paths_retained=kept,
        seconds=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# reports

CSV_COLUMNS = (
    "instance", "n", "m", "src", "omega_prime", "diam", "dens_h", "paths",
    "paths_rem", "pct_rem", "init_lb", "heur_ub", "heur_time", "method",
    "time_or_bounds",
)


def _fmt(x) -> str:
    return "-" if x is None else str(x)


@dataclass
class SolveReport:
    """Outcome of one solve.

    ``status`` is ``solved``, ``time_limit`` or ``infeasible`` (only possible
    when a caller-supplied upper bound is below src). ``lower``/``upper`` are
    the proven bounds; both equal ``src`` when solved.
    """

    instance: str
    method: str
    status: str
    src: int | None
    lower: int | None
    upper: int | None
    coloring: Coloring | None
    stats: InstanceStats
    backend: str
    heur_ub: int | None = None
    heur_time: float | None = None
    build_time: float = 0.0
    solve_time: float = 0.0
    total_time: float = 0.0
    K0: int | None = None
    num_vars: int | None = None
    num_rows: int | None = None
    rounds: list[dict] = field(default_factory=list)

    @property
    def solved(self) -> bool:
        return self.status == "solved"

    def time_or_bounds(self) -> str:
        if self.solved:
            return f"{self.total_time:.3f}"
        return f"[{_fmt(self.lower)},{_fmt(self.upper)}]"

    def to_dict(self, g: Graph | None = None) -> dict:
        d = {
            "instance": self.instance,
            "method": self.method,
            "status": self.status,
            "src": self.src,
            "lower": self.lower,
            "upper": self.upper,
            "backend": self.backend,
            "heur_ub": self.heur_ub,
            "heur_time": self.heur_time,
            "build_time": self.build_time,
            "solve_time": self.solve_time,
            "total_time": self.total_time,
            "K0": self.K0,
            "num_vars": self.num_vars,
            "num_rows": self.num_rows,
            "rounds": self.rounds,
            "stats": asdict(self.stats) | {"init_lb": self.stats.init_lb},
        }
        if self.coloring is not None:
            d["coloring"] = (
                coloring_to_json(g, self.coloring, self.method)
                if g is not None
                else list(self.coloring.colors)
            )
        return d

    def to_json(self, g: Graph | None = None) -> str:
        return json.dumps(self.to_dict(g), indent=1)

    def csv_values(self) -> list[str]:
        s = self.stats
        return [
            self.instance,
            str(s.n),
            str(s.m),
            _fmt(self.src),
            str(s.omega_prime),
            str(s.diameter),
            f"{s.dens_h:.2f}",
            str(s.paths),
            str(s.paths_retained),
            f"{s.pct_retained:.2f}",
            str(s.init_lb),
            _fmt(self.heur_ub),
            "-" if self.heur_time is None else f"{self.heur_time:.3f}",
            self.method,
            self.time_or_bounds(),
        ]

    def csv_row(self) -> str:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerow(self.csv_values())
        return buf.getvalue()


def csv_header() -> str:
    return ",".join(CSV_COLUMNS) + "\n"


# ---------------------------------------------------------------------------
# solve strategies

METHODS = ("naive", "enhanced", "bottom_up")


def _cut_cliques(h, fixed: tuple[int, ...], max_cuts: int) -> list[tuple[int, ...]]:
    cuts = [fixed] if len(fixed) >= 2 else []
    for q in maximal_cliques(h, limit=max_cuts):
        if q != tuple(sorted(fixed)):
            cuts.append(q)
    return cuts


def _extract(ip: IpModel, res, dags) -> Coloring:
    c = ip.coloring_from_values(res.values)
    verdict = verify_strong_rainbow(ip.graph, c, dags=dags)
    if not verdict:
        raise BackendFailure(
            f"solver coloring is not strong rainbow (pair {verdict.witness})"
        )
    return c


def solve_direct(
    g: Graph,
    backend: Backend | None = None,
    *,
    method: str = "enhanced",
    time_limit: float | None = DEFAULT_TIME_LIMIT,
    upper_bound: int | None = None,
    max_iter: int | None = None,
    seed: int | None = 0,
    eliminate: bool | None = None,
    clique_fix: bool | None = None,
    symmetry: bool = True,
    clique_cuts: bool = False,
    max_cuts: int = 50,
    path_budget: int = DEFAULT_PATH_BUDGET,
) -> SolveReport:
    """Minimize the number of colors with ``K0`` set by the heuristic.

    ``method="naive"`` builds the plain model; ``"enhanced"`` adds pair
    elimination and clique fixing. Either enhancement can be toggled
    separately through ``eliminate`` / ``clique_fix``. The heuristic time is
    part of ``total_time``.
    """
    if method not in ("naive", "enhanced"):
        raise ValueError(f"direct solve method must be naive or enhanced, not {method!r}")
    enhanced = method == "enhanced"
    eliminate = enhanced if eliminate is None else eliminate
    clique_fix = enhanced if clique_fix is None else clique_fix
    backend = backend or ScipyBackend()
    g.require_connected()
    t_start = time.perf_counter()
    dags = build_all_dags(g)

    heur_ub = heur_time = None
    if upper_bound is None:
        t0 = time.perf_counter()
        heur = run_heuristic(g, max_iter, seed, dags=dags)
        heur_time = time.perf_counter() - t0
        K0 = heur_ub = heur.best
    else:
        K0 = upper_bound

    # bounds are needed for the report in any case, but only the enhanced
    # variants consume them, so a naive solve does not pay for them
    needs_h = eliminate or clique_fix or clique_cuts
    t0 = time.perf_counter()
    records = all_separations(g, dags)
    stats = instance_stats(g, dags, records, time_limit)
    stats_time = time.perf_counter() - t0

    if K0 < stats.init_lb:
        # only reachable with a caller-supplied bound
        return SolveReport(
            instance=g.name, method=method, status="infeasible", src=None,
            lower=stats.init_lb, upper=None, coloring=None, stats=stats,
            backend=backend.name, K0=K0,
            total_time=time.perf_counter() - t_start,
        )

    t0 = time.perf_counter()
    fixed = stats.clique if clique_fix else ()
    cuts = ()
    if clique_cuts:
        cuts = _cut_cliques(build_aux_graph(g, records), stats.clique, max_cuts)
    ip = build_model(
        g, K0, clique=fixed, eliminate=eliminate, symmetry=symmetry,
        clique_cuts=cuts, records=records, dags=dags, path_budget=path_budget,
    )
    build_time = time.perf_counter() - t0 + (stats_time if needs_h else 0.0)

    elapsed = time.perf_counter() - t_start - (0.0 if needs_h else stats_time)
    remaining = None if time_limit is None else max(time_limit - elapsed, 0.01)
    t0 = time.perf_counter()
    res = backend.solve_ip(ip, remaining)
    solve_time = time.perf_counter() - t0

    report = SolveReport(
        instance=g.name, method=method, status="", src=None, lower=None,
        upper=None, coloring=None, stats=stats, backend=backend.name,
        heur_ub=heur_ub, heur_time=heur_time, build_time=build_time,
        solve_time=solve_time, K0=K0, num_vars=ip.model.num_vars,
        num_rows=len(ip.model.rows),
    )
    report.total_time = (heur_time or 0.0) + build_time + solve_time
    if res.status == Status.OPTIMAL:
        c = _extract(ip, res, dags)
        if c.k != res.objective:
            raise BackendFailure(f"objective {res.objective} but {c.k} colors used")
        report.status, report.src, report.coloring = "solved", c.k, c
        report.lower = report.upper = c.k
    elif res.status == Status.TIME_LIMIT:
        report.status = "time_limit"
        upper = heur_ub
        if res.has_solution:
            upper = min(_extract(ip, res, dags).k, upper or K0)
        report.upper = upper
        if res.bound is not None:
            report.lower = math.ceil(res.bound - 1e-6)
        if enhanced:
            report.lower = max(report.lower or 0, stats.init_lb)
    elif res.status == Status.INFEASIBLE:
        if upper_bound is None:
            raise BackendFailure("model reported infeasible although K0 came from a valid coloring")
        report.status = "infeasible"
        report.lower = K0 + 1
    else:
        raise BackendFailure(res.message or f"backend returned {res.status.value}")
    return report


def solve_bottom_up(
    g: Graph,
    backend: Backend | None = None,
    *,
    time_limit: float | None = DEFAULT_TIME_LIMIT,
    eliminate: bool = True,
    clique_fix: bool = True,
    symmetry: bool = True,
    clique_cuts: bool = False,
    max_cuts: int = 50,
    objective: bool = False,
    path_budget: int = DEFAULT_PATH_BUDGET,
) -> SolveReport:
    """Raise the color budget from the lower bound until the model is feasible.

    Each round is a pure feasibility solve unless ``objective`` is set. The
    first feasible budget is src(G). No heuristic is run.
    """
    backend = backend or ScipyBackend()
    g.require_connected()
    t_start = time.perf_counter()
    deadline = None if time_limit is None else t_start + time_limit
    dags = build_all_dags(g)
    records = all_separations(g, dags)
    stats = instance_stats(g, dags, records, time_limit)
    pair_paths = all_shortest_paths(g, dags, budget=path_budget)
    cuts = ()
    if clique_cuts:
        cuts = _cut_cliques(build_aux_graph(g, records), stats.clique, max_cuts)
    fixed = stats.clique if clique_fix else ()
    build_time = time.perf_counter() - t_start
    solve_time = 0.0

    report = SolveReport(
        instance=g.name, method="bottom_up", status="", src=None, lower=None,
        upper=None, coloring=None, stats=stats, backend=backend.name,
    )
    K0 = stats.init_lb
    while True:
        t0 = time.perf_counter()
        ip = build_model(
            g, K0, clique=fixed, eliminate=eliminate, symmetry=symmetry,
            clique_cuts=cuts, minimize=objective, records=records, dags=dags,
            pair_paths=pair_paths,
        )
        t1 = time.perf_counter()
        remaining = None if deadline is None else max(deadline - t1, 0.01)
        res = backend.solve_ip(ip, remaining)
        t2 = time.perf_counter()
        build_time += t1 - t0
        solve_time += t2 - t1
        report.rounds.append(
            {"K0": K0, "status": res.status.value, "time": round(t2 - t0, 6)}
        )
        report.K0, report.num_vars, report.num_rows = K0, ip.model.num_vars, len(ip.model.rows)
        logger.info("bottom-up round K0=%d: %s", K0, res.status.value)
        if res.status in (Status.OPTIMAL, Status.FEASIBLE):
            c = _extract(ip, res, dags)
            if c.k != K0:
                # fewer colors than K0 would contradict an earlier infeasible round
                raise BackendFailure(f"feasible at K0={K0} with only {c.k} colors")
            report.status, report.src, report.coloring = "solved", K0, c
            report.lower = report.upper = K0
            break
        if res.status == Status.INFEASIBLE:
            K0 += 1
            if K0 > g.m:
                raise BackendFailure("no feasible budget up to m colors")
            if deadline is not None and time.perf_counter() >= deadline:
                report.status, report.lower = "time_limit", K0
                break
            continue
        if res.status == Status.TIME_LIMIT:
            report.status, report.lower = "time_limit", K0
            break
        raise BackendFailure(res.message or f"backend returned {res.status.value}")
    report.build_time, report.solve_time = build_time, solve_time
    report.total_time = time.perf_counter() - t_start
    return report


def solve(g: Graph, backend: Backend | None = None, method: str = "enhanced", **opts) -> SolveReport:
    """Dispatch to :func:`solve_direct` or :func:`solve_bottom_up` by method name.

    Heuristic options (``seed``, ``max_iter``, ``upper_bound``) are ignored
    for ``bottom_up``, which never runs the heuristic.
    """
    method = method.replace("-", "_")
    if method == "bottom_up":
        for key in ("seed", "max_iter", "upper_bound"):
            opts.pop(key, None)
        return solve_bottom_up(g, backend, **opts)
    return solve_direct(g, backend, method=method, **opts)

"""Command-line interface: ``src-solve <command> ...``.

Exit codes:
    0  success (solved, or coloring valid)
    1  error (bad input, backend failure, guard exceeded)
    2  time limit reached before optimality was proven
    3  ``verify``: the coloring is not strong rainbow
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import load_karate
from .auxgraph import build_aux_graph, exact_coloring, lower_bound
from .backends import make_backend
from .coloring import read_coloring, verify_strong_rainbow, write_coloring
from .errors import SrcError, TimeLimitExceeded
from .generators import GenSpec, write_instances
from .graph import Graph, read_edge_list
from .heuristic import run_heuristic
from .model import DEFAULT_TIME_LIMIT, SolveReport, csv_header, instance_stats, solve
from .paths import DEFAULT_PATH_BUDGET

EXIT_OK, EXIT_ERROR, EXIT_TIMEOUT, EXIT_INVALID = 0, 1, 2, 3

logger = logging.getLogger("strong_rainbow")

BUILTINS = {"builtin:karate": load_karate}


def load_graph(spec: str) -> Graph:
    """Read an edge-list file, or a packaged instance such as ``builtin:karate``."""
    if spec in BUILTINS:
        return BUILTINS[spec]()
    return read_edge_list(spec)


def _positive_float(text: str) -> float:
    x = float(text)
    if x <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def _positive_int(text: str) -> int:
    x = int(text)
    if x <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="src-solve",
        description="Strong rainbow connection number: bounds, heuristic and exact solves.",
    )
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--path-budget", type=_positive_int, default=DEFAULT_PATH_BUDGET,
                        help="cap on shortest-path edge incidences (default %(default)s)")

    s = sub.add_parser("solve", parents=[common], help="compute src(G) exactly")
    s.add_argument("graphs", nargs="+", help="edge-list files (or builtin:karate)")
    s.add_argument("--method", choices=["naive", "enhanced", "bottom-up"], default="enhanced")
    s.add_argument("--time-limit", type=_positive_float, default=DEFAULT_TIME_LIMIT,
                   help="seconds per instance (default %(default)s)")
    s.add_argument("--seed", type=int, default=0, help="heuristic seed")
    s.add_argument("--max-iter", type=_positive_int, help="heuristic iterations (default ceil(n/5))")
    s.add_argument("--upper-bound", type=_positive_int, help="use this K0 instead of running the heuristic")
    s.add_argument("--backend", choices=["auto", "scipy", "external", "exhaustive"], default="auto")
    s.add_argument("--solver-cmd", help="external solver: 'cbc', 'highs' or a template "
                   "with {lp} {sol} {time}; defaults to $SRC_SOLVER_CMD")
    s.add_argument("--no-eliminate", action="store_true", help="keep every vertex pair")
    s.add_argument("--no-clique-fix", action="store_true", help="do not fix the clique colors")
    s.add_argument("--no-symmetry", action="store_true", help="drop the z ordering rows")
    s.add_argument("--clique-cuts", action="store_true", help="add clique cut rows")
    s.add_argument("--max-cuts", type=_positive_int, default=50)
    s.add_argument("--objective", action="store_true",
                   help="bottom-up: keep the color-count objective in each round")
    s.add_argument("--out", help="coloring JSON path (a directory when several graphs are given)")
    s.add_argument("--json", help="write the full report(s) as JSON here")
    s.add_argument("--csv", help="append one CSV row per instance to this file")
    s.add_argument("--jobs", type=_positive_int, default=1, help="instances solved in parallel")

    b = sub.add_parser("bound", parents=[common], help="diameter, omega(H) and the lower bound")
    b.add_argument("graph")
    b.add_argument("--chi-exact", action="store_true", help="also compute chi(H) exactly")
    b.add_argument("--time-limit", type=_positive_float, default=DEFAULT_TIME_LIMIT)

    st = sub.add_parser("stats", parents=[common], help="instance statistics row")
    st.add_argument("graphs", nargs="+")
    st.add_argument("--csv", help="append rows to this file")

    h = sub.add_parser("heuristic", help="random path-fixing upper bound")
    h.add_argument("graph")
    h.add_argument("--seed", type=int, default=0)
    h.add_argument("--max-iter", type=_positive_int)
    h.add_argument("--out", help="write the coloring JSON here")

    v = sub.add_parser("verify", help="check a coloring file")
    v.add_argument("graph")
    v.add_argument("coloring")

    g = sub.add_parser("gen", help="generate random instances")
    g.add_argument("family", choices=["er", "ws", "ber"], type=str.lower)
    g.add_argument("params", nargs="+", type=float,
                   help="er: n p | ws: n k p | ber: n1 n2 p")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--count", type=_positive_int, default=1)
    g.add_argument("--out-dir", default=".")
    return ap


# ---------------------------------------------------------------------------


def _solve_one(path: str, opts: dict) -> tuple[str, SolveReport | None, str, str]:
    """Worker body; returns ``(path, report, coloring json, error message)``."""
    try:
        g = load_graph(path)
        backend = make_backend(opts.pop("backend"), opts.pop("solver_cmd"))
        rep = solve(g, backend, **opts)
        return path, rep, rep.to_json(g), ""
    except SrcError as exc:
        return path, None, "", f"{type(exc).__name__}: {exc}"


def _solve_opts(a) -> dict:
    method = a.method.replace("-", "_")
    opts = {
        "backend": a.backend,
        "solver_cmd": a.solver_cmd,
        "method": method,
        "time_limit": a.time_limit,
        "symmetry": not a.no_symmetry,
        "clique_cuts": a.clique_cuts,
        "max_cuts": a.max_cuts,
        "path_budget": a.path_budget,
    }
    if method == "bottom_up":
        opts.update(eliminate=not a.no_eliminate, clique_fix=not a.no_clique_fix,
                    objective=a.objective)
    else:
        opts.update(seed=a.seed, max_iter=a.max_iter, upper_bound=a.upper_bound)
        # flags only switch enhancements off; naive has none to switch
        if a.no_eliminate:
            opts["eliminate"] = False
        if a.no_clique_fix:
            opts["clique_fix"] = False
    return opts


def cmd_solve(a) -> int:
    opts = _solve_opts(a)
    if a.jobs > 1 and len(a.graphs) > 1:
        with ProcessPoolExecutor(a.jobs) as pool:
            results = list(pool.map(_solve_one, a.graphs, [dict(opts)] * len(a.graphs)))
    else:
        results = [_solve_one(p, dict(opts)) for p in a.graphs]

    many = len(a.graphs) > 1
    code = EXIT_OK
    reports = []
    for path, rep, rep_json, err in results:
        if rep is None:
            print(f"{path}: error: {err}", file=sys.stderr)
            code = EXIT_ERROR
            continue
        reports.append(json.loads(rep_json))
        if rep.solved:
            print(f"{rep.instance}: src = {rep.src} ({rep.method}, {rep.total_time:.3f} s, "
                  f"init LB {rep.stats.init_lb}, heur UB {rep.heur_ub if rep.heur_ub else '-'})")
        else:
            print(f"{rep.instance}: {rep.status}, bounds {rep.time_or_bounds()} ({rep.method})")
            if code == EXIT_OK:
                code = EXIT_TIMEOUT
        if a.out and rep.coloring is not None:
            target = Path(a.out)
            if many:
                target.mkdir(parents=True, exist_ok=True)
                target = target / f"{rep.instance}.json"
            target.write_text(json.dumps(reports[-1]["coloring"], indent=1) + "\n")
        if a.csv:
            _append_csv(a.csv, rep.csv_row())
    if a.json:
        Path(a.json).write_text(json.dumps(reports if many else reports[0], indent=1) + "\n")
    return code


def _append_csv(path: str, row: str) -> None:
    p = Path(path)
    fresh = not p.exists() or p.stat().st_size == 0
    with p.open("a") as fh:
        if fresh:
            fh.write(csv_header())
        fh.write(row)


def cmd_bound(a) -> int:
    g = load_graph(a.graph)
    h = build_aux_graph(g)
    lb = lower_bound(g, h, a.time_limit)
    print(f"diam {lb.diameter}")
    note = "" if lb.clique.exact else " (clique search timed out; size is a lower bound)"
    print(f"omega' {lb.omega_prime}{note}")
    print(f"lb {lb.lb}")
    if a.chi_exact:
        try:
            chi, _ = exact_coloring(h, a.time_limit)
            print(f"chi(H) {chi}")
        except TimeLimitExceeded:
            print("chi(H) timed out")
            return EXIT_TIMEOUT
    return EXIT_OK


def cmd_stats(a) -> int:
    cols = ["instance", "n", "m", "omega_prime", "diam", "dens_h", "paths", "paths_rem", "pct_rem"]
    lines = [",".join(cols)]
    for path in a.graphs:
        g = load_graph(path)
        s = instance_stats(g)
        lines.append(",".join([
            s.instance, str(s.n), str(s.m), str(s.omega_prime), str(s.diameter),
            f"{s.dens_h:.2f}", str(s.paths), str(s.paths_retained), f"{s.pct_retained:.2f}",
        ]))
    text = "\n".join(lines) + "\n"
    print(text, end="")
    if a.csv:
        p = Path(a.csv)
        fresh = not p.exists() or p.stat().st_size == 0
        with p.open("a") as fh:
            fh.write(text if fresh else text.split("\n", 1)[1])
    return EXIT_OK


def cmd_heuristic(a) -> int:
    g = load_graph(a.graph)
    res = run_heuristic(g, a.max_iter, a.seed)
    print(f"{g.name}: heuristic upper bound {res.best} after {res.iterations_run} iterations")
    if a.out:
        write_coloring(a.out, g, res.coloring, "heuristic")
    return EXIT_OK


def cmd_verify(a) -> int:
    g = load_graph(a.graph)
    c = read_coloring(a.coloring, g)
    verdict = verify_strong_rainbow(g, c)
    if verdict:
        print(f"valid strong rainbow coloring with {c.k} colors")
        return EXIT_OK
    u, v = verdict.witness
    print(f"invalid: no rainbow shortest path between {g.labels[u]} and {g.labels[v]}")
    return EXIT_INVALID


def cmd_gen(a) -> int:
    fam = a.family.upper()
    *ints, p = a.params
    if any(x != int(x) for x in ints):
        raise SystemExit("size parameters must be integers")
    params = (*map(int, ints), p)
    specs = [GenSpec(fam, params, a.seed, i) for i in range(a.count)]
    for path in write_instances([s.generate() for s in specs], a.out_dir):
        print(path)
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "bound": cmd_bound,
    "stats": cmd_stats,
    "heuristic": cmd_heuristic,
    "verify": cmd_verify,
    "gen": cmd_gen,
}


def main(argv: list[str] | None = None) -> int:
    a = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(a.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[a.command](a)
    except (SrcError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

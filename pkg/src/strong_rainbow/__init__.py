"""Exact computation of the strong rainbow connection number src(G)."""
from .auxgraph import (
    AuxiliaryGraph,
    CliqueCertificate,
    LowerBound,
    build_aux_graph,
    chromatic_number_exact,
    is_geodetic,
    lower_bound,
    max_clique,
    maximal_cliques,
)
from .backends import (
    ExhaustiveBackend,
    ExternalBackend,
    NeutralModel,
    ScipyBackend,
    Status,
    make_backend,
    write_lp,
)
from .coloring import (
    Coloring,
    Verdict,
    brute_force_coloring,
    brute_force_src,
    read_coloring,
    verify_strong_rainbow,
    write_coloring,
)
from .errors import (
    BackendFailure,
    DisconnectedGraphError,
    EmptyGraphError,
    Exhausted,
    GraphFormatError,
    PathBudgetExceeded,
    SizeGuardExceeded,
    SrcError,
    TimeLimitExceeded,
)
from .graph import Graph, diameter, parse_edge_list, read_edge_list
from .heuristic import HeuristicResult, run_heuristic
from .model import (
    IpModel,
    SolveReport,
    build_model,
    compute_retained_pairs,
    instance_stats,
    solve,
    solve_bottom_up,
    solve_direct,
)
from .paths import all_separations, all_shortest_paths, build_all_dags, separation

__version__ = "0.1.0"


def load_karate() -> Graph:
    """Zachary's karate club graph shipped with the package (labels 1..34)."""
    from importlib.resources import files

    text = files(__package__).joinpath("data/karate.txt").read_text()
    return parse_edge_list(text, name="karate")

"""Solver-neutral 0/1 models and the backends that solve them.

:class:`NeutralModel` holds binary variables, integer linear rows and a
minimization objective. Three backends are provided:

* :class:`ScipyBackend` runs HiGHS in-process through ``scipy.optimize.milp``.
* :class:`ExternalBackend` writes a CPLEX-style LP file, runs a solver
  command and reads back its solution file.
* :class:`ExhaustiveBackend` ignores the LP encoding and decides the coloring
  question directly by exhaustive search (tiny instances only).

Whatever the backend, an assignment is only trusted after every row has been
re-checked in exact integer arithmetic.
"""
from __future__ import annotations

import enum
import logging
import math
import os
import shlex
import shutil
import subprocess
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .errors import BackendFailure, SizeGuardExceeded, TimeLimitExceeded

logger = logging.getLogger(__name__)

INT_TOL = 1e-6
SOLVER_ENV = "SRC_SOLVER_CMD"


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    TIME_LIMIT = "time_limit"
    ERROR = "error"


@dataclass
class Row:
    coeffs: list[tuple[int, int]]
    sense: str
    rhs: int
    name: str
    family: str = ""


@dataclass
class SolveStatus:
    status: Status
    objective: int | None = None
    values: list[int] | None = None
    bound: float | None = None
    message: str = ""

    @property
    def has_solution(self) -> bool:
        return self.values is not None and self.status in (
            Status.OPTIMAL, Status.FEASIBLE, Status.TIME_LIMIT,
        )


class NeutralModel:
    """Pure-binary minimization model with integer data."""

    def __init__(self):
        self.names: list[str] = []
        self.index: dict[str, int] = {}
        self.rows: list[Row] = []
        self.objective: dict[int, int] = {}
        self.fixed: dict[int, int] = {}
        self.hint: dict[int, int] | None = None

    @property
    def num_vars(self) -> int:
        return len(self.names)

    def add_var(self, name: str) -> int:
        if name in self.index:
            raise ValueError(f"duplicate variable name {name!r}")
        self.index[name] = len(self.names)
        self.names.append(name)
        return self.index[name]

    def add_row(
        self,
        coeffs: Iterable[tuple[int, int]] | Mapping[int, int],
        sense: str,
        rhs: int,
        name: str | None = None,
        family: str = "",
    ) -> Row:
        if sense not in ("<=", ">=", "="):
            raise ValueError(f"bad sense {sense!r}")
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        merged: dict[int, int] = {}
        for j, a in items:
            if a != int(a):
                raise ValueError("coefficients must be integers")
            merged[j] = merged.get(j, 0) + int(a)
        if int(rhs) != rhs:
            raise ValueError("right-hand sides must be integers")
        row = Row(
            [(j, a) for j, a in merged.items() if a],
            sense,
            int(rhs),
            name or f"c{len(self.rows) + 1}",
            family,
        )
        self.rows.append(row)
        return row

    def fix(self, j: int, value: int) -> None:
        if value not in (0, 1):
            raise ValueError("binary variables can only be fixed to 0 or 1")
        if self.fixed.get(j, value) != value:
            raise ValueError(f"conflicting fixings for {self.names[j]}")
        self.fixed[j] = value

    def objective_value(self, values) -> int:
        return sum(a * values[j] for j, a in self.objective.items())

    def violations(self, values) -> list[str]:
        """Names of rows (and fixings) that ``values`` breaks, exactly."""
        bad = []
        for j, v in enumerate(values):
            if v not in (0, 1):
                bad.append(f"{self.names[j]} not binary")
        for j, v in self.fixed.items():
            if values[j] != v:
                bad.append(f"{self.names[j]} fixed to {v}")
        for row in self.rows:
            lhs = sum(a * values[j] for j, a in row.coeffs)
            if row.sense == "<=" and lhs > row.rhs:
                bad.append(row.name)
            elif row.sense == ">=" and lhs < row.rhs:
                bad.append(row.name)
            elif row.sense == "=" and lhs != row.rhs:
                bad.append(row.name)
        return bad

    def row_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for row in self.rows:
            out[row.family] = out.get(row.family, 0) + 1
        return out


# ---------------------------------------------------------------------------
# LP format


def _terms(coeffs, names) -> list[str]:
    out = []
    for i, (j, a) in enumerate(coeffs):
        sign = "-" if a < 0 else "+"
        mag = abs(a)
        body = names[j] if mag == 1 else f"{mag} {names[j]}"
        if i == 0:
            out.append(body if a > 0 else f"- {body}")
        else:
            out.append(f"{sign} {body}")
    return out


def _wrap(head: str, terms: list[str], tail: str = "", per_line: int = 8) -> list[str]:
    lines = []
    for i in range(0, max(len(terms), 1), per_line):
        chunk = " ".join(terms[i:i + per_line])
        lines.append(("" if i else head) + chunk)
    lines[0] = " " + lines[0]
    for i in range(1, len(lines)):
        lines[i] = "   " + lines[i]
    lines[-1] += tail
    return lines


def write_lp(model: NeutralModel) -> str:
    """Render ``model`` in CPLEX LP format.

    Fixed variables appear in ``Bounds`` as ``name = value``; every variable
    is declared in ``Binary``. A model without objective terms gets the
    objective ``0 <first variable>``, which mainstream readers accept.
    """
    names = model.names
    out = ["\\ generated by strong_rainbow", "Minimize"]
    obj = sorted(model.objective.items())
    if obj:
        out.extend(_wrap("obj: ", _terms(obj, names)))
    elif names:
        out.append(f" obj: 0 {names[0]}")
    else:
        out.append(" obj:")
    out.append("Subject To")
    for row in model.rows:
        terms = _terms(row.coeffs, names) or [f"0 {names[0]}"]
        op = "=" if row.sense == "=" else row.sense
        out.extend(_wrap(f"{row.name}: ", terms, f" {op} {row.rhs}"))
    if model.fixed:
        out.append("Bounds")
        for j in sorted(model.fixed):
            out.append(f" {names[j]} = {model.fixed[j]}")
    if names:
        out.append("Binary")
        for i in range(0, len(names), 10):
            out.append(" " + " ".join(names[i:i + 10]))
    out.append("End")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# solution files

_STATUS_WORDS = [
    ("integer infeasible", Status.INFEASIBLE),
    ("infeasible", Status.INFEASIBLE),
    ("stopped on time", Status.TIME_LIMIT),
    ("time limit", Status.TIME_LIMIT),
    ("optimal", Status.OPTIMAL),
    ("feasible", Status.FEASIBLE),
    ("stopped", Status.TIME_LIMIT),
]


def _status_from_text(text: str) -> Status | None:
    low = text.strip().lower()
    for word, st in _STATUS_WORDS:
        if word in low:
            return st
    return None


def parse_solution(text: str) -> tuple[Status | None, dict[str, float]]:
    """Read a solution file into ``(status, {variable: value})``.

    Understands the plain format (optional ``status: <word>`` line followed
    by ``name value`` lines), CBC's ``solu`` output, and HiGHS'
    ``--solution_file`` output.
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    status = None
    values: dict[str, float] = {}
    if not lines:
        return None, values

    first = lines[0].strip()
    if first.lower() == "model status" and len(lines) > 1:
        # HiGHS: status on line 2, then "# Columns N" followed by name/value
        status = _status_from_text(lines[1])
        in_cols = False
        for ln in lines[2:]:
            s = ln.strip()
            if s.startswith("#"):
                in_cols = s.lower().startswith("# columns")
                continue
            if in_cols:
                tok = s.split()
                if len(tok) >= 2:
                    values[tok[0]] = float(tok[1])
        return status, values

    body = lines
    if " - objective value" in first.lower() or first.lower().startswith(
        ("optimal", "infeasible", "stopped", "integer infeasible", "unbounded")
    ):
        status = _status_from_text(first.split(" - ")[0])
        body = lines[1:]
        for ln in body:
            tok = ln.split()
            if tok and tok[0] == "**":
                tok = tok[1:]
            if len(tok) >= 3 and tok[0].isdigit():
                values[tok[1]] = float(tok[2])
        return status, values

    for ln in body:
        s = ln.strip()
        if s.startswith("#"):
            continue
        if ":" in s and s.split(":", 1)[0].strip().lower() in ("status", "objective"):
            key, val = s.split(":", 1)
            if key.strip().lower() == "status":
                status = _status_from_text(val) or Status.ERROR
            continue
        tok = s.split()
        if len(tok) == 2:
            values[tok[0]] = float(tok[1])
    return status, values


def _integral_values(model: NeutralModel, raw: Mapping[str, float]) -> list[int]:
    values = [0] * model.num_vars
    for name, val in raw.items():
        j = model.index.get(name)
        if j is None:
            continue
        r = round(val)
        if r not in (0, 1) or abs(val - r) > INT_TOL:
            raise BackendFailure(f"variable {name} = {val} is not binary")
        values[j] = int(r)
    return values


def _finish(model: NeutralModel, status: Status, values, bound=None, message="") -> SolveStatus:
    """Validate an assignment and package the status."""
    if values is None:
        return SolveStatus(status, bound=bound, message=message)
    bad = model.violations(values)
    if bad and status == Status.TIME_LIMIT:
        # a stopped solver may print a partial point; treat it as no incumbent
        return SolveStatus(Status.TIME_LIMIT, bound=bound, message="incumbent rejected")
    if bad:
        return SolveStatus(
            Status.ERROR,
            message=f"solution violates {len(bad)} rows, e.g. {bad[:3]}",
        )
    if status == Status.OPTIMAL and not model.objective:
        status = Status.FEASIBLE
    return SolveStatus(status, model.objective_value(values), values, bound, message)


# ---------------------------------------------------------------------------
# backends


class Backend:
    """Interface: ``solve`` takes a :class:`NeutralModel`; ``solve_ip`` a coloring model."""

    name = "backend"

    def solve(self, model: NeutralModel, time_limit: float | None = None) -> SolveStatus:
        raise NotImplementedError

    def solve_ip(self, ip, time_limit: float | None = None) -> SolveStatus:
        return self.solve(ip.model, time_limit)


class ScipyBackend(Backend):
    """HiGHS through :func:`scipy.optimize.milp`."""

    name = "scipy-highs"

    def __init__(self, verbose: bool = False):
        self.verbose = verbose

    def solve(self, model: NeutralModel, time_limit: float | None = None) -> SolveStatus:
        import numpy as np
        from scipy.optimize import Bounds, LinearConstraint, milp
        from scipy.sparse import csr_array

        nv = model.num_vars
        c = np.zeros(nv)
        for j, a in model.objective.items():
            c[j] = a
        lb = np.zeros(nv)
        ub = np.ones(nv)
        for j, v in model.fixed.items():
            lb[j] = ub[j] = v
        constraints = []
        if model.rows:
            data, rows, cols = [], [], []
            lo = np.empty(len(model.rows))
            hi = np.empty(len(model.rows))
            for i, row in enumerate(model.rows):
                for j, a in row.coeffs:
                    rows.append(i)
                    cols.append(j)
                    data.append(a)
                lo[i] = -np.inf if row.sense == "<=" else row.rhs
                hi[i] = np.inf if row.sense == ">=" else row.rhs
            A = csr_array((data, (rows, cols)), shape=(len(model.rows), nv))
            constraints.append(LinearConstraint(A, lo, hi))
        options = {"disp": self.verbose}
        if time_limit is not None:
            options["time_limit"] = max(float(time_limit), 0.01)
        try:
            res = milp(
                c,
                constraints=constraints,
                integrality=np.ones(nv),
                bounds=Bounds(lb, ub),
                options=options,
            )
        except Exception as exc:  # scipy raises ValueError on bad input
            raise BackendFailure(f"scipy milp failed: {exc}") from exc
        bound = getattr(res, "mip_dual_bound", None)
        if res.status == 2:
            return SolveStatus(Status.INFEASIBLE, message=res.message)
        if res.x is None:
            st = Status.TIME_LIMIT if res.status == 1 else Status.ERROR
            return SolveStatus(st, bound=bound, message=res.message)
        values = _integral_values(model, dict(zip(model.names, res.x)))
        st = Status.OPTIMAL if res.status == 0 else Status.TIME_LIMIT
        if res.status not in (0, 1):
            st = Status.ERROR
        return _finish(model, st, values, bound, res.message)


def bundled_cbc() -> str | None:
    """Path of a CBC executable: ``cbc`` on PATH, else the one shipped with PuLP."""
    exe = shutil.which("cbc")
    if exe:
        return exe
    try:
        import importlib.util

        spec = importlib.util.find_spec("pulp")
    except ImportError:  # pragma: no cover
        spec = None
    if spec is None or not spec.origin:
        return None
    cand = Path(spec.origin).parent / "solverdir" / "cbc" / "linux" / "i64" / "cbc"
    return str(cand) if cand.exists() and os.access(cand, os.X_OK) else None


#: Command templates for solvers with known file conventions.
TEMPLATES = {
    "cbc": "{cbc} {lp} sec {time} solve solu {sol}",
    "highs": "highs --model_file {lp} --solution_file {sol} --time_limit {time}",
}


def resolve_command(spec: str | None) -> str | None:
    """Turn a template name, a raw template or ``None`` (environment) into a template."""
    if spec is None:
        spec = os.environ.get(SOLVER_ENV)
    if not spec:
        return None
    template = TEMPLATES.get(spec.strip().lower(), spec)
    if "{cbc}" in template:
        exe = bundled_cbc()
        if exe is None:
            raise BackendFailure("no CBC executable found (install pulp or put cbc on PATH)")
        template = template.replace("{cbc}", shlex.quote(exe))
    if "{lp}" not in template or "{sol}" not in template:
        raise ValueError("solver command template needs {lp} and {sol} placeholders")
    return template


class ExternalBackend(Backend):
    """Run an external MIP solver on an LP file.

    ``command`` is a template with ``{lp}``, ``{sol}`` and optionally
    ``{time}`` placeholders, or one of the names in :data:`TEMPLATES`.
    """

    name = "external"

    def __init__(self, command: str | None = None, keep_dir: str | None = None):
        template = resolve_command(command)
        if template is None:
            raise BackendFailure(f"no solver command given and ${SOLVER_ENV} is unset")
        self.template = template
        self.keep_dir = keep_dir

    def solve(self, model: NeutralModel, time_limit: float | None = None) -> SolveStatus:
        with tempfile.TemporaryDirectory(prefix="srcmip-", dir=self.keep_dir) as tmp:
            lp = Path(tmp) / "model.lp"
            sol = Path(tmp) / "model.sol"
            lp.write_text(write_lp(model))
            tl = 1e7 if time_limit is None else max(1, math.ceil(time_limit))
            cmd = self.template.format(lp=shlex.quote(str(lp)), sol=shlex.quote(str(sol)), time=tl)
            try:
                proc = subprocess.run(
                    shlex.split(cmd),
                    capture_output=True,
                    text=True,
                    timeout=None if time_limit is None else time_limit + 30,
                )
            except FileNotFoundError as exc:
                raise BackendFailure(f"cannot start solver: {exc}") from exc
            except subprocess.TimeoutExpired:
                return SolveStatus(Status.TIME_LIMIT, message="solver process killed")
            if not sol.exists():
                st = _status_from_text(proc.stdout)
                if st == Status.INFEASIBLE:
                    return SolveStatus(Status.INFEASIBLE)
                return SolveStatus(
                    Status.ERROR,
                    message=f"no solution file (exit {proc.returncode}): {proc.stderr[-500:]}",
                )
            status, raw = parse_solution(sol.read_text())
        if status is None:
            status = _status_from_text(proc.stdout) or Status.ERROR
        if status == Status.INFEASIBLE:
            return SolveStatus(Status.INFEASIBLE)
        if status == Status.ERROR:
            return SolveStatus(Status.ERROR, message="unrecognized solver status")
        if status == Status.TIME_LIMIT and not raw:
            return SolveStatus(Status.TIME_LIMIT)
        try:
            values = _integral_values(model, raw)
        except BackendFailure as exc:
            if status == Status.TIME_LIMIT:
                return SolveStatus(Status.TIME_LIMIT, message=str(exc))
            return SolveStatus(Status.ERROR, message=str(exc))
        return _finish(model, status, values)


DEFAULT_EXHAUSTIVE_GUARD = 14


class ExhaustiveBackend(Backend):
    """Decide a coloring model by exhaustive search over colorings.

    Works on the graph, color budget, retained pairs and clique fixing of an
    :class:`~strong_rainbow.model.IpModel`; the LP rows are only used to
    validate the translated witness.
    """

    name = "exhaustive"

    def __init__(self, max_edges: int = DEFAULT_EXHAUSTIVE_GUARD):
        self.max_edges = max_edges

    def solve(self, model, time_limit=None):
        raise TypeError("the exhaustive backend needs the coloring model; use solve_ip")

    def solve_ip(self, ip, time_limit: float | None = None) -> SolveStatus:
        from .coloring import ColoringSearch

        g = ip.graph
        if g.m > self.max_edges:
            raise SizeGuardExceeded(f"m = {g.m} exceeds the exhaustive guard of {self.max_edges}")
        prefix = {e: i for i, e in enumerate(ip.fixed_clique, 1)}
        search = ColoringSearch(g, ip.pair_paths, prefix)
        deadline = None if time_limit is None else time.monotonic() + time_limit
        ks = range(max(1, len(prefix)), ip.K0 + 1) if ip.minimize else [ip.K0]
        try:
            for k in ks:
                found = search.run(k, deadline=deadline)
                if found is not None:
                    values = ip.values_from_coloring(found)
                    st = Status.OPTIMAL if ip.minimize else Status.FEASIBLE
                    return _finish(ip.model, st, values)
        except TimeLimitExceeded:
            return SolveStatus(Status.TIME_LIMIT)
        return SolveStatus(Status.INFEASIBLE)


def make_backend(kind: str = "auto", solver_cmd: str | None = None) -> Backend:
    """``auto`` picks the external solver when a command is configured, else scipy."""
    if kind == "auto":
        kind = "external" if (solver_cmd or os.environ.get(SOLVER_ENV)) else "scipy"
    if kind == "scipy":
        return ScipyBackend()
    if kind == "external":
        return ExternalBackend(solver_cmd)
    if kind == "exhaustive":
        return ExhaustiveBackend()
    raise ValueError(f"unknown backend {kind!r}")

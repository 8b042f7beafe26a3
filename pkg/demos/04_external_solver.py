"""Handing the model to an external MIP solver.

The model is written in CPLEX LP format; any solver that reads LP files and
writes a solution file can be plugged in through a command template with
{lp}, {sol} and {time} placeholders. "cbc" uses the CBC binary shipped with
PuLP (pip install pulp). Whatever comes back is re-checked row by row before
it is trusted.

Run: python demos/04_external_solver.py
"""
from strong_rainbow import build_model, solve, write_lp
from strong_rainbow.backends import ExternalBackend, bundled_cbc
from strong_rainbow.graph import complete_bipartite, path_graph

print(write_lp(build_model(path_graph(3), 2).model))

if bundled_cbc() is None:
    print("CBC not found; install pulp to run the rest of this demo")
else:
    rep = solve(complete_bipartite(2, 9), ExternalBackend("cbc"), method="bottom_up")
    print(f"CBC bottom-up on K_2,9: src={rep.src}, rounds={[r['status'] for r in rep.rounds]}")

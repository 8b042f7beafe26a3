"""From a quick upper bound to a proven optimum.

The randomized heuristic fixes one random shortest path per vertex pair and
colors edges greedily so those paths are rainbow. Its color count seeds the
color budget of the integer program; the bottom-up strategy instead starts
from the lower bound and raises the budget until the model is feasible.

Run: python demos/02_heuristic_then_exact.py
"""
from strong_rainbow import load_karate, run_heuristic, solve, verify_strong_rainbow
from strong_rainbow.graph import complete_bipartite

g = load_karate()
for seed in range(3):
    res = run_heuristic(g, seed=seed)
    print(f"heuristic seed {seed}: {res.best} colors, valid={bool(verify_strong_rainbow(g, res.coloring))}")

print()
for method in ("naive", "enhanced", "bottom_up"):
    rep = solve(g, method=method, seed=0)
    print(f"{method:>9}: src={rep.src} in {rep.total_time:.2f}s "
          f"(model {rep.num_vars} vars / {rep.num_rows} rows, K0={rep.K0})")

rep = solve(complete_bipartite(2, 9), method="bottom_up")
print("\nK_2,9 bottom-up rounds:")
for r in rep.rounds:
    print(f"  K0={r['K0']}: {r['status']}")
print(f"src(K_2,9) = {rep.src}")

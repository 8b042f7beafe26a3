"""Lower bounds from separating edges.

Two edges that both lie on every shortest path between some vertex pair can
never share a color. Collecting those conflicts gives the auxiliary graph H,
and a largest clique of H is a lower bound on src(G) next to the diameter.

Run: python demos/01_lower_bounds.py
"""
from strong_rainbow import build_aux_graph, load_karate, lower_bound, max_clique
from strong_rainbow.graph import complete_bipartite, k4_chain, star_graph

karate = load_karate()
h = build_aux_graph(karate)
lb = lower_bound(karate, h)
print(f"karate: n={karate.n} m={karate.m}")
print(f"  H has {h.num_edges} edges (density {100 * h.density:.2f}%)")
print(f"  diameter {lb.diameter}, largest H-clique {lb.omega_prime}, so src >= {lb.lb}")
for e in lb.clique.vertices:
    u, v = karate.edges[e]
    print(f"    clique edge {karate.labels[u]}-{karate.labels[v]}")

# For a star every pair of leaves is joined by one path through the centre,
# so all edges conflict pairwise and the clique bound is exact.
star = star_graph(6)
print(f"\nK_1,6: omega' = {max_clique(build_aux_graph(star)).size} (= number of edges)")

# Chains of K4 blocks: every non-adjacent pair has two edge-disjoint shortest
# paths, H has no edges, and the diameter is the only useful bound.
for k in (1, 2, 3):
    b = lower_bound(k4_chain(k))
    print(f"K4 chain k={k}: diam {b.diameter}, omega' {b.omega_prime}")

# Complete bipartite K_2,t: H is empty, the bound is the diameter 2, while
# src grows like the square root of t.
for t in (4, 9, 16):
    print(f"K_2,{t}: lower bound {lower_bound(complete_bipartite(2, t)).lb}")

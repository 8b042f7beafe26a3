"""Random instance families and their statistics.

Generates bipartite Erdos-Renyi graphs with two vertices on one side, prints
the statistics row for each (lower-bound parts, density of H, how many
shortest paths survive pair elimination) and solves them with a short time
limit, rendering unfinished solves as "[lb,ub]".

Run: python demos/03_random_families.py [time_limit_seconds]
"""
import sys

from strong_rainbow import solve
from strong_rainbow.generators import GenSpec
from strong_rainbow.model import csv_header

limit = float(sys.argv[1]) if len(sys.argv) > 1 else 20.0
print(csv_header(), end="")
for p in (0.80, 0.95):
    for i in range(3):
        g = GenSpec("BER", (2, 25, p), seed=0, index=i).generate()
        rep = solve(g, method="enhanced", seed=0, time_limit=limit)
        print(rep.csv_row(), end="")

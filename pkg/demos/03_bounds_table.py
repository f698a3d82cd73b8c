# Compare the landmark count with Babai's bounds, plus greedy and exact baselines on tiny graphs.

# %%
from bilmetric import GraphSpec, babai_general, babai_strong, exact_min_resolving, greedy_resolving, theorem_bound
from bilmetric.bounds import compare_report, report_csv

print(theorem_bound(2, 4, 4), babai_general(2, 4, 4))
print(babai_strong(2, 2, 2))  # (bound, size of largest rank class)

# %%
grid = [(q, n, d) for q in (2, 3) for n in range(2, 7) for d in range(2, n + 1)]
rows = compare_report(grid)
print(report_csv(rows))
print("theorem smallest in", sum(r.best == "theorem" for r in rows), "of", len(rows), "rows")

# %%
# K4 = H_2(2,1) needs 3 landmarks; H_2(2,2) is small enough to search exactly
print(exact_min_resolving(GraphSpec.of(2, 2, 1), k_max=4))
g = GraphSpec.of(2, 2, 2)
print("greedy", len(greedy_resolving(g)), "exact", exact_min_resolving(g, k_max=6), "construction", theorem_bound(2, 2, 2))

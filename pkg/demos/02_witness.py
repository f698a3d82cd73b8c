# Why the construction works: for any two vertices, find the landmark that tells them apart.

# %%
import itertools
from collections import Counter

from bilmetric import GraphSpec, build_landmarks, find_separating_landmark
from bilmetric.bilform import distance

g = GraphSpec.of(2, 3, 2)
M, ctx = build_landmarks(g)

a, b = g.vertex(5), g.vertex(40)
w = find_separating_landmark(a, b, ctx)
print("block", w.block, "coords", w.coords, "branch", w.branch)
print("dim(A & U), dim(B & U) =", w.dims)
print("distances:", distance(g, a, w.landmark), distance(g, b, w.landmark))

# %%
# tally which argument applies across all pairs
tally = Counter()
for i, j in itertools.combinations(range(g.num_vertices), 2):
    tally[find_separating_landmark(g.vertex(i), g.vertex(j), ctx).branch] += 1
print(dict(tally))

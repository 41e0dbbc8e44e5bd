"""Fuzzy maps as pairs of real functions.

A fuzzy map f: K -> E1 becomes the pair (f1, f2) of its lower and upper
endpoint functions on [0, 1] x K.  The map f -> (f1, f2) preserves
distances and nonnegative combinations.
"""

import numpy as np

from levelfuzzy import bivariate as bv
from levelfuzzy import fuzzy, fuzzymap
from levelfuzzy.domain import IntervalGrid
from levelfuzzy.fuzzymap import FuzzyMap

grid = IntervalGrid.uniform(0.0, 1.0, 11)

# a moving triangle and a widening trapezoid
f = FuzzyMap(grid, {t: fuzzy.triangular(t, t + 1, t + 2) for t in grid.points})
g = FuzzyMap(grid, {t: fuzzy.trapezoidal(-t, 0, 1, 1 + 2 * t) for t in grid.points})

P, Q = fuzzymap.embed(f), fuzzymap.embed(g)
print("f1(0.5, 0.3) =", bv.evaluate(P.first, 0.5, 0.3), " f2(0.5, 0.3) =", bv.evaluate(P.second, 0.5, 0.3))
print("first component in the nondecreasing cone:", P.first.in_nd_cone)
print("second component in the nonincreasing cone:", P.second.in_ni_cone)

print("\nD(f, g)               =", fuzzymap.metric_D(f, g))
print("product distance      =", bv.product_distance(P, Q))
print("isometry residual     =", fuzzymap.isometry_residual(f, g))

for mu, eta in [(1.0, 0.0), (2.0, 3.0), (0.5, 4.5)]:
    print(f"cone residual mu={mu}, eta={eta}: {fuzzymap.cone_residual(mu, f, eta, g)}")

# negative coefficients leave the cone: -f has swapped endpoints
print("\nembed(-1 * f(t)) lower at lam=0:", fuzzy.scale(-1.0, f(0.0)).lower.values[0])

# random maps for good measure
rng = np.random.default_rng(0)
worst = 0.0
for _ in range(50):
    vals = {}
    for t in grid.points:
        a, b, c = np.sort(rng.uniform(-3, 3, size=3))
        vals[t] = fuzzy.triangular(a, b, c)
    h = FuzzyMap(grid, vals)
    worst = max(worst, fuzzymap.isometry_residual(f, h))
print("worst isometry residual on 50 random maps:", worst)

print("\nimage conditions of embed(f):", fuzzymap.check_image_conditions(P).verdict.value)
print("round trip equals f:", fuzzymap.unembed(P) == f)

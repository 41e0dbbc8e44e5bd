"""Joint continuity, boundedness and why monotonicity matters.

Functions on [0, 1] x K that are monotone in lam, left continuous in lam
and continuous in t are jointly left continuous and bounded.  Dropping
monotonicity breaks both, and the class is not closed under sums.
"""

import numpy as np

from levelfuzzy import bivariate as bv
from levelfuzzy import fixtures
from levelfuzzy import regulated as rg
from levelfuzzy.bivariate import LCCFunction
from levelfuzzy.domain import IntervalGrid
from levelfuzzy.regulated import Direction

grid = IntervalGrid.uniform(0.0, 1.0, 21)
G = rg.validate([(0, 0), (0.4, 0.2, 0.5), (0.7, 0.6), (1, 1)], Direction.NONDECREASING)
F = LCCFunction(grid, {t: rg.add(rg.scale(1 + 0.3 * t, G), rg.constant(0.1 * np.sin(3 * t))) for t in grid.points})

for point in [(0.4, 0.5), (0.7, 0.0), (1.0, 1.0)]:
    r = bv.check_joint_left_continuity(F, point)
    print(f"joint left continuity at {point}: {r.verdict.value}  {r.details['passed_eps']}")
print("full membership check:", bv.check_membership(F).verdict.value)
print("sup |F| =", bv.sup_bound(F))

# separately continuous, not jointly: h(lam, t) = x t / (x^2 + t^2), x = lam - 1/2
h = fixtures.example_separately_not_jointly()
r = bv.check_joint_left_continuity(h, (0.5, 0.0), eps_list=(0.25,))
print(f"\nh at (1/2, 0): {r.verdict.value}, eps {r.eps}")
for w, again in zip(r.witness, bv.reevaluate_witness(h, r)):
    print(f"  lam = {w.lam:.3e}, t = {w.t:.3e}: residual {w.residual:.4f} (re-evaluated {again:.4f})")
mono, _ = bv.check_monotone_first(h)
print("h monotone in lam?", mono.verdict.value)
for w in mono.witness:
    print(f"  lam - 1/2 = {w.lam - 0.5:+.3e}, t = {w.t:.3e}: h = {bv.evaluate(h, w.lam, w.t):+.4f}")

# spikes of height n on a convergent sequence: every column is fine, the sup is not
for N in (1, 5, 20, 100):
    value, attained, where = bv.sup_bound(fixtures.example_alexandroff_unbounded(N))
    print(f"spikes a1..a{N}: sup {value} at {where}, attained {attained}")

A, B = fixtures.example_sum_nonclosure()
S = bv.add(A, B)
print("\nA nondecreasing:", A.in_nd_cone, " B nonincreasing:", B.in_ni_cone)
print("A + B at lam = 0, 1/2, 1:", [bv.evaluate(S, x, 0.0) for x in (0.0, 0.5, 1.0)])
print("A + B monotone?", bv.check_monotone_first(S)[0].verdict.value)

"""Level convergence without supremum convergence.

The map t -> f(t) has a constant upper endpoint 1 and lower endpoint
0 for lam <= 1/2, (lam - 1/2)^t above.  At t = 0 the lower endpoint jumps
from 0 to 1 at lam = 1/2.  Every fixed level set converges as t -> 0, but
the supremum distance stays 1 because the jump sits in a right limit.
"""

import numpy as np

from levelfuzzy import fixtures, fuzzy, fuzzymap, topology
from levelfuzzy import regulated as rg
from levelfuzzy.domain import ConvergentSequence

f = fixtures.example_level_not_dinf(ConvergentSequence.harmonic(50))
u0 = f(0.0)

print("lower endpoint of f(t) at a few levels")
lams = np.array([0.25, 0.5, 0.5 + 1e-6, 0.6, 0.75, 1.0])
print("   t      " + "  ".join(f"{x:>10.6f}" for x in lams))
for t in (1.0, 0.5, 0.1, 0.02, 0.0):
    print(f"{t:6.2f}    " + "  ".join(f"{v:10.6f}" for v in rg.evaluate(f(t).lower, lams)))

# the right limit at 1/2 is where the two topologies part ways
for t in (1.0, 0.02, 0.0):
    print(f"right limit of the lower endpoint at 1/2, t = {t}: {rg.right_limit(f(t).lower, 0.5)}")

print("\nd_infinity(f(t), f(0)) along the domain tail")
for t in f.domain.terms[-5:]:
    r = rg.sup_distance_detail(f(t).lower, u0.lower)
    print(f"  t = {t:.4f}: {r.value}  (at lam = {r.lam}, {r.kind})")

level = fuzzymap.classify_continuity(f, 0.0, "level", tol=1e-3)
dinf = fuzzymap.classify_continuity(f, 0.0, "dinf", tol=1e-3)
print(f"\nlevel continuity at 0: {level.verdict.value} ({level.resolution})")
print(f"sup continuity at 0:   {dinf.verdict.value}, tail residuals {dinf.details['tail_residuals']}")

# the same story for the sequence f(1/k) with very large k
seq, target = fixtures.level_not_dinf_sequence()
reports = topology.compare_convergence(seq, target, tol=1e-3)
print(f"\nsequence f(1/k), k up to 1e8: level {reports['level'].converges}, sup {reports['dinf'].converges}")
print("level residuals:", [f"{x:.2e}" for x in reports["level"].residuals])
print("sup residuals:  ", reports["dinf"].residuals)

# a fixed level is only close once t is tiny: (1/4)^t -> 1 slowly
for t in (1e-2, 1e-4, 1e-6):
    print(f"  t = {t:g}: level-3/4 Hausdorff distance {fuzzy.d_hausdorff_at(f.at(t), u0, 0.75):.2e}")

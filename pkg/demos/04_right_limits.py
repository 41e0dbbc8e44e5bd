"""Right limits in lam, and swapping the order of limits.

For a fixed t, lam -> F(lam+, t) is itself right continuous.  Moving t
towards t0 preserves right limits only when F(., t) -> F(., t0) uniformly
in lam.  The level-but-not-sup-continuous map shows the gap.
"""

from levelfuzzy import bivariate as bv
from levelfuzzy import fixtures, fuzzymap
from levelfuzzy.domain import ConvergentSequence

P = fuzzymap.rep(fixtures.example_level_not_dinf(ConvergentSequence.harmonic(50)))
f1 = P.first

r = bv.check_right_limit_lemma1(f1, 0.0, 0.5)
print("right limits of f1(., 0) as lam decreases to 1/2:", r.verdict.value, "limit", r.reference["value"])
r = bv.check_right_limit_lemma1(f1, 0.02, 0.5)
print("same for t = 0.02:", r.verdict.value, "limit", r.reference["value"])

r = bv.check_right_limit_lemma2(f1, 0.0)
c = r.details["conclusion"]
print(f"\nuniform premise at t0 = 0: {r.verdict.value}, sup residuals {r.details['premise_residuals']}")
print(f"at lam0 = {c['lambda0']}: f1(lam0+, {c['t']}) = {c['right_limit_at_t']} but f1(lam0+, 0) = {c['right_limit_at_t0']}")

r = bv.check_joint_right_limit(f1, (0.5, 0.0), eps_list=(0.25,))
print(f"\njoint right limit at (1/2, 0): {r.verdict.value}")
# right-limit rows sit at lam0 itself; value rows strictly to its right
for kind in ("right_limit", "value"):
    for w in [w for w in r.witness if w.kind == kind][:3]:
        print(f"  {kind:11s} lam - 1/2 = {w.lam - 0.5:.2e}, t = {w.t:.3g}: |f1 - 1| = {w.residual:.4f}")

# the upper endpoint is constant, so everything passes there
f2 = P.second
print("\nf2 second check:", bv.check_right_limit_lemma2(f2, 0.0).verdict.value)
print("f2 joint right limit:", bv.check_joint_right_limit(f2, (0.5, 0.0)).verdict.value)

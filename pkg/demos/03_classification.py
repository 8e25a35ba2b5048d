"""
Which existence hypotheses does a nonlinearity meet?
====================================================

The classifier probes ratios of the transformed nonlinearity at the origin
and at -inf and reports a verdict for each hypothesis.
"""
from math import pi

from hessian_kk import classification_report, lambda1_ball
from hessian_kk.pairs import exp_critical_pair, power_exp_pair

# %%
# A power-type nonlinearity in dimension 5 with k = 2.  The critical
# exponent for this pair of (n, k) is 15.
lam = lambda1_ball(5, 2).value
print(f"lambda_1(5, 2) = {lam:.6f}")
for p in (5.0, 14.0):
    rep = classification_report(power_exp_pair(5, 2, p), lam1=lam)
    print(f"\np = {p:g}")
    for name, label in sorted(rep["conditions"].items()):
        print(f"  {name:28s} {label}")

# %%
# In the borderline case n = 2k the growth is exponential.  This pair has
# critical exponent 4 pi and a constant b0 = 0.5 in front.
rep = classification_report(exp_critical_pair(2, 1, 4 * pi, b0=0.5, m=-1.0), lam1=5.7832)
print("\ncritical exponential pair")
for name, label in sorted(rep["conditions"].items()):
    print(f"  {name:28s} {label}")

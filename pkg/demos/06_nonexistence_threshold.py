"""
The non-existence threshold
===========================

For n > 2k a Pohozaev-type density decides non-existence in star-shaped
domains.  For h = (-v)^p it changes sign exactly at p = (n+2)k/(n-2k) - 1.
"""
from hessian_kk import k_star, nonexistence_scan
from hessian_kk.pairs import power_exp_pair

n, k = 5, 2
print("critical exponent k* =", k_star(n, k))
for p in (5, 14, 15):
    v = nonexistence_scan(power_exp_pair(n, k, p))
    print(f"p = {p:2d}: {v.label:22s} smallest density/scale = {v.margin: .3e}")

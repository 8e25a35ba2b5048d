"""
First eigenvalues on the unit ball
==================================

Two eigenvalue notions appear: lambda_1 of the k-Hessian operator, and
Lambda_1, the infimum of a Rayleigh-type quotient over radial functions.
For the Laplacian in the plane both equal j_{0,1}^2.
"""
from scipy.special import jn_zeros

from hessian_kk import big_lambda1, lambda1_ball

print(f"j01^2          = {jn_zeros(0, 1)[0] ** 2:.10f}")
lam = lambda1_ball(2, 1)
Lam = big_lambda1(2, 1)
print(f"lambda_1(2, 1) = {lam.value:.10f}  (cross-check by {lam.cross_method}: {lam.cross_check:.10f})")
print(f"Lambda_1(2, 1) = {Lam.value:.10f}  (cross-check by {Lam.cross_method}: {Lam.cross_check:.10f})")

# %%
# For k > 1 the two numbers come from different problems but are both
# computed with two independent methods.
L4 = big_lambda1(4, 2)
print(f"Lambda_1(4, 2) = {L4.value:.8f}, methods agree to {L4.agreement:.1e}")

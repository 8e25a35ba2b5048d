"""
Hessian sums under a change of variables
========================================

Take a polynomial field u and a smooth increasing map A.  The k-th Hessian
sum of the composite A(u) splits into a pure second-order part and a part
built from the gradient:

    S_k[A(u)] = A'^k S_k[u] + A'^(k-1) A'' H_k[u].

We check that numerically on random fields.
"""
import numpy as np

from hessian_kk import fields, minors

rng = np.random.default_rng(0)

# %%
# One field in three dimensions, evaluated at a random point.
u = fields.random_polynomial_field(3, 3, rng, scale=0.5)
x = rng.uniform(-1, 1, 3)
print("u(x)     =", u.func(x))
print("grad u   =", fields.gradient(u, x))

# %%
# The two sums at that point, for every order k.
for k in (1, 2, 3):
    print(f"k={k}: S_k = {fields.sk_of_field(u, x, k): .6f}   H_k = {fields.hk_of_field(u, x, k): .6f}")

# %%
# H_1 is just the squared gradient length.
g = fields.gradient(u, x)
print("H_1 - |grad u|^2 =", minors.h_k(g, fields.hessian(u, x), 1) - g @ g)

# %%
# Residual of the identity for the cubic map and an exponential map.
for name, A in (("cubic", fields.cubic_map()), ("exp", fields.exp_map(1.3))):
    res = max(fields.lemma1_residual(A, u, x, k, relative=True) for k in (1, 2, 3))
    print(f"{name:5s} map: worst relative residual {res:.2e}")

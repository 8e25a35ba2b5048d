"""
A radial solution on the unit ball
==================================

We solve the transformed Dirichlet problem for radial v by shooting, map it
back with u = A_g(v), and check the original equation with the gradient
term at a handful of radii.
"""
import numpy as np

from hessian_kk import solve_transformed_and_map
from hessian_kk.pairs import power_exp_pair

out = solve_transformed_and_map(power_exp_pair(5, 2, 5.0), radii=np.linspace(0.1, 0.9, 9))
v, u, rep = out["v"], out["u"], out["report"]

# %%
# Values at the centre, and the profile at a few radii.
print(f"v(0) = {rep['center_v']:.8f}    u(0) = {rep['center_u']:.8f}")
r = np.linspace(0, 1, 6)
for ri, vi, ui in zip(r, v.u(r), u.u(r)):
    print(f"  r = {ri:.1f}   v = {vi: .6f}   u = {ui: .6f}")

# %%
# Residual of the original equation.
print(f"max residual of the original equation: {rep['max_residual']:.2e}")

"""Numerical toolkit for k-Hessian equations with a gradient term.

The equation ``S_k[u] = g(u) H_k[u] + f(x, u)`` in the unit ball with zero
boundary values is reduced, through the monotone change of variables
``v = A_g(u)``, to the gradient-free problem ``S_k[v] = h(x, v)``.  The
package provides

* principal-minor sums ``S_k`` and the gradient term ``H_k`` (:mod:`.minors`),
* field derivatives and the composition identity (:mod:`.fields`),
* the change of variables and the transformed nonlinearity (:mod:`.transform`),
* growth classification of ``(f, g)`` pairs (:mod:`.growth`),
* radial Dirichlet and eigenvalue solvers (:mod:`.radial`),
* sign scans of the non-existence density (:mod:`.pohozaev`),
* a command-line front end (:mod:`.cli`).
"""
from .errors import (
    AdmissibilityError,
    ConfigError,
    ConvergenceError,
    DomainError,
    HessianKKError,
    NumericError,
    OutOfRangeError,
    OverflowCapError,
)
from .expr import ExpressionError, parse as parse_expression
from .minors import column_replace, h_k, principal_index_sets, s_k, submatrix
from .fields import (
    RadialFunction,
    ScalarField,
    ScalarMap1D,
    compose,
    cubic_map,
    exp_map,
    gradient,
    hessian,
    hk_of_field,
    lemma1_residual,
    polynomial_field,
    radial_field,
    random_polynomial_field,
    sk_of_field,
)
from .pairs import (
    GrowthPair,
    const_g,
    exp_critical_pair,
    expression_pair,
    linear_g,
    pair_from_config,
    poly_g,
    power_exp_pair,
    power_pair,
    zero_pair,
)
from .transform import (
    Transform,
    a_g,
    a_g_inv,
    big_g,
    get_transform,
    ode_residual,
    transformed_h,
    verify_equivalence,
)
from .radial import (
    EigenResult,
    RadialProblem,
    RadialProfile,
    big_lambda1,
    lambda1_ball,
    radial_sk,
    solve_dirichlet,
    solve_transformed_and_map,
)
from .growth import (
    ARParams,
    CriticalGrowth,
    LimitProbe,
    Verdict,
    alpha_n,
    check_ar,
    check_subcritical_sobolev,
    classification_report,
    classify_infinity,
    classify_origin,
    constants,
    exp_growth_type,
    k_star,
    minmax_check,
    minmax_threshold,
    origin_limits,
    ratio_infinity,
)
from .pohozaev import NonexistenceDensity, density, density_scan, nonexistence_scan

__version__ = "0.1.0"

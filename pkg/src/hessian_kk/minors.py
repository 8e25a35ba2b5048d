"""Principal minors, the k-Hessian sum S_k and the gradient term H_k.

Index sets are 0-based tuples, the usual Python convention; the set
``(0, 2)`` selects the first and third rows/columns.
"""
from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import DomainError

__all__ = [
    "as_symmetric",
    "principal_index_sets",
    "submatrix",
    "column_replace",
    "det",
    "s_k",
    "h_k",
]


def as_symmetric(A, atol=1e-12):
    """Return `A` as a float array after checking it is square and symmetric."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise DomainError(f"expected a non-empty square matrix, got shape {A.shape}")
    scale = max(1.0, float(np.max(np.abs(A))))
    if not np.allclose(A, A.T, rtol=0.0, atol=atol * scale):
        raise DomainError("matrix is not symmetric")
    return A


def _check_order(n, k):
    if not (isinstance(k, (int, np.integer)) and 1 <= k <= n):
        raise DomainError(f"order k must satisfy 1 <= k <= n={n}, got {k!r}")


@lru_cache(maxsize=None)
def _index_sets(n, k):
    return tuple(combinations(range(n), k))


def principal_index_sets(n, k):
    """All k-element index sets of ``{0, ..., n-1}`` in lexicographic order.

    >>> principal_index_sets(3, 2)
    [(0, 1), (0, 2), (1, 2)]
    """
    if not (isinstance(n, (int, np.integer)) and n >= 1):
        raise DomainError(f"dimension must be a positive integer, got {n!r}")
    _check_order(n, k)
    return list(_index_sets(int(n), int(k)))


def submatrix(A, alpha):
    """The principal submatrix ``A[alpha, alpha]``."""
    A = np.asarray(A, dtype=float)
    idx = np.asarray(alpha, dtype=int)
    n = A.shape[0]
    if idx.ndim != 1 or idx.size == 0:
        raise DomainError("index set must be a non-empty 1-d sequence")
    if np.any(idx < 0) or np.any(idx >= n) or np.any(np.diff(idx) <= 0):
        raise DomainError(f"index set {tuple(alpha)} is not strictly increasing within 0..{n - 1}")
    return A[np.ix_(idx, idx)]


def column_replace(A, t, b):
    """Copy of the square matrix `A` whose column `t` (0-based) is `b`."""
    A = np.array(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {A.shape}")
    if b.shape != (A.shape[0],):
        raise DomainError(f"replacement column has shape {b.shape}, expected ({A.shape[0]},)")
    if not 0 <= t < A.shape[0]:
        raise DomainError(f"column index {t} out of range for size {A.shape[0]}")
    A[:, t] = b
    return A


def det(M):
    """Determinant with cofactor formulas up to 3x3 and LU beyond."""
    m = M.shape[0]
    if m == 1:
        return float(M[0, 0])
    if m == 2:
        return float(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0])
    if m == 3:
        return float(
            M[0, 0] * (M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
            - M[0, 1] * (M[1, 0] * M[2, 2] - M[1, 2] * M[2, 0])
            + M[0, 2] * (M[1, 0] * M[2, 1] - M[1, 1] * M[2, 0])
        )
    # LAPACK getrf: LU with partial pivoting
    return float(np.linalg.det(M))


def s_k(A, k):
    """Sum of all k x k principal minors of the symmetric matrix `A`.

    ``s_k(A, 1)`` is the trace and ``s_k(A, n)`` the determinant.
    """
    A = as_symmetric(A)
    n = A.shape[0]
    _check_order(n, k)
    return float(sum(det(A[np.ix_(a, a)]) for a in _index_sets(n, k)))


def h_k(grad, hess, k):
    r"""The gradient-type term built from column-replaced principal minors.

    For each k-element index set ``a`` and each position ``t`` in it, column
    ``t`` of ``hess[a, a]`` is replaced by ``grad[a[t]] * grad[a]`` and the
    determinant taken; `h_k` is the sum over all ``(a, t)``.  For ``k = 1``
    this reduces to :math:`|\nabla u|^2`.

    Parameters
    ----------
    grad : array_like, shape (n,)
        Gradient of ``u`` at the point.
    hess : array_like, shape (n, n)
        Hessian of ``u`` at the point.
    k : int
        Order, ``1 <= k <= n``.
    """
    grad = np.asarray(grad, dtype=float)
    hess = as_symmetric(hess)
    n = hess.shape[0]
    if grad.shape != (n,):
        raise DomainError(f"gradient has shape {grad.shape}, Hessian is {n}x{n}")
    _check_order(n, k)
    total = 0.0
    for a in _index_sets(n, k):
        block = hess[np.ix_(a, a)]
        ga = grad[list(a)]
        for t in range(k):
            M = block.copy()
            M[:, t] = ga[t] * ga
            total += det(M)
    return float(total)

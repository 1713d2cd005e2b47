"""Dense real linear-algebra substrate.

Everything here works on plain ``numpy.ndarray`` (float64). Inputs are
validated for shape and finiteness; outputs are fresh arrays.

The NNLS inner loop lives in a compiled kernel (``_ckernels``) when it was
built, otherwise in ``_pykernels``. Set ``FUSIONSCALE_PURE=1`` before import to
force the pure-Python path.
"""

import math
import os
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from . import _pykernels
from .errors import (
    DimensionMismatch,
    EmptyInput,
    Infeasible,
    IterationLimit,
    NonFinite,
    NotSquare,
    NotSymmetric,
)

if os.environ.get("FUSIONSCALE_PURE") == "1":
    _kernels = _pykernels
else:
    try:
        from . import _ckernels as _kernels
    except ImportError:  # extension not built
        _kernels = _pykernels

BACKEND = "compiled" if _kernels is not _pykernels else "python"

DEFAULT_RANK_TOL = 1e-10
DEFAULT_POSITIVITY_EPS = 1e-8


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical thresholds used across the package.

    residual_tol
        Frobenius-norm feasibility tolerance for ``sum c_i P_i = I``.
    rank_tol
        Relative singular-value cutoff (``rank_tol * sigma_max``).
    positivity_eps
        Smallest coefficient that counts as strictly positive.
    """

    residual_tol: float
    rank_tol: float = DEFAULT_RANK_TOL
    positivity_eps: float = DEFAULT_POSITIVITY_EPS

    def __post_init__(self):
        for name in ("residual_tol", "rank_tol", "positivity_eps"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be a positive finite number, got {v!r}")

    @classmethod
    def for_dim(cls, n, residual_tol=None, **kw):
        """Defaults for ambient dimension ``n`` (``residual_tol = 1e-9 * n``)."""
        if residual_tol is None:
            residual_tol = 1e-9 * n
        return cls(residual_tol=residual_tol, **kw)


def as_matrix(M, name="matrix"):
    A = np.array(M, dtype=float)
    if A.ndim != 2 or A.shape[0] == 0 or A.shape[1] == 0:
        raise DimensionMismatch(f"{name} must be a nonempty 2-D array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NonFinite(f"{name} has NaN or Inf entries")
    return A


def as_vector(v, name="vector"):
    x = np.array(v, dtype=float)
    if x.ndim != 1:
        raise DimensionMismatch(f"{name} must be 1-D, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise NonFinite(f"{name} has NaN or Inf entries")
    return x


def numerical_rank(M, rank_tol=DEFAULT_RANK_TOL):
    s = np.linalg.svd(as_matrix(M), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rank_tol * s[0]))


def _fix_signs(Q):
    # largest-magnitude entry of each column made positive
    idx = np.argmax(np.abs(Q), axis=0)
    signs = np.sign(Q[idx, np.arange(Q.shape[1])])
    signs[signs == 0] = 1.0
    return Q * signs


def orthonormalize(vectors, rank_tol=DEFAULT_RANK_TOL):
    """Orthonormal basis (as columns) of the span of ``vectors``.

    ``vectors`` is a sequence of ambient vectors, i.e. the rows of the
    returned basis's transpose. Linearly independent input keeps the
    Gram-Schmidt orientation (the first basis column is parallel to the first
    vector); dependent input is reduced to its numerical rank through an SVD.
    An all-zero input yields an ``n x 0`` array.
    """
    if vectors is None or len(vectors) == 0:
        raise EmptyInput("orthonormalize needs at least one vector")
    try:
        V = np.array([np.asarray(v, dtype=float) for v in vectors])
    except ValueError as exc:
        raise DimensionMismatch("vectors have different lengths") from exc
    if V.ndim != 2 or V.shape[1] == 0:
        raise DimensionMismatch("vectors have different lengths or are empty")
    if not np.all(np.isfinite(V)):
        raise NonFinite("vectors contain NaN or Inf")
    M = V.T  # n x m, columns are the input vectors
    n, m = M.shape
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    if s[0] == 0.0:
        return np.zeros((n, 0))
    d = int(np.sum(s > rank_tol * s[0]))
    if d == m:
        Q, R = np.linalg.qr(M)
        Q = Q * np.sign(np.where(np.diag(R) == 0, 1.0, np.diag(R)))
        return Q
    return _fix_signs(U[:, :d])


def symmetric_eig(M, residual_tol=None):
    """Eigen-decomposition of a symmetric matrix, eigenvalues ascending.

    Returns ``(w, V)`` with ``M = V diag(w) V^T``.
    """
    A = as_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise NotSquare(f"expected a square matrix, got {A.shape}")
    if residual_tol is None:
        residual_tol = 1e-9 * A.shape[0]
    fro = np.linalg.norm(A)
    if np.linalg.norm(A - A.T) > residual_tol * max(fro, np.finfo(float).tiny):
        raise NotSymmetric("matrix is not symmetric within tolerance")
    w, V = np.linalg.eigh(0.5 * (A + A.T))
    return w, V


def nullspace(M, rank_tol=DEFAULT_RANK_TOL):
    """Orthonormal basis of ker(M) as columns (possibly zero columns)."""
    A = as_matrix(M)
    _, s, Vt = np.linalg.svd(A, full_matrices=True)
    k = A.shape[1]
    if s.size == 0 or s[0] == 0.0:
        return np.eye(k)
    r = int(np.sum(s > rank_tol * s[0]))
    return Vt[r:].T.copy()


def sym_vec(M):
    """Frobenius-isometric vectorisation of a symmetric matrix.

    Upper triangle in row-major order with off-diagonal entries scaled by
    sqrt(2), so ``sym_vec(X) @ sym_vec(Y) == trace(X @ Y)``.
    """
    return _kernels.sym_vec(np.ascontiguousarray(M, dtype=float))


def _nnls_gradient_tol(A, b):
    m, k = A.shape
    return 10 * np.finfo(float).eps * max(m, k) * max(1.0, np.linalg.norm(A)) * max(1.0, np.linalg.norm(b))


def nnls(A, b, init_passive=None, maxiter=None):
    """Nonnegative least squares ``min ||Ac - b||_2  s.t.  c >= 0``.

    Lawson-Hanson active set. The entering column is the one with the largest
    gradient component (lowest index on ties).

    Parameters
    ----------
    A : array_like, shape (m, k)
    b : array_like, shape (m,)
    init_passive : array_like of bool, optional
        Warm-start passive set; the optimum does not depend on it.
    maxiter : int, optional
        Iteration budget, default ``10 * k``.

    Returns
    -------
    c : ndarray, shape (k,)
    residual : float
        ``||Ac - b||_2`` at the returned ``c``.

    Raises
    ------
    IterationLimit
        If the budget is exhausted.
    """
    A = as_matrix(A, "A")
    b = as_vector(b, "b")
    m, k = A.shape
    if b.shape[0] != m:
        raise DimensionMismatch(f"A has {m} rows but b has length {b.shape[0]}")
    if maxiter is None:
        maxiter = 10 * k
    if init_passive is not None:
        init_passive = np.asarray(init_passive, dtype=bool)
        if init_passive.shape != (k,):
            raise DimensionMismatch("init_passive must have one flag per column")
    c, iterations, status = _kernels.nnls_solve(A, b, init_passive, int(maxiter), _nnls_gradient_tol(A, b))
    if status != 0:
        raise IterationLimit(f"NNLS did not converge within {maxiter} iterations")
    c = np.asarray(c)
    return c, float(np.linalg.norm(A @ c - b))


def maxmin_lp(A, b, residual_tol, rank_tol=DEFAULT_RANK_TOL):
    """Maximise ``min_i c_i`` over ``{c >= 0 : ||Ac - b|| <= residual_tol}``.

    The equality part is enforced exactly on the affine set of least-squares
    solutions ``c = c_p + N t`` (``c_p`` minimum-norm, ``N`` a kernel basis);
    the LP runs over ``(t, s)`` maximising ``s`` subject to ``c_p + N t >= s``.
    If the best point on that slice is slightly negative, it is clipped to the
    nonnegative orthant and accepted when the clipped residual still meets the
    tolerance.

    Raises
    ------
    Infeasible
        The nonnegative part of the solution set is empty at tolerance.
    """
    A = as_matrix(A, "A")
    b = as_vector(b, "b")
    if b.shape[0] != A.shape[0]:
        raise DimensionMismatch("A and b disagree on the number of rows")
    k = A.shape[1]
    c_p, *_ = np.linalg.lstsq(A, b, rcond=None)
    if np.linalg.norm(A @ c_p - b) > residual_tol:
        raise Infeasible("unconstrained least-squares residual already exceeds the tolerance")
    N = nullspace(A, rank_tol)
    if N.shape[1] == 0:
        c = c_p
    else:
        q = N.shape[1]
        # variables (t_1..t_q, s); minimise -s
        cost = np.zeros(q + 1)
        cost[-1] = -1.0
        A_ub = np.hstack([-N, np.ones((k, 1))])
        b_ub = c_p
        # s is capped so that columns A never sees cannot make the LP unbounded
        bounds = [(None, None)] * q + [(None, max(1.0, 10.0 * float(np.abs(c_p).max())))]
        res = linprog(cost, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
        if res.status != 0:
            raise Infeasible(f"max-min LP failed: {res.message}")
        c = c_p + N @ res.x[:q]
    if c.min() < 0.0:
        c = np.maximum(c, 0.0)
        if np.linalg.norm(A @ c - b) > residual_tol:
            raise Infeasible("no nonnegative point on the solution set within tolerance")
    return c

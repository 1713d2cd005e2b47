"""Pure-NumPy kernels. Same contract as the compiled ``_ckernels`` module.

Both backends run the identical Lawson-Hanson iteration; only the passive-set
least-squares solve differs (LAPACK QR here, hand-rolled Householder there).
"""

import math

import numpy as np

# a passive column whose QR pivot falls below this fraction of the largest
# column norm is treated as linearly dependent on the others
DEPENDENCE_RTOL = 1e-10

STATUS_OK = 0
STATUS_ITERATION_LIMIT = 1


def sym_vec(M):
    """Upper triangle of a symmetric matrix, off-diagonals scaled by sqrt(2)."""
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    iu, ju = np.triu_indices(n)
    scale = np.where(iu == ju, 1.0, math.sqrt(2.0))
    return M[iu, ju] * scale


def _passive_lstsq(A, b, passive):
    """Least squares on the passive columns.

    Returns ``(z, dep)`` where ``z`` is a full-length vector (zeros off the
    passive set) and ``dep`` is the position in ``passive`` of the first
    numerically dependent column, or -1.
    """
    z = np.zeros(A.shape[1])
    if not passive:
        return z, -1
    if len(passive) > A.shape[0]:
        return z, A.shape[0]
    Ap = A[:, passive]
    q, r = np.linalg.qr(Ap, mode="reduced")
    diag = np.abs(np.diag(r))
    scale = np.max(np.linalg.norm(Ap, axis=0))
    small = np.flatnonzero(diag <= DEPENDENCE_RTOL * scale)
    if small.size:
        return z, int(small[0])
    # r is upper triangular; np.linalg.solve is fine at these sizes
    z[passive] = np.linalg.solve(r, q.T @ b)
    return z, -1


def nnls_solve(A, b, init_passive, maxiter, tol):
    """Active-set NNLS.

    Parameters
    ----------
    A : ndarray, shape (m, k)
    b : ndarray, shape (m,)
    init_passive : ndarray of bool, shape (k,), or None
        Optional warm-start passive set.
    maxiter : int
        Budget shared by entering steps and feasibility-restoring steps.
    tol : float
        Gradient threshold for a column to enter the passive set.

    Returns
    -------
    x : ndarray, shape (k,)
    iterations : int
    status : int
        0 on convergence, 1 when the budget ran out.
    """
    A = np.ascontiguousarray(A, dtype=float)
    b = np.ascontiguousarray(b, dtype=float)
    k = A.shape[1]
    x = np.zeros(k)
    passive = []
    iterations = 0

    if init_passive is not None:
        passive = [j for j in range(k) if init_passive[j]]
        z, dep = _passive_lstsq(A, b, passive)
        while passive and (dep >= 0 or z[passive].min() <= 0.0):
            if dep >= 0:
                passive.pop(dep)
            else:
                passive = [p for p in passive if z[p] > 0.0]
            z, dep = _passive_lstsq(A, b, passive)
        x = z.copy()

    excluded = np.zeros(k, dtype=bool)
    while True:
        w = A.T @ (b - A @ x)
        mask = np.ones(k, dtype=bool)
        mask[passive] = False
        mask &= ~excluded
        mask &= w > tol
        if not mask.any():
            break
        wc = np.where(mask, w, -np.inf)
        j = int(np.argmax(wc))
        iterations += 1
        if iterations > maxiter:
            return x, iterations, STATUS_ITERATION_LIMIT
        passive.append(j)
        z, dep = _passive_lstsq(A, b, passive)
        if dep >= 0 or z[j] <= 0.0:
            passive.pop()
            excluded[j] = True
            continue
        while passive and min(z[p] for p in passive) <= 0.0:
            iterations += 1
            if iterations > maxiter:
                return x, iterations, STATUS_ITERATION_LIMIT
            alpha = math.inf
            hit = -1
            for p in passive:
                if z[p] <= 0.0:
                    a = x[p] / (x[p] - z[p])
                    if a < alpha:
                        alpha, hit = a, p
            for p in passive:
                x[p] += alpha * (z[p] - x[p])
            x[hit] = 0.0
            passive = [p for p in passive if x[p] > 0.0]
            for p in range(k):
                if p not in passive:
                    x[p] = 0.0
            z, dep = _passive_lstsq(A, b, passive)
        x = z.copy()
        excluded[:] = False
    return x, iterations, STATUS_OK

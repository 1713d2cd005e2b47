# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Same contract as ``fusionscale._pykernels``."""

import numpy as np

from libc.math cimport sqrt, fabs, INFINITY

cdef double DEPENDENCE_RTOL = 1e-10

STATUS_OK = 0
STATUS_ITERATION_LIMIT = 1


def sym_vec(M):
    """Upper triangle of a symmetric matrix, off-diagonals scaled by sqrt(2)."""
    cdef double[:, ::1] Mv = np.ascontiguousarray(M, dtype=np.float64)
    cdef Py_ssize_t n = Mv.shape[0]
    out = np.empty(n * (n + 1) // 2, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i, j, t = 0
    cdef double r2 = sqrt(2.0)
    for i in range(n):
        o[t] = Mv[i, i]
        t += 1
        for j in range(i + 1, n):
            o[t] = Mv[i, j] * r2
            t += 1
    return out


cdef Py_ssize_t _passive_lstsq(const double[:, ::1] A, const double[::1] b,
                               Py_ssize_t[::1] passive, Py_ssize_t npas,
                               double[:, ::1] work, double[::1] rhs,
                               double[::1] z) noexcept nogil:
    """Householder QR least squares on the passive columns.

    ``work`` holds the passive columns as rows (work[c, :] is column c).
    Returns the position of the first dependent column, or -1.
    """
    cdef Py_ssize_t m = A.shape[0], k = A.shape[1]
    cdef Py_ssize_t c, r, c2, i
    cdef double scale = 0.0, nrm, alpha, vnorm2, dot, s
    for i in range(k):
        z[i] = 0.0
    if npas == 0:
        return -1
    for c in range(npas):
        nrm = 0.0
        for r in range(m):
            work[c, r] = A[r, passive[c]]
            nrm += work[c, r] * work[c, r]
        nrm = sqrt(nrm)
        if nrm > scale:
            scale = nrm
    for r in range(m):
        rhs[r] = b[r]

    for c in range(npas):
        # reflector zeroing work[c, c+1:]
        nrm = 0.0
        for r in range(c, m):
            nrm += work[c, r] * work[c, r]
        nrm = sqrt(nrm)
        if nrm <= DEPENDENCE_RTOL * scale or c >= m:
            return c
        alpha = -nrm if work[c, c] >= 0.0 else nrm
        # v = x - alpha e1, stored in place of work[c, c:]
        work[c, c] -= alpha
        vnorm2 = 0.0
        for r in range(c, m):
            vnorm2 += work[c, r] * work[c, r]
        if vnorm2 > 0.0:
            for c2 in range(c + 1, npas):
                dot = 0.0
                for r in range(c, m):
                    dot += work[c, r] * work[c2, r]
                s = 2.0 * dot / vnorm2
                for r in range(c, m):
                    work[c2, r] -= s * work[c, r]
            dot = 0.0
            for r in range(c, m):
                dot += work[c, r] * rhs[r]
            s = 2.0 * dot / vnorm2
            for r in range(c, m):
                rhs[r] -= s * work[c, r]
        # R[c, c] = alpha; R[c, c2] = work[c2, c] for c2 > c
        work[c, c] = alpha

    # back substitution: R y = rhs[:npas]
    for c in range(npas - 1, -1, -1):
        s = rhs[c]
        for c2 in range(c + 1, npas):
            s -= work[c2, c] * z[passive[c2]]
        z[passive[c]] = s / work[c, c]
    return -1


cdef void _gradient(const double[:, ::1] A, const double[::1] b,
                    double[::1] x, double[::1] resid, double[::1] w) noexcept nogil:
    cdef Py_ssize_t m = A.shape[0], k = A.shape[1], r, j
    cdef double s
    for r in range(m):
        s = b[r]
        for j in range(k):
            s -= A[r, j] * x[j]
        resid[r] = s
    for j in range(k):
        s = 0.0
        for r in range(m):
            s += A[r, j] * resid[r]
        w[j] = s


def nnls_solve(A, b, init_passive, Py_ssize_t maxiter, double tol):
    """Active-set NNLS; see ``fusionscale._pykernels.nnls_solve``."""
    cdef double[:, ::1] Av = np.ascontiguousarray(A, dtype=np.float64)
    cdef double[::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t m = Av.shape[0], k = Av.shape[1]
    x_arr = np.zeros(k, dtype=np.float64)
    cdef double[::1] x = x_arr
    cdef double[::1] z = np.zeros(k, dtype=np.float64)
    cdef double[::1] w = np.zeros(k, dtype=np.float64)
    cdef double[::1] resid = np.zeros(m, dtype=np.float64)
    cdef double[::1] rhs = np.zeros(m, dtype=np.float64)
    cdef double[:, ::1] work = np.zeros((k, m), dtype=np.float64)
    cdef Py_ssize_t[::1] passive = np.zeros(k, dtype=np.intp)
    cdef char[::1] inpas = np.zeros(k, dtype=np.int8)
    cdef char[::1] excluded = np.zeros(k, dtype=np.int8)
    cdef Py_ssize_t npas = 0, iterations = 0, dep, i, j, p, t, hit
    cdef double best, alpha, a, zmin
    cdef bint status = 0

    if init_passive is not None:
        for j in range(k):
            if init_passive[j]:
                passive[npas] = j
                npas += 1
    with nogil:
        if npas > 0:
            dep = _passive_lstsq(Av, bv, passive, npas, work, rhs, z)
            while npas > 0:
                if dep >= 0:
                    for t in range(dep, npas - 1):
                        passive[t] = passive[t + 1]
                    npas -= 1
                else:
                    zmin = INFINITY
                    for t in range(npas):
                        if z[passive[t]] < zmin:
                            zmin = z[passive[t]]
                    if zmin > 0.0:
                        break
                    p = 0
                    for t in range(npas):
                        if z[passive[t]] > 0.0:
                            passive[p] = passive[t]
                            p += 1
                    npas = p
                dep = _passive_lstsq(Av, bv, passive, npas, work, rhs, z)
            for j in range(k):
                x[j] = z[j]

        while True:
            for j in range(k):
                inpas[j] = 0
            for t in range(npas):
                inpas[passive[t]] = 1
            _gradient(Av, bv, x, resid, w)
            j = -1
            best = -INFINITY
            for i in range(k):
                if not inpas[i] and not excluded[i] and w[i] > tol and w[i] > best:
                    best = w[i]
                    j = i
            if j < 0:
                break
            iterations += 1
            if iterations > maxiter:
                status = 1
                break
            passive[npas] = j
            npas += 1
            dep = _passive_lstsq(Av, bv, passive, npas, work, rhs, z)
            if dep >= 0 or z[j] <= 0.0:
                npas -= 1
                excluded[j] = 1
                continue
            while npas > 0:
                zmin = INFINITY
                for t in range(npas):
                    if z[passive[t]] < zmin:
                        zmin = z[passive[t]]
                if zmin > 0.0:
                    break
                iterations += 1
                if iterations > maxiter:
                    status = 1
                    break
                alpha = INFINITY
                hit = -1
                for t in range(npas):
                    p = passive[t]
                    if z[p] <= 0.0:
                        a = x[p] / (x[p] - z[p])
                        if a < alpha:
                            alpha = a
                            hit = p
                for t in range(npas):
                    p = passive[t]
                    x[p] += alpha * (z[p] - x[p])
                x[hit] = 0.0
                i = 0
                for t in range(npas):
                    p = passive[t]
                    if x[p] > 0.0:
                        passive[i] = p
                        i += 1
                npas = i
                for j in range(k):
                    inpas[j] = 0
                for t in range(npas):
                    inpas[passive[t]] = 1
                for j in range(k):
                    if not inpas[j]:
                        x[j] = 0.0
                dep = _passive_lstsq(Av, bv, passive, npas, work, rhs, z)
            if status:
                break
            for j in range(k):
                x[j] = z[j]
                excluded[j] = 0
    return x_arr, iterations, STATUS_ITERATION_LIMIT if status else STATUS_OK

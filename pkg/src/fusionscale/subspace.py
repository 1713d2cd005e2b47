"""Closed subspaces of R^n stored as orthonormal bases, and their projectors."""

import numpy as np

from .errors import DimensionMismatch, NonFinite, OverlappingSubspaces, ZeroSubspace
from .numerics import DEFAULT_RANK_TOL, orthonormalize

ORTHONORMAL_TOL = 1e-10


class Subspace:
    """A nonzero subspace of R^n.

    Parameters
    ----------
    basis : array_like, shape (n, d)
        Orthonormal columns spanning the subspace, ``1 <= d <= n``. Use
        :meth:`span` to build one from arbitrary spanning vectors.

    Two instances describe the same subspace when their projectors agree
    (see :meth:`same_as`); bases themselves are not unique.
    """

    __slots__ = ("_basis",)

    def __init__(self, basis):
        Q = np.array(basis, dtype=float)
        if Q.ndim == 1:
            Q = Q[:, None]
        if Q.ndim != 2 or Q.shape[0] == 0:
            raise DimensionMismatch(f"basis must be an n x d array, got shape {Q.shape}")
        if not np.all(np.isfinite(Q)):
            raise NonFinite("basis has NaN or Inf entries")
        n, d = Q.shape
        if d == 0:
            raise ZeroSubspace("the zero subspace is not representable")
        if d > n:
            raise DimensionMismatch(f"{d} basis vectors cannot be orthonormal in R^{n}")
        err = np.linalg.norm(Q.T @ Q - np.eye(d))
        if err > ORTHONORMAL_TOL:
            raise ValueError(f"basis columns are not orthonormal (||Q^T Q - I||_F = {err:.3g})")
        Q.setflags(write=False)
        self._basis = Q

    @classmethod
    def span(cls, vectors, rank_tol=DEFAULT_RANK_TOL):
        """Subspace spanned by ``vectors`` (a sequence of ambient vectors)."""
        Q = orthonormalize(vectors, rank_tol)
        if Q.shape[1] == 0:
            raise ZeroSubspace("vectors span the zero subspace")
        return cls(Q)

    @classmethod
    def coordinate(cls, n, indices):
        """Span of the standard basis vectors ``e_i`` for ``i`` in ``indices`` (0-based)."""
        indices = list(indices)
        Q = np.zeros((n, len(indices)))
        for col, i in enumerate(indices):
            Q[i, col] = 1.0
        return cls(Q)

    @property
    def basis(self):
        return self._basis

    @property
    def ambient_dim(self):
        return self._basis.shape[0]

    @property
    def dim(self):
        return self._basis.shape[1]

    def projector(self):
        Q = self._basis
        return Q @ Q.T

    def same_as(self, other, tol=1e-9):
        _check_same_ambient(self, other)
        return bool(np.linalg.norm(self.projector() - other.projector()) <= tol)

    def transformed(self, U):
        """Image of the subspace under the invertible matrix ``U``."""
        U = np.asarray(U, dtype=float)
        return Subspace.span(list((U @ self._basis).T))

    def __repr__(self):
        return f"Subspace(n={self.ambient_dim}, d={self.dim})"


def _check_same_ambient(S1, S2):
    if S1.ambient_dim != S2.ambient_dim:
        raise DimensionMismatch(f"ambient dimensions differ: {S1.ambient_dim} vs {S2.ambient_dim}")


def projector(S):
    """Orthogonal projector ``Q Q^T`` onto ``S``."""
    return S.projector()


def orthogonality_gap(S1, S2):
    """``||Q1^T Q2||_F``; zero exactly when the subspaces are orthogonal."""
    _check_same_ambient(S1, S2)
    return float(np.linalg.norm(S1.basis.T @ S2.basis))


def is_orthogonal_pair(S1, S2, tol=1e-8):
    return orthogonality_gap(S1, S2) <= tol


def containment_gap(S, v):
    """Relative distance ``||v - P v|| / ||v||`` (0 for the zero vector)."""
    v = np.asarray(v, dtype=float)
    if v.shape != (S.ambient_dim,):
        raise DimensionMismatch(f"vector of shape {v.shape} does not live in R^{S.ambient_dim}")
    nv = np.linalg.norm(v)
    if nv == 0.0:
        return 0.0
    Q = S.basis
    return float(np.linalg.norm(v - Q @ (Q.T @ v)) / nv)


def contains(S, v, tol=1e-8):
    return containment_gap(S, v) <= tol


def direct_sum(S1, S2, rank_tol=DEFAULT_RANK_TOL):
    """Subspace ``S1 + S2``, required to be a direct sum.

    Raises
    ------
    OverlappingSubspaces
        If the combined basis loses rank, i.e. ``S1 ∩ S2 != {0}`` numerically.
    """
    _check_same_ambient(S1, S2)
    M = np.hstack([S1.basis, S2.basis])
    s = np.linalg.svd(M, compute_uv=False)
    d = S1.dim + S2.dim
    if s.size < d or s[d - 1] <= rank_tol * s[0]:
        raise OverlappingSubspaces("subspaces intersect; the sum is not direct")
    return Subspace.span(list(M.T), rank_tol)


def subspace_sum(subspaces, rank_tol=DEFAULT_RANK_TOL):
    """Span of the union of several subspaces (no directness requirement)."""
    vecs = [col for S in subspaces for col in S.basis.T]
    return Subspace.span(vecs, rank_tol)

"""Fusion frames ``{(W_i, w_i)}`` and the operators built from them."""

from dataclasses import asdict, dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyInput,
    LengthMismatch,
    NonpositiveWeight,
    NotAFrame,
    NotRieszBasis,
)
from .numerics import ToleranceConfig, nullspace, numerical_rank, symmetric_eig
from .subspace import Subspace, orthogonality_gap

ORTHOGONALITY_TOL = 1e-8


class FusionFrame:
    """Ordered family of weighted subspaces sharing one ambient space.

    Duplicate subspaces are allowed. Labels are optional and only used for
    file round-trips and reports.
    """

    __slots__ = ("_subspaces", "_weights", "_labels")

    def __init__(self, subspaces, weights=None, labels=None):
        subspaces = tuple(subspaces)
        if not subspaces:
            raise EmptyInput("a fusion frame needs at least one subspace")
        for S in subspaces:
            if not isinstance(S, Subspace):
                raise TypeError(f"expected Subspace, got {type(S).__name__}")
        n = subspaces[0].ambient_dim
        if any(S.ambient_dim != n for S in subspaces):
            raise DimensionMismatch("all subspaces must share the ambient dimension")
        if weights is None:
            weights = np.ones(len(subspaces))
        w = np.array(weights, dtype=float).reshape(-1)
        if w.shape[0] != len(subspaces):
            raise LengthMismatch(f"{len(subspaces)} subspaces but {w.shape[0]} weights")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise NonpositiveWeight("every weight must be a positive finite number")
        w.setflags(write=False)
        if labels is None:
            labels = (None,) * len(subspaces)
        labels = tuple(labels)
        if len(labels) != len(subspaces):
            raise LengthMismatch("one label per subspace")
        self._subspaces = subspaces
        self._weights = w
        self._labels = labels

    @classmethod
    def from_items(cls, items):
        """Build from ``(subspace, weight)`` pairs."""
        items = list(items)
        return cls([s for s, _ in items], [w for _, w in items])

    @property
    def subspaces(self):
        return self._subspaces

    @property
    def weights(self):
        return self._weights

    @property
    def labels(self):
        return self._labels

    @property
    def ambient_dim(self):
        return self._subspaces[0].ambient_dim

    @property
    def dims(self):
        return tuple(S.dim for S in self._subspaces)

    def __len__(self):
        return len(self._subspaces)

    def __iter__(self):
        return iter(zip(self._subspaces, self._weights))

    def __repr__(self):
        return f"FusionFrame(n={self.ambient_dim}, dims={self.dims})"

    def with_weights(self, weights):
        return FusionFrame(self._subspaces, weights, self._labels)

    def subframe(self, indices):
        indices = list(indices)
        return FusionFrame(
            [self._subspaces[i] for i in indices],
            [self._weights[i] for i in indices],
            [self._labels[i] for i in indices],
        )

    def transformed(self, U):
        """Image ``{(U W_i, w_i)}`` under an invertible matrix."""
        return FusionFrame([S.transformed(U) for S in self._subspaces], self._weights, self._labels)


def frame_operator(F):
    """``S = sum_i w_i^2 P_i``."""
    n = F.ambient_dim
    S = np.zeros((n, n))
    for W, w in F:
        S += w * w * W.projector()
    return S


def weighted_operator(F, coefficients):
    """``sum_i c_i P_i`` for arbitrary coefficients (no weights involved)."""
    c = np.asarray(coefficients, dtype=float)
    if c.shape != (len(F),):
        raise LengthMismatch(f"expected {len(F)} coefficients, got shape {c.shape}")
    n = F.ambient_dim
    S = np.zeros((n, n))
    for W, ci in zip(F.subspaces, c):
        S += ci * W.projector()
    return S


def frame_bounds(F):
    """Optimal fusion-frame bounds: extreme eigenvalues of the frame operator."""
    lam, _ = symmetric_eig(frame_operator(F))
    return float(lam[0]), float(lam[-1])


def synthesis_matrix(F, weighted=True):
    """Block matrix ``[w_1 Q_1 | w_2 Q_2 | ...]`` (``n x sum d_i``).

    With ``weighted=False`` the weights are dropped; the column span and the
    kernel dimension do not change.
    """
    blocks = [(w if weighted else 1.0) * W.basis for W, w in F]
    return np.hstack(blocks)


def excess(F, rank_tol=1e-10):
    """Excess ``dim ker T`` of the synthesis operator.

    Computed on the local frame made of the per-subspace orthonormal bases.

    Returns
    -------
    e : int
    kernel : ndarray, shape (sum d_i, e)
        Orthonormal basis of the kernel in the stacked coordinates.
    """
    T = synthesis_matrix(F)
    K = nullspace(T, rank_tol)
    e = T.shape[1] - numerical_rank(T, rank_tol)
    return e, K[:, K.shape[1] - e:] if e else K[:, :0]


@dataclass(frozen=True)
class FrameAnalysis:
    lower_bound: float
    upper_bound: float
    is_frame: bool
    is_tight: bool
    is_parseval: bool
    is_riesz_basis: bool
    is_orthogonal_family: bool
    excess: int
    parseval_residual: float
    max_orthogonality_gap: float

    def to_dict(self):
        return asdict(self)


def max_orthogonality_gap(subspaces):
    gaps = [
        orthogonality_gap(subspaces[i], subspaces[j])
        for i in range(len(subspaces))
        for j in range(i + 1, len(subspaces))
    ]
    return max(gaps, default=0.0)


def classify(F, tol=None):
    """Bounds, excess and the tight/Parseval/Riesz/orthogonality flags."""
    n = F.ambient_dim
    if tol is None:
        tol = ToleranceConfig.for_dim(n)
    S = frame_operator(F)
    lam, _ = symmetric_eig(S)
    A, B = float(lam[0]), float(lam[-1])
    is_frame = A > n * tol.rank_tol * B
    parseval_residual = float(np.linalg.norm(S - np.eye(n)))
    is_parseval = is_frame and parseval_residual <= tol.residual_tol
    is_tight = is_frame and (is_parseval or B - A <= tol.residual_tol * max(1.0, B))
    e, _ = excess(F, tol.rank_tol)
    gap = max_orthogonality_gap(F.subspaces)
    return FrameAnalysis(
        lower_bound=A,
        upper_bound=B,
        is_frame=bool(is_frame),
        is_tight=bool(is_tight),
        is_parseval=bool(is_parseval),
        is_riesz_basis=bool(is_frame and e == 0),
        is_orthogonal_family=bool(gap <= ORTHOGONALITY_TOL),
        excess=int(e),
        parseval_residual=parseval_residual,
        max_orthogonality_gap=float(gap),
    )


def is_riesz_basis(F, tol=None):
    return classify(F, tol).is_riesz_basis


def riesz_decompose(F, f, tol=None):
    """Unique components ``f_i in W_i`` with ``sum f_i = f``.

    Raises
    ------
    NotRieszBasis
        If ``F`` is not a fusion Riesz basis.
    """
    f = np.asarray(f, dtype=float)
    if f.shape != (F.ambient_dim,):
        raise DimensionMismatch(f"vector of shape {f.shape} does not live in R^{F.ambient_dim}")
    if not is_riesz_basis(F, tol):
        raise NotRieszBasis("riesz_decompose needs a fusion Riesz basis")
    T = synthesis_matrix(F, weighted=False)
    z = np.linalg.solve(T, f)
    parts = []
    start = 0
    for W in F.subspaces:
        parts.append(W.basis @ z[start:start + W.dim])
        start += W.dim
    return parts


def canonical_dual(F, tol=None):
    """``{(S^{-1} W_i, w_i)}`` with re-orthonormalised subspaces."""
    if not classify(F, tol).is_frame:
        raise NotAFrame("canonical dual needs a fusion frame")
    Sinv = np.linalg.inv(frame_operator(F))
    return FusionFrame([W.transformed(Sinv) for W in F.subspaces], F.weights, F.labels)


def dual_residual(V, W):
    """``||sum_i v_i w_i P_{V_i} S_W^{-1} P_{W_i} - I||_F``."""
    if len(V) != len(W):
        raise LengthMismatch(f"{len(V)} vs {len(W)} subspaces")
    if V.ambient_dim != W.ambient_dim:
        raise DimensionMismatch("frames live in different ambient spaces")
    Sinv = np.linalg.inv(frame_operator(W))
    n = W.ambient_dim
    R = -np.eye(n)
    for (Vi, vi), (Wi, wi) in zip(V, W):
        R += vi * wi * Vi.projector() @ Sinv @ Wi.projector()
    return float(np.linalg.norm(R))


def is_dual(V, W, tol=None):
    """Whether ``V`` is an alternate dual of the fusion frame ``W``.

    Returns ``(verdict, residual)``.
    """
    if tol is None:
        tol = ToleranceConfig.for_dim(W.ambient_dim)
    if len(V) != len(W):
        raise LengthMismatch(f"{len(V)} vs {len(W)} subspaces")
    if not classify(W, tol).is_frame:
        raise NotAFrame("the reference family is not a fusion frame")
    r = dual_residual(V, W)
    return r <= tol.residual_tol, r


def riesz_characterizations(F):
    """Residuals of the three equivalent Riesz-basis descriptions.

    Returns a dict with
    ``excess`` (integer), ``dual_orthogonality`` (max ``||P_j S^{-1} P_i||``
    over ``i != j``) and ``operator_identity`` (max over ``i, j`` of
    ``||w_i^2 P_i S^{-1} P_j - delta_ij P_j||``).
    """
    S = frame_operator(F)
    Sinv = np.linalg.inv(S)
    P = [W.projector() for W in F.subspaces]
    w2 = F.weights ** 2
    dual_gap = 0.0
    ident_gap = 0.0
    for i in range(len(P)):
        for j in range(len(P)):
            M = w2[i] * P[i] @ Sinv @ P[j]
            target = P[j] if i == j else 0.0
            ident_gap = max(ident_gap, float(np.linalg.norm(M - target)))
            if i != j:
                dual_gap = max(dual_gap, float(np.linalg.norm(P[j] @ Sinv @ P[i])))
    e, _ = excess(F)
    return {"excess": e, "dual_orthogonality": dual_gap, "operator_identity": ident_gap}

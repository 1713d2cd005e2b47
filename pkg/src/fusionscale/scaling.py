"""Weight-scaling of fusion frames to Parseval fusion frames.

Scalability of ``{(W_i, w_i)}`` is the linear feasibility problem

    sum_i c_i P_i = I,   c_i = (w_i g_i)^2 > 0,

posed on symmetric-vectorised projectors. NNLS decides feasibility (its
optimum is global, so a large residual is a certificate of infeasibility);
a max-min LP then picks the most positive point of the solution polytope.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import Infeasible, LengthMismatch, NonpositiveGamma
from .fusion import frame_bounds, weighted_operator
from .numerics import ToleranceConfig, maxmin_lp, nnls, nullspace, sym_vec


class Status(str, enum.Enum):
    STRICTLY_SCALABLE = "StrictlyScalable"
    SCALABLE_WITH_ZERO_WEIGHTS = "ScalableWithZeroWeights"
    INFEASIBLE = "Infeasible"


@dataclass(frozen=True)
class ScalingSolution:
    """Solver verdict.

    ``coefficients`` are ``c_i = (w_i g_i)^2``; ``gamma`` is ``sqrt(c_i)/w_i``
    and is 0 where ``c_i`` is 0. ``selection`` records how ``c`` was picked
    out of the solution set: ``"unique"``, ``"max-min"``, ``"tight"`` (uniform
    ``gamma = A^(-1/2)`` on a tight frame, i.e. ``c = w^2 / A``) or ``"nnls"``
    (infeasible, or LP fallback).
    """

    status: Status
    coefficients: np.ndarray
    gamma: np.ndarray
    residual: float
    min_coefficient: float
    nnls_residual: float
    solution_set_dim: int
    selection: str
    tolerances: ToleranceConfig = field(repr=False)

    @property
    def strictly_scalable(self):
        return self.status is Status.STRICTLY_SCALABLE

    def to_dict(self):
        return {
            "status": self.status.value,
            "coefficients": self.coefficients.tolist(),
            "gamma": self.gamma.tolist(),
            "residual": self.residual,
            "min_coefficient": self.min_coefficient,
            "nnls_residual": self.nnls_residual,
            "solution_set_dim": self.solution_set_dim,
            "selection": self.selection,
            "tolerances": {
                "residual_tol": self.tolerances.residual_tol,
                "rank_tol": self.tolerances.rank_tol,
                "positivity_eps": self.tolerances.positivity_eps,
            },
        }


def build_system(F):
    """``(A, b)`` with ``A[:, i] = sym_vec(P_i)`` and ``b = sym_vec(I)``.

    ``sym_vec`` is a Frobenius isometry, so ``||A c - b||_2`` equals
    ``||sum c_i P_i - I||_F``.
    """
    A = np.column_stack([sym_vec(W.projector()) for W in F.subspaces])
    b = sym_vec(np.eye(F.ambient_dim))
    return A, b


def coefficient_residual(F, c):
    return float(np.linalg.norm(weighted_operator(F, c) - np.eye(F.ambient_dim)))


def _gamma_from_coefficients(c, weights):
    return np.sqrt(np.maximum(c, 0.0)) / weights


def solve_scaling(F, tol=None):
    """Decide weight-scalability and return a :class:`ScalingSolution`."""
    if tol is None:
        tol = ToleranceConfig.for_dim(F.ambient_dim)
    A, b = build_system(F)
    c_nnls, nnls_res = nnls(A, b)
    q = nullspace(A, tol.rank_tol).shape[1]

    if nnls_res > tol.residual_tol:
        c, selection = c_nnls, "nnls"
    else:
        c, selection = _select_positive(F, A, b, c_nnls, q, tol)

    residual = coefficient_residual(F, c)
    cmin = float(c.min())
    if residual > tol.residual_tol:
        status = Status.INFEASIBLE
    elif cmin >= tol.positivity_eps:
        status = Status.STRICTLY_SCALABLE
    else:
        status = Status.SCALABLE_WITH_ZERO_WEIGHTS
    return ScalingSolution(
        status=status,
        coefficients=c,
        gamma=_gamma_from_coefficients(c, F.weights),
        residual=residual,
        min_coefficient=cmin,
        nnls_residual=nnls_res,
        solution_set_dim=q,
        selection=selection,
        tolerances=tol,
    )


def _select_positive(F, A, b, c_nnls, q, tol):
    lo, hi = frame_bounds(F)
    if lo > 0 and hi - lo <= tol.residual_tol * max(1.0, hi):
        # tight: uniform gamma = A^(-1/2); this is also the max-min point when the weights are equal
        c = F.weights ** 2 / lo
        if coefficient_residual(F, c) <= tol.residual_tol:
            return c, "tight" if q else "unique"
    try:
        c_lp = maxmin_lp(A, b, tol.residual_tol, tol.rank_tol)
    except Infeasible:
        return c_nnls, "nnls"
    if coefficient_residual(F, c_lp) > tol.residual_tol or c_lp.min() < c_nnls.min() - 1e-12:
        return c_nnls, "nnls"
    return c_lp, "max-min" if q else "unique"


def verify_scaling(F, gamma):
    """``||sum (w_i g_i)^2 P_i - I||_F`` for strictly positive ``gamma``."""
    g = np.asarray(gamma, dtype=float).reshape(-1)
    if g.shape[0] != len(F):
        raise LengthMismatch(f"{len(F)} subspaces but {g.shape[0]} gamma values")
    if not np.all(np.isfinite(g)) or np.any(g <= 0):
        raise NonpositiveGamma("every gamma must be a positive finite number")
    return coefficient_residual(F, (F.weights * g) ** 2)

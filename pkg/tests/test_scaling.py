import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fusionscale.errors import LengthMismatch, NonpositiveGamma
from fusionscale.fixtures import (
    nonscalable_h3,
    one_excess_alpha,
    one_excess_alpha_coefficients,
    orthonormal,
    random_orthogonal,
    riesz_u,
    tight2_h9,
    two_excess_h3,
    two_excess_h4,
)
from fusionscale.fusion import FusionFrame, classify, frame_bounds, riesz_characterizations
from fusionscale.numerics import ToleranceConfig, nnls
from fusionscale.scaling import Status, build_system, solve_scaling, verify_scaling
from fusionscale.subspace import Subspace
from oracles import harmonic_lines, oracle_feasible, oracle_max_min, random_frame, split_orthonormal_frame

r2 = math.sqrt(0.5)


# -- reference examples ----------------------------------------------------------------


def test_two_excess_h3_scales_to_half_half_one():
    sol = solve_scaling(two_excess_h3().frame)
    assert sol.status is Status.STRICTLY_SCALABLE
    np.testing.assert_allclose(sol.coefficients, [0.5, 0.5, 1.0], atol=1e-8)
    assert sol.selection == "max-min" and sol.solution_set_dim == 1


def test_two_excess_h4_scales_uniformly():
    sol = solve_scaling(two_excess_h4().frame)
    assert sol.strictly_scalable
    np.testing.assert_allclose(sol.coefficients, [2 / 3] * 4, atol=1e-8)
    np.testing.assert_allclose(sol.gamma, [math.sqrt(2 / 3)] * 4, atol=1e-8)


def test_skew_riesz_u_is_infeasible():
    sol = solve_scaling(riesz_u((r2, r2, 0.0)).frame)
    assert sol.status is Status.INFEASIBLE
    assert sol.nnls_residual > 1e-6
    assert sol.residual == pytest.approx(sol.nnls_residual)


@pytest.mark.parametrize("alpha", [0.1, 0.3, 0.5, 0.6])
def test_one_excess_alpha_matches_closed_form(alpha):
    sol = solve_scaling(one_excess_alpha(alpha).frame)
    assert sol.strictly_scalable
    np.testing.assert_allclose(sol.gamma, np.sqrt(one_excess_alpha_coefficients(alpha)), atol=1e-8)


def test_zero_weight_case_is_reported_separately():
    sol = solve_scaling(nonscalable_h3().frame)
    assert sol.status is Status.SCALABLE_WITH_ZERO_WEIGHTS
    assert sol.residual <= sol.tolerances.residual_tol
    assert sol.min_coefficient < sol.tolerances.positivity_eps
    assert sol.gamma[1] == pytest.approx(0.0, abs=1e-4)


def test_weights_only_rescale_gamma():
    F = two_excess_h4().frame
    G = F.with_weights([0.5, 2.0, 3.0, 1.0])
    a, b = solve_scaling(F), solve_scaling(G)
    np.testing.assert_allclose(a.coefficients, b.coefficients, atol=1e-12)
    np.testing.assert_allclose(b.gamma * G.weights, a.gamma * F.weights, atol=1e-12)


def test_report_dictionary_fields():
    d = solve_scaling(two_excess_h3().frame).to_dict()
    assert d["status"] == "StrictlyScalable"
    assert set(d["tolerances"]) == {"residual_tol", "rank_tol", "positivity_eps"}
    assert len(d["gamma"]) == 3


def test_positivity_threshold_is_configurable():
    F = two_excess_h3().frame
    strict = ToleranceConfig(residual_tol=3e-9, positivity_eps=0.75)
    assert solve_scaling(F, strict).status is Status.SCALABLE_WITH_ZERO_WEIGHTS


# -- verify_scaling ------------------------------------------------------------------


def test_verify_scaling_examples():
    assert verify_scaling(orthonormal(3).frame, [1.0] * 3) == 0.0
    for n in (1, 2, 5):
        assert verify_scaling(orthonormal(n).frame, [2.0] * n) == pytest.approx(3 * math.sqrt(n))
    assert verify_scaling(two_excess_h4().frame, [math.sqrt(2 / 3)] * 4) <= 1e-12


def test_verify_scaling_rejects_bad_gamma():
    F = orthonormal(2).frame
    with pytest.raises(LengthMismatch):
        verify_scaling(F, [1.0])
    with pytest.raises(NonpositiveGamma):
        verify_scaling(F, [1.0, 0.0])
    with pytest.raises(NonpositiveGamma):
        verify_scaling(F, [1.0, math.nan])


# -- invariants ----------------------------------------------------------------------


@given(st.integers(0, 2**32 - 1))
def test_strict_verdicts_are_sound(seed):
    F = random_frame(np.random.default_rng(seed))
    sol = solve_scaling(F)
    tol = sol.tolerances
    if sol.strictly_scalable:
        assert verify_scaling(F, sol.gamma) <= tol.residual_tol
        assert np.all(sol.gamma >= np.sqrt(tol.positivity_eps) / F.weights - 1e-15)
    elif sol.status is Status.INFEASIBLE:
        assert sol.nnls_residual > tol.residual_tol


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1))
def test_infeasibility_survives_active_set_restarts(seed):
    rng = np.random.default_rng(seed)
    F = random_frame(rng)
    sol = solve_scaling(F)
    if sol.status is not Status.INFEASIBLE:
        return
    A, b = build_system(F)
    for _ in range(10):
        _, r = nnls(A, b, init_passive=rng.random(len(F)) < 0.5)
        assert r >= sol.nnls_residual - 1e-12


@given(st.integers(0, 2**32 - 1))
def test_feasibility_agrees_with_full_system_oracle(seed):
    rng = np.random.default_rng(seed)
    F = random_frame(rng)
    if F.ambient_dim > 4 or len(F) > 5:
        return
    sol = solve_scaling(F)
    feasible = sol.status is not Status.INFEASIBLE
    assert feasible == oracle_feasible(F, sol.tolerances.residual_tol)
    best = oracle_max_min(F)
    if best is not None and best > 1e-6:
        assert sol.strictly_scalable
        if sol.selection != "tight":
            assert sol.min_coefficient >= min(best, 1.0) - 1e-7
    if sol.strictly_scalable:
        assert best is not None and best >= sol.tolerances.positivity_eps - 1e-9


@given(st.integers(0, 2**32 - 1))
def test_status_is_unitarily_invariant(seed):
    rng = np.random.default_rng(seed)
    F = random_frame(rng)
    U = random_orthogonal(F.ambient_dim, rng)
    G = F.transformed(U)
    a, b = solve_scaling(F), solve_scaling(G)
    assert a.status == b.status
    if a.strictly_scalable:
        assert verify_scaling(G, a.gamma) <= a.tolerances.residual_tol
        assert verify_scaling(F, b.gamma) <= b.tolerances.residual_tol


@given(st.integers(0, 2**32 - 1))
def test_tight_frames_use_the_uniform_shortcut(seed):
    rng = np.random.default_rng(seed)
    F = harmonic_lines(rng)
    A, B = frame_bounds(F)
    assert B - A <= 1e-12
    sol = solve_scaling(F)
    assert sol.strictly_scalable and sol.selection in ("tight", "unique")
    np.testing.assert_allclose(sol.coefficients, F.weights**2 / A, rtol=1e-10)
    # with equal weights the uniform choice is also the max-min point, found independently
    if sol.min_coefficient <= 1.0:
        assert sol.min_coefficient == pytest.approx(oracle_max_min(F), rel=1e-6)


def test_tight_shortcut_matches_general_path_on_tight2_h9():
    F = tight2_h9().frame
    sol = solve_scaling(F)
    np.testing.assert_allclose(sol.coefficients, 0.5, atol=1e-12)
    A, b = build_system(F)
    c, r = nnls(A, b)
    assert r <= 1e-9
    np.testing.assert_allclose(A @ sol.coefficients, b, atol=1e-12)


@given(st.integers(0, 2**32 - 1))
def test_split_orthonormal_frames_are_strictly_scalable(seed):
    assert solve_scaling(split_orthonormal_frame(np.random.default_rng(seed))).strictly_scalable


@given(st.integers(1, 6), st.integers(0, 2**32 - 1), st.booleans())
def test_riesz_scalability_with_inverse_weights_matches_orthogonality(n, seed, orthogonal):
    rng = np.random.default_rng(seed)
    M = random_orthogonal(n, rng) if orthogonal else rng.standard_normal((n, n))
    cuts = sorted(rng.choice(np.arange(1, n), size=int(rng.integers(0, n)), replace=False).tolist()) if n > 1 else []
    edges = [0] + cuts + [n]
    F = FusionFrame([Subspace.span(list(M[:, a:b].T)) for a, b in zip(edges[:-1], edges[1:])],
                    np.exp(rng.uniform(-1, 1, len(edges) - 1)))
    if np.linalg.cond(M) > 1e4:
        return
    by_inverse = verify_scaling(F, 1.0 / F.weights) <= 1e-8
    assert by_inverse == classify(F).is_orthogonal_family
    assert by_inverse == (solve_scaling(F).status is not Status.INFEASIBLE)
    assert riesz_characterizations(F)["excess"] == 0

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fusionscale.errors import (
    DimensionMismatch,
    EmptyInput,
    LengthMismatch,
    NonpositiveWeight,
    NotAFrame,
    NotRieszBasis,
)
from fusionscale.fixtures import (
    mercedes_benz,
    one_excess_alpha,
    orthonormal,
    random_orthogonal,
    riesz_u,
    shift_trunc,
    tight2_h9,
    two_excess_h3,
    two_excess_h4,
    zdual_trunc,
)
from fusionscale.fusion import (
    FusionFrame,
    canonical_dual,
    classify,
    excess,
    frame_bounds,
    frame_operator,
    is_dual,
    is_riesz_basis,
    riesz_characterizations,
    riesz_decompose,
    synthesis_matrix,
)
from fusionscale.subspace import Subspace, contains, is_orthogonal_pair
from oracles import gaussian_frame, random_frame, random_subspace

r2 = math.sqrt(0.5)


def lines(*vectors, weights=None):
    return FusionFrame([Subspace.span([v]) for v in vectors], weights)


def random_riesz_basis(rng, n):
    """Random splitting of R^n into a direct sum of random subspaces."""
    M = rng.standard_normal((n, n))
    cuts = sorted(rng.choice(np.arange(1, n), size=int(rng.integers(0, n)), replace=False).tolist()) if n > 1 else []
    edges = [0] + cuts + [n]
    spaces = [Subspace.span(list(M[:, a:b].T)) for a, b in zip(edges[:-1], edges[1:])]
    return FusionFrame(spaces, np.exp(rng.uniform(-1, 1, len(spaces))))


# -- construction --------------------------------------------------------------------


def test_frame_validation():
    with pytest.raises(EmptyInput):
        FusionFrame([])
    with pytest.raises(DimensionMismatch):
        FusionFrame([Subspace.coordinate(2, [0]), Subspace.coordinate(3, [0])])
    with pytest.raises(NonpositiveWeight):
        FusionFrame([Subspace.coordinate(2, [0])], [0.0])
    with pytest.raises(LengthMismatch):
        FusionFrame([Subspace.coordinate(2, [0])], [1.0, 2.0])


# -- frame operator and bounds -------------------------------------------------------


def test_frame_operator_of_coordinate_lines_is_identity():
    np.testing.assert_allclose(frame_operator(orthonormal(2).frame), np.eye(2))


@pytest.mark.parametrize("u", [(1.0, 0.0, 0.0), (r2, r2, 0.0), (0.6, 0.0, 0.8), (0.48, 0.6, 0.64)])
@pytest.mark.parametrize("weights", [(1.0, 1.0), (0.5, 3.0)])
def test_frame_operator_of_riesz_u_matches_the_displayed_matrix(u, weights):
    F = riesz_u(u).frame.with_weights(weights)
    w1, w2 = weights
    u1, u2, u3 = u
    expected = np.array([
        [w1**2 * u1 * u1, w1**2 * u1 * u2, w1**2 * u1 * u3],
        [w1**2 * u2 * u1, w1**2 * u2 * u2 + w2**2, w1**2 * u2 * u3],
        [w1**2 * u3 * u1, w1**2 * u3 * u2, w1**2 * u3 * u3 + w2**2],
    ])
    np.testing.assert_allclose(frame_operator(F), expected, atol=1e-14)


def test_mercedes_benz_operator():
    np.testing.assert_allclose(frame_operator(mercedes_benz().frame), 1.5 * np.eye(2), atol=1e-14)


def test_bounds_examples():
    assert frame_bounds(orthonormal(4).frame) == pytest.approx((1.0, 1.0))
    F = lines((1.0, 0.0), (1.0, 0.0), (0.0, 1.0))
    assert frame_bounds(F) == pytest.approx((1.0, 2.0))


def test_bounds_of_two_excess_h4_against_a_reference_eigensolver():
    import scipy.linalg

    F = two_excess_h4().frame
    total = sum(W.projector() for W in F.subspaces)
    lam = scipy.linalg.eigh(total, eigvals_only=True)
    A, B = frame_bounds(F)
    assert A == pytest.approx(lam[0], abs=1e-12)
    assert B == pytest.approx(lam[-1], abs=1e-12)


# -- synthesis matrix ----------------------------------------------------------------


def test_synthesis_columns_carry_weights():
    np.testing.assert_allclose(synthesis_matrix(FusionFrame([Subspace.coordinate(3, [0])])), [[1], [0], [0]])
    np.testing.assert_allclose(synthesis_matrix(FusionFrame([Subspace.coordinate(3, [0])], [2.0])), [[2], [0], [0]])


def test_synthesis_of_two_excess_h3():
    F = two_excess_h3().frame
    T = synthesis_matrix(F)
    assert T.shape == (3, 5)
    np.testing.assert_allclose(T @ T.T, frame_operator(F), atol=1e-12)


@given(st.integers(0, 2**32 - 1))
def test_synthesis_factorizes_the_frame_operator(seed):
    F = random_frame(np.random.default_rng(seed))
    T = synthesis_matrix(F)
    assert np.linalg.norm(T @ T.T - frame_operator(F)) <= 1e-10 * max(1.0, np.linalg.norm(T) ** 2)


@given(st.integers(0, 2**32 - 1))
def test_local_frame_bounds_equal_fusion_bounds(seed):
    F = random_frame(np.random.default_rng(seed))
    # eigen-extremes of the flattened local frame operator T T^T (computed independently via SVD)
    s = np.linalg.svd(synthesis_matrix(F), compute_uv=False)
    n = F.ambient_dim
    sq = np.sort(np.concatenate([s**2, np.zeros(max(0, n - s.size))]))[-n:]
    A, B = frame_bounds(F)
    assert A == pytest.approx(sq[0], abs=1e-10 * max(1.0, B))
    assert B == pytest.approx(sq[-1], rel=1e-10)


# -- excess --------------------------------------------------------------------------


def test_excess_examples():
    assert excess(orthonormal(5).frame)[0] == 0
    e, K = excess(two_excess_h3().frame)
    assert e == 2 and K.shape == (5, 2)
    np.testing.assert_allclose(synthesis_matrix(two_excess_h3().frame) @ K, 0, atol=1e-12)


@pytest.mark.parametrize("m", [1, 2, 3, 5, 8])
def test_truncated_shift_has_excess_one(m):
    F = shift_trunc(m).frame
    T = synthesis_matrix(F)
    assert T.shape == (2 * m + 1, 2 * m + 2)
    assert excess(F)[0] == 1


@given(st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1))
def test_excess_adds_over_orthogonal_blocks(seed1, seed2):
    F1 = random_frame(np.random.default_rng(seed1))
    F2 = random_frame(np.random.default_rng(seed2))
    n1, n2 = F1.ambient_dim, F2.ambient_dim

    def embed(S, offset):
        Q = np.zeros((n1 + n2, S.dim))
        Q[offset:offset + S.ambient_dim] = S.basis
        return Subspace(Q)

    joined = FusionFrame(
        [embed(S, 0) for S in F1.subspaces] + [embed(S, n1) for S in F2.subspaces],
        np.concatenate([F1.weights, F2.weights]),
    )
    assert excess(joined)[0] == excess(F1)[0] + excess(F2)[0]


# -- classify ------------------------------------------------------------------------


def test_classify_orthonormal_decomposition():
    a = classify(orthonormal(3).frame)
    assert a.is_parseval and a.is_tight and a.is_frame
    assert a.is_riesz_basis and a.is_orthogonal_family
    assert a.excess == 0


def test_classify_orthogonal_riesz_u():
    a = classify(riesz_u((1.0, 0.0, 0.0)).frame)
    assert a.is_riesz_basis and a.is_orthogonal_family


def test_classify_non_orthogonal_riesz_u():
    a = classify(riesz_u((r2, r2, 0.0)).frame)
    assert a.is_riesz_basis and not a.is_orthogonal_family


def test_tight2_h9_is_two_tight_and_parseval_after_rescaling():
    F = tight2_h9().frame
    a = classify(F)
    assert a.is_tight and not a.is_parseval
    assert a.lower_bound == pytest.approx(2.0, abs=1e-8)
    assert a.upper_bound == pytest.approx(2.0, abs=1e-8)
    b = classify(F.with_weights([r2] * 3))
    assert b.is_parseval
    assert b.lower_bound == pytest.approx(1.0, abs=1e-8) and b.upper_bound == pytest.approx(1.0, abs=1e-8)


def test_classify_detects_a_non_frame():
    a = classify(lines((1.0, 0.0), (2.0, 0.0)))
    assert not a.is_frame and not a.is_tight and not a.is_riesz_basis


@given(st.integers(0, 2**32 - 1))
def test_classify_flag_implications(seed):
    a = classify(random_frame(np.random.default_rng(seed)))
    assert a.lower_bound <= a.upper_bound
    assert not a.is_parseval or a.is_tight
    assert not a.is_tight or a.is_frame
    assert not a.is_riesz_basis or a.excess == 0


@given(st.integers(0, 2**32 - 1))
def test_classify_is_unitarily_invariant(seed):
    rng = np.random.default_rng(seed)
    F = random_frame(rng)
    U = random_orthogonal(F.ambient_dim, rng)
    a, b = classify(F), classify(F.transformed(U))
    assert a.lower_bound == pytest.approx(b.lower_bound, abs=1e-8)
    assert a.upper_bound == pytest.approx(b.upper_bound, abs=1e-8)
    assert a.excess == b.excess
    for flag in ("is_frame", "is_tight", "is_parseval", "is_riesz_basis", "is_orthogonal_family"):
        gap = abs(a.max_orthogonality_gap - 1e-8) if flag == "is_orthogonal_family" else 1.0
        if gap > 1e-9:
            assert getattr(a, flag) == getattr(b, flag), flag


# -- Riesz decomposition -------------------------------------------------------------


def test_riesz_decompose_orthonormal():
    parts = riesz_decompose(orthonormal(2).frame, [1.0, 1.0])
    np.testing.assert_allclose(parts[0], [1, 0], atol=1e-15)
    np.testing.assert_allclose(parts[1], [0, 1], atol=1e-15)


def test_riesz_decompose_skew_pair():
    parts = riesz_decompose(lines((1.0, 0.0), (1.0, 1.0)), [0.0, 1.0])
    np.testing.assert_allclose(parts[0], [-1, 0], atol=1e-14)
    np.testing.assert_allclose(parts[1], [1, 1], atol=1e-14)


def test_riesz_decompose_excess_vector_of_one_excess_alpha():
    alpha = 0.5
    b = math.sqrt(1 - alpha**2)
    F = one_excess_alpha(alpha).frame.subframe([1, 2, 3])
    x = np.array([alpha, -b, 0.0, 0.0])
    parts = riesz_decompose(F, x)
    np.testing.assert_allclose(parts[0], [alpha + b, 0, 0, 0], atol=1e-14)
    np.testing.assert_allclose(parts[1], [-b, -b, 0, 0], atol=1e-14)
    np.testing.assert_allclose(parts[2], 0, atol=1e-14)


def test_riesz_decompose_requires_a_riesz_basis():
    with pytest.raises(NotRieszBasis):
        riesz_decompose(two_excess_h3().frame, [1.0, 0.0, 0.0])


@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_riesz_decompose_reconstructs(n, seed):
    rng = np.random.default_rng(seed)
    F = random_riesz_basis(rng, n)
    if not is_riesz_basis(F):
        return
    f = rng.standard_normal(n)
    parts = riesz_decompose(F, f)
    assert np.linalg.norm(sum(parts) - f) <= 1e-8 * np.linalg.norm(f) * np.linalg.cond(synthesis_matrix(F))
    for W, p in zip(F.subspaces, parts):
        assert np.linalg.norm(p - W.projector() @ p) <= 1e-8 * max(1.0, np.linalg.norm(p))


# -- duals ---------------------------------------------------------------------------


def test_canonical_dual_of_parseval_frame_is_itself():
    F = tight2_h9().frame.with_weights([r2] * 3)
    D = canonical_dual(F)
    for a, b in zip(F.subspaces, D.subspaces):
        assert a.same_as(b)
    np.testing.assert_array_equal(D.weights, F.weights)


def test_canonical_dual_of_a_tight_frame_keeps_subspaces():
    F = tight2_h9().frame
    D = canonical_dual(F)
    assert all(a.same_as(b) for a, b in zip(F.subspaces, D.subspaces))


def test_canonical_dual_of_skew_riesz_u_satisfies_dual_orthogonality():
    F = riesz_u((r2, r2, 0.0)).frame
    D = canonical_dual(F)
    # the dual of item i is orthogonal to item j for i != j
    assert is_orthogonal_pair(D.subspaces[0], F.subspaces[1])
    assert is_orthogonal_pair(D.subspaces[1], F.subspaces[0])
    Sinv = np.linalg.inv(frame_operator(F))
    for W, Wd in zip(F.subspaces, D.subspaces):
        for v in (Sinv @ W.basis).T:
            assert contains(Wd, v)


def test_canonical_dual_needs_a_frame():
    with pytest.raises(NotAFrame):
        canonical_dual(lines((1.0, 0.0), (2.0, 0.0)))


def test_parseval_frame_is_self_dual():
    F = orthonormal(3).frame
    ok, r = is_dual(F, F)
    assert ok and r <= 1e-14


@given(st.integers(0, 2**32 - 1))
def test_canonical_dual_is_a_dual(seed):
    F = random_frame(np.random.default_rng(seed))
    if not classify(F).is_frame or np.linalg.cond(frame_operator(F)) > 1e6:
        return
    ok, r = is_dual(canonical_dual(F), F)
    assert ok, r


def test_truncated_z_frame_is_a_dual_of_the_truncated_shift():
    Z = zdual_trunc(2, 2).frame
    V = shift_trunc(4).frame
    assert Z.ambient_dim == V.ambient_dim == 9
    ok, r = is_dual(Z, V)
    assert ok and r <= 1e-12
    assert excess(Z)[0] == 5


def test_is_dual_validation():
    with pytest.raises(LengthMismatch):
        is_dual(orthonormal(2).frame, mercedes_benz().frame)
    with pytest.raises(NotAFrame):
        F = lines((1.0, 0.0), (1.0, 0.0))
        is_dual(F, F)


def test_a_non_dual_is_rejected():
    W = mercedes_benz().frame
    V = lines((1.0, 0.0), (0.0, 1.0), (1.0, 0.0))
    ok, r = is_dual(V, W)
    assert not ok and r > 1e-3


def test_characterizations_fail_on_frames_with_excess():
    ch = riesz_characterizations(mercedes_benz().frame)
    assert ch["excess"] == 1
    assert ch["dual_orthogonality"] > 1e-3 and ch["operator_identity"] > 1e-3


# -- Riesz characterizations ---------------------------------------------------------


@given(st.integers(1, 6), st.integers(0, 2**32 - 1), st.booleans())
def test_riesz_characterizations_agree(n, seed, orthogonal):
    rng = np.random.default_rng(seed)
    F = random_riesz_basis(rng, n)
    if orthogonal:
        Q = random_orthogonal(n, rng)
        start, spaces = 0, []
        for W in F.subspaces:
            spaces.append(Subspace(Q[:, start:start + W.dim]))
            start += W.dim
        F = FusionFrame(spaces, F.weights)
    if np.linalg.cond(synthesis_matrix(F, weighted=False)) > 1e4:
        return
    ch = riesz_characterizations(F)
    assert ch["excess"] == 0
    a = ch["dual_orthogonality"] <= 1e-8
    b = ch["operator_identity"] <= 1e-8
    assert a == b == classify(F).is_riesz_basis


def test_gaussian_frames_with_extra_items_have_positive_excess():
    rng = np.random.default_rng(5)
    F = gaussian_frame(rng, n=3, k=5)
    assert excess(F)[0] == sum(F.dims) - 3


def test_random_subspace_helper_spans_requested_dimension():
    assert random_subspace(5, 3, np.random.default_rng(0)).dim == 3

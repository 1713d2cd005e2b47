import numpy as np
import pytest

from fusionscale.decomposition import ExcessDecomposition, ExcessSpec
from fusionscale.errors import MalformedDecomposition
from fusionscale.fixtures import (
    all_fixtures,
    mercedes_benz,
    one_excess_alpha,
    random_orthogonal,
    two_excess_h3,
    two_excess_h4,
)
from fusionscale.fusion import FusionFrame, is_riesz_basis
from fusionscale.subspace import Subspace, contains

E3 = np.eye(3)


def h3_frame():
    return two_excess_h3().frame


def declare(F, riesz, specs, **kw):
    return ExcessDecomposition.declare(F, riesz, specs, **kw)


def test_two_excess_h3_hosting_splits_items():
    dec = two_excess_h3().decomposition
    W1, W2, W3 = dec.riesz_subspaces
    assert W1.same_as(Subspace.coordinate(3, [0]))
    assert W2.same_as(Subspace.coordinate(3, [1]))
    assert W3.same_as(Subspace.coordinate(3, [2]))
    assert dec.hosts() == [0, 1] and dec.standalone_items() == []


def test_components_sum_to_the_excess_vector_and_lie_in_their_subspaces():
    for fx in all_fixtures():
        dec = fx.decomposition
        if dec is None:
            continue
        assert is_riesz_basis(dec.riesz_frame())
        for el in dec.elements:
            assert np.linalg.norm(el.vector) == pytest.approx(1.0)
            assert np.linalg.norm(el.components.sum(axis=0) - el.vector) <= 1e-8
            for W, x in zip(dec.riesz_subspaces, el.components):
                assert contains(W, x)


def test_support_of_the_one_excess_alpha_vector():
    el = one_excess_alpha(0.5).decomposition.elements[0]
    assert el.support() == [0, 1]
    assert el.item == 0 and not el.hosted


def test_standalone_vectors_are_assigned_automatically():
    F = mercedes_benz().frame
    u3 = F.subspaces[2].basis[:, 0]
    dec = declare(F, [0, 1], [ExcessSpec(u3)])
    assert dec.elements[0].item == 2


def test_non_unit_vectors_are_normalized_and_flagged():
    F = mercedes_benz().frame
    u3 = F.subspaces[2].basis[:, 0]
    dec = declare(F, [0, 1], [ExcessSpec(3 * u3)])
    assert dec.normalized
    assert np.linalg.norm(dec.elements[0].vector) == pytest.approx(1.0)
    assert not mercedes_benz().decomposition.normalized


def test_declared_components_are_accepted_when_correct():
    x = np.array([0.0, 1.0, 0.0])
    dec = declare(h3_frame(), [0, 1, 2], [ExcessSpec(x, host=0, components={1: x}), ExcessSpec(E3[0], host=1)])
    np.testing.assert_allclose(dec.elements[0].components[1], x)


def test_transformed_decomposition_follows_the_rotation():
    fx = two_excess_h4()
    U = random_orthogonal(4, np.random.default_rng(1))
    G = fx.frame.transformed(U)
    dec = fx.decomposition.transformed(G, U)
    for a, b in zip(fx.decomposition.riesz_subspaces, dec.riesz_subspaces):
        assert a.transformed(U).same_as(b)
    for a, b in zip(fx.decomposition.elements, dec.elements):
        np.testing.assert_allclose(U @ a.vector, b.vector, atol=1e-12)


@pytest.mark.parametrize(
    "riesz, specs, kw, message",
    [
        ([], [], {}, "empty"),
        ([0, 0, 2], [], {}, "distinct"),
        ([0, 1, 2], [ExcessSpec([0.0, 0.0, 0.0], host=0)], {}, "zero"),
        ([0, 1, 2], [ExcessSpec([0.0, 1.0], host=0)], {}, "length"),
        ([0, 1, 2], [ExcessSpec(E3[1], host=0, item=1)], {}, "not both"),
        ([0, 1, 2], [ExcessSpec(E3[2], host=0), ExcessSpec(E3[0], host=1)], {}, "does not lie"),
        ([0, 1, 2], [ExcessSpec(E3[1], host=0)], {}, "not a fusion Riesz basis"),
        ([0, 1, 2], [ExcessSpec(E3[1], host=0), ExcessSpec(E3[0], host=1)], {"riesz_bases": {3: [E3[0]]}}, "not in the Riesz"),
        ([0, 1, 2], [ExcessSpec(E3[1], host=0), ExcessSpec(E3[0], host=1)], {"riesz_bases": {0: [E3[2]]}}, "not inside"),
        ([0, 1, 2], [ExcessSpec(E3[1], host=0), ExcessSpec(E3[0], host=1, components={0: E3[1]})], {}, "does not lie in its Riesz"),
        ([0, 1], [ExcessSpec(E3[2], item=2)], {}, "Riesz basis"),
    ],
)
def test_malformed_declarations_are_rejected(riesz, specs, kw, message):
    with pytest.raises(MalformedDecomposition, match=message):
        declare(h3_frame(), riesz, specs, **kw)


def test_hosted_vectors_must_leave_a_nonzero_riesz_subspace():
    F = FusionFrame([Subspace.coordinate(2, [0]), Subspace.coordinate(2, [1])])
    with pytest.raises(MalformedDecomposition, match="whole item"):
        declare(F, [0, 1], [ExcessSpec([1.0, 0.0], host=0)])


def test_standalone_vector_must_fit_some_item():
    F = mercedes_benz().frame
    with pytest.raises(MalformedDecomposition, match="no non-Riesz item"):
        declare(F, [0, 1], [ExcessSpec([1.0, 0.0])])


def test_standalone_item_must_be_fully_spanned():
    F = FusionFrame([Subspace.coordinate(2, [0]), Subspace.coordinate(2, [1]), Subspace.coordinate(2, [0, 1])])
    with pytest.raises(MalformedDecomposition, match="exactly 2"):
        declare(F, [0, 1], [ExcessSpec([1.0, 0.0], item=2)])


def test_wrong_components_are_rejected():
    F = FusionFrame([Subspace.coordinate(2, [0]), Subspace.span([(1.0, 1.0)]), Subspace.span([(0.0, 1.0)])])
    with pytest.raises(MalformedDecomposition, match="sum"):
        declare(F, [0, 1], [ExcessSpec([0.0, 1.0], components={0: [1.0, 0.0]})])
    with pytest.raises(MalformedDecomposition, match="not in the Riesz"):
        declare(F, [0, 1], [ExcessSpec([0.0, 1.0], components={2: [0.0, 1.0]})])
    dec = declare(F, [0, 1], [ExcessSpec([0.0, 1.0], components={0: [-1.0, 0.0], 1: [1.0, 1.0]})])
    assert dec.elements[0].support() == [0, 1]

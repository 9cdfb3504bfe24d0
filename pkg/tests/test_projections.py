import numpy as np
import pytest
from conftest import dataset_from_blocks

from closedloop.errors import ProjectionDidNotConverge, RankDeficient
from closedloop.games import core
from closedloop.games.core import LinearEncoder
from closedloop.games.projections import (
    EnergyConstraint,
    EnergyConstraints,
    polar,
    project_onto_constraints,
    semi_orthogonality_error,
    stiefel_tangent,
)


def random_moments(rng, d, count, rank=3):
    out = []
    for _ in range(count):
        X = rng.standard_normal((d, rank))
        out.append(X @ X.T)
    return out


def test_feasible_input_is_returned_unchanged(rng):
    moments = random_moments(rng, 5, 2)
    F = 1e-3 * rng.standard_normal((3, 5))
    out = project_onto_constraints(F, moments, [1.0, 1.0])
    np.testing.assert_array_equal(out, F)


def test_single_constraint_is_radial():
    out = project_onto_constraints(2 * np.eye(2), [np.eye(2)], [1.0])
    np.testing.assert_allclose(out, np.eye(2) / np.sqrt(2), atol=1e-8)


def test_identity_data_projects_to_identity():
    ds = dataset_from_blocks([np.eye(2)])
    out = core.project_encoder_msp(LinearEncoder(2 * np.eye(2)), ds)
    np.testing.assert_allclose(out.F, np.eye(2), atol=1e-8)


def test_intersection_is_feasible_and_idempotent(rng):
    for _ in range(10):
        moments = random_moments(rng, 6, 2)
        budgets = [1.0, 2.0]
        constraints = EnergyConstraints.from_pairs(moments, budgets)
        F = 10 * rng.standard_normal((4, 6))
        P = constraints.project(F)
        assert constraints.violation(P) < 1e-8
        np.testing.assert_allclose(constraints.project(P), P, atol=1e-6)


def test_projection_is_closer_than_any_feasible_point(rng):
    moments = random_moments(rng, 5, 2)
    constraints = EnergyConstraints.from_pairs(moments, [1.0, 1.0])
    F = 5 * rng.standard_normal((3, 5))
    P = constraints.project(F)
    for _ in range(50):
        Q = constraints.project(5 * rng.standard_normal((3, 5)))
        assert np.linalg.norm(F - P) <= np.linalg.norm(F - Q) + 1e-6


def test_single_constraint_is_non_expansive(rng):
    (M,) = random_moments(rng, 5, 1)
    c = EnergyConstraint.from_moment(M, 1.0)
    for _ in range(20):
        A = 3 * rng.standard_normal((2, 5))
        B = 3 * rng.standard_normal((2, 5))
        assert np.linalg.norm(c.project(A) - c.project(B)) <= np.linalg.norm(A - B) + 1e-9


def test_sweep_cap_raises():
    v = np.array([1.0, 1.0]) / np.sqrt(2)
    moments = [np.diag([1.0, 0.0]), np.outer(v, v)]
    constraints = EnergyConstraints.from_pairs(moments, [1.0, 1.0])
    with pytest.raises(ProjectionDidNotConverge) as e:
        constraints.project(np.array([[3.0, -3.0]]), max_sweeps=1)
    assert e.value.sweeps == 1
    assert e.value.worst_violation > 1e-8


def test_same_case_converges_with_enough_sweeps():
    v = np.array([1.0, 1.0]) / np.sqrt(2)
    moments = [np.diag([1.0, 0.0]), np.outer(v, v)]
    constraints = EnergyConstraints.from_pairs(moments, [1.0, 1.0])
    P = constraints.project(np.array([[3.0, -3.0]]))
    assert constraints.violation(P) < 1e-8


def test_polar_examples(rng):
    np.testing.assert_allclose(polar(np.diag([2.0, 3.0])), np.eye(2), atol=1e-12)
    Q, _ = np.linalg.qr(rng.standard_normal((5, 3)))
    np.testing.assert_allclose(polar(Q), Q, atol=1e-10)
    with pytest.raises(RankDeficient):
        polar(np.zeros((3, 4)))


@pytest.mark.parametrize("shape", [(3, 5), (5, 3), (4, 4)])
def test_polar_is_semi_orthogonal_on_the_thinner_side(shape, rng):
    A = polar(rng.standard_normal(shape))
    assert semi_orthogonality_error(A) < 1e-10


def test_tangent_leaves_interior_directions_alone(rng):
    constraints = EnergyConstraints.from_pairs(random_moments(rng, 5, 2), [1.0, 1.0])
    F = 1e-3 * rng.standard_normal((3, 5))
    D = rng.standard_normal((3, 5))
    assert constraints.tangent(F, D) is D


def test_tangent_drops_the_outward_normal():
    constraints = EnergyConstraints.from_pairs([np.eye(2)], [1.0])
    F = constraints.project(2 * np.eye(2))
    np.testing.assert_allclose(constraints.tangent(F, 3 * F), 0.0, atol=1e-10)
    np.testing.assert_allclose(constraints.tangent(F, -F), -F, atol=1e-12)
    D = np.array([[0.0, 1.0], [-1.0, 0.0]])
    np.testing.assert_allclose(constraints.tangent(F, F + D), D, atol=1e-10)


def test_tangent_cone_properties(rng):
    for _ in range(10):
        constraints = EnergyConstraints.from_pairs(random_moments(rng, 6, 2), [1.0, 2.0])
        F = constraints.project(10 * rng.standard_normal((4, 6)))
        active = [c for c in constraints.constraints if c.is_active(F)]
        assert active
        D = rng.standard_normal((4, 6))
        T = constraints.tangent(F, D)
        for c in active:
            N = c.normal(F)
            assert np.sum(T * N) <= 1e-7 * np.linalg.norm(N) * np.linalg.norm(D)
        # what was removed is orthogonal to what is left
        assert abs(np.sum((D - T) * T)) <= 1e-7 * np.linalg.norm(D) ** 2


def test_stiefel_tangent_tall(rng):
    W = polar(rng.standard_normal((5, 3)))
    T = stiefel_tangent(W, rng.standard_normal((5, 3)))
    np.testing.assert_allclose(W.T @ T + T.T @ W, 0.0, atol=1e-12)
    S = rng.standard_normal((3, 3))
    np.testing.assert_allclose(stiefel_tangent(W, W @ (S + S.T)), 0.0, atol=1e-12)
    np.testing.assert_allclose(stiefel_tangent(W, T), T, atol=1e-12)


def test_stiefel_tangent_wide(rng):
    W = polar(rng.standard_normal((3, 5)))
    T = stiefel_tangent(W, rng.standard_normal((3, 5)))
    np.testing.assert_allclose(T @ W.T + W @ T.T, 0.0, atol=1e-12)
    S = rng.standard_normal((3, 3))
    np.testing.assert_allclose(stiefel_tangent(W, (S + S.T) @ W), 0.0, atol=1e-12)
    np.testing.assert_allclose(stiefel_tangent(W, T), T, atol=1e-12)

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import cross, rodrigues
from ftcomp.so3 import NotARotation, gravity_wrench, is_rotation, skew, validate_rotation

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
vec3 = arrays(np.float64, 3, elements=finite)


def test_skew_examples():
    np.testing.assert_array_equal(skew([0, 0, 0]), np.zeros((3, 3)))
    np.testing.assert_array_equal(skew([1, 2, 3]), [[0, -3, 2], [3, 0, -1], [-2, 1, 0]])
    p = np.array([0.1, 0.2, 0.3])
    np.testing.assert_allclose(skew(p) @ p, np.zeros(3), atol=1e-15)


@given(vec3, vec3)
def test_skew_matches_cross_product(a, b):
    np.testing.assert_allclose(skew(a) @ b, cross(a, b), rtol=1e-12, atol=1e-9)


@given(vec3)
def test_skew_antisymmetric(p):
    S = skew(p)
    np.testing.assert_array_equal(S + S.T, np.zeros((3, 3)))


def test_validate_rotation_examples():
    np.testing.assert_array_equal(validate_rotation(np.eye(3)), np.eye(3))
    with pytest.raises(NotARotation):
        validate_rotation(2 * np.eye(3), "strict")
    np.testing.assert_allclose(validate_rotation(2 * np.eye(3), "project"), np.eye(3),
                               atol=1e-15)


def test_validate_rotation_rejects_reflection_and_bad_shapes():
    with pytest.raises(NotARotation):
        validate_rotation(np.diag([1.0, 1.0, -1.0]))
    with pytest.raises(NotARotation):
        validate_rotation(np.eye(2))
    with pytest.raises(NotARotation):
        validate_rotation(np.full((3, 3), np.nan))
    with pytest.raises(ValueError):
        validate_rotation(np.eye(3), "lenient")


def test_strict_tolerance_boundary():
    R = rodrigues([1, 2, 3], 0.7)
    validate_rotation(R * (1 + 1e-8))
    with pytest.raises(NotARotation):
        validate_rotation(R * (1 + 1e-5))


@settings(max_examples=200)
@given(arrays(np.float64, (3, 3), elements=st.floats(-10, 10, allow_subnormal=False)))
def test_project_gives_rotation_for_full_rank(M):
    if abs(np.linalg.det(M)) < 1e-3:
        return
    R = validate_rotation(M, "project")
    assert is_rotation(R)


@given(arrays(np.float64, (3, 3), elements=st.floats(-1, 1, allow_subnormal=False)))
def test_project_is_closest_rotation(M):
    if abs(np.linalg.det(M)) < 1e-3:
        return
    R = validate_rotation(M, "project")
    rng = np.random.default_rng(0)
    # no random nearby rotation should be closer in Frobenius norm
    for _ in range(20):
        Q = rodrigues(rng.normal(size=3), rng.uniform(0, 0.3)) @ R
        assert np.linalg.norm(M - R) <= np.linalg.norm(M - Q) + 1e-9


def test_product_of_rotations_passes_strict(rng):
    R = np.eye(3)
    for _ in range(50):
        R = R @ rodrigues(rng.normal(size=3), rng.uniform(0, np.pi))
    validate_rotation(R, "strict")


def test_gravity_wrench_examples():
    w = gravity_wrench(np.eye(3), [0, 0, 0.0435], [0, 0, -1])
    np.testing.assert_allclose(w.force, [0, 0, -1])
    np.testing.assert_allclose(w.torque, [0, 0, 0], atol=1e-15)

    w = gravity_wrench(rodrigues([0, 1, 0], 0.3), [0.1, 0.2, 0.3], [0, 0, 0])
    np.testing.assert_array_equal(w.as_array(), np.zeros(6))

    Ry90 = rodrigues([0, 1, 0], np.pi / 2)
    np.testing.assert_allclose(Ry90 @ [0, 0, -1], [-1, 0, 0], atol=1e-15)
    w = gravity_wrench(Ry90, [0, 0, 0.0435], [0, 0, -1])
    np.testing.assert_allclose(w.force, [-1, 0, 0], atol=1e-15)
    np.testing.assert_allclose(w.torque, [0, -0.0435, 0], atol=1e-15)


@given(vec3, vec3, st.floats(0, np.pi))
def test_gravity_torque_orthogonal_to_force(p, f_mg, angle):
    R = rodrigues([0.3, -1, 0.2], angle)
    w = gravity_wrench(R, p, f_mg)
    scale = 1 + np.linalg.norm(p) * np.linalg.norm(f_mg) ** 2
    assert abs(w.torque @ w.force) <= 1e-12 * scale
    np.testing.assert_allclose(w.torque, cross(p, R @ f_mg), rtol=1e-12, atol=1e-9)

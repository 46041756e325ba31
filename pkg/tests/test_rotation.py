import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import random_unit_quats, rodrigues
from so3topo.errors import InputValidationError
from so3topo.rotation import (
    AxisAngle,
    RotationMatrix,
    UnitQuaternion,
    canonicalize_array,
    matrix_to_quat,
    projected_distance_array,
    quat_compose,
    quat_conjugate,
    quat_from_axis_angle,
    quat_to_matrix,
    rotation_distance,
)

E_X, E_Y, E_Z = np.eye(3)

quat_arrays = arrays(np.float64, 4, elements=st.floats(-1, 1, allow_nan=False)).filter(
    lambda a: np.linalg.norm(a) > 1e-3
)


def q_of(a):
    return UnitQuaternion.from_array(a)


def test_unit_quaternion_renormalizes():
    q = UnitQuaternion(2.0, 0.0, 0.0, 0.0)
    assert (q.w, q.x, q.y, q.z) == (1.0, 0.0, 0.0, 0.0)
    q = UnitQuaternion(1.0, 2.0, 3.0, 4.0)
    assert abs(np.linalg.norm(q.as_array()) - 1) <= 1e-12


def test_zero_quaternion_rejected():
    with pytest.raises(InputValidationError):
        UnitQuaternion(0.0, 0.0, 0.0, 0.0)


class TestFromAxisAngle:
    def test_identity(self):
        assert quat_from_axis_angle(E_Z, 0.0).as_array().tolist() == [1.0, 0.0, 0.0, 0.0]

    def test_full_turn_is_minus_one(self):
        np.testing.assert_allclose(quat_from_axis_angle(E_Z, 2 * np.pi).as_array(), [-1, 0, 0, 0], atol=1e-15)

    def test_half_angle(self):
        h = np.sqrt(2) / 2
        np.testing.assert_allclose(quat_from_axis_angle(E_X, np.pi / 2).as_array(), [h, h, 0, 0], atol=1e-15)

    def test_non_unit_axis(self):
        with pytest.raises(InputValidationError):
            quat_from_axis_angle((1.0, 1.0, 0.0), 0.3)

    def test_axis_angle_record(self):
        aa = AxisAngle((0.0, 0.0, 1.0), 2 * np.pi + 0.5)
        assert aa.angle == pytest.approx(0.5)
        np.testing.assert_allclose(aa.to_quat().to_matrix().m, rodrigues(E_Z, 0.5), atol=1e-12)


class TestCompose:
    def test_identity_left(self, rng):
        q = q_of(random_unit_quats(rng, 1)[0])
        np.testing.assert_allclose(quat_compose(UnitQuaternion(1, 0, 0, 0), q).as_array(), q.as_array())

    def test_inverse(self, rng):
        for a in random_unit_quats(rng, 20):
            q = q_of(a)
            r = quat_compose(q, quat_conjugate(q)).as_array()
            np.testing.assert_allclose(np.abs(r), [1, 0, 0, 0], atol=1e-12)

    def test_two_quarter_turns_make_half_turn(self):
        q = quat_from_axis_angle(E_Z, np.pi / 2)
        expected = rodrigues(E_Z, np.pi / 2) @ rodrigues(E_Z, np.pi / 2)
        got = quat_compose(q, q)
        np.testing.assert_allclose(quat_to_matrix(got).m, expected, atol=1e-12)
        np.testing.assert_allclose(np.abs(got.as_array()), [0, 0, 0, 1], atol=1e-12)

    @given(quat_arrays, quat_arrays)
    def test_homomorphism(self, a, b):
        qa, qb = q_of(a), q_of(b)
        lhs = quat_to_matrix(quat_compose(qa, qb)).m
        rhs = quat_to_matrix(qa).m @ quat_to_matrix(qb).m
        assert np.max(np.abs(lhs - rhs)) <= 1e-10


class TestConjugate:
    def test_values(self):
        assert quat_conjugate(UnitQuaternion(1, 0, 0, 0)).as_array().tolist() == [1, 0, 0, 0]
        assert quat_conjugate(UnitQuaternion(0, 0, 0, 1)).as_array().tolist() == [0, 0, 0, -1]

    def test_is_transpose(self, rng):
        for a in random_unit_quats(rng, 50):
            q = q_of(a)
            np.testing.assert_allclose(quat_to_matrix(quat_conjugate(q)).m, quat_to_matrix(q).m.T, atol=1e-12)


class TestToMatrix:
    def test_identity(self):
        assert np.array_equal(quat_to_matrix(UnitQuaternion(1, 0, 0, 0)).m, np.eye(3))

    def test_half_turn_z(self):
        np.testing.assert_array_equal(quat_to_matrix(UnitQuaternion(0, 0, 0, 1)).m, np.diag([-1.0, -1.0, 1.0]))

    def test_minus_one_is_identity(self):
        assert np.array_equal(quat_to_matrix(UnitQuaternion(-1, 0, 0, 0)).m, np.eye(3))

    @given(quat_arrays)
    def test_double_cover_exact(self, a):
        q = q_of(a)
        assert np.array_equal(quat_to_matrix(q).m, quat_to_matrix(-q).m)

    def test_matches_independent_rodrigues(self, rng):
        for _ in range(20):
            axis = rng.standard_normal(3)
            axis /= np.linalg.norm(axis)
            ang = rng.uniform(0, 2 * np.pi)
            np.testing.assert_allclose(quat_to_matrix(quat_from_axis_angle(axis, ang)).m, rodrigues(axis, ang), atol=1e-12)


class TestMatrixToQuat:
    def test_identity(self):
        assert matrix_to_quat(np.eye(3)).as_array().tolist() == [1.0, 0.0, 0.0, 0.0]

    def test_half_turn_tie_break(self):
        np.testing.assert_allclose(matrix_to_quat(np.diag([-1.0, -1.0, 1.0])).as_array(), [0, 0, 0, 1], atol=1e-15)
        # rotation by pi about -e_x is the same rotation; canonical x is positive
        np.testing.assert_allclose(matrix_to_quat(np.diag([1.0, -1.0, -1.0])).as_array(), [0, 1, 0, 0], atol=1e-15)

    def test_round_trip_random(self, rng):
        q = canonicalize_array(random_unit_quats(rng, 1000))
        for a in q:
            m = quat_to_matrix(q_of(a)).m
            back = matrix_to_quat(m)
            np.testing.assert_allclose(back.as_array(), a, atol=1e-9)
            np.testing.assert_allclose(quat_to_matrix(back).m, m, atol=1e-9)

    def test_rejects_non_orthogonal(self):
        with pytest.raises(InputValidationError):
            matrix_to_quat(np.diag([1.0, 1.0, 1.1]))
        with pytest.raises(InputValidationError):
            matrix_to_quat(np.diag([1.0, 1.0, -1.0]))

    @given(quat_arrays)
    def test_canonical_lift_is_a_section(self, a):
        q = matrix_to_quat(quat_to_matrix(q_of(a)).m)
        assert q.w >= 0


class TestDistance:
    def test_zero(self, rng):
        m = quat_to_matrix(q_of(random_unit_quats(rng, 1)[0]))
        assert rotation_distance(m, m) == pytest.approx(0.0, abs=1e-7)

    def test_half_turn(self, rng):
        axis = rng.standard_normal(3)
        axis /= np.linalg.norm(axis)
        assert rotation_distance(np.eye(3), rodrigues(axis, np.pi)) == pytest.approx(np.pi, abs=1e-9)

    def test_triangle_inequality(self, rng):
        q = random_unit_quats(rng, 3000).reshape(1000, 3, 4)
        for a, b, c in q:
            A, B, C = (quat_to_matrix(q_of(x)).m for x in (a, b, c))
            assert rotation_distance(A, C) <= rotation_distance(A, B) + rotation_distance(B, C) + 1e-12

    def test_symmetric(self, rng):
        a, b = (quat_to_matrix(q_of(x)).m for x in random_unit_quats(rng, 2))
        assert rotation_distance(a, b) == pytest.approx(rotation_distance(b, a), abs=1e-14)

    @pytest.mark.parametrize("theta", np.linspace(0, 2 * np.pi, 25, endpoint=False))
    def test_angle_folding(self, theta, rng):
        axis = rng.standard_normal(3)
        axis /= np.linalg.norm(axis)
        m = quat_to_matrix(quat_from_axis_angle(axis, theta))
        assert rotation_distance(np.eye(3), m) == pytest.approx(min(theta, 2 * np.pi - theta), abs=1e-9)

    def test_projected_distance_matches_matrix_distance(self, rng):
        a, b = random_unit_quats(rng, 2)
        d = projected_distance_array(a, -b)
        assert d == pytest.approx(rotation_distance(quat_to_matrix(q_of(a)), quat_to_matrix(q_of(b))), abs=1e-12)


def test_rotation_matrix_validation():
    with pytest.raises(InputValidationError):
        RotationMatrix(np.ones((3, 3)))
    r = RotationMatrix.identity()
    with pytest.raises(ValueError):
        r.m[0, 0] = 2.0

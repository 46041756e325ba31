import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from so3topo.errors import InputValidationError
from so3topo.homotopy import classify
from so3topo.paths import (
    HomotopyClass,
    Loop,
    RotationPath,
    axis_rotation_loop,
    concat,
    constant_loop,
    load_path,
    path_from_json,
    path_to_json,
    random_loop,
    refine,
    reverse,
    save_path,
)
from so3topo.rotation import RotationMatrix, quat_to_matrix_array

E_X, E_Y, E_Z = np.eye(3)


def test_homotopy_class_group():
    T, N = HomotopyClass.TRIVIAL, HomotopyClass.NONTRIVIAL
    assert N * N is T and T * N is N and T * T is T
    assert N.sign == -1 and str(N) == "-1" and str(T) == "+1"


class TestAxisRotationLoop:
    def test_full_turn_is_loop(self):
        loop = axis_rotation_loop(E_Z, 2 * np.pi, 101)
        assert isinstance(loop, Loop)
        np.testing.assert_allclose(quat_to_matrix_array(loop.samples[50]), np.diag([-1.0, -1.0, 1.0]), atol=1e-12)

    def test_double_turn_winds_once_around_great_circle(self):
        loop = axis_rotation_loop(E_Z, 4 * np.pi, 100)
        assert isinstance(loop, Loop)
        q = loop.samples
        np.testing.assert_allclose(q[:, 1:3], 0, atol=1e-15)
        winding = np.sum(np.diff(np.unwrap(np.arctan2(q[:, 3], q[:, 0])))) / (2 * np.pi)
        assert winding == pytest.approx(1.0)

    def test_half_turn_is_open(self):
        p = axis_rotation_loop(E_X, np.pi, 10)
        assert isinstance(p, RotationPath)
        np.testing.assert_allclose(p.end.m, np.diag([1.0, -1.0, -1.0]), atol=1e-12)
        np.testing.assert_allclose(p.start.m, np.eye(3))

    def test_too_few_samples(self):
        with pytest.raises(InputValidationError):
            axis_rotation_loop(E_X, np.pi, 1)


class TestConcatReverse:
    def test_constant_is_neutral(self):
        g = axis_rotation_loop(E_X, 2 * np.pi, 60)
        c = concat(constant_loop(), g)
        assert classify(c) == classify(g)
        assert len(c) == len(g) + 1

    def test_two_full_turns(self):
        g = axis_rotation_loop(E_Z, 2 * np.pi, 100)
        assert classify(concat(g, g)) == classify(axis_rotation_loop(E_Z, 4 * np.pi, 200)) == HomotopyClass.TRIVIAL

    def test_inverse_law(self, loop_corpus):
        for g in loop_corpus[:30]:
            assert classify(concat(g, reverse(g))) is HomotopyClass.TRIVIAL

    def test_basepoint_mismatch(self):
        b = RotationMatrix(quat_to_matrix_array(np.array([0.0, 1.0, 0.0, 0.0])))
        with pytest.raises(InputValidationError):
            concat(constant_loop(), constant_loop(b))

    def test_reverse_involution(self, loop_corpus):
        g = loop_corpus[0]
        assert np.array_equal(reverse(reverse(g)).samples, g.samples)
        c = constant_loop(n=5)
        assert np.array_equal(reverse(c).samples, c.samples)

    def test_reverse_keeps_class(self, loop_corpus):
        for g in loop_corpus[:50]:
            assert classify(reverse(g)) == classify(g)

    def test_associativity(self, loop_corpus):
        a, b, c = loop_corpus[:3]
        assert classify(concat(concat(a, b), c)) == classify(concat(a, concat(b, c)))

    def test_loop_requires_closure(self):
        with pytest.raises(InputValidationError):
            Loop(axis_rotation_loop(E_X, np.pi, 10))


class TestRefine:
    def test_fine_path_unchanged(self):
        p = axis_rotation_loop(E_Z, 2 * np.pi, 400)
        assert refine(p, 0.1) is p

    def test_quarter_turn(self):
        p = RotationPath(np.array([[1.0, 0, 0, 0], [np.cos(np.pi / 4), 0, 0, np.sin(np.pi / 4)]]))
        r = refine(p, 0.1)
        assert len(r) >= 16
        assert r.max_step() <= 0.1
        assert np.array_equal(r.samples[[0, -1]], p.samples)
        np.testing.assert_allclose(r.steps().sum(), np.pi / 2, atol=1e-12)

    def test_idempotent(self, loop_corpus):
        g = loop_corpus[3]
        r = refine(g, 0.01)
        assert refine(r, 0.01) is r

    def test_keeps_class(self):
        for seed in range(100):
            coarse = Loop(RotationPath(random_loop(seed, 3, eps=0.9).samples))
            assert classify(refine(coarse, 0.05)) == classify(coarse)

    def test_never_increases_step_and_keeps_endpoints(self, loop_corpus):
        for g in loop_corpus[:20]:
            r = refine(g, 0.013)
            assert r.max_step() <= min(g.max_step(), 0.013)
            assert np.array_equal(r.samples[0], g.samples[0]) and np.array_equal(r.samples[-1], g.samples[-1])
            assert isinstance(r, Loop)

    def test_shorter_arc_across_sign_flip(self):
        # consecutive samples on opposite hemispheres are still a short step
        q = np.array([[1.0, 0, 0, 0], [-np.cos(0.2), 0, 0, -np.sin(0.2)]])
        r = refine(RotationPath(q), 0.05)
        assert r.steps().sum() == pytest.approx(0.4, abs=1e-12)

    def test_bad_eps(self):
        with pytest.raises(InputValidationError):
            refine(constant_loop(), 0.0)


class TestRandomLoop:
    def test_deterministic(self):
        assert np.array_equal(random_loop(7, 3).samples, random_loop(7, 3).samples)

    def test_zero_waypoints(self):
        assert classify(random_loop(5, 0)) is HomotopyClass.TRIVIAL

    def test_refined_and_closed(self):
        g = random_loop(3, 4)
        assert g.max_step() <= 0.05
        np.testing.assert_allclose(quat_to_matrix_array(g.samples[[0, -1]]), np.stack([np.eye(3)] * 2), atol=1e-12)

    def test_both_classes_occur(self):
        counts = {c: 0 for c in HomotopyClass}
        for seed in range(1000):
            counts[classify(random_loop(seed, 2))] += 1
        assert counts[HomotopyClass.TRIVIAL] > 100 and counts[HomotopyClass.NONTRIVIAL] > 100

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2**32), st.integers(0, 2**32))
    def test_homomorphism_property(self, s1, s2):
        a, b = random_loop(s1, 2), random_loop(s2, 3)
        assert classify(concat(a, b)) == classify(a) * classify(b)


class TestJson:
    def test_round_trip(self, tmp_path):
        g = axis_rotation_loop(E_Y, 2 * np.pi, 50)
        f = tmp_path / "loop.json"
        save_path(g, f)
        back = load_path(f)
        assert isinstance(back, Loop)
        assert np.array_equal(back.samples, g.samples)
        assert set(json.loads(f.read_text())) >= {"basepoint", "samples"}

    def test_open_path(self):
        p = path_from_json(path_to_json(axis_rotation_loop(E_X, 1.0, 5)))
        assert isinstance(p, RotationPath)

    def test_closed_without_basepoint_is_loop(self):
        doc = {"samples": axis_rotation_loop(E_X, 2 * np.pi, 40).samples.tolist()}
        assert isinstance(path_from_json(doc), Loop)

    @pytest.mark.parametrize("doc", [
        [], {"samples": [[1, 0, 0, 0]]}, {"samples": [[1, 0, 0], [1, 0, 0]]}, {"samples": "x"},
        {"samples": [[0, 0, 0, 0], [1, 0, 0, 0]]},
    ])
    def test_malformed(self, doc):
        with pytest.raises(InputValidationError):
            path_from_json(doc)

    def test_truncated_file(self, tmp_path):
        f = tmp_path / "bad.json"
        f.write_text('{"samples": [[1, 0, 0')
        with pytest.raises(InputValidationError):
            load_path(f)

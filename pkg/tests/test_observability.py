import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from sensobs import ConfigurationError
from sensobs.kinematics import Transform
from sensobs.observability import (FORCE, IDENTITY_KIND, SensorAxis, SensorMount, SensorSuite, analyze,
                                   force_torque_suite, force_transform, gamma_max, gamma_sum, identity_transform,
                                   joint_torque_suite, observability_index, observability_matrix,
                                   sensor_axes_in_task_frame)
from sensobs.presets import BAXTER_LIKE, PLANAR2R, SUITES, baxter_poses, planar_chain

from conftest import random_configs

E = np.eye(6)
ONE_JOINT = planar_chain((1.0,), "one")
AT_EE_2R = SUITES["planar2r-ft6"]

# nonzero components stay clear of the subnormal range
unit = st.one_of(st.just(0.0), st.floats(1e-100, 1.0))
coord = st.floats(-10.0, 10.0).filter(lambda x: x == 0 or abs(x) > 1e-100)


def test_rotation_identity_frame():
    axes, arms = sensor_axes_in_task_frame(ONE_JOINT, [0.0], SensorSuite((SensorAxis(SensorMount(1), E[5]),)))
    assert np.array_equal(axes[0], E[5])
    assert np.array_equal(arms[0], [1.0, 0.0, 0.0])


def test_rotation_quarter_turn_about_x():
    mount = SensorMount(1, Transform(rpy=(np.pi / 2, 0.0, 0.0)))
    axes, _ = sensor_axes_in_task_frame(ONE_JOINT, [0.0], SensorSuite((SensorAxis(mount, E[5]),)))
    assert np.array_equal(axes[0, 3:], [0.0, -1.0, 0.0])


def test_rotated_axes_keep_unit_norm():
    suite = joint_torque_suite(7)
    for q in random_configs(BAXTER_LIKE, 20):
        axes, _ = sensor_axes_in_task_frame(BAXTER_LIKE, q, suite)
        assert np.allclose(np.linalg.norm(axes[:, 3:], axis=1), 1.0, atol=1e-14)


def test_force_transform_examples():
    tau_z = E[5]
    assert np.array_equal(force_transform(tau_z, [1.0, 0, 0]), [0, 1, 0, 0, 0, 1])
    assert np.array_equal(force_transform(tau_z, [0, 0, 2.0]), [0, 0, 0, 0, 0, 1])
    for r in ([0.0, 0, 0], [3.0, -1, 2]):
        assert np.array_equal(force_transform(E[0], r), E[0])


def test_identity_transform_examples():
    assert np.array_equal(identity_transform(E[0]), E[0])
    assert identity_transform([0, -0.5, 0, 0, 0, 0])[1] == 0.5
    assert np.array_equal(identity_transform(np.zeros(6)), np.zeros(6))


def test_matrix_single_torque_sensor():
    m = observability_matrix(ONE_JOINT, [0.0], joint_torque_suite(1))
    assert np.array_equal(m.S[:, 0], [0, 1, 0, 0, 0, 1])
    assert not m.collinear[0]


def test_matrix_extended_planar_row_zero():
    m = observability_matrix(PLANAR2R, [0.0, 0.0], joint_torque_suite(2))
    assert np.array_equal(m.S[0], [0.0, 0.0])
    assert np.array_equal(gamma_sum(m.S)[0], 0.0)


def test_matrix_six_axes_at_task_frame():
    m = observability_matrix(PLANAR2R, [0.0, 0.0], AT_EE_2R)
    assert np.array_equal(m.S, E)
    assert m.collinear.all()


def test_gamma_examples():
    assert np.array_equal(gamma_sum(E), np.ones(6))
    assert np.array_equal(gamma_max(E), np.ones(6))
    c = np.array([0.2, 0.0, 1.0, 0.0, 0.5, 0.0])
    assert np.array_equal(gamma_sum(np.column_stack([c, c])), 2 * c)
    S = np.zeros((6, 2))
    S[0] = 0.5, 0.7
    assert gamma_max(S)[0] == 0.7


def test_index_examples():
    assert observability_index(np.ones(6)) == 1.0
    assert observability_index([1, 1, 0, 1, 1, 1]) == 0.0
    assert observability_index([2, 1, 1, 1, 1, 3]) == 6.0
    # underflow must not fake an observability singularity
    assert observability_index([1e-200, 1e-200, 1, 1, 1, 1]) > 0.0


def test_analyze_examples():
    r = analyze(PLANAR2R, [0.0, 0.0], AT_EE_2R, "max")
    assert r.o == 1.0 and not r.per_axis_flags.any()
    r = analyze(PLANAR2R, [0.0, 0.0], joint_torque_suite(2), "sum")
    assert r.o == 0.0 and r.s[0] == 0.0 and "f_x" in r.flagged_axes
    assert np.array_equal(r.ellipsoid_force, r.s[:3])
    assert np.array_equal(r.ellipsoid_torque, r.s[3:])


def test_analyze_hanging_arm_loses_tau_x():
    q = baxter_poses()["tau_x_singular"]
    r = analyze(BAXTER_LIKE, q, SUITES["baxter-like-torque"])
    assert np.array_equal(r.matrix.S[3], np.zeros(7))
    assert r.o == 0.0 and "tau_x" in r.flagged_axes


def test_threshold_flags():
    r = analyze(PLANAR2R, [0.3, 0.8], AT_EE_2R, "max", threshold=0.9)
    assert list(r.per_axis_flags) == list(r.s < 0.9)
    with pytest.raises(ConfigurationError):
        analyze(PLANAR2R, [0.0, 0.0], AT_EE_2R, threshold=-1.0)


def test_custom_gamma_receives_moment_arms():
    seen = {}

    def squared_sum(S, arms):
        seen["arms"] = arms
        return np.sum(S ** 2, axis=1)

    r = analyze(PLANAR2R, [0.0, 0.5], joint_torque_suite(2), squared_sum)
    assert r.gamma_kind == "squared_sum"
    assert seen["arms"].shape == (2, 3)
    with pytest.raises(ConfigurationError, match="gamma"):
        analyze(PLANAR2R, [0.0, 0.5], joint_torque_suite(2), "median")


def test_identity_kind_ignores_moment_arm():
    suite = SensorSuite((SensorAxis(SensorMount(1), E[5], IDENTITY_KIND),))
    m = observability_matrix(ONE_JOINT, [0.0], suite)
    assert np.array_equal(m.S[:, 0], E[5])


def test_suite_validation():
    with pytest.raises(ConfigurationError, match="parent"):
        SensorMount(0)
    with pytest.raises(ConfigurationError, match="6 components"):
        SensorAxis(SensorMount(1), (1.0, 0.0))
    with pytest.raises(ConfigurationError, match=r"\[0, 1\]"):
        SensorAxis(SensorMount(1), (-1.0, 0, 0, 0, 0, 0))
    with pytest.raises(ConfigurationError, match="nonzero"):
        SensorAxis(SensorMount(1), (0.0,) * 6)
    with pytest.raises(ConfigurationError, match="transform"):
        SensorAxis(SensorMount(1), E[0], "magnetic")
    with pytest.raises(ConfigurationError):
        SensorSuite(())
    with pytest.raises(ConfigurationError, match="exceeds"):
        observability_matrix(PLANAR2R, [0.0, 0.0], SensorSuite(tuple(force_torque_suite(3))))


# -- properties --

sensor_axis = st.tuples(*[unit] * 6).filter(lambda v: any(x > 0 for x in v))
vec3 = st.tuples(coord, coord, coord)


@settings(max_examples=300, deadline=None)
@given(st.lists(unit, min_size=6, max_size=6), vec3, st.floats(1e-3, 1e3))
def test_moment_arm_scale_invariance(s, r, lam):
    s, r = np.array(s), np.array(r)
    c = np.cross(r, s[3:])
    assume(np.linalg.norm(c) > 1e-6 * max(1.0, np.linalg.norm(r)))
    kappa = np.linalg.norm(r) * np.linalg.norm(s[3:]) / np.linalg.norm(c)
    a, b = force_transform(s, r), force_transform(s, lam * r)
    assert np.allclose(a, b, rtol=0, atol=8 * np.finfo(float).eps * kappa)
    assert np.array_equal(a, force_transform(s, 8.0 * r))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-np.pi, np.pi), min_size=7, max_size=7),
       st.lists(st.tuples(st.integers(1, 7), sensor_axis, st.sampled_from([FORCE, IDENTITY_KIND])),
                min_size=1, max_size=8))
def test_nonnegative_everywhere(q, spec):
    suite = SensorSuite(tuple(SensorAxis(SensorMount(p), a, k) for p, a, k in spec))
    m = observability_matrix(BAXTER_LIKE, q, suite)
    assert (m.S >= 0).all()
    for g in ("sum", "max"):
        r = analyze(BAXTER_LIKE, q, suite, g)
        assert (r.s >= 0).all() and r.o >= 0
        assert (gamma_max(m.S) <= gamma_sum(m.S)).all()
        assert (r.o == 0.0) == bool((m.S == 0).all(axis=1).any())


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-np.pi, np.pi), min_size=7, max_size=7), st.randoms(use_true_random=False))
def test_permutation_invariance(q, rnd):
    suite = SUITES["baxter-like-mixed"]
    order = list(range(suite.n_s))
    rnd.shuffle(order)
    shuffled = SensorSuite(tuple(suite.axes[i] for i in order))
    a, b = observability_matrix(BAXTER_LIKE, q, suite), observability_matrix(BAXTER_LIKE, q, shuffled)
    assert np.array_equal(a.S[:, order], b.S)
    for g in ("sum", "max"):
        ra, rb = analyze(BAXTER_LIKE, q, suite, g), analyze(BAXTER_LIKE, q, shuffled, g)
        assert np.allclose(ra.s, rb.s, rtol=1e-15, atol=0)
        assert math.isclose(ra.o, rb.o, rel_tol=1e-14)
    assert np.array_equal(analyze(BAXTER_LIKE, q, suite, "max").s, analyze(BAXTER_LIKE, q, shuffled, "max").s)


@settings(max_examples=200, deadline=None)
@given(arrays(float, (6, 4), elements=st.floats(0.0, 1.0)), st.sets(st.integers(0, 5), max_size=2))
def test_row_zero_iff_index_zero(S, zero_rows):
    S = S.copy()
    for j in zero_rows:
        S[j] = 0.0
    has_zero_row = bool((S == 0).all(axis=1).any())
    for g in (gamma_sum, gamma_max):
        assert (observability_index(g(S)) == 0.0) == has_zero_row


@settings(max_examples=200, deadline=None)
@given(arrays(float, (6, 5), elements=st.floats(0.0, 2.0)))
def test_gamma_max_bounded_by_entries(S):
    s = gamma_max(S)
    assert (s <= S.max()).all()
    assert (s <= gamma_sum(S)).all()

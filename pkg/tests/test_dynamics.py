import time

import numpy as np
import pytest

from oracles import (twolink_config, twolink_gravity, twolink_inertia,
                     twolink_torque)
from flatplan.dynamics import (JointState, ScaledJointState, gravity_torque,
                               inertia_matrix, inverse_dynamics,
                               joint_torques, time_scaled_torque)
from flatplan.model import load_robot


def pendulum_model(m=1.0, l=1.0):
    return load_robot({
        "gravity": [0, 0, -9.8],
        "links": [{"label": "p",
                   "twist": {"omega": [0, 1, 0], "v": [0, 0, 0]},
                   "mass": m, "com": [0, 0, -l]}],
    })


def test_statics_equals_gravity_vector(twolink):
    rng = np.random.default_rng(0)
    for _ in range(20):
        q = rng.uniform(-np.pi, np.pi, 2)
        tau = inverse_dynamics(twolink, JointState(q=q, qd=np.zeros(2),
                                                   qdd=np.zeros(2)))
        np.testing.assert_allclose(tau, twolink_gravity(q), rtol=1e-12,
                                   atol=1e-12)


def test_matches_closed_form_oracle(twolink):
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(1000):
        q = rng.uniform(-np.pi, np.pi, 2)
        qd = rng.uniform(-5, 5, 2)
        qdd = rng.uniform(-10, 10, 2)
        tau = inverse_dynamics(twolink, JointState(q=q, qd=qd, qdd=qdd))
        ref = twolink_torque(q, qd, qdd)
        worst = max(worst, np.max(np.abs(tau - ref)) / max(1.0, np.max(np.abs(ref))))
    assert worst <= 1e-9


def test_force_free_chain(twolink):
    from flatplan.model import RobotModel
    weightless = RobotModel(links=twolink.links, gravity=np.zeros(3))
    tau = inverse_dynamics(weightless, JointState(q=np.array([0.4, -0.9]),
                                                  qd=np.zeros(2),
                                                  qdd=np.zeros(2)))
    np.testing.assert_allclose(tau, np.zeros(2), atol=1e-14)


def test_pendulum_gravity_torque():
    model = pendulum_model()
    for q in (0.0, 0.3, np.pi / 2, -1.2):
        tau = gravity_torque(model, np.array([q]))
        assert tau[0] == pytest.approx(9.8 * np.sin(q), abs=1e-12)


def test_straight_down_home_pose_is_torque_free(twolink):
    np.testing.assert_allclose(gravity_torque(twolink, np.zeros(2)),
                               np.zeros(2), atol=1e-14)


def test_time_scaling_consistency(twolink):
    rng = np.random.default_rng(2)
    for _ in range(100):
        q = rng.uniform(-np.pi, np.pi, 2)
        qp = rng.uniform(-3, 3, 2)
        qpp = rng.uniform(-6, 6, 2)
        t_f = 10 ** rng.uniform(-1, 2)
        scaled = time_scaled_torque(twolink, ScaledJointState(q=q, qp=qp,
                                                              qpp=qpp, t_f=t_f))
        direct = inverse_dynamics(twolink, JointState(q=q, qd=qp / t_f,
                                                      qdd=qpp / t_f**2))
        rel = np.max(np.abs(scaled - direct)) / max(1.0, np.max(np.abs(direct)))
        assert rel <= 1e-10


def test_unit_time_scale_is_plain_dynamics(twolink):
    q = np.array([0.5, -0.3])
    qp = np.array([1.0, 2.0])
    qpp = np.array([-1.0, 0.5])
    scaled = time_scaled_torque(twolink, ScaledJointState(q, qp, qpp, 1.0))
    direct = inverse_dynamics(twolink, JointState(q=q, qd=qp, qdd=qpp))
    np.testing.assert_array_equal(scaled, direct)


def test_time_scaled_rejects_nonpositive_tf(twolink):
    state = ScaledJointState(q=np.zeros(2), qp=np.zeros(2), qpp=np.zeros(2),
                             t_f=0.0)
    with pytest.raises(ValueError, match="t_f"):
        time_scaled_torque(twolink, state)


def test_rest_scaled_state_is_gravity(twolink):
    q = np.array([1.0, -0.4])
    tau = time_scaled_torque(twolink, ScaledJointState(q=q, qp=np.zeros(2),
                                                       qpp=np.zeros(2),
                                                       t_f=37.0))
    np.testing.assert_allclose(tau, gravity_torque(twolink, q), rtol=1e-12)


def test_dynamic_residual_scales_inverse_square(twolink):
    rng = np.random.default_rng(3)
    q = rng.uniform(-1, 1, 2)
    qp = rng.uniform(-2, 2, 2)
    qpp = rng.uniform(-2, 2, 2)
    g = gravity_torque(twolink, q)
    r1 = time_scaled_torque(twolink, ScaledJointState(q, qp, qpp, 1.0)) - g
    r2 = time_scaled_torque(twolink, ScaledJointState(q, qp, qpp, 2.0)) - g
    np.testing.assert_allclose(r2, 0.25 * r1, rtol=1e-10)


def test_gravity_limit_log_slope(twolink):
    rng = np.random.default_rng(4)
    q = rng.uniform(-2, 2, 2)
    qp = rng.uniform(0.5, 2, 2)
    qpp = rng.uniform(0.5, 2, 2)
    g = gravity_torque(twolink, q)
    tfs = np.array([1.0, 10.0, 100.0, 1000.0])
    residuals = [np.max(np.abs(
        time_scaled_torque(twolink, ScaledJointState(q, qp, qpp, t)) - g))
        for t in tfs]
    slope = np.polyfit(np.log10(tfs), np.log10(residuals), 1)[0]
    assert slope == pytest.approx(-2.0, abs=0.01)


def test_large_tf_approaches_gravity(twolink):
    rng = np.random.default_rng(5)
    for _ in range(20):
        q = rng.uniform(-np.pi, np.pi, 2)
        qp = rng.uniform(-1, 1, 2)
        qpp = rng.uniform(-1, 1, 2)
        tau = time_scaled_torque(twolink, ScaledJointState(q, qp, qpp, 1e6))
        np.testing.assert_allclose(tau, gravity_torque(twolink, q), atol=1e-6)


def test_single_link_point_mass_inertia():
    model = pendulum_model(m=0.5, l=1.0)
    M = inertia_matrix(model, np.zeros(1))
    assert M[0, 0] == pytest.approx(0.5, abs=1e-8)


def test_twolink_inertia_matches_oracle(twolink):
    M = inertia_matrix(twolink, np.array([0.3, 0.0]))
    assert M[0, 0] == pytest.approx(2.5, abs=1e-8)
    np.testing.assert_allclose(M, twolink_inertia(np.array([0.3, 0.0])),
                               rtol=1e-9)


def test_inertia_symmetric_positive_definite(twolink):
    rng = np.random.default_rng(6)
    for _ in range(100):
        M = inertia_matrix(twolink, rng.uniform(-np.pi, np.pi, 2))
        assert np.max(np.abs(M - M.T)) < 1e-10
        assert np.linalg.eigvalsh(M)[0] > 0


def _uniform_chain(n):
    link = {"label": "l", "twist": {"omega": [0, 1, 0], "v": [0, 0, 0]},
            "home_offset": {"rotation": [1, 0, 0, 0, 1, 0, 0, 0, 1],
                            "translation": [0, 0, -0.3]},
            "mass": 1.0, "com": [0, 0, -0.15],
            "inertia": [0.01, 0, 0, 0, 0.01, 0, 0, 0, 0.01]}
    return load_robot({"gravity": [0, 0, -9.8],
                       "links": [dict(link, label=f"l{i}") for i in range(n)]})


def test_linear_time_complexity():
    sizes = [2, 4, 8, 16, 32, 64]
    times = []
    rng = np.random.default_rng(7)
    for n in sizes:
        model = _uniform_chain(n)
        q = rng.uniform(-1, 1, n)
        qd = rng.uniform(-1, 1, n)
        qdd = rng.uniform(-1, 1, n)
        reps = max(3, 128 // n)
        best = np.inf
        for _ in range(5):
            t0 = time.perf_counter()
            for _ in range(reps):
                joint_torques(model, q, qd, qdd)
            best = min(best, (time.perf_counter() - t0) / reps)
        times.append(best)
    slope = np.polyfit(np.log(sizes), np.log(times), 1)[0]
    assert 0.8 <= slope <= 1.2


def test_rejects_wrong_length_state(twolink):
    with pytest.raises(ValueError, match="length-2"):
        inverse_dynamics(twolink, JointState(q=np.zeros(3), qd=np.zeros(3),
                                             qdd=np.zeros(3)))

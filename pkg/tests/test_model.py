import copy

import numpy as np
import pytest

from oracles import twolink_config
from flatplan.model import (ConfigError, load_robot, serialize_robot,
                            spatial_inertia, validate_model)
from flatplan.se3 import hat3


def test_point_mass_at_origin():
    J = spatial_inertia(1.0, np.zeros(3), np.zeros((3, 3))).matrix
    np.testing.assert_allclose(J[3:, 3:], np.eye(3))
    np.testing.assert_allclose(J[:3, 3:], np.zeros((3, 3)), atol=1e-15)
    # floor keeps the rotational block barely positive definite
    assert np.all(np.linalg.eigvalsh(J) > 0)


def test_offset_com_rotational_block():
    J = spatial_inertia(0.5, np.array([1.0, 0, 0]), 1e-12 * np.eye(3)).matrix
    expected = 0.5 * np.diag([0.0, 1.0, 1.0])
    np.testing.assert_allclose(J[:3, :3], expected, atol=2e-9)
    np.testing.assert_allclose(J[:3, 3:], 0.5 * hat3([1.0, 0, 0]), atol=1e-15)


def test_kinetic_energy_oracle():
    rng = np.random.default_rng(0)
    for _ in range(100):
        m = rng.uniform(0.1, 10.0)
        c = rng.normal(size=3)
        L = rng.normal(size=(3, 3)) * 0.3
        I_c = L @ L.T + 0.05 * np.eye(3)
        inertia = spatial_inertia(m, c, I_c)
        V = rng.normal(size=6)
        omega, v = V[:3], V[3:]
        v_com = v + np.cross(omega, c)
        direct = 0.5 * m * v_com @ v_com + 0.5 * omega @ I_c @ omega
        assert inertia.kinetic_energy(V) == pytest.approx(direct, rel=1e-10)


def test_spatial_inertia_is_spd():
    rng = np.random.default_rng(1)
    for _ in range(50):
        m = rng.uniform(1e-3, 20.0)
        c = rng.normal(size=3) * 2
        L = rng.normal(size=(3, 3))
        J = spatial_inertia(m, c, L @ L.T + 1e-6 * np.eye(3)).matrix
        assert np.max(np.abs(J - J.T)) <= 1e-12
        assert np.linalg.eigvalsh(J)[0] > 0


def test_spatial_inertia_rejects_bad_input():
    with pytest.raises(ConfigError):
        spatial_inertia(-1.0, np.zeros(3), np.eye(3))
    with pytest.raises(ConfigError):
        spatial_inertia(1.0, np.zeros(3), np.array([[1, 0.1, 0],
                                                    [0, 1, 0], [0, 0, 1.0]]))


def test_load_twolink_config(twolink):
    assert twolink.n == 2
    assert twolink.links[0].joint_label == "shoulder"
    np.testing.assert_allclose(twolink.links[1].home_offset.translation,
                               [0, 0, -1.0])
    np.testing.assert_allclose(twolink.links[0].joint_twist.omega, [0, 1, 0])


def test_load_rejects_negative_mass():
    doc = copy.deepcopy(twolink_config())
    doc["links"][0]["mass"] = -1.0
    with pytest.raises(ConfigError, match="non-positive mass, link 1"):
        load_robot(doc)


def test_load_rejects_degenerate_twist():
    doc = copy.deepcopy(twolink_config())
    doc["links"][1]["twist"] = {"omega": [0, 0, 0], "v": [0, 0, 0]}
    with pytest.raises(ConfigError, match="degenerate joint twist"):
        load_robot(doc)


def test_load_reports_field_paths():
    doc = copy.deepcopy(twolink_config())
    del doc["links"][0]["com"]
    with pytest.raises(ConfigError, match=r"robot.links\[0\].com"):
        load_robot(doc)
    doc = copy.deepcopy(twolink_config())
    doc["gravity"] = [0.0, 0.0]
    with pytest.raises(ConfigError, match="robot.gravity"):
        load_robot(doc)


def test_load_normalizes_twists():
    doc = copy.deepcopy(twolink_config())
    doc["links"][0]["twist"]["omega"] = [0.0, 2.0, 0.0]
    model = load_robot(doc)
    np.testing.assert_allclose(model.links[0].joint_twist.omega, [0, 1, 0])


def test_serialize_round_trip(twolink):
    again = load_robot(serialize_robot(twolink))
    assert again.n == twolink.n
    np.testing.assert_allclose(again.gravity, twolink.gravity)
    for a, b in zip(again.links, twolink.links):
        np.testing.assert_allclose(a.xi, b.xi, atol=1e-15)
        np.testing.assert_allclose(a.inertia.matrix, b.inertia.matrix,
                                   atol=1e-15)
        np.testing.assert_allclose(a.home_offset.rotation,
                                   b.home_offset.rotation, atol=1e-15)
        np.testing.assert_allclose(a.home_offset.translation,
                                   b.home_offset.translation, atol=1e-15)
        assert a.joint_label == b.joint_label


def test_validate_clean_model(twolink):
    assert validate_model(twolink) == []


def test_validate_flags_non_unit_axis(twolink):
    from dataclasses import replace
    from flatplan.se3 import Twist
    bad_link = replace(twolink.links[0],
                       joint_twist=Twist(omega=np.array([0, 1.1, 0.0]),
                                         v=np.zeros(3)))
    bad = type(twolink)(links=(bad_link, twolink.links[1]),
                        gravity=twolink.gravity)
    issues = validate_model(bad)
    assert len(issues) == 1 and "link 1" in issues[0]


def test_validate_warns_on_zero_gravity(twolink):
    weightless = type(twolink)(links=twolink.links, gravity=np.zeros(3))
    issues = validate_model(weightless)
    assert len(issues) == 1 and issues[0].startswith("warning")

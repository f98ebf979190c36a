"""Independent closed-form references used to check the numeric pipeline.

The planar two-link arm here is derived by hand from the Lagrangian of a
double pendulum with point masses at the rod tips (plus the small rotary
regularization the model applies to point-mass links), angles measured from
straight down.  It deliberately shares no code with the recursive dynamics.
"""

from __future__ import annotations

import numpy as np

# Reference arm: unit-length links, half-kilogram tip masses.
L1 = 1.0
L2 = 1.0
M1 = 0.5
M2 = 0.5
G0 = 9.8
EPS = 1e-9  # rotary inertia floor applied to point-mass links


def twolink_inertia(q: np.ndarray) -> np.ndarray:
    c2 = np.cos(q[1])
    m11 = (M1 + M2) * L1**2 + M2 * L2**2 + 2.0 * M2 * L1 * L2 * c2 + 2.0 * EPS
    m12 = M2 * L2**2 + M2 * L1 * L2 * c2 + EPS
    m22 = M2 * L2**2 + EPS
    return np.array([[m11, m12], [m12, m22]])


def twolink_gravity(q: np.ndarray) -> np.ndarray:
    s1 = np.sin(q[0])
    s12 = np.sin(q[0] + q[1])
    return np.array([
        (M1 + M2) * G0 * L1 * s1 + M2 * G0 * L2 * s12,
        M2 * G0 * L2 * s12,
    ])


def twolink_torque(q: np.ndarray, qd: np.ndarray, qdd: np.ndarray) -> np.ndarray:
    """tau = M(q) qdd + C(q, qd) qd + G(q), written out by hand."""
    q = np.asarray(q, dtype=float)
    qd = np.asarray(qd, dtype=float)
    qdd = np.asarray(qdd, dtype=float)
    s2 = np.sin(q[1])
    h = M2 * L1 * L2 * s2
    coriolis = np.array([
        -h * (2.0 * qd[0] * qd[1] + qd[1] ** 2),
        h * qd[0] ** 2,
    ])
    return twolink_inertia(q) @ qdd + coriolis + twolink_gravity(q)


def twolink_config() -> dict:
    """Robot section of the reference arm in the loader schema."""
    return {
        "gravity": [0.0, 0.0, -G0],
        "links": [
            {
                "label": "shoulder",
                "twist": {"omega": [0.0, 1.0, 0.0], "v": [0.0, 0.0, 0.0]},
                "mass": M1,
                "com": [0.0, 0.0, -L1],
            },
            {
                "label": "elbow",
                "twist": {"omega": [0.0, 1.0, 0.0], "v": [0.0, 0.0, 0.0]},
                "home_offset": {
                    "rotation": [1, 0, 0, 0, 1, 0, 0, 0, 1],
                    "translation": [0.0, 0.0, -L1],
                },
                "mass": M2,
                "com": [0.0, 0.0, -L2],
            },
        ],
    }

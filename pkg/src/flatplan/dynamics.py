"""O(n) recursive inverse dynamics for serial chains, plus extractions.

The two-pass recursion propagates body twists and accelerations base to
tip, then wrenches tip to base:

    f_{i-1,i} = H_i exp(hat(xi_i) q_i)
    V_i  = Ad_{f^-1} V_{i-1}  + xi_i qd_i
    Vd_i = Ad_{f^-1} Vd_{i-1} + ad_{V_i}(xi_i qd_i) + xi_i qdd_i
    F_i  = J_i Vd_i - ad_{V_i}^T (J_i V_i) + Ad_{f_{i,i+1}^-1}^T F_{i+1}
    tau_i = xi_i^T F_i

All quantities are kept in physical units; time-scaled inputs (derivatives
with respect to normalized time s = t / t_f) are converted up front via
qd = q' / t_f and qdd = q'' / t_f**2, which reproduces the torque expression
[M(q) q'' + C(q, q') q'] / t_f**2 + G(q).  Gravity enters as a fictitious
base acceleration equal to -gravity, so a gravity vector of (0, 0, -9.8)
produces downward weight.

Joint vectors may be plain arrays or :class:`~flatplan.ad.Dual` operands;
the recursion is differentiable end to end.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ad
from .model import RobotModel
from .se3 import ad_small, adjoint, compose, exp_twist, inverse

__all__ = [
    "JointState",
    "ScaledJointState",
    "joint_torques",
    "scaled_joint_torques",
    "inverse_dynamics",
    "time_scaled_torque",
    "gravity_torque",
    "inertia_matrix",
]


@dataclass(frozen=True)
class JointState:
    """Joint positions, velocities, accelerations in physical units."""

    q: np.ndarray
    qd: np.ndarray
    qdd: np.ndarray


@dataclass(frozen=True)
class ScaledJointState:
    """Trajectory point in normalized time: q and its s-derivatives."""

    q: np.ndarray
    qp: np.ndarray    # dq/ds
    qpp: np.ndarray   # d2q/ds2
    t_f: float


def joint_torques(model: RobotModel, q, qd, qdd):
    """Generic two-pass recursion; operands may be Dual or ndarray."""
    n = model.n
    V_list = []
    Vd_list = []
    Ad_inv = []
    V = np.zeros(6)
    Vd = np.concatenate([np.zeros(3), -model.gravity])
    for i, link in enumerate(model.links):
        f = compose(link.home_offset, exp_twist(link.joint_twist, q[i]))
        A_inv = adjoint(inverse(f))
        joint_rate = link.xi * qd[i]
        V = A_inv @ V + joint_rate
        Vd = A_inv @ Vd + ad_small(V) @ joint_rate + link.xi * qdd[i]
        V_list.append(V)
        Vd_list.append(Vd)
        Ad_inv.append(A_inv)

    tau = [None] * n
    F = None  # wrench on the fictitious link n+1 is zero
    for i in reversed(range(n)):
        J = model.links[i].inertia.matrix
        Fi = J @ Vd_list[i] - ad_small(V_list[i]).T @ (J @ V_list[i])
        if F is not None:
            Fi = Fi + Ad_inv[i + 1].T @ F
        F = Fi
        tau[i] = ad.dot(model.links[i].xi, Fi)
    return ad.stack(tau)


def scaled_joint_torques(model: RobotModel, q, qp, qpp, t_f):
    """Generic torque of a normalized-time trajectory point."""
    qd = qp / t_f
    qdd = qpp / (t_f * t_f)
    return joint_torques(model, q, qd, qdd)


def _check_lengths(model: RobotModel, *vectors):
    for vec in vectors:
        arr = np.asarray(vec, dtype=float)
        if arr.shape != (model.n,):
            raise ValueError(f"expected length-{model.n} joint vector, "
                             f"got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("joint vector has non-finite entries")


def inverse_dynamics(model: RobotModel, state: JointState) -> np.ndarray:
    """Torques tau = M(q) qdd + C(q, qd) qd + G(q), via the recursion."""
    _check_lengths(model, state.q, state.qd, state.qdd)
    return joint_torques(model,
                         np.asarray(state.q, dtype=float),
                         np.asarray(state.qd, dtype=float),
                         np.asarray(state.qdd, dtype=float))


def time_scaled_torque(model: RobotModel, scaled: ScaledJointState) -> np.ndarray:
    """Torque along a time-scaled trajectory point.

    Equivalent to inverse_dynamics at qd = q'/t_f, qdd = q''/t_f^2; the
    non-gravity part shrinks as t_f^-2, which is what makes stretching the
    final time a reliable way to reach torque feasibility.
    """
    if not scaled.t_f > 0.0:
        raise ValueError(f"t_f must be positive, got {scaled.t_f}")
    _check_lengths(model, scaled.q, scaled.qp, scaled.qpp)
    return scaled_joint_torques(model,
                                np.asarray(scaled.q, dtype=float),
                                np.asarray(scaled.qp, dtype=float),
                                np.asarray(scaled.qpp, dtype=float),
                                float(scaled.t_f))


def gravity_torque(model: RobotModel, q) -> np.ndarray:
    """Static torque G(q) holding the chain still against gravity."""
    _check_lengths(model, q)
    zero = np.zeros(model.n)
    return joint_torques(model, np.asarray(q, dtype=float), zero, zero)


def inertia_matrix(model: RobotModel, q) -> np.ndarray:
    """Generalized inertia M(q), one unit-acceleration column at a time."""
    _check_lengths(model, q)
    q = np.asarray(q, dtype=float)
    zero = np.zeros(model.n)
    g_term = joint_torques(model, q, zero, zero)
    M = np.empty((model.n, model.n))
    for j in range(model.n):
        e_j = np.zeros(model.n)
        e_j[j] = 1.0
        M[:, j] = joint_torques(model, q, zero, e_j) - g_term
    return M

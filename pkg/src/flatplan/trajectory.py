"""Coefficient-matrix trajectories on a normalized horizon.

A trajectory is q(t) = A b(s) with s = t / t_f, so with the linear time
scaling (s-dot = 1/t_f, s-ddot = 0):

    qd(t)  = A b'(s) / t_f
    qdd(t) = A b''(s) / t_f**2

Boundary conditions become linear equality rows over (A, t_f): the position
rows A b(0) = q0 and A b(1) = qf are t_f-free, while nonzero boundary rates
couple A and t_f through A b'(0) = qd0 * t_f (and likewise at s = 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import BasisSpec, LinearConstraintSet, eval_basis, eval_basis_many
from .dynamics import JointState

__all__ = [
    "TimeScaledTrajectory",
    "BoundaryConditions",
    "eval_state",
    "sample_states",
    "boundary_constraint_rows",
]


@dataclass(frozen=True)
class TimeScaledTrajectory:
    """Decision-variable container: coefficients A (n x m), basis, t_f."""

    A: np.ndarray
    spec: BasisSpec
    t_f: float

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        if A.ndim != 2 or A.shape[1] != self.spec.m:
            raise ValueError(f"coefficient matrix must be n x {self.spec.m}, "
                             f"got {A.shape}")
        if not np.all(np.isfinite(A)):
            raise ValueError("coefficient matrix has non-finite entries")
        if not self.t_f > 0.0:
            raise ValueError(f"t_f must be positive, got {self.t_f}")
        object.__setattr__(self, "A", A)

    @property
    def n(self) -> int:
        return self.A.shape[0]


@dataclass(frozen=True)
class BoundaryConditions:
    """Endpoint joint positions and rates."""

    q0: np.ndarray
    qd0: np.ndarray
    qf: np.ndarray
    qdf: np.ndarray

    def __post_init__(self):
        for name in ("q0", "qd0", "qf", "qdf"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.ndim != 1 or not np.all(np.isfinite(arr)):
                raise ValueError(f"boundary vector '{name}' must be a finite 1-D array")
            object.__setattr__(self, name, arr)
        if len({self.q0.size, self.qd0.size, self.qf.size, self.qdf.size}) != 1:
            raise ValueError("boundary vectors must share one length")

    @property
    def n(self) -> int:
        return self.q0.size

    @property
    def rest_to_rest(self) -> bool:
        return bool(np.all(self.qd0 == 0.0) and np.all(self.qdf == 0.0))


def eval_state(traj: TimeScaledTrajectory, t: float) -> JointState:
    """Joint position/velocity/acceleration at physical time t in [0, t_f]."""
    if t < 0.0 or t > traj.t_f:
        raise ValueError(f"t = {t} outside [0, {traj.t_f}]")
    s = t / traj.t_f
    b0 = eval_basis(traj.spec, s, 0)
    b1 = eval_basis(traj.spec, s, 1)
    b2 = eval_basis(traj.spec, s, 2)
    return JointState(q=traj.A @ b0,
                      qd=traj.A @ b1 / traj.t_f,
                      qdd=traj.A @ b2 / traj.t_f ** 2)


def sample_states(traj: TimeScaledTrajectory, ts: np.ndarray):
    """Batched eval_state: returns (q, qd, qdd) arrays of shape (len(ts), n)."""
    ts = np.asarray(ts, dtype=float)
    if np.any(ts < 0.0) or np.any(ts > traj.t_f):
        raise ValueError("sample times outside [0, t_f]")
    s = ts / traj.t_f
    q = eval_basis_many(traj.spec, s, 0) @ traj.A.T
    qd = eval_basis_many(traj.spec, s, 1) @ traj.A.T / traj.t_f
    qdd = eval_basis_many(traj.spec, s, 2) @ traj.A.T / traj.t_f ** 2
    return q, qd, qdd


def boundary_constraint_rows(spec: BasisSpec, bc: BoundaryConditions) -> LinearConstraintSet:
    """4n equality rows over (A, t_f) pinning the endpoint states.

    Rest-to-rest conditions make the rate rows t_f-independent; nonzero
    boundary rates put coefficient -qd on the t_f column.
    """
    n, m = bc.n, spec.m
    dim = n * m + 1
    b0 = eval_basis(spec, 0.0, 0)
    b1 = eval_basis(spec, 1.0, 0)
    db0 = eval_basis(spec, 0.0, 1)
    db1 = eval_basis(spec, 1.0, 1)
    rows = np.zeros((4 * n, dim))
    rhs = np.zeros(4 * n)
    r = 0
    for basis_vec, rate_coef, target in (
        (b0, None, bc.q0),
        (b1, None, bc.qf),
        (db0, bc.qd0, None),
        (db1, bc.qdf, None),
    ):
        for i in range(n):
            rows[r, i * m:(i + 1) * m] = basis_vec
            if rate_coef is not None:
                rows[r, -1] = -rate_coef[i]
                rhs[r] = 0.0
            else:
                rhs[r] = target[i]
            r += 1
    return LinearConstraintSet(dim, rows, rhs.copy(), rhs.copy())

"""SE(3)/se(3) primitives: hat maps, twist exponentials, adjoint matrices.

Twists are 6-vectors xi = (omega, v) with the angular part first.  The
adjoint of a transform (R, p) is the 6x6 matrix [[R, 0], [hat(p) R, R]] and
the small adjoint of a twist is [[hat(omega), 0], [hat(v), hat(omega)]].
Their dual (wrench-side) applications are plain matrix transposes; no
separate co-adjoint type exists.

Every function accepts plain float arrays or :class:`~flatplan.ad.Dual`
operands, so the downstream dynamics can be differentiated by seeding its
inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import ad

__all__ = [
    "Twist",
    "RigidTransform",
    "hat3",
    "hat4",
    "exp_twist",
    "adjoint",
    "ad_small",
    "compose",
    "inverse",
    "is_rotation",
]

_E0 = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]])
_E1 = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [-1.0, 0.0, 0.0]])
_E2 = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])


@dataclass(frozen=True)
class Twist:
    """Joint twist xi = (omega, v); a unit screw for joint definitions."""

    omega: np.ndarray
    v: np.ndarray

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.omega, self.v])

    @staticmethod
    def from_vector(xi) -> "Twist":
        xi = np.asarray(xi, dtype=float)
        return Twist(omega=xi[:3].copy(), v=xi[3:].copy())

    @cached_property
    def is_prismatic(self) -> bool:
        return bool(np.linalg.norm(self.omega) < 1e-12)

    @cached_property
    def screw_terms(self):
        """Constant pieces of the exponential: (K, K^2, omega x v, w w^T v)."""
        K = hat3(self.omega)
        return (K, K @ K, np.cross(self.omega, self.v),
                self.omega * float(np.dot(self.omega, self.v)))


@dataclass(frozen=True)
class RigidTransform:
    """Rotation + translation; fields may hold Dual operands transparently."""

    rotation: np.ndarray
    translation: np.ndarray

    @staticmethod
    def identity() -> "RigidTransform":
        return RigidTransform(np.eye(3), np.zeros(3))

    def as_matrix(self) -> np.ndarray:
        T = np.eye(4)
        T[:3, :3] = self.rotation
        T[:3, 3] = self.translation
        return T


def is_rotation(R: np.ndarray, tol: float = 1e-12) -> bool:
    R = np.asarray(R, dtype=float)
    return (np.max(np.abs(R.T @ R - np.eye(3))) <= tol
            and abs(np.linalg.det(R) - 1.0) <= tol)


def hat3(omega):
    """3-vector to skew-symmetric matrix; hat3(w) @ u == cross(w, u)."""
    if isinstance(omega, ad.Dual):
        return omega[0] * _E0 + omega[1] * _E1 + omega[2] * _E2
    x, y, z = float(omega[0]), float(omega[1]), float(omega[2])
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def hat4(xi) -> np.ndarray:
    """Twist 6-vector to its 4x4 se(3) matrix [[hat(omega), v], [0, 0]]."""
    xi = np.asarray(xi, dtype=float)
    out = np.zeros((4, 4))
    out[:3, :3] = hat3(xi[:3])
    out[:3, 3] = xi[3:]
    return out


def exp_twist(xi: Twist, theta) -> RigidTransform:
    """Exponential of a joint twist scaled by the joint coordinate.

    Rodrigues' closed form for the revolute case (|omega| = 1); the
    prismatic case (omega = 0) is a pure translation by v * theta.
    ``theta`` may be a Dual scalar, in which case the result carries
    derivatives.
    """
    if xi.is_prismatic:
        R = np.eye(3)
        if isinstance(theta, ad.Dual):
            R = R + 0.0 * theta  # lift to Dual so downstream types match
        return RigidTransform(R, xi.v * theta)
    K, K2, wxv, wwtv = xi.screw_terms
    s, c = ad.sin(theta), ad.cos(theta)
    R = np.eye(3) + s * K + (1.0 - c) * K2
    # Screw translation: p = (I - R)(omega x v) + omega omega^T v theta.
    p = (np.eye(3) - R) @ wxv + wwtv * theta
    return RigidTransform(R, p)


def adjoint(T: RigidTransform):
    """6x6 adjoint matrix [[R, 0], [hat(p) R, R]] of a rigid transform."""
    R, p = T.rotation, T.translation
    if isinstance(R, ad.Dual) or isinstance(p, ad.Dual):
        Z = np.zeros((3, 3))
        return ad.block([[R, Z], [hat3(p) @ R, R]])
    out = np.zeros((6, 6))
    out[:3, :3] = R
    out[3:, 3:] = R
    out[3:, :3] = hat3(p) @ R
    return out


def ad_small(xi):
    """6x6 Lie-bracket matrix [[hat(w), 0], [hat(v), hat(w)]] of a twist."""
    if isinstance(xi, Twist):
        xi = xi.as_vector()
    if isinstance(xi, ad.Dual):
        W = hat3(xi[:3])
        V = hat3(xi[3:])
        Z = np.zeros((3, 3))
        return ad.block([[W, Z], [V, W]])
    out = np.zeros((6, 6))
    out[:3, :3] = hat3(xi[:3])
    out[3:, 3:] = out[:3, :3]
    out[3:, :3] = hat3(xi[3:])
    return out


def compose(a: RigidTransform, b: RigidTransform) -> RigidTransform:
    return RigidTransform(a.rotation @ b.rotation,
                          a.rotation @ b.translation + a.translation)


def inverse(T: RigidTransform) -> RigidTransform:
    Rt = T.rotation.T
    return RigidTransform(Rt, -(Rt @ T.translation))

"""Serial-chain robot model: link definitions, validation, JSON ingestion.

A robot is an ordered chain of links, base to end-effector.  Each link has a
joint twist (expressed in the link's own frame at the home configuration), a
constant home offset H from the parent frame, and a 6x6 spatial inertia.
The relative transform driven by joint i is H_i * exp(hat(xi_i) * q_i); an
identity home offset recovers the bare exponential chain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .se3 import RigidTransform, Twist, hat3, is_rotation

__all__ = [
    "ConfigError",
    "SpatialInertia",
    "LinkSpec",
    "RobotModel",
    "spatial_inertia",
    "load_robot",
    "serialize_robot",
    "validate_model",
]

# Keeps point-mass links SPD without measurably changing real inertias.
INERTIA_FLOOR = 1e-9


class ConfigError(ValueError):
    """Raised for schema violations and invalid physical parameters."""


@dataclass(frozen=True)
class SpatialInertia:
    """6x6 generalized inertia at the link frame, with its ingredients."""

    mass: float
    com: np.ndarray
    rot_inertia: np.ndarray  # about the COM, after regularization
    matrix: np.ndarray = field(repr=False)

    def kinetic_energy(self, twist: np.ndarray) -> float:
        twist = np.asarray(twist, dtype=float)
        return 0.5 * float(twist @ self.matrix @ twist)


def spatial_inertia(m: float, c, I_c) -> SpatialInertia:
    """Assemble the spatial inertia of a rigid link.

    The block layout for a body twist (omega, v) at the link frame is
    [[I_c + m*hat(c)hat(c)^T, m*hat(c)], [m*hat(c)^T, m*I]], which makes
    0.5 V^T J V equal the kinetic energy 0.5 m |v_c|^2 + 0.5 w^T I_c w.
    Rotational inertias whose smallest eigenvalue falls below the floor are
    lifted onto it so point masses stay positive definite.
    """
    if m <= 0.0:
        raise ConfigError(f"non-positive mass {m}")
    c = np.asarray(c, dtype=float).reshape(3)
    I_c = np.asarray(I_c, dtype=float).reshape(3, 3)
    if np.max(np.abs(I_c - I_c.T)) > 1e-9:
        raise ConfigError("rotational inertia is not symmetric")
    I_c = 0.5 * (I_c + I_c.T)
    lam_min = float(np.linalg.eigvalsh(I_c)[0])
    if lam_min < INERTIA_FLOOR:
        I_c = I_c + (INERTIA_FLOOR - lam_min) * np.eye(3)
    ch = hat3(c)
    J = np.block([
        [I_c + m * (ch @ ch.T), m * ch],
        [m * ch.T, m * np.eye(3)],
    ])
    return SpatialInertia(mass=float(m), com=c, rot_inertia=I_c, matrix=J)


@dataclass(frozen=True)
class LinkSpec:
    """One joint + rigid body of the chain."""

    joint_twist: Twist
    home_offset: RigidTransform
    inertia: SpatialInertia
    joint_label: str = ""

    @cached_property
    def xi(self) -> np.ndarray:
        return self.joint_twist.as_vector()

    @cached_property
    def is_prismatic(self) -> bool:
        return self.joint_twist.is_prismatic


@dataclass(frozen=True)
class RobotModel:
    """Ordered serial chain plus the gravity vector (m/s^2)."""

    links: tuple[LinkSpec, ...]
    gravity: np.ndarray

    @property
    def n(self) -> int:
        return len(self.links)


def _normalized_twist(omega, v, link_no: int) -> Twist:
    omega = np.asarray(omega, dtype=float).reshape(3)
    v = np.asarray(v, dtype=float).reshape(3)
    w_norm = float(np.linalg.norm(omega))
    if w_norm > 1e-9:
        return Twist(omega / w_norm, v / w_norm)
    v_norm = float(np.linalg.norm(v))
    if v_norm > 1e-9:
        return Twist(np.zeros(3), v / v_norm)
    raise ConfigError(f"degenerate joint twist, link {link_no}")


def _require(doc: dict, key: str, path: str):
    if key not in doc:
        raise ConfigError(f"missing field '{path}.{key}'")
    return doc[key]


def _vector(raw, size: int, path: str) -> np.ndarray:
    try:
        arr = np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"field '{path}' is not numeric") from exc
    if arr.shape != (size,):
        raise ConfigError(f"field '{path}' must have length {size}")
    if not np.all(np.isfinite(arr)):
        raise ConfigError(f"field '{path}' has non-finite entries")
    return arr


def _matrix3(raw, path: str) -> np.ndarray:
    return _vector(raw, 9, path).reshape(3, 3)


def load_robot(config: dict) -> RobotModel:
    """Build a validated RobotModel from the `robot` section of a config.

    Joint twists are normalized (unit rotation axis, or unit translation
    axis for prismatic joints); inertias are assembled and SPD-checked.
    Violations raise :class:`ConfigError` naming the offending link/field.
    """
    if not isinstance(config, dict):
        raise ConfigError("robot section must be an object")
    gravity = _vector(_require(config, "gravity", "robot"), 3, "robot.gravity")
    raw_links = _require(config, "links", "robot")
    if not isinstance(raw_links, list) or not raw_links:
        raise ConfigError("'robot.links' must be a non-empty list")
    links = []
    for idx, raw in enumerate(raw_links):
        no = idx + 1
        path = f"robot.links[{idx}]"
        if not isinstance(raw, dict):
            raise ConfigError(f"field '{path}' must be an object")
        twist_doc = _require(raw, "twist", path)
        omega = _vector(_require(twist_doc, "omega", f"{path}.twist"), 3,
                        f"{path}.twist.omega")
        v = _vector(_require(twist_doc, "v", f"{path}.twist"), 3,
                    f"{path}.twist.v")
        twist = _normalized_twist(omega, v, no)

        if "home_offset" in raw:
            ho = raw["home_offset"]
            R = _matrix3(_require(ho, "rotation", f"{path}.home_offset"),
                         f"{path}.home_offset.rotation")
            p = _vector(_require(ho, "translation", f"{path}.home_offset"), 3,
                        f"{path}.home_offset.translation")
            if not is_rotation(R):
                raise ConfigError(
                    f"field '{path}.home_offset.rotation' is not a rotation "
                    f"matrix, link {no}")
            offset = RigidTransform(R, p)
        else:
            offset = RigidTransform.identity()

        mass = _require(raw, "mass", path)
        if not isinstance(mass, (int, float)) or not np.isfinite(mass):
            raise ConfigError(f"field '{path}.mass' must be a finite number")
        if mass <= 0:
            raise ConfigError(f"non-positive mass, link {no}")
        com = _vector(_require(raw, "com", path), 3, f"{path}.com")
        if "inertia" in raw:
            I_c = _matrix3(raw["inertia"], f"{path}.inertia")
        else:
            I_c = np.zeros((3, 3))
        try:
            inertia = spatial_inertia(float(mass), com, I_c)
        except ConfigError as exc:
            raise ConfigError(f"{exc}, link {no}") from exc
        if np.linalg.eigvalsh(inertia.matrix)[0] <= 0:
            raise ConfigError(f"spatial inertia not positive definite, link {no}")

        links.append(LinkSpec(joint_twist=twist, home_offset=offset,
                              inertia=inertia,
                              joint_label=str(raw.get("label", f"joint{no}"))))
    return RobotModel(links=tuple(links), gravity=gravity)


def serialize_robot(model: RobotModel) -> dict:
    """Config-schema dict; load_robot of the result reproduces the model."""
    links = []
    for link in model.links:
        links.append({
            "label": link.joint_label,
            "twist": {"omega": link.joint_twist.omega.tolist(),
                      "v": link.joint_twist.v.tolist()},
            "home_offset": {
                "rotation": link.home_offset.rotation.reshape(-1).tolist(),
                "translation": link.home_offset.translation.tolist(),
            },
            "mass": link.inertia.mass,
            "com": link.inertia.com.tolist(),
            "inertia": link.inertia.rot_inertia.reshape(-1).tolist(),
        })
    return {"gravity": model.gravity.tolist(), "links": links}


def validate_model(model: RobotModel) -> list[str]:
    """Diagnostics for hand-built models; empty iff all invariants hold.

    Returns messages rather than raising so callers can report everything
    at once.  A zero gravity vector is flagged but allowed: the torque
    feasibility argument behind the planner degenerates without gravity.
    """
    issues: list[str] = []
    if model.n < 1:
        issues.append("model has no links")
    if not np.all(np.isfinite(model.gravity)):
        issues.append("gravity vector has non-finite entries")
    elif float(np.linalg.norm(model.gravity)) == 0.0:
        issues.append("warning: zero gravity vector (static-torque "
                      "feasibility check degenerates)")
    for idx, link in enumerate(model.links):
        no = idx + 1
        w_norm = float(np.linalg.norm(link.joint_twist.omega))
        v_norm = float(np.linalg.norm(link.joint_twist.v))
        if w_norm > 1e-12:
            if abs(w_norm - 1.0) > 1e-9:
                issues.append(f"link {no}: revolute axis not unit "
                              f"(|omega| = {w_norm:.6g})")
        elif abs(v_norm - 1.0) > 1e-9:
            issues.append(f"link {no}: prismatic axis not unit "
                          f"(|v| = {v_norm:.6g})")
        if not is_rotation(link.home_offset.rotation, tol=1e-9):
            issues.append(f"link {no}: home offset rotation not orthonormal")
        J = link.inertia.matrix
        if np.max(np.abs(J - J.T)) > 1e-12:
            issues.append(f"link {no}: spatial inertia not symmetric")
        elif np.linalg.eigvalsh(J)[0] <= 0:
            issues.append(f"link {no}: spatial inertia not positive definite")
    return issues

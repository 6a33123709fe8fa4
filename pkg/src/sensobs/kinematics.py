"""Serial-chain kinematics: standard DH forward kinematics, the geometric
Jacobian, Yoshikawa manipulability and the null space of J^T.

Frame conventions
-----------------
Joint ``k`` (1-based in user-facing files, 0-based in arrays) rotates or
slides about the z-axis of its *joint frame*.  The joint frame is the DH
frame ``{k-1}`` followed by the joint motion ``Rz(theta_k) Tz(d_k)``, so it
sits on the joint axis and is rigidly attached to link ``k``.  The link
frame ``{k}`` is the joint frame followed by ``Tx(a_k) Rx(alpha_k)``.

The task frame F_EE has its origin at the end effector and is aligned with
the world frame.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import ConfigurationError

REVOLUTE = "revolute"
PRISMATIC = "prismatic"
JOINT_KINDS = (REVOLUTE, PRISMATIC)

# |cos|, |sin| below this are snapped to 0 so quarter turns stay exact.
TRIG_SNAP = 1e-14
# det(J J^T) below this counts as singular (w_k < 1e-9).
DET_FLOOR = 1e-18
# Relative singular-value cutoff for the J^T null space.
NULLSPACE_TOL = 1e-9

POSITION_ROWS = (0, 1, 2)
ORIENTATION_ROWS = (3, 4, 5)
ALL_ROWS = (0, 1, 2, 3, 4, 5)


def cos_sin(angle: float) -> tuple[float, float]:
    c, s = np.cos(angle), np.sin(angle)
    if abs(c) < TRIG_SNAP:
        c = 0.0
    if abs(s) < TRIG_SNAP:
        s = 0.0
    return float(c), float(s)


def rot_x(a: float) -> np.ndarray:
    c, s = cos_sin(a)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(a: float) -> np.ndarray:
    c, s = cos_sin(a)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_z(a: float) -> np.ndarray:
    c, s = cos_sin(a)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rpy_to_matrix(rpy: Sequence[float]) -> np.ndarray:
    """Fixed-axis roll/pitch/yaw: R = Rz(yaw) Ry(pitch) Rx(roll)."""
    roll, pitch, yaw = rpy
    return rot_z(yaw) @ rot_y(pitch) @ rot_x(roll)


def cross3(a, b) -> np.ndarray:
    """a x b for 3-vectors; np.cross carries heavy per-call overhead."""
    return np.array([a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]])


def norm3(v) -> float:
    return math.hypot(v[0], v[1], v[2])


def skew(v) -> np.ndarray:
    return np.array([[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]])


def vee(m: np.ndarray) -> np.ndarray:
    return np.array([m[2, 1], m[0, 2], m[1, 0]])


@dataclass(frozen=True)
class Transform:
    """Rigid transform given as fixed-axis rpy (rad) and translation (m)."""

    rpy: tuple[float, float, float] = (0.0, 0.0, 0.0)
    xyz: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        rpy = tuple(float(v) for v in self.rpy)
        xyz = tuple(float(v) for v in self.xyz)
        if len(rpy) != 3 or len(xyz) != 3:
            raise ConfigurationError("transform needs 3 rpy angles and 3 xyz components")
        if not all(np.isfinite(rpy + xyz)):
            raise ConfigurationError("transform values must be finite")
        object.__setattr__(self, "rpy", rpy)
        object.__setattr__(self, "xyz", xyz)

    @property
    def rotation(self) -> np.ndarray:
        return rpy_to_matrix(self.rpy)

    @property
    def translation(self) -> np.ndarray:
        return np.array(self.xyz)

    @property
    def matrix(self) -> np.ndarray:
        T = np.eye(4)
        T[:3, :3] = self.rotation
        T[:3, 3] = self.xyz
        return T

    def is_identity(self) -> bool:
        return self.rpy == (0.0, 0.0, 0.0) and self.xyz == (0.0, 0.0, 0.0)


IDENTITY = Transform()


@dataclass(frozen=True)
class JointSpec:
    """One joint with its standard DH row.

    ``theta_offset`` is added to q for revolute joints; for prismatic joints
    q is added to ``d`` and ``theta_offset`` is the fixed rotation.
    """

    kind: str = REVOLUTE
    a: float = 0.0
    alpha: float = 0.0
    d: float = 0.0
    theta_offset: float = 0.0
    name: str = ""

    def __post_init__(self):
        if self.kind not in JOINT_KINDS:
            raise ConfigurationError(f"joint {self.name!r}: kind must be one of {JOINT_KINDS}, got {self.kind!r}")
        for attr in ("a", "alpha", "d", "theta_offset"):
            v = float(getattr(self, attr))
            if not np.isfinite(v):
                raise ConfigurationError(f"joint {self.name!r}: {attr} must be finite")
            object.__setattr__(self, attr, v)

    @property
    def is_revolute(self) -> bool:
        return self.kind == REVOLUTE

    def motion(self, q: float) -> tuple[float, float]:
        """(theta, d) actually applied for joint value q."""
        if self.is_revolute:
            return self.theta_offset + q, self.d
        return self.theta_offset, self.d + q


@dataclass(frozen=True)
class KinematicChain:
    joints: tuple[JointSpec, ...]
    base_frame: Transform = IDENTITY
    ee_offset: Transform = IDENTITY
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "joints", tuple(self.joints))
        if len(self.joints) < 1:
            raise ConfigurationError("a kinematic chain needs at least one joint")

    @property
    def n_q(self) -> int:
        return len(self.joints)

    @property
    def all_revolute(self) -> bool:
        return all(j.is_revolute for j in self.joints)

    def check_config(self, q) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        if q.ndim != 1 or q.shape[0] != self.n_q:
            raise ConfigurationError(
                f"q: expected {self.n_q} joint values for chain {self.name!r}, got shape {q.shape}"
            )
        if not np.all(np.isfinite(q)):
            raise ConfigurationError("q: joint values must be finite")
        return q


@dataclass(frozen=True, eq=False)
class FrameSet:
    """World-frame poses of every joint frame and of the task frame.

    ``ee_rotation`` is always the identity (task frame aligned with world);
    the physical end-effector orientation is kept as ``tool_rotation``.
    """

    joint_origins: np.ndarray  # (n_q, 3)
    joint_rotations: np.ndarray  # (n_q, 3, 3)
    ee_origin: np.ndarray
    ee_rotation: np.ndarray
    tool_rotation: np.ndarray

    @property
    def joint_axes(self) -> np.ndarray:
        return self.joint_rotations[:, :, 2]


def forward_kinematics(chain: KinematicChain, q) -> FrameSet:
    q = chain.check_config(q)
    R = chain.base_frame.rotation
    p = chain.base_frame.translation
    origins = np.empty((chain.n_q, 3))
    rotations = np.empty((chain.n_q, 3, 3))
    for k, joint in enumerate(chain.joints):
        theta, d = joint.motion(q[k])
        # joint frame: Rz(theta) Tz(d)
        p = p + d * R[:, 2]
        R = R @ rot_z(theta)
        origins[k] = p
        rotations[k] = R
        # link frame: Tx(a) Rx(alpha)
        p = p + joint.a * R[:, 0]
        R = R @ rot_x(joint.alpha)
    ee = chain.ee_offset
    ee_origin = p + R @ ee.translation
    tool = R @ ee.rotation
    return FrameSet(origins, rotations, ee_origin, np.eye(3), tool)


def geometric_jacobian(chain: KinematicChain, q, frames: FrameSet | None = None) -> np.ndarray:
    """6 x n_q Jacobian at the task-frame origin, rows (v, omega) in world axes."""
    if frames is None:
        frames = forward_kinematics(chain, q)
    else:
        chain.check_config(q)
    J = np.zeros((6, chain.n_q))
    for k, joint in enumerate(chain.joints):
        z = frames.joint_rotations[k, :, 2]
        if joint.is_revolute:
            r = frames.ee_origin - frames.joint_origins[k]
            J[:3, k] = cross3(z, r)
            J[3:, k] = z
        else:
            J[:3, k] = z
    return J


RowSelector = Union[str, Sequence[int]]


def select_rows(rows: RowSelector) -> tuple[int, ...]:
    if isinstance(rows, str):
        named = {"all": ALL_ROWS, "position": POSITION_ROWS, "orientation": ORIENTATION_ROWS}
        if rows not in named:
            raise ConfigurationError(f"rows: unknown selector {rows!r}, use one of {sorted(named)}")
        return named[rows]
    idx = tuple(int(r) for r in rows)
    if not idx:
        raise ConfigurationError("rows: empty row selection")
    if any(r < 0 or r > 5 for r in idx) or len(set(idx)) != len(idx):
        raise ConfigurationError(f"rows: indices must be distinct and in 0..5, got {idx}")
    return idx


def manipulability(J: np.ndarray, rows: RowSelector = "all") -> float:
    """Yoshikawa index sqrt(det(J J^T)) over a subset of task rows.

    det(J J^T) is taken as the product of squared singular values of the
    selected rows, which keeps roundoff at singular poses far below
    ``DET_FLOOR``; more rows than joints makes it exactly 0.  Returns 0.0
    when det(J J^T) falls below ``DET_FLOOR``.
    """
    J = np.asarray(J, dtype=float)
    Js = J[list(select_rows(rows)), :]
    if Js.shape[0] > Js.shape[1]:
        return 0.0
    det = float(np.prod(np.linalg.svd(Js, compute_uv=False) ** 2))
    if det < DET_FLOOR:
        return 0.0
    return float(np.sqrt(det))


def jacobian_transpose_nullspace(J: np.ndarray, tol: float = NULLSPACE_TOL) -> list[np.ndarray]:
    """Orthonormal basis of the wrenches f with J^T f ~ 0.

    Singular values below ``tol * sigma_max`` count as zero.  Left singular
    vectors without a matching singular value (n_q < n_t) are always in the
    basis.
    """
    if tol <= 0:
        raise ConfigurationError("tol must be > 0")
    J = np.asarray(J, dtype=float)
    if J.ndim != 2:
        raise ConfigurationError(f"J must be a matrix, got shape {J.shape}")
    U, sv, _ = np.linalg.svd(J, full_matrices=True)
    smax = sv[0] if sv.size else 0.0
    rank = int(np.sum(sv > tol * smax)) if smax > 0 else 0
    return [U[:, i].copy() for i in range(rank, J.shape[0])]

"""Sensor observability: task-frame sensor axes, sensor-type transforms, the
observability matrix S, the row-wise reducers and the index o.

Pipeline for a configuration q::

    local axis s'  --rotate-->  s  --T_f / identity-->  s~  --stack-->  S
    S  --gamma-->  s (6,)  --product-->  o

Rows of every 6-vector are ordered (f_x, f_y, f_z, tau_x, tau_y, tau_z).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from .errors import ConfigurationError
from .kinematics import IDENTITY, FrameSet, KinematicChain, Transform, cross3, forward_kinematics, norm3

FORCE = "force"
IDENTITY_KIND = "identity"
TRANSFORM_KINDS = (FORCE, IDENTITY_KIND)

TASK_AXES = ("f_x", "f_y", "f_z", "tau_x", "tau_y", "tau_z")

# Relative collinearity tolerance for the moment-arm branch of T_f.
COLLINEAR_TOL = 1e-12

TORQUE_Z = (0.0, 0.0, 0.0, 0.0, 0.0, 1.0)
LOAD_CELL_X = (1.0, 0.0, 0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class SensorMount:
    """Sensor frame pose: ``offset`` expressed in the frame of joint ``parent``.

    ``parent`` is 1-based.  A zero offset puts the sensor on the joint axis
    with its z-axis along the joint axis.
    """

    parent: int
    offset: Transform = IDENTITY

    def __post_init__(self):
        if isinstance(self.parent, bool) or int(self.parent) != self.parent:
            raise ConfigurationError(f"parent joint must be an integer, got {self.parent!r}")
        object.__setattr__(self, "parent", int(self.parent))
        if self.parent < 1:
            raise ConfigurationError(f"parent joint must be >= 1, got {self.parent}")


@dataclass(frozen=True)
class SensorAxis:
    """One individually measured sensor axis.

    ``local_axis`` is s' in the sensor frame.  Multi-axis devices are
    several SensorAxis entries sharing a mount.
    """

    mount: SensorMount
    local_axis: tuple[float, ...] = TORQUE_Z
    transform: str = FORCE
    name: str = ""

    def __post_init__(self):
        axis = tuple(float(v) for v in self.local_axis)
        if len(axis) != 6:
            raise ConfigurationError(f"sensor {self.name!r}: axis must have 6 components, got {len(axis)}")
        if not all(0.0 <= v <= 1.0 for v in axis):
            raise ConfigurationError(f"sensor {self.name!r}: axis components must lie in [0, 1]")
        if not any(v > 0.0 for v in axis):
            raise ConfigurationError(f"sensor {self.name!r}: axis must have a nonzero component")
        if self.transform not in TRANSFORM_KINDS:
            raise ConfigurationError(
                f"sensor {self.name!r}: transform must be one of {TRANSFORM_KINDS}, got {self.transform!r}"
            )
        object.__setattr__(self, "local_axis", axis)


@dataclass(frozen=True)
class SensorSuite:
    axes: tuple[SensorAxis, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        if not self.axes:
            raise ConfigurationError("a sensor suite needs at least one axis")

    @property
    def n_s(self) -> int:
        return len(self.axes)

    def check_chain(self, chain: KinematicChain) -> None:
        for ax in self.axes:
            if ax.mount.parent > chain.n_q:
                raise ConfigurationError(
                    f"sensor {ax.name!r}: parent joint {ax.mount.parent} exceeds chain n_q={chain.n_q}"
                )

    def __len__(self):
        return len(self.axes)


def joint_torque_suite(n_q: int, name: str = "joint-torque") -> SensorSuite:
    """One single-axis torque sensor on every joint, aligned with the joint axis."""
    return SensorSuite(
        tuple(SensorAxis(SensorMount(k), TORQUE_Z, FORCE, f"tau{k}") for k in range(1, n_q + 1)),
        name=name,
    )


def force_torque_suite(parent: int, offset: Transform = IDENTITY, prefix: str = "ft") -> list[SensorAxis]:
    """The six axes of a 6-axis force/torque sensor sharing one frame."""
    axes = []
    for j, label in enumerate(TASK_AXES):
        v = [0.0] * 6
        v[j] = 1.0
        axes.append(SensorAxis(SensorMount(parent, offset), tuple(v), FORCE, f"{prefix}_{label}"))
    return axes


@dataclass(frozen=True, eq=False)
class ObservabilityMatrix:
    S: np.ndarray  # (6, n_s)
    moment_arms: np.ndarray  # (n_s, 3), sensor origin -> F_EE origin
    collinear: np.ndarray  # (n_s,) bool, which columns took T_f's first branch

    @property
    def n_s(self) -> int:
        return self.S.shape[1]


@dataclass(frozen=True, eq=False)
class ObservabilityResult:
    s: np.ndarray
    o: float
    gamma_kind: str
    ellipsoid_force: np.ndarray
    ellipsoid_torque: np.ndarray
    per_axis_flags: np.ndarray
    matrix: ObservabilityMatrix | None = field(default=None, repr=False)

    @property
    def flagged_axes(self) -> list[str]:
        return [TASK_AXES[j] for j in np.flatnonzero(self.per_axis_flags)]

    @property
    def singular(self) -> bool:
        return self.o == 0.0


def sensor_axes_in_task_frame(chain: KinematicChain, q, suite: SensorSuite, frames: FrameSet | None = None):
    """Rotate each local axis into the (world-aligned) task frame.

    Returns ``(axes, arms)``: axes is (n_s, 6) with signs kept, arms is
    (n_s, 3) holding F_EE origin minus sensor origin.
    """
    suite.check_chain(chain)
    if frames is None:
        frames = forward_kinematics(chain, q)
    else:
        chain.check_config(q)
    axes = np.empty((suite.n_s, 6))
    arms = np.empty((suite.n_s, 3))
    for i, ax in enumerate(suite.axes):
        k = ax.mount.parent - 1
        Rk = frames.joint_rotations[k]
        off = ax.mount.offset
        if off.is_identity():
            R, p = Rk, frames.joint_origins[k]
        else:
            R = Rk @ off.rotation
            p = frames.joint_origins[k] + Rk @ off.translation
        local = np.asarray(ax.local_axis)
        axes[i, :3] = R @ local[:3]
        axes[i, 3:] = R @ local[3:]
        arms[i] = frames.ee_origin - p
    return axes, arms


def _is_collinear(c: np.ndarray, r: np.ndarray) -> bool:
    return norm3(c) <= COLLINEAR_TOL * max(1.0, norm3(r))


def force_transform(s_hat, r) -> np.ndarray:
    """T_f: fold a rotational sensor axis into linear task axes via its moment arm.

    The cross-product term is normalized so only the direction of the
    moment arm matters.  Collinear r and s_theta (including r = 0) take the
    pure absolute-value branch.
    """
    s_hat = np.asarray(s_hat, dtype=float)
    r = np.asarray(r, dtype=float)
    out = np.abs(s_hat)
    c = cross3(r, s_hat[3:])
    if not _is_collinear(c, r):
        out[:3] += np.abs(c) / norm3(c)
    return out


def identity_transform(s_hat) -> np.ndarray:
    return np.abs(np.asarray(s_hat, dtype=float))


def observability_matrix(chain: KinematicChain, q, suite: SensorSuite, frames: FrameSet | None = None) -> ObservabilityMatrix:
    axes, arms = sensor_axes_in_task_frame(chain, q, suite, frames)
    S = np.empty((6, suite.n_s))
    collinear = np.zeros(suite.n_s, dtype=bool)
    for i, ax in enumerate(suite.axes):
        if ax.transform == FORCE:
            S[:, i] = force_transform(axes[i], arms[i])
            collinear[i] = _is_collinear(cross3(arms[i], axes[i, 3:]), arms[i])
        else:
            S[:, i] = identity_transform(axes[i])
    return ObservabilityMatrix(S, arms, collinear)


def gamma_sum(S) -> np.ndarray:
    return np.sum(np.asarray(S, dtype=float), axis=1)


def gamma_max(S) -> np.ndarray:
    return np.max(np.asarray(S, dtype=float), axis=1)


# A custom reducer receives S and the (n_s, 3) moment arms.
Reducer = Callable[[np.ndarray, np.ndarray], np.ndarray]
GammaSpec = Union[str, Reducer]

GAMMAS = {"sum": gamma_sum, "max": gamma_max}


def resolve_gamma(gamma: GammaSpec) -> tuple[str, Reducer]:
    if callable(gamma):
        return getattr(gamma, "__name__", "custom"), gamma
    if gamma not in GAMMAS:
        raise ConfigurationError(f"gamma must be one of {sorted(GAMMAS)} or a callable, got {gamma!r}")
    fn = GAMMAS[gamma]
    return gamma, lambda S, arms: fn(S)


def observability_index(s: Sequence[float]) -> float:
    """o = product of the observability vector's components.

    A product of nonzero components that underflows is returned as the
    smallest positive double, so o == 0 still means some axis is lost.
    """
    vals = [float(v) for v in s]
    o = math.prod(vals)
    if o == 0.0 and all(v != 0.0 for v in vals):
        return math.ulp(0.0)
    return o


def analyze(chain: KinematicChain, q, suite: SensorSuite, gamma: GammaSpec = "sum",
            threshold: float = 0.0, frames: FrameSet | None = None) -> ObservabilityResult:
    """Full sensor-observability pipeline for one configuration.

    ``per_axis_flags[j]`` is set when ``s[j] < threshold`` or when the axis
    is lost outright (``s[j] == 0``), so the default threshold of 0 flags
    exact loss only.
    """
    if not threshold >= 0:
        raise ConfigurationError(f"threshold must be >= 0, got {threshold}")
    kind, reducer = resolve_gamma(gamma)
    m = observability_matrix(chain, q, suite, frames)
    s = np.asarray(reducer(m.S, m.moment_arms), dtype=float)
    if s.shape != (6,):
        raise ConfigurationError(f"gamma must return 6 values, got shape {s.shape}")
    return ObservabilityResult(
        s=s,
        o=observability_index(s),
        gamma_kind=kind,
        ellipsoid_force=s[:3].copy(),
        ellipsoid_torque=s[3:].copy(),
        per_axis_flags=(s < threshold) | (s == 0.0),
        matrix=m,
    )

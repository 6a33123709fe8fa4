"""Bundled robots, sensor suites, named poses and the sweep scenario.

The "baxter-like" arm reuses the joint-axis topology of a Baxter arm
(S0 S1 E0 E1 W0 W1 W2 with alternating +-90 deg twists and small link
offsets).  Link dimensions are representative; indices computed on it are
qualitatively, not numerically, comparable to published Baxter results.
"""
from __future__ import annotations

import math
from pathlib import Path

from .errors import ConfigurationError
from .io import (Scenario, load_robot, load_scenario, load_sensors, save_robot, save_scenario,
                 save_sensors)
from .kinematics import PRISMATIC, REVOLUTE, JointSpec, KinematicChain, Transform
from .observability import (FORCE, SensorAxis, SensorMount, SensorSuite,
                            force_torque_suite, joint_torque_suite)
from .sweep import Trajectory

HALF_PI = math.pi / 2


def planar_chain(lengths, name: str) -> KinematicChain:
    return KinematicChain(
        tuple(JointSpec(REVOLUTE, a=float(l), name=f"j{k}") for k, l in enumerate(lengths, 1)),
        name=name,
    )


PLANAR2R = planar_chain((1.0, 1.0), "planar2r")
PLANAR3R = planar_chain((1.0, 0.8, 0.5), "planar3r")

BAXTER_LIKE = KinematicChain(
    (
        JointSpec(REVOLUTE, a=0.069, alpha=-HALF_PI, d=0.27035, name="s0"),
        JointSpec(REVOLUTE, a=0.0, alpha=HALF_PI, d=0.0, theta_offset=HALF_PI, name="s1"),
        JointSpec(REVOLUTE, a=0.069, alpha=-HALF_PI, d=0.36435, name="e0"),
        JointSpec(REVOLUTE, a=0.0, alpha=HALF_PI, d=0.0, name="e1"),
        JointSpec(REVOLUTE, a=0.010, alpha=-HALF_PI, d=0.37429, name="w0"),
        JointSpec(REVOLUTE, a=0.0, alpha=HALF_PI, d=0.0, name="w1"),
        JointSpec(REVOLUTE, a=0.0, alpha=0.0, d=0.229525, name="w2"),
    ),
    name="baxter-like",
)

# Cartesian-style gantry with a wrist; exercises prismatic columns.
GANTRY = KinematicChain(
    (
        JointSpec(PRISMATIC, alpha=-HALF_PI, theta_offset=-HALF_PI, name="x"),
        JointSpec(PRISMATIC, alpha=-HALF_PI, theta_offset=-HALF_PI, name="y"),
        JointSpec(PRISMATIC, d=0.2, name="z"),
        JointSpec(REVOLUTE, alpha=-HALF_PI, d=0.1, name="wrist_yaw"),
        JointSpec(REVOLUTE, alpha=HALF_PI, name="wrist_pitch"),
        JointSpec(REVOLUTE, d=0.15, name="wrist_roll"),
    ),
    name="gantry",
)

ROBOTS = {c.name: c for c in (PLANAR2R, PLANAR3R, BAXTER_LIKE, GANTRY)}


def _pitch_offsets(chain: KinematicChain = BAXTER_LIKE) -> tuple[float, float]:
    """Angles of the upper-arm and forearm offset vectors in the pitch plane."""
    e0, w0 = chain.joints[2], chain.joints[4]
    return math.atan2(e0.a, e0.d), math.atan2(w0.a, w0.d)


def baxter_poses() -> dict[str, tuple[float, ...]]:
    """Named configurations of the baxter-like arm.

    With q1 = q3 = q5 = q7 = 0 the arm lies in the world x-z plane and the
    pitch joints 2, 4, 6 all have axes along y, so the special poses reduce
    to planar geometry:

    ``fx_singular``
        shoulder pitch pivot, elbow pivot, wrist pivot and end effector all
        at shoulder height; every joint axis meets the x-line through the
        end effector, so no joint torque sees f_x.
    ``tilted_wrist``
        ``fx_singular`` with the wrist pitched down; J^T keeps a null vector
        (f_x balanced by tau_y) but f_x is observable again.
    ``axes_1_7_collinear``
        pivots collinear (stretched elbow) with the last axis vertical and
        on the base axis; w_k = 0 while every task axis stays observable.
    ``tau_x_singular``
        arm hanging straight down; no joint axis has an x component.
    """
    g3, g5 = _pitch_offsets()
    s1, e0, e1, w0 = (BAXTER_LIKE.joints[k] for k in (0, 2, 3, 4))
    reach = math.hypot(e0.a, e0.d) + math.hypot(w0.a, w0.d)
    elbow = g3 - g5
    hang = math.acos(-s1.a / reach) - g3
    return {
        "zero": (0.0,) * 7,
        "arbitrary": (0.3, -0.6, 0.4, 1.1, -0.5, 0.8, 0.0),
        "fx_singular": (0.0, -g3, 0.0, elbow, 0.0, g5, 0.0),
        "tilted_wrist": (0.0, -g3, 0.0, elbow, 0.0, g5 + 0.3, 0.0),
        "axes_1_7_collinear": (0.0, hang, 0.0, elbow, 0.0, HALF_PI - hang - elbow, 0.0),
        "tau_x_singular": (0.0, HALF_PI, 0.0, 0.0, 0.0, 0.0, 0.0),
    }


def _suites() -> dict[str, SensorSuite]:
    suites = {}
    for robot in ROBOTS.values():
        if robot.all_revolute:
            name = f"{robot.name}-torque"
            suites[name] = joint_torque_suite(robot.n_q, name)
    # 6-axis force/torque sensors sitting exactly at the task frame
    suites["planar2r-ft6"] = SensorSuite(
        tuple(force_torque_suite(2, Transform(xyz=(1.0, 0.0, 0.0)))), name="planar2r-ft6")
    suites["baxter-like-ft6"] = SensorSuite(tuple(force_torque_suite(7)), name="baxter-like-ft6")
    # torque sensors on the shoulder and elbow plus a 3-axis load cell mid-forearm
    half_forearm = BAXTER_LIKE.joints[4].d / 2
    cell = Transform(xyz=(0.0, 0.0, -half_forearm))
    mixed = [SensorAxis(SensorMount(k), (0, 0, 0, 0, 0, 1), FORCE, f"tau{k}") for k in range(1, 5)]
    for j, label in enumerate("xyz"):
        v = [0.0] * 6
        v[j] = 1.0
        mixed.append(SensorAxis(SensorMount(5, cell), tuple(v), FORCE, f"forearm_cell_{label}"))
    suites["baxter-like-mixed"] = SensorSuite(tuple(mixed), name="baxter-like-mixed")
    return suites


SUITES = _suites()


def robot_filename(name: str) -> str:
    return f"{name}.robot.json"


def suite_filename(name: str) -> str:
    return f"{name}.sensors.json"


def scenario_filename(name: str) -> str:
    return f"{name}.scenario.json"


def _singular_pass_scenario() -> Scenario:
    poses = baxter_poses()
    q_start = poses["arbitrary"]
    q_sing = poses["fx_singular"]
    q_home = (q_sing[0], 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    q_end = (-0.5, 0.4, -0.3, 0.9, 0.6, -0.7, 0.0)
    traj = Trajectory(((0.0, q_start), (4.0, q_sing), (8.0, q_home), (12.0, q_end)), 100.0)
    return Scenario(robot=robot_filename("baxter-like"), sensors=suite_filename("baxter-like-torque"),
                    trajectory=traj, name="baxter-singular-pass")


SCENARIOS = {"baxter-singular-pass": _singular_pass_scenario()}


def _strip(ref: str, suffix: str) -> str:
    base = Path(ref).name
    return base[: -len(suffix)] if base.endswith(suffix) else ref


def resolve_robot(ref, base_dir=None) -> KinematicChain:
    """A robot from a file path (relative to ``base_dir``) or a preset name."""
    path = Path(base_dir or ".") / str(ref)
    if path.is_file():
        return load_robot(path)
    name = _strip(str(ref), ".robot.json")
    if name in ROBOTS:
        return ROBOTS[name]
    raise ConfigurationError(f"robot: no such file or preset {str(ref)!r}")


def resolve_sensors(ref, base_dir=None) -> SensorSuite:
    path = Path(base_dir or ".") / str(ref)
    if path.is_file():
        return load_sensors(path)
    name = _strip(str(ref), ".sensors.json")
    if name in SUITES:
        return SUITES[name]
    raise ConfigurationError(f"sensors: no such file or preset {str(ref)!r}")


def resolve_scenario(ref) -> tuple[Scenario, Path | None]:
    """The scenario and the directory its references are relative to."""
    path = Path(str(ref))
    if path.is_file():
        return load_scenario(path), path.parent
    name = _strip(str(ref), ".scenario.json")
    if name in SCENARIOS:
        return SCENARIOS[name], None
    raise ConfigurationError(f"scenario: no such file or preset {str(ref)!r}")


def write_presets(directory) -> list[Path]:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, chain in ROBOTS.items():
        written.append(out / robot_filename(name))
        save_robot(chain, written[-1])
    for name, suite in SUITES.items():
        written.append(out / suite_filename(name))
        save_sensors(suite, written[-1])
    for name, sc in SCENARIOS.items():
        written.append(out / scenario_filename(name))
        save_scenario(sc, written[-1])
    return written

"""JSON description files for robots, sensor suites and sweep scenarios.

Parsing keeps track of the line each JSON object starts on so schema
errors can point at the offending entry.
"""
from __future__ import annotations

import bisect
import json
import json.decoder
import json.scanner
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .errors import ConfigurationError, SchemaError
from .kinematics import JOINT_KINDS, JointSpec, KinematicChain, Transform
from .observability import TRANSFORM_KINDS, SensorAxis, SensorMount, SensorSuite
from .sweep import DEFAULT_SAMPLE_RATE, Trajectory


class _Obj(dict):
    line: int = 0


class _LineDecoder(json.JSONDecoder):
    def __init__(self, text: str):
        super().__init__()
        newlines = [i for i, ch in enumerate(text) if ch == "\n"]

        def parse_object(s_and_end, *args):
            s, end = s_and_end
            obj, new_end = json.decoder.JSONObject(s_and_end, *args)
            out = _Obj(obj)
            # end points just past the opening brace
            out.line = _line_of(newlines, end - 1)
            return out, new_end

        self.parse_object = parse_object
        self.scan_once = json.scanner.py_make_scanner(self)


def _line_of(newlines: list[int], pos: int) -> int:
    return bisect.bisect_left(newlines, pos) + 1


def parse_json(text: str, source: str = "<string>") -> Any:
    try:
        return _LineDecoder(text).decode(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON: {exc.msg} (column {exc.colno})", source, exc.lineno) from None


class _Reader:
    """Field access on a parsed object with located diagnostics."""

    def __init__(self, source: str):
        self.source = source

    def fail(self, obj, path: str, msg: str):
        raise SchemaError(msg, self.source, getattr(obj, "line", None), path)

    def obj(self, value, path: str, parent=None) -> dict:
        if not isinstance(value, dict):
            self.fail(parent if parent is not None else value, path, "expected an object")
        return value

    def keys(self, obj: dict, path: str, required: set, optional: set = frozenset()):
        for key in sorted(required - obj.keys()):
            self.fail(obj, _join(path, key), "missing required field")
        for key in sorted(obj.keys() - required - optional):
            self.fail(obj, _join(path, key), "unknown field")

    def number(self, obj: dict, key: str, path: str) -> float:
        v = obj[key]
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            self.fail(obj, _join(path, key), f"expected a finite number, got {v!r}")
        return float(v)

    def vector(self, obj: dict, key: str, path: str, n: int) -> tuple[float, ...]:
        v = obj[key]
        if not isinstance(v, list) or len(v) != n:
            self.fail(obj, _join(path, key), f"expected a list of {n} numbers")
        out = []
        for i, x in enumerate(v):
            if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
                self.fail(obj, f"{_join(path, key)}[{i}]", f"expected a finite number, got {x!r}")
            out.append(float(x))
        return tuple(out)

    def string(self, obj: dict, key: str, path: str, choices=None) -> str:
        v = obj[key]
        if not isinstance(v, str):
            self.fail(obj, _join(path, key), f"expected a string, got {v!r}")
        if choices is not None and v not in choices:
            self.fail(obj, _join(path, key), f"must be one of {list(choices)}, got {v!r}")
        return v

    def list(self, obj: dict, key: str, path: str, nonempty=True) -> list:
        v = obj[key]
        if not isinstance(v, list) or (nonempty and not v):
            self.fail(obj, _join(path, key), "expected a non-empty list")
        return v

    def transform(self, obj: dict, key: str, path: str) -> Transform:
        if key not in obj:
            return Transform()
        p = _join(path, key)
        t = self.obj(obj[key], p, obj)
        self.keys(t, p, set(), {"rpy", "xyz"})
        rpy = self.vector(t, "rpy", p, 3) if "rpy" in t else (0.0, 0.0, 0.0)
        xyz = self.vector(t, "xyz", p, 3) if "xyz" in t else (0.0, 0.0, 0.0)
        return Transform(rpy, xyz)

    def build(self, obj, path, fn, *args, **kwargs):
        """Run a model constructor, re-raising its validation error with a location."""
        try:
            return fn(*args, **kwargs)
        except SchemaError:
            raise
        except ConfigurationError as exc:
            self.fail(obj, path, str(exc))


def _join(path: str, key: str) -> str:
    return f"{path}.{key}" if path else key


def _transform_dict(t: Transform) -> dict:
    return {"rpy": list(t.rpy), "xyz": list(t.xyz)}


# --- robots ---------------------------------------------------------------

def robot_from_dict(d, source: str = "<robot>") -> KinematicChain:
    rd = _Reader(source)
    d = rd.obj(d, "")
    rd.keys(d, "", {"joints"}, {"name", "base_frame", "ee_offset"})
    name = rd.string(d, "name", "") if "name" in d else ""
    joints = []
    for i, jd in enumerate(rd.list(d, "joints", "")):
        path = f"joints[{i}]"
        jd = rd.obj(jd, path, d)
        rd.keys(jd, path, {"kind", "a", "alpha", "d"}, {"name", "theta_offset"})
        joints.append(rd.build(
            jd, path, JointSpec,
            kind=rd.string(jd, "kind", path, JOINT_KINDS),
            a=rd.number(jd, "a", path),
            alpha=rd.number(jd, "alpha", path),
            d=rd.number(jd, "d", path),
            theta_offset=rd.number(jd, "theta_offset", path) if "theta_offset" in jd else 0.0,
            name=rd.string(jd, "name", path) if "name" in jd else "",
        ))
    return KinematicChain(
        tuple(joints),
        base_frame=rd.transform(d, "base_frame", ""),
        ee_offset=rd.transform(d, "ee_offset", ""),
        name=name,
    )


def robot_to_dict(chain: KinematicChain) -> dict:
    return {
        "name": chain.name,
        "base_frame": _transform_dict(chain.base_frame),
        "ee_offset": _transform_dict(chain.ee_offset),
        "joints": [
            {"name": j.name, "kind": j.kind, "a": j.a, "alpha": j.alpha, "d": j.d, "theta_offset": j.theta_offset}
            for j in chain.joints
        ],
    }


# --- sensor suites ----------------------------------------------------------

def suite_from_dict(d, source: str = "<sensors>") -> SensorSuite:
    rd = _Reader(source)
    d = rd.obj(d, "")
    rd.keys(d, "", {"sensors"}, {"name"})
    axes = []
    for i, sd in enumerate(rd.list(d, "sensors", "")):
        path = f"sensors[{i}]"
        sd = rd.obj(sd, path, d)
        rd.keys(sd, path, {"parent_joint", "axis"}, {"name", "offset", "transform"})
        parent = sd["parent_joint"]
        if isinstance(parent, bool) or not isinstance(parent, int):
            rd.fail(sd, path + ".parent_joint", f"expected an integer joint index (1-based), got {parent!r}")
        mount = rd.build(sd, path + ".parent_joint", SensorMount, parent, rd.transform(sd, "offset", path))
        axes.append(rd.build(
            sd, path + ".axis", SensorAxis,
            mount,
            rd.vector(sd, "axis", path, 6),
            rd.string(sd, "transform", path, TRANSFORM_KINDS) if "transform" in sd else "force",
            rd.string(sd, "name", path) if "name" in sd else "",
        ))
    return SensorSuite(tuple(axes), name=rd.string(d, "name", "") if "name" in d else "")


def suite_to_dict(suite: SensorSuite) -> dict:
    return {
        "name": suite.name,
        "sensors": [
            {
                "name": ax.name,
                "parent_joint": ax.mount.parent,
                "offset": _transform_dict(ax.mount.offset),
                "axis": list(ax.local_axis),
                "transform": ax.transform,
            }
            for ax in suite.axes
        ],
    }


# --- scenarios ----------------------------------------------------------------

@dataclass(frozen=True)
class Scenario:
    """A sweep description; ``robot`` and ``sensors`` are file references
    resolved relative to the scenario file (or bundled preset names)."""

    robot: str
    sensors: str
    trajectory: Trajectory
    name: str = ""


def scenario_from_dict(d, source: str = "<scenario>") -> Scenario:
    rd = _Reader(source)
    d = rd.obj(d, "")
    rd.keys(d, "", {"robot", "sensors", "waypoints"}, {"name", "sample_rate"})
    wps = []
    for i, wd in enumerate(rd.list(d, "waypoints", "")):
        path = f"waypoints[{i}]"
        wd = rd.obj(wd, path, d)
        rd.keys(wd, path, {"t", "q"}, set())
        q = rd.list(wd, "q", path)
        wps.append((rd.number(wd, "t", path), rd.vector(wd, "q", path, len(q))))
    rate = rd.number(d, "sample_rate", "") if "sample_rate" in d else DEFAULT_SAMPLE_RATE
    traj = rd.build(d, "waypoints", Trajectory, tuple(wps), rate)
    return Scenario(
        robot=rd.string(d, "robot", ""),
        sensors=rd.string(d, "sensors", ""),
        trajectory=traj,
        name=rd.string(d, "name", "") if "name" in d else "",
    )


def scenario_to_dict(sc: Scenario) -> dict:
    return {
        "name": sc.name,
        "robot": sc.robot,
        "sensors": sc.sensors,
        "sample_rate": sc.trajectory.sample_rate,
        "waypoints": [{"t": t, "q": list(q)} for t, q in sc.trajectory.waypoints],
    }


# --- files ----------------------------------------------------------------------

def _read(path) -> tuple[Any, str]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SchemaError(f"cannot read file: {exc.strerror}", str(path)) from None
    return parse_json(text, str(path)), str(path)


def load_robot(path) -> KinematicChain:
    return robot_from_dict(*_read(path))


def load_sensors(path) -> SensorSuite:
    return suite_from_dict(*_read(path))


def load_scenario(path) -> Scenario:
    return scenario_from_dict(*_read(path))


def dumps(d: dict) -> str:
    return json.dumps(d, indent=2) + "\n"


def save_robot(chain: KinematicChain, path) -> None:
    Path(path).write_text(dumps(robot_to_dict(chain)))


def save_sensors(suite: SensorSuite, path) -> None:
    Path(path).write_text(dumps(suite_to_dict(suite)))


def save_scenario(sc: Scenario, path) -> None:
    Path(path).write_text(dumps(scenario_to_dict(sc)))

"""Joint-space trajectory sweeps producing w_k, o_sum and o_max series."""
from __future__ import annotations

import bisect
import io
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .kinematics import KinematicChain, forward_kinematics, geometric_jacobian, manipulability
from .observability import SensorSuite, gamma_max, gamma_sum, observability_index, observability_matrix

DEFAULT_SAMPLE_RATE = 100.0


@dataclass(frozen=True)
class Trajectory:
    """Waypoints ``(t, q)`` with strictly increasing times, linearly blended."""

    waypoints: tuple[tuple[float, tuple[float, ...]], ...]
    sample_rate: float = DEFAULT_SAMPLE_RATE

    def __post_init__(self):
        wps = tuple((float(t), tuple(float(v) for v in q)) for t, q in self.waypoints)
        if not wps:
            raise ConfigurationError("trajectory needs at least one waypoint")
        n = len(wps[0][1])
        for i, (t, q) in enumerate(wps):
            if not np.isfinite(t) or not np.all(np.isfinite(q)):
                raise ConfigurationError(f"waypoints[{i}]: values must be finite")
            if len(q) != n:
                raise ConfigurationError(f"waypoints[{i}].q: expected {n} values, got {len(q)}")
            if i and t <= wps[i - 1][0]:
                raise ConfigurationError(f"waypoints[{i}].t: times must be strictly increasing")
        rate = float(self.sample_rate)
        if not (np.isfinite(rate) and rate > 0):
            raise ConfigurationError(f"sample_rate must be > 0, got {self.sample_rate}")
        object.__setattr__(self, "waypoints", wps)
        object.__setattr__(self, "sample_rate", rate)

    @property
    def times(self) -> list[float]:
        return [t for t, _ in self.waypoints]

    @property
    def n_q(self) -> int:
        return len(self.waypoints[0][1])

    @property
    def start(self) -> float:
        return self.waypoints[0][0]

    @property
    def end(self) -> float:
        return self.waypoints[-1][0]

    def sample_times(self) -> np.ndarray:
        # t0 + k / rate, never accumulated, so refining the rate reproduces shared samples bit for bit
        n = int(np.floor((self.end - self.start) * self.sample_rate + 1e-9))
        return np.array([self.start + k / self.sample_rate for k in range(n + 1)])


def interpolate(trajectory: Trajectory, t: float) -> np.ndarray:
    times = trajectory.times
    if not times[0] <= t <= times[-1]:
        raise ConfigurationError(f"t={t} outside trajectory range [{times[0]}, {times[-1]}]")
    i = bisect.bisect_left(times, t)
    if times[i] == t:
        return np.array(trajectory.waypoints[i][1])
    (ta, qa), (tb, qb) = trajectory.waypoints[i - 1], trajectory.waypoints[i]
    qa, qb = np.array(qa), np.array(qb)
    u = (t - ta) / (tb - ta)
    return qa + u * (qb - qa)


def normalize(series: np.ndarray) -> tuple[np.ndarray, float]:
    """Scale by the series maximum; an all-zero series is returned unchanged."""
    series = np.asarray(series, dtype=float)
    peak = float(np.max(series)) if series.size else 0.0
    if peak > 0:
        return series / peak, peak
    return series.copy(), peak


@dataclass(frozen=True, eq=False)
class SweepSeries:
    t: np.ndarray
    q: np.ndarray  # (n_samples, n_q)
    wk: np.ndarray
    o_sum: np.ndarray
    o_max: np.ndarray
    wk_norm: np.ndarray = field(init=False)
    o_sum_norm: np.ndarray = field(init=False)
    o_max_norm: np.ndarray = field(init=False)
    peaks: dict = field(init=False)

    def __post_init__(self):
        peaks = {}
        for name in ("wk", "o_sum", "o_max"):
            norm, peak = normalize(getattr(self, name))
            object.__setattr__(self, name + "_norm", norm)
            peaks[name] = peak
        object.__setattr__(self, "peaks", peaks)

    def __len__(self):
        return len(self.t)

    def columns(self) -> list[str]:
        n_q = self.q.shape[1]
        return ["t"] + [f"q{k}" for k in range(1, n_q + 1)] + [
            "wk", "o_sum", "o_max", "wk_norm", "o_sum_norm", "o_max_norm"]

    def rows(self):
        for i in range(len(self.t)):
            yield [self.t[i], *self.q[i], self.wk[i], self.o_sum[i], self.o_max[i],
                   self.wk_norm[i], self.o_sum_norm[i], self.o_max_norm[i]]

    def argmin_time(self, name: str) -> float:
        return float(self.t[int(np.argmin(getattr(self, name)))])


def evaluate(chain: KinematicChain, suite: SensorSuite, q, rows="all") -> tuple[float, float, float]:
    """(w_k, o_sum, o_max) for one configuration."""
    frames = forward_kinematics(chain, q)
    J = geometric_jacobian(chain, q, frames)
    S = observability_matrix(chain, q, suite, frames).S
    return manipulability(J, rows), observability_index(gamma_sum(S)), observability_index(gamma_max(S))


def sweep(chain: KinematicChain, suite: SensorSuite, trajectory: Trajectory, rows="all") -> SweepSeries:
    if trajectory.n_q != chain.n_q:
        raise ConfigurationError(
            f"waypoints[].q: trajectory has {trajectory.n_q} joints, chain {chain.name!r} has {chain.n_q}"
        )
    suite.check_chain(chain)
    ts = trajectory.sample_times()
    qs = np.array([interpolate(trajectory, t) for t in ts])
    vals = np.array([evaluate(chain, suite, q, rows) for q in qs])
    return SweepSeries(ts, qs, vals[:, 0], vals[:, 1], vals[:, 2])


def emphasize(wk_norm: np.ndarray, gain: float) -> np.ndarray:
    """Display-only exponential stretch of a [0, 1] series near zero."""
    if gain <= 0:
        raise ConfigurationError("emphasis gain must be > 0")
    return -np.expm1(-gain * wk_norm) / -np.expm1(-gain)


def format_value(v: float) -> str:
    return f"{v:.9g}"


def to_csv(series: SweepSeries, extra: dict[str, np.ndarray] | None = None) -> str:
    extra = extra or {}
    buf = io.StringIO()
    buf.write(",".join(series.columns() + list(extra)) + "\n")
    for i, row in enumerate(series.rows()):
        row = row + [col[i] for col in extra.values()]
        buf.write(",".join(format_value(float(v)) for v in row) + "\n")
    return buf.getvalue()

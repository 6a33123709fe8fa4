"""Kinematic vs. observability singularities, and the joint-torque special
case where the observability matrix mirrors the geometric Jacobian."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, UnsupportedChainError
from .kinematics import (DET_FLOOR, NULLSPACE_TOL, KinematicChain, forward_kinematics, geometric_jacobian,
                         jacobian_transpose_nullspace, manipulability, norm3)
from .observability import (COLLINEAR_TOL, SensorSuite, gamma_max, gamma_sum, joint_torque_suite,
                            observability_index, observability_matrix, resolve_gamma)


@dataclass(frozen=True)
class Tolerances:
    kinematic: float = float(np.sqrt(DET_FLOOR))  # w_k below this is singular
    nullspace: float = NULLSPACE_TOL  # relative singular-value cutoff
    observability: float = 1e-12  # any s_j at or below this is a lost axis

    def __post_init__(self):
        for name in ("kinematic", "nullspace", "observability"):
            if not getattr(self, name) > 0:
                raise ConfigurationError(f"tolerances.{name} must be > 0")


@dataclass(frozen=True)
class ConfigClassification:
    w_k: float
    o_sum: float
    o_max: float
    s: tuple[float, ...]
    gamma_kind: str
    kinematic_singular: bool
    observability_singular: bool
    jt_nullspace_dim: int
    false_observability_singularity: bool

    @property
    def o(self) -> float:
        """Index for the selected gamma (custom reducers use ``s``)."""
        return float(np.prod(self.s))


def classify(chain: KinematicChain, q, suite: SensorSuite, gamma="sum",
             tolerances: Tolerances = Tolerances()) -> ConfigClassification:
    frames = forward_kinematics(chain, q)
    J = geometric_jacobian(chain, q, frames)
    m = observability_matrix(chain, q, suite, frames)
    kind, reducer = resolve_gamma(gamma)
    s = np.asarray(reducer(m.S, m.moment_arms), dtype=float)
    w_k = manipulability(J)
    null_dim = len(jacobian_transpose_nullspace(J, tolerances.nullspace))
    obs_singular = bool(np.any(s <= tolerances.observability))
    return ConfigClassification(
        w_k=w_k,
        o_sum=observability_index(gamma_sum(m.S)),
        o_max=observability_index(gamma_max(m.S)),
        s=tuple(float(v) for v in s),
        gamma_kind=kind,
        kinematic_singular=w_k < tolerances.kinematic,
        observability_singular=obs_singular,
        jt_nullspace_dim=null_dim,
        false_observability_singularity=null_dim > 0 and not obs_singular,
    )


@dataclass(frozen=True, eq=False)
class SpecialCaseReport:
    """Column-wise comparison of S against [|J_p|/||J_p|| ; |J_theta|].

    Excluded columns (moment arm collinear with the joint axis) carry NaN
    deviations and are listed in ``excluded``.
    """

    translational: np.ndarray
    rotational: np.ndarray
    excluded: tuple[int, ...]

    @property
    def max_deviation(self) -> float:
        kept = [i for i in range(len(self.rotational)) if i not in self.excluded]
        if not kept:
            return 0.0
        return float(max(np.max(self.translational[kept]), np.max(self.rotational[kept])))

    @property
    def n_excluded(self) -> int:
        return len(self.excluded)


def special_case_check(chain: KinematicChain, q) -> SpecialCaseReport:
    """Compare S for the canonical joint-torque suite with the Jacobian."""
    if not chain.all_revolute:
        bad = [j.name or str(k) for k, j in enumerate(chain.joints, 1) if not j.is_revolute]
        raise UnsupportedChainError(f"special-case check needs an all-revolute chain; prismatic joints: {bad}")
    frames = forward_kinematics(chain, q)
    J = geometric_jacobian(chain, q, frames)
    m = observability_matrix(chain, q, joint_torque_suite(chain.n_q), frames)
    n = chain.n_q
    trans = np.full(n, np.nan)
    rot = np.full(n, np.nan)
    excluded = []
    for i in range(n):
        Jp, Jt = J[:3, i], J[3:, i]
        jp_norm = norm3(Jp)
        if m.collinear[i] or jp_norm <= COLLINEAR_TOL * max(1.0, norm3(m.moment_arms[i])):
            excluded.append(i)
            continue
        trans[i] = norm3(m.S[:3, i] - np.abs(Jp) / jp_norm)
        rot[i] = norm3(m.S[3:, i] - np.abs(Jt))
    return SpecialCaseReport(trans, rot, tuple(excluded))

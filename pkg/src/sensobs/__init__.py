"""Sensor observability index and kinematic manipulability for serial manipulators."""
from .errors import ConfigurationError, SchemaError, UnsupportedChainError
from .kinematics import (FrameSet, JointSpec, KinematicChain, Transform, forward_kinematics, geometric_jacobian,
                         jacobian_transpose_nullspace, manipulability)
from .observability import (ObservabilityMatrix, ObservabilityResult, SensorAxis, SensorMount, SensorSuite, analyze,
                            force_transform, gamma_max, gamma_sum, identity_transform, joint_torque_suite,
                            observability_index, observability_matrix, sensor_axes_in_task_frame)
from .singularity import ConfigClassification, SpecialCaseReport, Tolerances, classify, special_case_check
from .sweep import SweepSeries, Trajectory, interpolate, sweep

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError", "SchemaError", "UnsupportedChainError",
    "FrameSet", "JointSpec", "KinematicChain", "Transform", "forward_kinematics", "geometric_jacobian",
    "jacobian_transpose_nullspace", "manipulability",
    "ObservabilityMatrix", "ObservabilityResult", "SensorAxis", "SensorMount", "SensorSuite", "analyze",
    "force_transform", "gamma_max", "gamma_sum", "identity_transform", "joint_torque_suite",
    "observability_index", "observability_matrix", "sensor_axes_in_task_frame",
    "ConfigClassification", "SpecialCaseReport", "Tolerances", "classify", "special_case_check",
    "SweepSeries", "Trajectory", "interpolate", "sweep",
]

"""Dimensional synthesis of in-pipe robot leg mechanisms."""

from ._legsynth import (
    LegsynthError,
    MechanismKind,
    ObjectivePoint,
    OptimizerSettings,
    ParetoSet,
    __version__,
    direct_kinematics,
    elbow_max_length,
    evaluate_design,
    grid_oracle,
    hypervolume,
    inverse_kinematics,
    joint_layout,
    non_dominated_filter,
    nsga2_run,
    pareto_line_fit,
    transmission_efficiency,
)

__all__ = [
    "LegsynthError",
    "MechanismKind",
    "ObjectivePoint",
    "OptimizerSettings",
    "ParetoSet",
    "__version__",
    "direct_kinematics",
    "elbow_max_length",
    "evaluate_design",
    "grid_oracle",
    "hypervolume",
    "inverse_kinematics",
    "joint_layout",
    "non_dominated_filter",
    "nsga2_run",
    "pareto_line_fit",
    "transmission_efficiency",
]

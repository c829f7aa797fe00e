"""Finite-volume simulator for alert/panic/control crowd dynamics.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from ._core import (
    BehaviorParams,
    ConfigError,
    OdeTrajectory,
    ScenarioConfig,
    SolverError,
    TransitionSchedule,
    builtin_scenario,
    conservation_report,
    echo_config,
    gamma_at,
    imitation_f,
    imitation_g,
    imitation_h,
    integrate,
    parse_config,
    phi_at,
    reaction_rhs,
    reaction_rhs_pde,
    run_scenario,
    validate,
    xi,
    zeta,
)

__all__ = [
    "BehaviorParams",
    "ConfigError",
    "OdeTrajectory",
    "ScenarioConfig",
    "SolverError",
    "TransitionSchedule",
    "builtin_scenario",
    "conservation_report",
    "echo_config",
    "gamma_at",
    "imitation_f",
    "imitation_g",
    "imitation_h",
    "integrate",
    "parse_config",
    "phi_at",
    "reaction_rhs",
    "reaction_rhs_pde",
    "run_scenario",
    "validate",
    "xi",
    "zeta",
]

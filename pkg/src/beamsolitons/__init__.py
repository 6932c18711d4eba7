"""Hylomorphic solitons of the nonlinear beam equation u_tt + u_xxxx + W'(u) = 0.

The package computes solitary-wave profiles as minimizers of the
penalized ratio functional J = E/|C| + delta*E over states (u, v) on a
periodic grid, then verifies them independently: stationarity of the
traveling-wave equation, rigid transport under the Hamiltonian flow,
conservation of energy and momentum, and orbital stability against
seeded perturbations.
"""

from .potential import (
    PotentialModel,
    AssumptionReport,
    bridge_piecewise,
    bridge_smooth,
    make_potential,
    custom_model_names,
    evaluate,
    derivative,
    nonlinear_part,
    check_assumptions,
)
from .grid import Grid, make_grid, as_field, map_samples, diff, integrate, shift
from .functionals import (
    FieldState,
    InvariantSet,
    BumpSpec,
    RatioScanResult,
    DegenerateMomentumError,
    MOMENTUM_FLOOR,
    energy,
    momentum,
    x_norm_sq,
    hylomorphic_j,
    invariant_set,
    energy_gradient,
    momentum_gradient,
    j_gradient,
    lambda0_ratio,
    bump_state,
    scan_lambda_star,
)
from .minimizer import (
    MinimizeConfig,
    SolitonProfile,
    NonConvergenceError,
    DegeneratePathError,
    DecayCertificateError,
    initial_guess,
    default_initial_parameters,
    minimize,
    recentre,
    wave_speed,
    fit_speed,
    el_residual,
    vanishing_branch_floor,
    boundary_mass,
)
from .evolution import (
    EvolveConfig,
    EvolutionRecord,
    InstabilityError,
    BLOWUP_THRESHOLD,
    STEP_ROTATION_BOUND,
    default_dt,
    step,
    evolve,
    track_shift,
    orbit_distance,
    stability_experiment,
)
from .cli import (
    RunConfig,
    ProfileSnapshot,
    ConfigError,
    SnapshotError,
    load_config,
    save_snapshot,
    load_snapshot,
    snapshot_from_profile,
    snapshot_state,
)

__version__ = "0.1.0"

__all__ = [
    "PotentialModel", "AssumptionReport", "bridge_piecewise", "bridge_smooth",
    "make_potential", "custom_model_names", "evaluate", "derivative",
    "nonlinear_part", "check_assumptions",
    "Grid", "make_grid", "as_field", "map_samples", "diff", "integrate", "shift",
    "FieldState", "InvariantSet", "BumpSpec", "RatioScanResult",
    "DegenerateMomentumError", "MOMENTUM_FLOOR", "energy", "momentum", "x_norm_sq",
    "hylomorphic_j", "invariant_set", "energy_gradient", "momentum_gradient",
    "j_gradient", "lambda0_ratio", "bump_state", "scan_lambda_star",
    "MinimizeConfig", "SolitonProfile", "NonConvergenceError",
    "DegeneratePathError", "DecayCertificateError", "initial_guess",
    "default_initial_parameters", "minimize", "recentre", "wave_speed",
    "fit_speed", "el_residual", "vanishing_branch_floor", "boundary_mass",
    "EvolveConfig", "EvolutionRecord", "InstabilityError", "BLOWUP_THRESHOLD",
    "STEP_ROTATION_BOUND", "default_dt",
    "step", "evolve", "track_shift", "orbit_distance", "stability_experiment",
    "RunConfig", "ProfileSnapshot", "ConfigError", "SnapshotError",
    "load_config", "save_snapshot", "load_snapshot", "snapshot_from_profile",
    "snapshot_state",
    "__version__",
]

"""Structure-preserving finite-difference schemes for the Allen-Cahn
equation with a general, possibly degenerate, mobility.

The package provides two linear time-stepping schemes with dynamic
stabilization: a first-order backward-Euler variant that keeps the
discrete solution inside [-1, 1] and dissipates the discrete free energy
for any step size, and a second-order Crank-Nicolson variant whose bound
preservation holds either under a step-size restriction or, with a large
enough second stabilization parameter, unconditionally.  Matrix-free
BiCGStab solves, uniform/random/adaptive time grids, per-step structure
monitors, and the benchmark experiment presets round out the toolkit.
"""

from .grid import (
    Field,
    GridSpec,
    apply_laplacian,
    inner_product,
    l2_norm,
    max_norm,
    min_value,
)
from .physics import (
    DOUBLE_WELL_LIPSCHITZ,
    ConstantMobility,
    Mobility,
    OneSidedMobility,
    TwoSidedMobility,
    discrete_energy,
    double_well,
    reaction,
)
from .linsolve import (
    KrylovConfig,
    KrylovError,
    SolveReport,
    StencilOperator,
    dense_solve_oracle,
    krylov_solve,
)
from .schemes import (
    SchemeParams,
    StepInput,
    compute_s2_min,
    dsbe_step,
    dscn_predict,
    dscn_step,
    energy_stable_tau_bound,
    first_step,
    mbp_tau_bound,
    resolve_s2,
)
from .timestepping import (
    AdaptiveSteps,
    ManufacturedSolution,
    MonitorAbort,
    MonitorConfig,
    RandomPerturbedSteps,
    SimulationResult,
    SimulationSetup,
    UniformSteps,
    build_random_steps,
    forcing_eval,
    next_tau_adaptive,
    run_simulation,
)
from .diagnostics import (
    ConvergenceTable,
    StepRecord,
    check_energy_dissipation,
    check_mbp,
    convex_hull_area_ratio,
    count_level_set_components,
    error_vs_exact,
    estimate_order,
    time_to_reach_max_norm,
)
from .config import (
    ConfigError,
    PRESET_NAMES,
    RunConfig,
    build_setup,
    convergence_error,
    parse_config,
    preset_experiment,
    serialize_config,
)
from .io import CSV_HEADER, read_csv_records, read_snapshot, write_csv, write_snapshot

__version__ = "0.1.0"

__all__ = [
    "Field",
    "GridSpec",
    "apply_laplacian",
    "inner_product",
    "l2_norm",
    "max_norm",
    "min_value",
    "DOUBLE_WELL_LIPSCHITZ",
    "ConstantMobility",
    "Mobility",
    "OneSidedMobility",
    "TwoSidedMobility",
    "discrete_energy",
    "double_well",
    "reaction",
    "KrylovConfig",
    "KrylovError",
    "SolveReport",
    "StencilOperator",
    "dense_solve_oracle",
    "krylov_solve",
    "SchemeParams",
    "StepInput",
    "compute_s2_min",
    "dsbe_step",
    "dscn_predict",
    "dscn_step",
    "energy_stable_tau_bound",
    "first_step",
    "mbp_tau_bound",
    "resolve_s2",
    "AdaptiveSteps",
    "ManufacturedSolution",
    "MonitorAbort",
    "MonitorConfig",
    "RandomPerturbedSteps",
    "SimulationResult",
    "SimulationSetup",
    "UniformSteps",
    "build_random_steps",
    "forcing_eval",
    "next_tau_adaptive",
    "run_simulation",
    "ConvergenceTable",
    "StepRecord",
    "check_energy_dissipation",
    "check_mbp",
    "convex_hull_area_ratio",
    "count_level_set_components",
    "error_vs_exact",
    "estimate_order",
    "time_to_reach_max_norm",
    "ConfigError",
    "PRESET_NAMES",
    "RunConfig",
    "build_setup",
    "convergence_error",
    "parse_config",
    "preset_experiment",
    "serialize_config",
    "CSV_HEADER",
    "read_csv_records",
    "read_snapshot",
    "write_csv",
    "write_snapshot",
]

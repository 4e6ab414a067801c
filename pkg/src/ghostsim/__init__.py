"""Ghost interference of entangled massive particles with Gaussian slits.

The closed-form engine lives in :mod:`ghostsim.analytic`, the brute-force
grid simulation in :mod:`ghostsim.oracle` and detector scans in
:mod:`ghostsim.scan`.
"""
from .analytic import (
    BranchedState,
    Experiment,
    FringeParams,
    SourceState,
    approx_joint_density,
    evolve_branches,
    evolve_source,
    fringe_params,
    gamma_approx,
    joint_density_distance,
    joint_density_time,
    make_source_state,
    project_slits,
    uncertainties,
    which_way_overlap,
)
from .config import Scenario, bundled_path, load_scenario, parse_text
from .errors import (
    ConfigError,
    FitUnavailableError,
    GhostsimError,
    GridGuardError,
    ParameterError,
    QuadratureError,
    SingularConfigurationError,
)
from .fringes import FringeFit, fit_profile, visibility
from .gaussian import ComplexGaussian
from .oracle import GridSpec, WavefunctionGrid, compare, run_oracle
from .physics import KinematicsConfig, Mode, SlitPair, SourceParams, distance_map, validate_regime
from .scan import (
    Particle,
    ScanRequest,
    ScanResult,
    erasure_report,
    fit_fringes,
    marginal_density,
    particle1_scan,
    read_csv,
    run_scan,
    write_csv,
)

__version__ = "0.1.0"

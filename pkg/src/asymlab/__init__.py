"""Exact workbench for symmetry-breaking monotones on qubit lattices."""

from .errors import (
    AsymlabError,
    ConfigError,
    PreconditionError,
    ResourceError,
    ValidationError,
)
from .lattice import LatticeGeometry, distance, lightcone_range, neighborhood_cardinality
from .states import (
    DensityMatrix,
    StateVector,
    ghz_state,
    plus_state,
    product_state,
    random_state,
    von_neumann_entropy,
    zero_state,
)
from .circuits import (
    BrickworkCircuit,
    Gate,
    KrausChannel,
    apply_channel,
    apply_circuit,
    load_circuit,
    random_brickwork,
    save_circuit,
)
from .u1 import (
    AsymmetryReport,
    ChargeDistribution,
    charge_distribution,
    clustering_variance_bound,
    flat_distribution,
    generating_function,
    massey_bound,
    shannon_entropy,
    u1_asymmetry,
    u1_twirl,
)
from .su2 import (
    SchurBasis,
    SectorTable,
    Su2AsymmetryReport,
    build_schur_basis,
    casimir_constraint_check,
    sector_distribution,
    su2_asymmetry,
    su2_shannon_rhs,
    su2_support_bound,
    su2_twirl,
    zero_transverse_rotation,
)
from .closedforms import (
    ContinuousChargeDensity,
    arcsine_density,
    asymptotic_fit,
    continuous_asymmetry_estimate,
    dicke_half_charge_prob,
    dicke_half_distribution,
    dicke_state,
    kink_distribution,
    kink_state,
    krawtchouk,
    poisson_binomial,
)
from .clustering import (
    ClusterReport,
    connected_correlator,
    operator_spreading_range,
    variance_bound_check,
    verify_cluster_property,
)
from .suite import CheckResult, all_passed, bound_suite, oracle_suite
from .config import ExperimentConfig, build_state, config_hash, load_config, validate_config

__version__ = "0.1.0"

"""spectralwalk: discrete spectral geometry of domains in weighted bidirected graphs.

Exit-time moments of the natural random walk, the two Poisson
hierarchies and their spectra, Stirling-number duality between them,
heat content, a weighted zeta function, and recovery of the starred
Laplace spectrum from moment data.
"""

__version__ = "0.1.0"

from .build import (
    LatticeSpec,
    PointCloudSpec,
    build_cycle,
    build_lattice,
    build_path,
    build_point_cloud,
)
from .domain import Domain, RegularityReport, indicator, make_domain, regularity
from .errors import (
    DomainError,
    EmptyBoundaryError,
    GraphFormatError,
    RecoveryError,
    SolverError,
    SpectralwalkError,
    WeightingError,
)
from .fileio import load_domain_spec, read_graph, write_graph
from .graph import (
    GraphWithGeometry,
    auxiliary_weight,
    coboundary,
    coboundary_adjoint,
    edge_inner_product,
    laplacian_apply,
    make_graph,
    transition_probability,
    validate_weighting,
    vertex_inner_product,
)
from .operators import (
    InteriorOperator,
    exit_index_distribution,
    green_apply,
    interior_laplacian,
    killed_transition,
)
from .poisson import (
    HierarchySolution,
    moment_spectrum,
    poisson_spectrum,
    solve_hierarchies,
    variational_quotient,
)
from .spectral import (
    RecoveredMeasure,
    SpectralData,
    eigendecompose,
    hankel_determinants,
    heat_asymptotics,
    heat_content,
    lemma51_pairing,
    recover_from_heat,
    recover_from_pspec,
    star_polynomial,
    zeta,
    zeta_special_values,
)
from .stirling import (
    mspec_from_pspec,
    pk_closed,
    pspec_from_mspec,
    regular_moments_closed,
    stirling_first_signed,
    stirling_second,
)
from .walk import ExitStats, WalkConfig, compare_exact, run_walks

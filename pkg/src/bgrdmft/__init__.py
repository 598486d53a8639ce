"""Symmetry-adapted occupation-number functional theory for lattice bosons.

The package builds total-momentum symmetry sectors of N bosons on d sites,
assembles momentum-conserving interactions on them, characterizes the
representable domain of momentum occupation vectors as a convex polytope,
evaluates the exact interaction functional via several independent routes,
and computes the repulsive boundary force of the functional in closed form.
"""

__version__ = "0.1.0"

from .errors import (
    BgrdmftError,
    ConvergenceError,
    DegenerateConstraintError,
    DimensionMismatchError,
    EmptyFacetBasisError,
    InfeasibleKernelError,
    InfeasibleTargetError,
    InvalidArgumentError,
    NotSimplexError,
    OffHyperplaneError,
    PathExitsDomainError,
    UnsupportedDimensionError,
)
from .force import (
    FacetPoint,
    ForceResult,
    appendix_coefficient_check,
    facet_index_for,
    facet_minimizer,
    make_facet_point,
    on_facet_states,
    repulsion_strength,
    verify_slope,
)
from .functional import (
    FunctionalSample,
    KernelPoint,
    SearchOptions,
    barycentric_grid,
    constrained_search,
    default_kinetic_vectors,
    functional_grid,
    general_form_functional,
    kernel_point,
    minimize_signs,
    simplex_functional,
    t_scan,
)
from .hubbard_d3 import (
    approx_functional,
    approx_zbar,
    disk_kinetic,
    energy_error_study,
    exact_zbar,
    f_of_z,
    functional_error_grid,
    z_max,
)
from .operators import (
    PairInteraction,
    SectorOperator,
    build_hamiltonian,
    build_interaction_matrix,
    ground_state,
    hubbard_interaction,
)
from .polytope import (
    DomainPolytope,
    FacetConstraint,
    IncidenceData,
    build_domain,
    facet_distances,
    incidence_matrix,
    is_simplex_setting,
    membership,
    normalize_constraint,
    polytope_to_json,
    simplex_pairing,
)
from .sectors import (
    ConfigState,
    Sector,
    enumerate_sector,
    sector_dimension,
    sector_from_json,
    total_momentum,
)

"""Exact-arithmetic invariants of multigraded matrix factorization
categories: sector-formula Hochschild tables with a brute-force oracle,
decomposition trichotomy reports, generation-time bounds, and
dimension calculators driven by nilpotent orders."""

from .abelian import (
    AbelianGroup,
    BoxMinus,
    Character,
    GroupElement,
    GroupHom,
    HypothesisError,
    INTEGERS,
    boxminus,
    characters,
    direct_sum,
    finite_quotient_by,
    quotient,
    smith_normal_form,
    torsion_subgroup,
)
from .grpoly import (
    GradedRing,
    Polynomial,
    Potential,
    degree_of,
    euler_condition,
    graded_ring,
    jacobian_sequence,
    knorrer_augment,
    monomial_basis,
    restrict_to_fixed,
    tensor_context,
    tensor_ring,
)
from .exactla import FiniteComplex, RationalMatrix, cohomology_dims, nullspace, rank, solve
from .jacobi import (
    GradedIdealSpec,
    ideal_membership,
    jacobian_slice_dim,
    koszul_cohomology_dim,
    nilpotent_order,
)
from .sectors import (
    CONVENTION_ID,
    DimensionTable,
    SectorData,
    enumerate_sectors,
    hh_table,
    res_ind_analysis,
    rhom_m_support,
    rhom_t_support,
    rhom_table,
    twist_action,
)
from .factorization import (
    Factorization,
    IntegralTransform,
    Morphism,
    PolyMatrix,
    ValidationError,
    box,
    cone,
    cone_triangle,
    cokernel_presentation,
    diagonal,
    dual,
    end_fingerprint,
    estimate_annihilator,
    hh_bruteforce,
    hh_bruteforce_isotypic,
    hom_cohomology,
    integral_transform,
    make_factorization,
    null_homotopy_test,
    rank_one,
    shift,
    totalize,
    twist,
    validate,
)
from .orlov import (
    OrlovReport,
    WeightSequence,
    cover_report,
    dynkin_classify,
    gorenstein_degree,
    lattice_rank_transfer,
    orlov_classify_ring,
    orlov_classify_weights,
    product_decomposition_count,
)
from .spectra import (
    BoundsReport,
    ade_e_value,
    ade_tensor_bounds,
    fermat_bounds,
    fermat_lower_bound,
    fermat_upper_bound,
    minimizing_test,
    nl_dimension_principal,
    nl_floor,
)

__version__ = "0.1.0"

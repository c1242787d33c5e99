"""Exact-arithmetic toolkit for embeddings of quiver representations."""

from .criteria import (
    CheckConfig,
    GrassmannianChecker,
    Verdict,
    an_criterion,
    check_dual_surjection,
    check_grassmannian_irreducible,
    check_grassmannian_nonempty,
    check_nc2,
    check_nc2_random_surjections,
    is_semistable,
    min_slope,
)
from .dynkin import (
    IndecomposableTable,
    build_table,
    canonical_decomposition,
    check_generic_embedding,
    decompose,
    generic_rep,
    indecomposable,
    positive_roots,
)
from .exactlin import GF, QQ, FieldSpec, Matrix
from .grassmannian import (
    BudgetExceeded,
    GrassmannianCount,
    SubrepOracle,
    count,
    counting_poly,
    enumerate_subreps,
    nonempty,
)
from .quiver import (
    DimVector,
    Quiver,
    a_n,
    d4_subspace,
    euler_form,
    functional,
    is_dynkin,
    kronecker,
    opposite,
)
from .rep import (
    HomBasis,
    Morphism,
    Representation,
    build_injective,
    build_projective,
    direct_sum,
    dual,
    ext_dim,
    hom_basis,
    hom_dim,
    is_injective_morphism,
    is_surjective_morphism,
    power,
    quotient,
    random_representation,
    simple,
    socle_at,
)
from .stable import (
    GenericHomEstimate,
    StableSearchReport,
    ZSpace,
    check_stabilization,
    check_z_hypothesis,
    find_injective_block,
    generic_hom,
    generic_rank_vector,
    search_stable_embedding,
    search_stable_surjection,
)

__all__ = [
    "CheckConfig",
    "GrassmannianChecker",
    "Verdict",
    "an_criterion",
    "check_dual_surjection",
    "check_grassmannian_irreducible",
    "check_grassmannian_nonempty",
    "check_nc2",
    "check_nc2_random_surjections",
    "is_semistable",
    "min_slope",
    "IndecomposableTable",
    "build_table",
    "canonical_decomposition",
    "check_generic_embedding",
    "decompose",
    "generic_rep",
    "indecomposable",
    "positive_roots",
    "GF",
    "QQ",
    "FieldSpec",
    "Matrix",
    "BudgetExceeded",
    "GrassmannianCount",
    "SubrepOracle",
    "count",
    "counting_poly",
    "enumerate_subreps",
    "nonempty",
    "DimVector",
    "Quiver",
    "a_n",
    "d4_subspace",
    "euler_form",
    "functional",
    "is_dynkin",
    "kronecker",
    "opposite",
    "HomBasis",
    "Morphism",
    "Representation",
    "build_injective",
    "build_projective",
    "direct_sum",
    "dual",
    "ext_dim",
    "hom_basis",
    "hom_dim",
    "is_injective_morphism",
    "is_surjective_morphism",
    "power",
    "quotient",
    "random_representation",
    "simple",
    "socle_at",
    "GenericHomEstimate",
    "StableSearchReport",
    "ZSpace",
    "check_stabilization",
    "check_z_hypothesis",
    "find_injective_block",
    "generic_hom",
    "generic_rank_vector",
    "search_stable_embedding",
    "search_stable_surjection",
]

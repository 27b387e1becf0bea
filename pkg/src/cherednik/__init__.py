"""Exact-arithmetic workbench for rational Cherednik algebras over p-adic
coefficient fields: PBW straightening, degree-truncated category O, and
weighted Gauss-norm Banach levels."""

__version__ = "0.1.0"

from .scalars import (
    Scalar,
    PadicContext,
    Valuation,
    hensel_embed,
    val,
    parse_scalar,
    cyclotomic_polynomial,
)
from .groups import (
    GroupAction,
    PseudoReflection,
    ReflectionFunction,
    Irrep,
    enumerate_group,
    find_reflections,
    irrep_from_generators,
    validate_irrep,
    isotypic_project,
    isotypic_projector,
    regular_representation,
    builtin_group,
    load_group_file,
)
from .pbw import CherednikAlgebra, PBWElement, monomials
from .category_o import (
    VermaSlice,
    GradedCharacter,
    SingularSpace,
    c_scalar,
    verma_action,
    dunkl_action,
    singular_vectors,
    simple_quotient_slice,
    verma_character,
    hom_dim,
    highest_weight_order,
    blocks,
    decompose_verma_character,
    decomposition_matrix,
)
from .banach import (
    LevelParams,
    BanachElement,
    WeightDecomposition,
    AnalyticVermaSlice,
    gauss_norm,
    rho_c,
    choose_r,
    level_tower,
    lattice_check,
    weight_decompose_banach,
    transition,
    coadmissible_check,
    analytic_verma_slice,
)
from .config import JobConfig, parse_config

__all__ = [
    "Scalar",
    "PadicContext",
    "Valuation",
    "hensel_embed",
    "val",
    "parse_scalar",
    "cyclotomic_polynomial",
    "GroupAction",
    "PseudoReflection",
    "ReflectionFunction",
    "Irrep",
    "enumerate_group",
    "find_reflections",
    "irrep_from_generators",
    "validate_irrep",
    "isotypic_project",
    "isotypic_projector",
    "regular_representation",
    "builtin_group",
    "load_group_file",
    "CherednikAlgebra",
    "PBWElement",
    "monomials",
    "VermaSlice",
    "GradedCharacter",
    "SingularSpace",
    "c_scalar",
    "verma_action",
    "dunkl_action",
    "singular_vectors",
    "simple_quotient_slice",
    "verma_character",
    "hom_dim",
    "highest_weight_order",
    "blocks",
    "decompose_verma_character",
    "decomposition_matrix",
    "LevelParams",
    "BanachElement",
    "WeightDecomposition",
    "AnalyticVermaSlice",
    "gauss_norm",
    "rho_c",
    "choose_r",
    "level_tower",
    "lattice_check",
    "weight_decompose_banach",
    "transition",
    "coadmissible_check",
    "analytic_verma_slice",
    "JobConfig",
    "parse_config",
    "__version__",
]

"""Explicit fractal sets with prescribed Hausdorff dimension and measure.

Exact symbolic construction of uniform Cantor sets and their closures
under affine maps, unions, indexed unions, products, and pruning; an
analytic dimension/measure calculus over that algebra; and independent
numerical verification through stage covers and box counting.
"""

from .errors import (
    CapExceeded,
    ConditionUnverified,
    DisjointnessUnverified,
    FractalForgeError,
    FrxSemanticError,
    FrxSyntaxError,
    IndexSetFinite,
    Infeasible,
    NoClosedForm,
    OutOfRange,
    OverlapDetected,
    RuleInapplicable,
    WrongDimension,
)
from .scalars import (
    ONE,
    ZERO,
    Scalar,
    canon_value,
    ensure_scalar,
    fmt_exact,
    make_pow,
    scalar_cmp,
    scalar_eq,
    to_decimal,
    to_float,
)
from .indexset import NATURALS, IndexSet, arithmetic_set
from .cantor import (
    CantorSpec,
    Explicit,
    Geometric,
    Interval,
    RemovingSequence,
    StageCover,
    beta_term,
    delta_length,
    explicit_cantor,
    gap_length,
    hausdorff_dim_uniform,
    limit_measure,
    partial_sum,
    solve_beta_for_dim,
    stage_cover,
    stage_measure,
    uniform_cantor,
)
from .expr import (
    AffineAxis,
    BoxCover,
    CantorPrim,
    CubePrim,
    Product,
    PrunePaths,
    SetExpr,
    UnionFinite,
    UnionIndexed,
    expr_bbox,
    expr_count,
    expr_stage_cover,
    make_union_indexed,
    symmetrize,
)
from .calculus import (
    DimReport,
    MeasureBound,
    analytic_hausdorff_dim,
    analytic_ind_dim,
    analytic_measure,
    is_fractal,
)
from .build import (
    ConstructionRequest,
    default_index_sets,
    lemma31,
    lemma32,
    lemma33,
    nonfractal_family,
    target_dimension,
    thm34,
)
from .boxdim import (
    FitReport,
    GridSpec,
    VerifyReport,
    box_count,
    box_count_brute,
    box_dim_fit,
    grid_over,
    measure_series,
    stage_ratios,
    verify,
)
from .frx import FrxDocument, emit_frx, parse_document, parse_frx
from .cli import cli_main, main

__version__ = "0.1.0"

__all__ = [
    "AffineAxis",
    "BoxCover",
    "CantorPrim",
    "CantorSpec",
    "CapExceeded",
    "ConditionUnverified",
    "ConstructionRequest",
    "CubePrim",
    "DimReport",
    "DisjointnessUnverified",
    "Explicit",
    "FitReport",
    "FractalForgeError",
    "FrxDocument",
    "FrxSemanticError",
    "FrxSyntaxError",
    "Geometric",
    "GridSpec",
    "IndexSet",
    "IndexSetFinite",
    "Infeasible",
    "Interval",
    "MeasureBound",
    "NATURALS",
    "NoClosedForm",
    "ONE",
    "OutOfRange",
    "OverlapDetected",
    "Product",
    "PrunePaths",
    "RemovingSequence",
    "RuleInapplicable",
    "Scalar",
    "SetExpr",
    "StageCover",
    "UnionFinite",
    "UnionIndexed",
    "VerifyReport",
    "WrongDimension",
    "ZERO",
    "analytic_hausdorff_dim",
    "analytic_ind_dim",
    "analytic_measure",
    "arithmetic_set",
    "beta_term",
    "box_count",
    "box_count_brute",
    "box_dim_fit",
    "canon_value",
    "cli_main",
    "default_index_sets",
    "delta_length",
    "emit_frx",
    "ensure_scalar",
    "explicit_cantor",
    "expr_bbox",
    "expr_count",
    "expr_stage_cover",
    "fmt_exact",
    "gap_length",
    "grid_over",
    "hausdorff_dim_uniform",
    "is_fractal",
    "lemma31",
    "lemma32",
    "lemma33",
    "limit_measure",
    "main",
    "make_pow",
    "make_union_indexed",
    "measure_series",
    "nonfractal_family",
    "parse_document",
    "parse_frx",
    "partial_sum",
    "scalar_cmp",
    "scalar_eq",
    "solve_beta_for_dim",
    "stage_cover",
    "stage_measure",
    "stage_ratios",
    "symmetrize",
    "target_dimension",
    "thm34",
    "to_decimal",
    "to_float",
    "uniform_cantor",
    "verify",
]

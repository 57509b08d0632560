"""Builders realizing sets with prescribed Hausdorff dimension and measure.

The grid of feasible targets in R^n:

* ``lemma31(r, l, s0)``   -- one set on the line: a thin Cantor primitive
  for 0 < r < 1, a dyadic ladder of primitives with dims m/(m+1) for
  r = 1, or a scaled fat primitive for l > 0 (which forces r = 1).
* ``lemma32(r, l, index)`` -- a continuum family on the line: dyadic
  blocks [2^-s, 2^-(s-1)] hold order-s copies, selected by an infinite
  IndexSet; the fat case rescales globally so the measure is exactly l.
* ``lemma33(r, l, n, index_sets)`` -- products of n per-axis families
  with per-axis dimension r/n; positive measure forces r = n and gets an
  anisotropic first-axis correction so the n-volume is exactly l.
* ``thm34(request)``       -- the full family: a pruned null dust F1 of
  dimension < r/2 placed beside the lemma33 set F2, union F1 | F2.
* ``nonfractal_family(n, seed)`` -- unit cube plus a pruned shifted dust:
  dim_H = dim_ind = n, so never a fractal.

Feasibility honestly mirrors the impossible cells: positive measure with
fractional per-axis dimension raises Infeasible (a set of positive
n-measure has full dimension n, so only integer targets are attainable).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .cantor import CantorSpec, solve_beta_for_dim, uniform_cantor
from .errors import Infeasible, OutOfRange, WrongDimension
from .expr import (
    AffineAxis,
    CantorPrim,
    CubePrim,
    FamilyDef,
    Product,
    PrunePaths,
    SetExpr,
    UnionFinite,
    expr_bbox,
    make_union_indexed,
    register_family,
)
from .indexset import NATURALS, IndexSet, arithmetic_set
from .scalars import (
    ONE,
    ZERO,
    Scalar,
    canon_value,
    ensure_scalar,
    make_pow,
    scalar_ceil,
    scalar_cmp,
    scalar_floor,
)

DEFAULT_TRUNCATION = 8


# ---------------------------------------------------------------------------
# lemma31: one set on the line


def _fat_line(l: Scalar, s0: int) -> SetExpr:
    """A set of measure l > 0 (dimension 1) on the line: the unit-interval
    fat primitive carries measure l/([l]+1) in [0,1] and is stretched by
    [l]+1.  beta is free in (0, 1/(s0+1)); fixed at half the bound."""
    k = scalar_floor(l) + 1
    inner_l = canon_value(l / k)
    prim = CantorPrim(uniform_cantor(s0, Fraction(1, 2 * (s0 + 1)), inner_l))
    if k == 1:
        return prim
    return AffineAxis((Fraction(k),), (ZERO,), prim)


def lemma31(r: Scalar, l: Scalar, s0: int = 1, truncation: int = DEFAULT_TRUNCATION) -> SetExpr:
    """One fractal on the line with dim = r (l = 0) or dim = 1 (l > 0) and
    measure exactly l.  0 < r <= 1; positive l demands r = 1."""
    r, l = ensure_scalar(r), ensure_scalar(l)
    if s0 < 1:
        raise OutOfRange("s0 must be >= 1")
    if scalar_cmp(r, ZERO) <= 0 or scalar_cmp(r, ONE) > 0:
        raise OutOfRange(f"line constructions need 0 < r <= 1, got {r}")
    if scalar_cmp(l, ZERO) < 0:
        raise OutOfRange(f"measure target must be >= 0, got {l}")
    if scalar_cmp(l, ZERO) > 0:
        if scalar_cmp(r, ONE) != 0:
            raise Infeasible(
                f"no set with dimension {r} < 1 and positive measure {l} exists (DNE): "
                "positive measure forces full dimension"
            )
        return _fat_line(l, s0)
    if scalar_cmp(r, ONE) == 0:
        return make_union_indexed("dim_ladder", {"s0": s0}, NATURALS, truncation)
    return CantorPrim(uniform_cantor(s0, solve_beta_for_dim(r, s0), ZERO))


# ---------------------------------------------------------------------------
# indexed union families


def _thin_blocks_child(args: dict, s: int, truncation: int) -> SetExpr:
    beta = solve_beta_for_dim(ensure_scalar(args["r"]), s)
    prim = CantorPrim(uniform_cantor(s, beta, ZERO))
    return AffineAxis((Fraction(1, 2 ** s),), (Fraction(1, 2 ** s),), prim)


def _dim_ladder_child(args: dict, m: int, truncation: int) -> SetExpr:
    s0 = args["s0"]
    beta = solve_beta_for_dim(Fraction(m, m + 1), s0)
    prim = CantorPrim(uniform_cantor(s0, beta, ZERO))
    return AffineAxis((Fraction(1, 2 ** m),), (Fraction(1, 2 ** m),), prim)


def _thin_ladder_child(args: dict, m: int, truncation: int) -> SetExpr:
    inner = make_union_indexed(
        "thin_blocks", {"r": Fraction(m, m + 1)}, args["index"], truncation
    )
    return AffineAxis((Fraction(1, 2 ** m),), (Fraction(1, 2 ** m),), inner)


def _fat_blocks_child(args: dict, s: int, truncation: int) -> SetExpr:
    l = ensure_scalar(args["l"])
    k = scalar_floor(l) + 1
    c = Fraction(k, 2 ** s)
    return AffineAxis((c,), (c,), _fat_line(l, s))


def _fat_blocks_measure(args: dict, index: IndexSet) -> Scalar:
    l = ensure_scalar(args["l"])
    k = scalar_floor(l) + 1
    return canon_value(k * l * index.dyadic_weight())


register_family(
    FamilyDef(
        name="thin_blocks",
        params=(("r", "scalar"),),
        make_child=_thin_blocks_child,
        dim=lambda args, index: ensure_scalar(args["r"]),
        measure=lambda args, index: ZERO,
    )
)

register_family(
    FamilyDef(
        name="dim_ladder",
        params=(("s0", "int"),),
        make_child=_dim_ladder_child,
        dim=lambda args, index: ONE,
        measure=lambda args, index: ZERO,
    )
)

register_family(
    FamilyDef(
        name="thin_ladder",
        params=(("index", "indexset"),),
        make_child=_thin_ladder_child,
        dim=lambda args, index: ONE,
        measure=lambda args, index: ZERO,
    )
)

register_family(
    FamilyDef(
        name="fat_blocks",
        params=(("l", "scalar"),),
        make_child=_fat_blocks_child,
        dim=lambda args, index: ONE,
        measure=_fat_blocks_measure,
    )
)


# ---------------------------------------------------------------------------
# lemma32: a continuum family on the line


def lemma32(
    r: Scalar, l: Scalar, index: IndexSet, truncation: int = DEFAULT_TRUNCATION
) -> SetExpr:
    """An IndexSet-parameterized set on the line with dim = r (l = 0) or
    dim = 1 with measure exactly l (l > 0); distinct index sets give
    geometrically distinct sets."""
    r, l = ensure_scalar(r), ensure_scalar(l)
    if scalar_cmp(r, ZERO) <= 0 or scalar_cmp(r, ONE) > 0:
        raise OutOfRange(f"line constructions need 0 < r <= 1, got {r}")
    if scalar_cmp(l, ZERO) < 0:
        raise OutOfRange(f"measure target must be >= 0, got {l}")
    if scalar_cmp(l, ZERO) > 0:
        if scalar_cmp(r, ONE) != 0:
            raise Infeasible(
                f"no set with dimension {r} < 1 and positive measure {l} exists (DNE): "
                "positive measure forces full dimension"
            )
        node = make_union_indexed("fat_blocks", {"l": l}, index, truncation)
        scale = canon_value(l / node.symbolic_measure)
        return AffineAxis((scale,), (ZERO,), node)
    if scalar_cmp(r, ONE) == 0:
        return make_union_indexed("thin_ladder", {"index": index}, NATURALS, truncation)
    return make_union_indexed("thin_blocks", {"r": r}, index, truncation)


# ---------------------------------------------------------------------------
# lemma33: products in R^n


def default_index_sets(l: Scalar, n: int) -> tuple[IndexSet, ...]:
    """Per-axis index sets whose dyadic blocks cannot collide: fat blocks
    at index s span [k 2^-s, k(k+1) 2^-s] with k = [l]+1, so members must
    be at least ceil(log2(k+1)) apart."""
    l = ensure_scalar(l)
    m = scalar_floor(l) + 2
    gap = max(1, (m - 1).bit_length())
    return tuple(arithmetic_set(1 + (j % gap), gap) for j in range(n))


def lemma33(
    r: Scalar,
    l: Scalar,
    n: int,
    index_sets: Optional[tuple[IndexSet, ...]] = None,
    truncation: int = DEFAULT_TRUNCATION,
) -> SetExpr:
    """A set in R^n with dim = r (l = 0) or dim = n with volume exactly l.

    Product of n per-axis families of dimension r/n.  Positive volume
    forces r = n (fractional dimension with positive measure is the
    impossible cell) and is restored exactly by scaling the first axis by
    (1/l)^(n-1) after the product takes the per-axis measures to l^n.
    """
    r, l = ensure_scalar(r), ensure_scalar(l)
    if scalar_cmp(r, ZERO) <= 0:
        raise OutOfRange(f"dimension target must be positive, got {r}")
    if scalar_cmp(l, ZERO) < 0:
        raise OutOfRange(f"measure target must be >= 0, got {l}")
    if not isinstance(n, int) or n < 1:
        raise OutOfRange(f"ambient dimension must be a positive integer, got {n}")
    if n < scalar_ceil(r):
        raise OutOfRange(f"ambient dimension {n} cannot hold dimension {r}")
    if scalar_cmp(l, ZERO) > 0 and scalar_cmp(r, Fraction(n)) != 0:
        raise Infeasible(
            f"no set in R^{n} with dimension {r} and positive volume {l} exists (DNE): "
            "positive volume forces dimension n, so r must equal n"
        )
    if index_sets is None:
        index_sets = default_index_sets(l, n)
    if len(index_sets) != n:
        raise WrongDimension(f"need exactly {n} index sets, got {len(index_sets)}")
    rp = canon_value(r / n)
    axes = [lemma32(rp, l, index_sets[j], truncation) for j in range(n)]
    body: SetExpr = axes[0] if n == 1 else Product(tuple(axes))
    if scalar_cmp(l, ZERO) > 0 and n >= 2:
        first = canon_value((1 / l) ** (n - 1))
        scales = (first,) + (ONE,) * (n - 1)
        return AffineAxis(scales, (ZERO,) * n, body)
    return body


# ---------------------------------------------------------------------------
# thm34: pruned dust + lemma33 set


@dataclass(frozen=True)
class ConstructionRequest:
    """Target dimension r > 0 and measure l >= 0 in R^n, n >= ceil(r).

    ``index_sets``/``prune_seed`` pick one member of the constructed
    family; ``truncation`` is the geometric depth of every indexed union.
    """

    r: Scalar
    l: Scalar
    n: int
    s0: int = 1
    index_sets: Optional[tuple[IndexSet, ...]] = None
    prune_seed: int = 0
    truncation: int = DEFAULT_TRUNCATION

    def __post_init__(self):
        object.__setattr__(self, "r", ensure_scalar(self.r))
        object.__setattr__(self, "l", ensure_scalar(self.l))


def target_dimension(r: Scalar, l: Scalar, n: int) -> Scalar:
    """The dimension the constructions achieve: r when l = 0 (thin), n
    when l > 0 (positive volume forces full dimension)."""
    return ensure_scalar(r) if scalar_cmp(ensure_scalar(l), ZERO) == 0 else Fraction(n)


def thm34(request: ConstructionRequest) -> SetExpr:
    """The two-part construction: F1 = pruned dust of dimension < r/2,
    F2 = lemma33 set carrying the target dimension and measure; the union
    has F2's dimension by the sup rule and F2's measure since F1 is null.

    F1's cube sits at integer corner max([l]+1, ceil of F2's bounding-box
    upper ends) per axis, clearing F2's dyadic blocks, which can poke past
    [l]+1 after the fat rescaling.
    """
    r, l, n = request.r, request.l, request.n
    f2 = lemma33(r, l, n, request.index_sets, request.truncation)
    exponent = canon_value(2 * n / r + 1)
    beta00 = make_pow(2, -exponent)
    prim = CantorPrim(uniform_cantor(1, beta00, ZERO))
    base = scalar_floor(l) + 1
    f2bb = expr_bbox(f2)
    axes = []
    for j in range(n):
        u = f2bb[j].hi
        shift = base if scalar_cmp(u, Fraction(base)) <= 0 else scalar_ceil(u)
        axes.append(AffineAxis((ONE,), (Fraction(shift),), prim))
    f00: SetExpr = axes[0] if n == 1 else Product(tuple(axes))
    f1 = PrunePaths(f00, request.prune_seed)
    return UnionFinite((f1, f2), disjoint=True)


# ---------------------------------------------------------------------------
# the non-fractal family


def nonfractal_family(n: int, prune_seed: int = 0) -> SetExpr:
    """Unit cube plus a pruned copy of the shifted middle-third dust
    (C+1)^n: inductive and Hausdorff dimension both n, hence not a
    fractal, while distinct seeds give distinct sets."""
    if not isinstance(n, int) or n < 1:
        raise OutOfRange(f"ambient dimension must be a positive integer, got {n}")
    mt = CantorPrim(uniform_cantor(1, Fraction(1, 3), ZERO))
    shifted = AffineAxis((ONE,), (ONE,), mt)
    block: SetExpr = shifted if n == 1 else Product((shifted,) * n)
    return UnionFinite((CubePrim(n), PrunePaths(block, prune_seed)), disjoint=True)

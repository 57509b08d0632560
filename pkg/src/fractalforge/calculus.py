"""Dimension and measure calculus over set expressions.

Implements the rule set the constructions rely on:

* Hausdorff dimension: closed forms for Cantor primitives; invariance
  under invertible per-axis affine maps; union -> supremum; product ->
  sum, admitted only for Cantor-derived factors; positive n-measure
  forces dimension n; pruned subtrees yield an upper bound only.
* Small inductive dimension: 0 for Cantor-type sets, n for cubes, max
  over unions, 0 for products of 0-dimensional sets; anything outside
  the rule set raises RuleInapplicable rather than guessing.
* Lebesgue measure: exact for primitives and products; unions add
  exactly when summands are certified interior-disjoint or all but one
  summand is null; otherwise an interval bound is returned.

Every derivation carries a human-readable trace, and ``is_fractal``
assembles the full report with the exact verdict dim_H > dim_ind.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .cantor import hausdorff_dim_uniform, limit_measure
from .errors import (
    CapExceeded,
    DisjointnessUnverified,
    NoClosedForm,
    OverlapDetected,
    RuleInapplicable,
)
from .expr import (
    AffineAxis,
    CantorPrim,
    CubePrim,
    Product,
    PrunePaths,
    SetExpr,
    UnionFinite,
    UnionIndexed,
    _check_parts_disjoint,
    _expand,
)
from .scalars import (
    ONE,
    ZERO,
    Scalar,
    canon_value,
    fmt_exact,
    scalar_cmp,
    scalar_max,
)


@dataclass(frozen=True)
class MeasureBound:
    """Interval bound [lo, hi] on a Lebesgue measure that could not be
    pinned exactly (unverified disjointness, or a pruned positive-measure
    subtree)."""

    lo: Scalar
    hi: Scalar

    def is_point(self) -> bool:
        return scalar_cmp(self.lo, self.hi) == 0


MeasureResult = Union[Scalar, MeasureBound]


@dataclass
class DimReport:
    hausdorff_dim: Scalar
    inductive_dim: int
    lebesgue_measure: Scalar
    is_fractal: bool
    trace: list[str]


def _fmt_measure(m: MeasureResult) -> str:
    if isinstance(m, MeasureBound):
        return f"[{fmt_exact(m.lo)}, {fmt_exact(m.hi)}]"
    return fmt_exact(m)


def _label(expr: SetExpr) -> str:
    return {
        CantorPrim: "cantor",
        CubePrim: "cube",
        AffineAxis: "affine",
        UnionFinite: "union",
        UnionIndexed: "iunion",
        Product: "product",
        PrunePaths: "prune",
    }[type(expr)]


# ---------------------------------------------------------------------------
# measure


def analytic_measure(expr: SetExpr) -> MeasureResult:
    """Exact Lebesgue measure, or an interval bound when additivity cannot
    be certified."""
    m, _ = _measure(expr, 0, [])
    return m


def _measure(expr: SetExpr, depth: int, trace: list[str]) -> tuple[MeasureResult, bool]:
    """Returns (measure-or-bound, exact flag) and appends trace lines."""
    pad = "  " * depth
    tag = _label(expr)

    if isinstance(expr, CantorPrim):
        m = limit_measure(expr.spec)
        trace.append(f"{pad}{tag}: limit measure = {fmt_exact(m)}")
        return m, True
    if isinstance(expr, CubePrim):
        trace.append(f"{pad}{tag}: unit cube volume = 1")
        return ONE, True
    if isinstance(expr, AffineAxis):
        child, exact = _measure(expr.child, depth + 1, trace)
        f = ONE
        for c in expr.scales:
            f = f * (c if scalar_cmp(c, ZERO) > 0 else -c)
        f = canon_value(f)
        if isinstance(child, MeasureBound):
            m: MeasureResult = MeasureBound(canon_value(f * child.lo), canon_value(f * child.hi))
        else:
            m = canon_value(f * child)
        trace.append(f"{pad}{tag}: |scale| factor {fmt_exact(f)} -> {_fmt_measure(m)}")
        return m, exact
    if isinstance(expr, UnionIndexed):
        m = expr.symbolic_measure
        trace.append(f"{pad}{tag}[{expr.family}]: family closed form = {fmt_exact(m)}")
        return m, True
    if isinstance(expr, UnionFinite):
        parts = [_measure(c, depth + 1, trace) for c in expr.children]
        vals = [p[0] for p in parts]
        los = [v.lo if isinstance(v, MeasureBound) else v for v in vals]
        his = [v.hi if isinstance(v, MeasureBound) else v for v in vals]
        positive = sum(1 for hi in his if scalar_cmp(hi, ZERO) > 0)
        if positive <= 1:
            rule = "additivity (all but one summand null)"
            additive = True
        elif expr.disjoint or _certify_disjoint(expr):
            rule = "additivity (interiors certified disjoint)"
            additive = True
        else:
            rule = "disjointness unverified -> interval bound"
            additive = False
        if additive:
            lo = canon_value(sum(los, ZERO))
            hi = canon_value(sum(his, ZERO))
            m = lo if scalar_cmp(lo, hi) == 0 else MeasureBound(lo, hi)
            exact = not isinstance(m, MeasureBound)
        else:
            m = MeasureBound(canon_value(scalar_max(los)), canon_value(sum(his, ZERO)))
            exact = False
        trace.append(f"{pad}{tag}: {rule} -> {_fmt_measure(m)}")
        return m, exact
    if isinstance(expr, Product):
        parts = [_measure(c, depth + 1, trace) for c in expr.children]
        lo, hi, exact = ONE, ONE, True
        for v, e in parts:
            if isinstance(v, MeasureBound):
                lo, hi, exact = lo * v.lo, hi * v.hi, False
            else:
                lo, hi = lo * v, hi * v
                exact = exact and e
        lo, hi = canon_value(lo), canon_value(hi)
        m = lo if scalar_cmp(lo, hi) == 0 else MeasureBound(lo, hi)
        trace.append(f"{pad}{tag}: product measure -> {_fmt_measure(m)}")
        return m, exact and not isinstance(m, MeasureBound)
    if isinstance(expr, PrunePaths):
        child, _ = _measure(expr.child, depth + 1, trace)
        hi = child.hi if isinstance(child, MeasureBound) else child
        if scalar_cmp(hi, ZERO) == 0:
            trace.append(f"{pad}{tag}: subset of a null set -> 0")
            return ZERO, True
        m = MeasureBound(ZERO, hi)
        trace.append(f"{pad}{tag}: subset -> bound {_fmt_measure(m)}")
        return m, False
    raise TypeError(f"not a SetExpr: {expr!r}")


def _certify_disjoint(expr: UnionFinite, max_stage: int = 2, cap: int = 4096) -> bool:
    """Try to certify pairwise interior-disjointness of the union's
    children from shallow stage covers (covers contain the sets, so a
    disjoint cover stage certifies the sets; an overlapping cover is
    retried one stage deeper)."""
    for stage in range(max_stage + 1):
        try:
            parts = [_expand(c, stage, None, cap) for c in expr.children]
        except CapExceeded:
            return False
        try:
            _check_parts_disjoint(parts)
            return True
        except OverlapDetected:
            continue
    return False


# ---------------------------------------------------------------------------
# Hausdorff dimension


def analytic_hausdorff_dim(expr: SetExpr) -> Scalar:
    """Hausdorff dimension by the rule calculus.  For pruned subtrees the
    value is an upper bound (marked in the trace); use is_fractal for the
    full report including exactness."""
    v, _, _ = _dim_with_trace(expr)
    return v


def _dim_with_trace(expr: SetExpr) -> tuple[Scalar, bool, list[str]]:
    trace: list[str] = []
    v, exact = _dim(expr, 0, trace)
    return v, exact, trace


def _try_measure(expr: SetExpr) -> Optional[MeasureResult]:
    try:
        return analytic_measure(expr)
    except (NoClosedForm, RuleInapplicable, DisjointnessUnverified):
        return None


def _dim(expr: SetExpr, depth: int, trace: list[str]) -> tuple[Scalar, bool]:
    pad = "  " * depth
    tag = _label(expr)
    n = expr.ndim

    m = _try_measure(expr)
    mlo = m.lo if isinstance(m, MeasureBound) else m
    if mlo is not None and scalar_cmp(mlo, ZERO) > 0:
        trace.append(
            f"{pad}{tag}: positive {n}-measure ({_fmt_measure(m)}) forces dim = {n}"
        )
        return Fraction(n), True

    if isinstance(expr, CantorPrim):
        d = hausdorff_dim_uniform(expr.spec)
        trace.append(f"{pad}{tag}: closed form dim = {fmt_exact(d)}")
        return d, True
    if isinstance(expr, CubePrim):
        trace.append(f"{pad}{tag}: dim = {n}")
        return Fraction(n), True
    if isinstance(expr, AffineAxis):
        v, exact = _dim(expr.child, depth + 1, trace)
        note = ""
        if any(scalar_cmp(c, ZERO) < 0 for c in expr.scales):
            note = " (reflection: isometry extension of the positive-scale rule)"
        trace.append(f"{pad}{tag}: bi-Lipschitz invariance{note} -> {fmt_exact(v)}")
        return v, exact
    if isinstance(expr, UnionFinite):
        parts = [_dim(c, depth + 1, trace) for c in expr.children]
        exact_vals = [v for v, e in parts if e]
        bound_vals = [v for v, e in parts if not e]
        if not bound_vals:
            v = canon_value(scalar_max(exact_vals))
            trace.append(f"{pad}{tag}: sup rule -> {fmt_exact(v)}")
            return v, True
        if exact_vals:
            me = scalar_max(exact_vals)
            if all(scalar_cmp(b, me) <= 0 for b in bound_vals):
                v = canon_value(me)
                trace.append(
                    f"{pad}{tag}: sup rule (upper bounds dominated by exact max) -> {fmt_exact(v)}"
                )
                return v, True
        v = canon_value(scalar_max(exact_vals + bound_vals))
        trace.append(f"{pad}{tag}: sup rule -> <= {fmt_exact(v)} (upper bound)")
        return v, False
    if isinstance(expr, UnionIndexed):
        v = expr.symbolic_dim
        for c in expr.child_exprs():
            cv, _ = _dim(c, depth + 1, [])  # sanity only; keep trace compact
            if scalar_cmp(cv, v) > 0:
                raise RuleInapplicable(
                    f"family {expr.family!r} child dim {fmt_exact(cv)} exceeds "
                    f"declared supremum {fmt_exact(v)}"
                )
        trace.append(f"{pad}{tag}[{expr.family}]: family supremum = {fmt_exact(v)}")
        return v, True
    if isinstance(expr, Product):
        if not all(_cantor_derived(c) for c in expr.children):
            raise RuleInapplicable(
                "product dimension rule needs Cantor-derived factors "
                "(primitives composed by affine maps, unions, products)"
            )
        parts = [_dim(c, depth + 1, trace) for c in expr.children]
        if not all(e for _, e in parts):
            raise RuleInapplicable("product dimension rule needs exact factor dimensions")
        v = canon_value(sum((p for p, _ in parts), ZERO))
        trace.append(f"{pad}{tag}: sum rule -> {fmt_exact(v)}")
        return v, True
    if isinstance(expr, PrunePaths):
        v, _ = _dim(expr.child, depth + 1, trace)
        trace.append(f"{pad}{tag}: subset rule -> <= {fmt_exact(v)} (upper bound)")
        return v, False
    raise TypeError(f"not a SetExpr: {expr!r}")


def _cantor_derived(expr: SetExpr) -> bool:
    """Closure of Cantor primitives under affine maps, unions, products:
    the factor class admitted by the product dimension rule."""
    if isinstance(expr, CantorPrim):
        return True
    if isinstance(expr, AffineAxis):
        return _cantor_derived(expr.child)
    if isinstance(expr, UnionFinite):
        return all(_cantor_derived(c) for c in expr.children)
    if isinstance(expr, UnionIndexed):
        return all(_cantor_derived(c) for c in expr.child_exprs())
    if isinstance(expr, Product):
        return all(_cantor_derived(c) for c in expr.children)
    return False


# ---------------------------------------------------------------------------
# inductive dimension


def analytic_ind_dim(expr: SetExpr) -> int:
    v, _ = _ind(expr, 0, [])
    return v


def _ind(expr: SetExpr, depth: int, trace: list[str]) -> tuple[int, list[str]]:
    pad = "  " * depth
    tag = _label(expr)

    if isinstance(expr, CantorPrim):
        trace.append(f"{pad}{tag}: totally disconnected -> ind 0")
        return 0, trace
    if isinstance(expr, CubePrim):
        trace.append(f"{pad}{tag}: ind {expr.n}")
        return expr.n, trace
    if isinstance(expr, AffineAxis):
        v, _ = _ind(expr.child, depth + 1, trace)
        note = ""
        if any(scalar_cmp(c, ZERO) < 0 for c in expr.scales):
            note = " (reflection extension)"
        trace.append(f"{pad}{tag}: affine invariance{note} -> ind {v}")
        return v, trace
    if isinstance(expr, (UnionFinite, UnionIndexed)):
        kids = expr.children if isinstance(expr, UnionFinite) else expr.child_exprs()
        vals = [_ind(c, depth + 1, trace)[0] for c in kids]
        v = max(vals)
        trace.append(f"{pad}{tag}: union max rule -> ind {v}")
        return v, trace
    if isinstance(expr, Product):
        vals = [_ind(c, depth + 1, trace)[0] for c in expr.children]
        if any(v != 0 for v in vals):
            raise RuleInapplicable(
                "inductive-dimension product rule covers 0-dimensional factors only"
            )
        trace.append(f"{pad}{tag}: product of ind-0 factors -> ind 0")
        return 0, trace
    if isinstance(expr, PrunePaths):
        v, _ = _ind(expr.child, depth + 1, trace)
        if v != 0:
            raise RuleInapplicable("pruned subtree must be 0-dimensional")
        trace.append(f"{pad}{tag}: subset of ind-0 set -> ind 0")
        return 0, trace
    raise TypeError(f"not a SetExpr: {expr!r}")


# ---------------------------------------------------------------------------
# report


def is_fractal(expr: SetExpr) -> DimReport:
    """Full analytic report with the exact fractal verdict
    dim_H > dim_ind.  Raises RuleInapplicable when the calculus cannot pin
    the Hausdorff dimension exactly (e.g. a pruned tree at top level) and
    DisjointnessUnverified when only a measure bound exists."""
    dim_trace: list[str] = []
    dim, exact = _dim(expr, 0, dim_trace)
    if not exact:
        raise RuleInapplicable(
            f"Hausdorff dimension known only as an upper bound <= {fmt_exact(dim)}"
        )
    ind_trace: list[str] = []
    ind, _ = _ind(expr, 0, ind_trace)
    meas_trace: list[str] = []
    m, _ = _measure(expr, 0, meas_trace)
    if isinstance(m, MeasureBound):
        if m.is_point():
            m = m.lo
        else:
            raise DisjointnessUnverified(
                f"measure known only as a bound {_fmt_measure(m)}"
            )
    verdict = scalar_cmp(dim, Fraction(ind)) > 0
    trace = (
        ["hausdorff dimension:"]
        + dim_trace
        + ["inductive dimension:"]
        + ind_trace
        + ["lebesgue measure:"]
        + meas_trace
        + [
            f"verdict: dim_H = {fmt_exact(dim)} "
            f"{'>' if verdict else '<='} dim_ind = {ind} -> "
            f"{'fractal' if verdict else 'not a fractal'}"
        ]
    )
    return DimReport(
        hausdorff_dim=dim,
        inductive_dim=ind,
        lebesgue_measure=m,
        is_fractal=verdict,
        trace=trace,
    )

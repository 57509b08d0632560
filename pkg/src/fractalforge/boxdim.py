"""Numerical verification: box counting, measure convergence, invariant checks.

Everything here is deliberately independent of the analytic calculus so it
can serve as a cross-check.  Counts are exact integers over exact grids;
only the final log-log regression leaves exact arithmetic.

Grid convention: cells are the half-open boxes [o + i*eps, o + (i+1)*eps)
of an origin-aligned lattice; a cell is counted iff its interior meets the
interior of some cover box (per-axis max(lo) < min(hi)).  Boxes that only
touch a gridline do not spill into the neighboring cell, so the stage-2
middle-third cover at eps = 1/9 counts 4, not 8.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from .calculus import MeasureBound, analytic_hausdorff_dim, analytic_measure
from .cantor import Geometric, delta_length
from .errors import CapExceeded, NoClosedForm, OutOfRange
from .expr import (
    AffineAxis,
    Box,
    BoxCover,
    CantorPrim,
    Product,
    PrunePaths,
    SetExpr,
    UnionFinite,
    UnionIndexed,
    boxes_interior_overlap,
    expr_bbox,
    expr_count,
    expr_stage_cover,
)
from .scalars import (
    ZERO,
    Scalar,
    canon_value,
    ensure_scalar,
    floor_ratio,
    scalar_cmp,
    to_float,
)

CELL_CAP = 2_000_000


@dataclass(frozen=True)
class GridSpec:
    """Origin-aligned uniform grid of side ``epsilon``."""

    epsilon: Scalar
    origin: tuple[Scalar, ...]

    def __post_init__(self):
        eps = ensure_scalar(self.epsilon)
        if scalar_cmp(eps, ZERO) <= 0:
            raise OutOfRange(f"grid side must be positive, got {eps}")
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(
            self, "origin", tuple(ensure_scalar(o) for o in self.origin)
        )


def grid_over(expr: SetExpr, epsilon: Scalar) -> GridSpec:
    """Grid aligned at the lower corner of the expression's bounding box."""
    bbox = expr_bbox(expr)
    return GridSpec(epsilon, tuple(iv.lo for iv in bbox))


def _axis_cell_range(lo: Scalar, hi: Scalar, origin: Scalar, eps: Scalar) -> range:
    # cell i = [origin + i*eps, origin + (i+1)*eps) meets (lo, hi) iff
    # i > (lo-origin)/eps - 1 and i < (hi-origin)/eps; exact floor on both ends
    i_min = floor_ratio(canon_value(lo - origin), eps)
    top = canon_value(hi - origin)
    q = floor_ratio(top, eps)
    if scalar_cmp(top, canon_value(q * eps)) == 0:
        q -= 1
    return range(i_min, q + 1)


def box_count(cover: BoxCover, grid: GridSpec, cap: int = CELL_CAP) -> int:
    """Number of grid cells whose interior meets the cover.

    Fast path: each box contributes a product of per-axis index ranges;
    the union of those rectangles of cells is accumulated as a set.
    """
    if cover.count == 0:
        raise OutOfRange("cover must be nonempty")
    if len(grid.origin) != cover.ndim:
        raise OutOfRange(
            f"grid has {len(grid.origin)} axes, cover has {cover.ndim}"
        )
    eps = grid.epsilon
    cells: set[tuple[int, ...]] = set()
    for box in cover.boxes:
        ranges = [
            _axis_cell_range(iv.lo, iv.hi, grid.origin[j], eps)
            for j, iv in enumerate(box)
        ]
        block = 1
        for rng in ranges:
            block *= len(rng)
        if block > cap or len(cells) + block > cap:
            raise CapExceeded(
                f"box at {tuple(str(iv.lo) for iv in box)} spans {block} cells "
                f"(cap {cap})"
            )
        cells.update(itertools.product(*ranges))
    return len(cells)


def box_count_brute(cover: BoxCover, grid: GridSpec, cap: int = CELL_CAP) -> int:
    """Independent oracle: enumerate every cell of the grid over the cover's
    bounding hull and test each against every box.  Slow on purpose."""
    if cover.count == 0:
        raise OutOfRange("cover must be nonempty")
    eps = grid.epsilon
    n = cover.ndim
    # exact per-axis hull
    axis_ranges = []
    total = 1
    for j in range(n):
        lo_j = cover.boxes[0][j].lo
        hi_j = cover.boxes[0][j].hi
        for b in cover.boxes[1:]:
            if scalar_cmp(b[j].lo, lo_j) < 0:
                lo_j = b[j].lo
            if scalar_cmp(b[j].hi, hi_j) > 0:
                hi_j = b[j].hi
        rng = _axis_cell_range(lo_j, hi_j, grid.origin[j], eps)
        axis_ranges.append(rng)
        total *= len(rng)
        if total > cap:
            raise CapExceeded(f"grid spans {total}+ cells (cap {cap})")
    count = 0
    for idx in itertools.product(*axis_ranges):
        cell = tuple(
            (
                canon_value(grid.origin[j] + idx[j] * eps),
                canon_value(grid.origin[j] + (idx[j] + 1) * eps),
            )
            for j in range(n)
        )
        for box in cover.boxes:
            hit = True
            for j in range(n):
                lo = cell[j][0] if scalar_cmp(cell[j][0], box[j].lo) > 0 else box[j].lo
                hi = cell[j][1] if scalar_cmp(cell[j][1], box[j].hi) < 0 else box[j].hi
                if scalar_cmp(lo, hi) >= 0:
                    hit = False
                    break
            if hit:
                count += 1
                break
    return count


# ---------------------------------------------------------------------------
# dimension fit


@dataclass(frozen=True)
class FitReport:
    points: tuple[tuple[float, float], ...]
    slope: float
    residual: float
    stages: tuple[int, ...]


def box_dim_fit(
    expr: SetExpr,
    stages: Iterable[int],
    grid_mode: str = "natural",
    truncation: Optional[int] = None,
    cap: int = CELL_CAP,
) -> FitReport:
    """Least-squares slope of log N against log(1/eps).

    natural mode: N = stage-cover box count, eps = smallest box side, so
    uniform Cantor stages sit exactly on the line of slope
    log(s+1)/(-log beta).  dyadic mode: N = lattice cell count at
    eps = 2^-k over the bounding-box-aligned grid.
    """
    ks = sorted(set(int(k) for k in stages))
    if len(ks) < 2:
        raise OutOfRange("need at least two stages for a slope")
    if grid_mode not in ("natural", "dyadic"):
        raise OutOfRange(f"unknown grid mode {grid_mode!r}")
    points = []
    for k in ks:
        cover = expr_stage_cover(expr, k, truncation=truncation, cap=cap)
        if grid_mode == "natural":
            n_boxes = cover.count
            eps = cover.min_side()
        else:
            eps = Fraction(1, 2 ** k)
            grid = grid_over(expr, eps)
            n_boxes = box_count(cover, grid, cap=cap)
        points.append((-math.log(to_float(eps)), math.log(n_boxes)))
    xs = np.array([p[0] for p in points])
    ys = np.array([p[1] for p in points])
    if np.ptp(xs) == 0:
        raise OutOfRange("stage covers show no scale decay; nothing to fit")
    slope, intercept = np.polyfit(xs, ys, 1)
    residual = float(np.max(np.abs(ys - (slope * xs + intercept))))
    return FitReport(tuple(points), float(slope), residual, tuple(ks))


def stage_ratios(expr: SetExpr, stages: Iterable[int]) -> list[tuple[int, float]]:
    """Per-stage ratios log N / log(1/eps) at natural scales."""
    out = []
    for k in sorted(set(int(k) for k in stages)):
        cover = expr_stage_cover(expr, k)
        eps = to_float(cover.min_side())
        out.append((k, math.log(cover.count) / -math.log(eps)))
    return out


# ---------------------------------------------------------------------------
# measure series


def _exact_measure(expr: SetExpr) -> Scalar:
    m = analytic_measure(expr)
    if isinstance(m, MeasureBound):
        if m.is_point():
            return m.lo
        raise NoClosedForm(
            f"measure known only as an interval [{m.lo}, {m.hi}]"
        )
    return m


def _abs(x: Scalar) -> Scalar:
    return canon_value(-x) if scalar_cmp(x, ZERO) < 0 else canon_value(x)


def measure_series(
    expr: SetExpr,
    stages: Iterable[int],
    truncation: Optional[int] = None,
    cap: int = CELL_CAP,
) -> list[tuple[int, Scalar, Scalar]]:
    """Exact stage-cover volumes and their deviation from the analytic
    measure, per stage."""
    target = _exact_measure(expr)
    out = []
    for k in sorted(set(int(k) for k in stages)):
        cover = expr_stage_cover(expr, k, truncation=truncation, cap=cap)
        vol = cover.volume()
        out.append((k, vol, _abs(canon_value(vol - target))))
    return out


# ---------------------------------------------------------------------------
# invariant verification


@dataclass(frozen=True)
class CheckEntry:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class VerifyReport:
    entries: tuple[CheckEntry, ...]

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)


def find_overlap(cover: BoxCover) -> Optional[tuple[int, int]]:
    """Index pair of two boxes with interior overlap, or None.  Sweep on
    the first axis keeps disjoint covers near-linear."""
    order = sorted(range(cover.count), key=lambda i: to_float(cover.boxes[i][0].lo))
    active: list[int] = []
    for i in order:
        box = cover.boxes[i]
        still = []
        for j in active:
            other = cover.boxes[j]
            if scalar_cmp(other[0].hi, box[0].lo) > 0:
                still.append(j)
                if boxes_interior_overlap(box, other):
                    return (j, i)
        active = still + [i]
    return None


def _box_inside(inner: Box, outer: Box) -> bool:
    for a, b in zip(inner, outer):
        if scalar_cmp(a.lo, b.lo) < 0 or scalar_cmp(a.hi, b.hi) > 0:
            return False
    return True


def _walk(expr: SetExpr):
    yield expr
    if isinstance(expr, AffineAxis):
        yield from _walk(expr.child)
    elif isinstance(expr, (UnionFinite, Product)):
        for c in expr.children:
            yield from _walk(c)
    elif isinstance(expr, PrunePaths):
        yield from _walk(expr.child)


def _has_truncation(expr: SetExpr) -> bool:
    return any(isinstance(node, UnionIndexed) for node in _walk(expr))


def _has_prune(expr: SetExpr) -> bool:
    return any(isinstance(node, PrunePaths) for node in _walk(expr))


def verify(
    expr: SetExpr,
    stages: Iterable[int],
    tolerance: float = 1e-9,
    truncation: Optional[int] = None,
    cap: int = CELL_CAP,
) -> VerifyReport:
    """Run the invariant suite over the given stages.

    Checks: cover nesting across consecutive stages, within-stage interior
    disjointness, box counts against the exact census (upper bound when
    pruning), interval lengths for primitives, volume monotonicity and
    measure deviation, and a box-dimension consistency check.  Failures
    come back as report entries with witnesses, never exceptions.
    """
    ks = sorted(set(int(k) for k in stages))
    if not ks:
        raise OutOfRange("need at least one stage")
    covers = {
        k: expr_stage_cover(expr, k, truncation=truncation, cap=cap) for k in ks
    }
    entries: list[CheckEntry] = []
    truncated = _has_truncation(expr)
    pruned = _has_prune(expr)

    # nesting across consecutive stages
    ok, detail = True, f"checked {len(ks) - 1} consecutive stage pairs"
    for a, b in zip(ks, ks[1:]):
        if b != a + 1:
            continue
        outer, inner = covers[a], covers[b]
        for box in inner.boxes:
            if not any(_box_inside(box, parent) for parent in outer.boxes):
                ok = False
                detail = (
                    f"stage-{b} box {_fmt_box(box)} lies in no stage-{a} box"
                )
                break
        if not ok:
            break
    entries.append(CheckEntry("nesting", ok, detail))

    # within-stage disjointness
    ok, detail = True, f"pairwise interior-disjoint at stages {ks[0]}..{ks[-1]}"
    for k in ks:
        witness = find_overlap(covers[k])
        if witness is not None:
            i, j = witness
            ok = False
            detail = (
                f"stage {k}: boxes {_fmt_box(covers[k].boxes[i])} and "
                f"{_fmt_box(covers[k].boxes[j])} overlap"
            )
            break
    entries.append(CheckEntry("disjointness", ok, detail))

    # counts against the exact census
    ok, detail = True, ""
    counts = [covers[k].count for k in ks]
    for k in ks:
        expected = expr_count(expr, k, truncation=truncation)
        got = covers[k].count
        if pruned:
            if got > expected:
                ok, detail = False, f"stage {k}: {got} boxes exceed census {expected}"
                break
        elif got != expected:
            ok, detail = False, f"stage {k}: {got} boxes, census says {expected}"
            break
    if ok and any(b < a for a, b in zip(counts, counts[1:])):
        ok, detail = False, f"box counts not monotone: {counts}"
    if ok:
        detail = f"counts {counts}" + (" (pruned: census is an upper bound)" if pruned else "")
    entries.append(CheckEntry("counts", ok, detail))

    # interval lengths for bare primitives
    if isinstance(expr, CantorPrim):
        ok, detail = True, "every stage-k interval has the closed-form length"
        for k in ks:
            want = delta_length(expr.spec, k)
            for box in covers[k].boxes:
                if scalar_cmp(box[0].length, want) != 0:
                    ok = False
                    detail = (
                        f"stage {k}: interval length {box[0].length} != {want}"
                    )
                    break
            if not ok:
                break
        entries.append(CheckEntry("lengths", ok, detail))

    # volume monotonicity and measure deviation
    vols = [covers[k].volume() for k in ks]
    ok, detail = True, ""
    for a, b in zip(vols, vols[1:]):
        if scalar_cmp(b, a) > 0:
            ok, detail = False, "cover volume increased between stages"
            break
    if ok:
        try:
            target = _exact_measure(expr)
        except NoClosedForm:
            target = None
        if target is not None:
            devs = [_abs(canon_value(v - target)) for v in vols]
            if not truncated:
                for k, v in zip(ks, vols):
                    if scalar_cmp(v, target) < 0:
                        ok, detail = (
                            False,
                            f"stage {k} volume {v} fell below the measure {target}",
                        )
                        break
                if ok:
                    for a, b in zip(devs, devs[1:]):
                        if scalar_cmp(b, a) > 0:
                            ok, detail = False, "measure deviation increased"
                            break
            if ok:
                detail = f"final deviation {devs[-1]}"
        else:
            detail = "volumes monotone (no exact measure to compare)"
    entries.append(CheckEntry("measure", ok, detail))

    # box-dimension consistency
    bare_geometric = isinstance(expr, CantorPrim) and isinstance(
        expr.spec.family, Geometric
    )
    if bare_geometric and scalar_cmp(expr.spec.family.l, ZERO) == 0 and len(ks) >= 1:
        want = to_float(analytic_hausdorff_dim(expr))
        ratios = stage_ratios(expr, ks)
        worst = max(abs(r - want) for _, r in ratios)
        ok = worst <= max(tolerance, 1e-12)
        entries.append(
            CheckEntry(
                "boxdim",
                ok,
                f"per-stage ratio vs analytic dim: worst |delta| = {worst:.3e}",
            )
        )
    elif len(ks) >= 2:
        ndim = covers[ks[0]].ndim
        try:
            fit = box_dim_fit(expr, ks, truncation=truncation, cap=cap)
        except OutOfRange as e:
            entries.append(CheckEntry("boxdim", False, str(e)))
        else:
            ok = 0.0 < fit.slope <= ndim + max(tolerance, 1e-9)
            entries.append(
                CheckEntry(
                    "boxdim",
                    ok,
                    f"slope {fit.slope:.6f} within (0, {ndim}]",
                )
            )

    return VerifyReport(tuple(entries))


def _fmt_box(box: Box) -> str:
    return "x".join(f"[{iv.lo},{iv.hi}]" for iv in box)

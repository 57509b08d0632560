"""Symbolic set expressions and their exact stage-cover expansion.

A SetExpr is an immutable tree over seven node kinds: Cantor primitives,
unit cubes, per-axis affine images, finite unions, indexed (truncated
infinite) unions, Cartesian products, and deterministic prunings of a
Cantor-derived subtree.  Every node denotes a compact subset of R^n, and
``expr_stage_cover`` produces the finite box cover obtained by cutting
every Cantor primitive at the same stage, distributing products over
unions box-by-box.

Indexed unions do not enumerate their children inline; they name a
registered *family* (a parameterized child generator) plus an IndexSet,
and carry the family's closed-form dimension and measure, because a
finite truncation can never witness a supremum.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

from .cantor import BOX_CAP, CantorSpec, Interval, stage_cover
from .errors import (
    CapExceeded,
    FrxSemanticError,
    OverlapDetected,
    WrongDimension,
)
from .indexset import IndexSet
from .scalars import ONE, ZERO, Scalar, ensure_scalar, scalar_cmp, scalar_min

Box = tuple[Interval, ...]


@dataclass(frozen=True)
class CantorPrim:
    spec: CantorSpec

    @property
    def ndim(self) -> int:
        return 1


@dataclass(frozen=True)
class CubePrim:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise FrxSemanticError(f"cube dimension must be a positive integer, got {self.n}")

    @property
    def ndim(self) -> int:
        return self.n


@dataclass(frozen=True)
class AffineAxis:
    """x |-> (scale_j * x_j + shift_j) per axis; scales nonzero.

    Negative scales are reflections: isometries composed with positive
    scalings, so dimension rules still apply (traces mark the extension).
    """

    scales: tuple[Scalar, ...]
    shifts: tuple[Scalar, ...]
    child: "SetExpr"

    def __post_init__(self):
        object.__setattr__(self, "scales", tuple(ensure_scalar(c) for c in self.scales))
        object.__setattr__(self, "shifts", tuple(ensure_scalar(c) for c in self.shifts))
        n = self.child.ndim
        if len(self.scales) != n or len(self.shifts) != n:
            raise WrongDimension(
                f"affine lists have {len(self.scales)}/{len(self.shifts)} entries for a {n}-D child"
            )
        for c in self.scales:
            if scalar_cmp(c, ZERO) == 0:
                raise FrxSemanticError("affine scales must be nonzero")

    @property
    def ndim(self) -> int:
        return self.child.ndim


@dataclass(frozen=True)
class UnionFinite:
    children: tuple["SetExpr", ...]
    disjoint: Optional[bool] = None

    def __post_init__(self):
        if len(self.children) < 2:
            raise FrxSemanticError("union needs at least two children")
        dims = {c.ndim for c in self.children}
        if len(dims) != 1:
            raise WrongDimension(f"union children have mixed ambient dimensions {sorted(dims)}")

    @property
    def ndim(self) -> int:
        return self.children[0].ndim


@dataclass(frozen=True)
class UnionIndexed:
    """Truncated view of an infinite union over a registered family.

    symbolic_dim / symbolic_measure are the closed forms for the FULL
    union; geometry (covers, bounding boxes) sees the first ``truncation``
    indices only.  Build through ``make_union_indexed`` so the closed
    forms and the disjointness validation stay consistent.
    """

    family: str
    args: tuple[tuple[str, object], ...]
    index: IndexSet
    truncation: int
    symbolic_dim: Scalar
    symbolic_measure: Scalar

    def __post_init__(self):
        if self.truncation < 1:
            raise FrxSemanticError("truncation must be >= 1 (empty geometry is inconsistent)")

    def arg(self, name: str):
        for k, v in self.args:
            if k == name:
                return v
        raise KeyError(name)

    @property
    def ndim(self) -> int:
        return 1  # all registered families generate subsets of the line

    def child_exprs(self, truncation: int | None = None) -> list["SetExpr"]:
        fam = get_family(self.family)
        t = self.truncation if truncation is None else truncation
        return [fam.make_child(dict(self.args), s, t) for s in self.index.members(t)]


@dataclass(frozen=True)
class Product:
    children: tuple["SetExpr", ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise FrxSemanticError("product needs at least two children")

    @property
    def ndim(self) -> int:
        return sum(c.ndim for c in self.children)


@dataclass(frozen=True)
class PrunePaths:
    """Deterministic subset of a Cantor-derived construction tree.

    Every construction node keeps a nonempty seeded-pseudorandom subset of
    its children, so the limit set is nonempty and nested covers remain
    covers.  Only prune-free compositions of primitives, affine maps, and
    products are pruneable (their per-stage branching is uniform, which is
    what makes path addressing well-defined).
    """

    child: "SetExpr"
    seed: int

    def __post_init__(self):
        if not isinstance(self.seed, int) or not (0 <= self.seed < 2 ** 64):
            raise FrxSemanticError("seed must be a 64-bit unsigned integer")
        if not _prunable(self.child):
            raise FrxSemanticError(
                "prune child must compose Cantor primitives, affine maps, and products only"
            )

    @property
    def ndim(self) -> int:
        return self.child.ndim


SetExpr = Union[CantorPrim, CubePrim, AffineAxis, UnionFinite, UnionIndexed, Product, PrunePaths]


# ---------------------------------------------------------------------------
# family registry


@dataclass(frozen=True)
class FamilyDef:
    """Child generator plus closed forms for an indexed union family.

    ``params`` drives parsing/emission: (name, kind) with kind one of
    "scalar", "int", "indexset".  ``make_child(args, s, truncation)``
    returns the child expression at index s; ``dim``/``measure`` give the
    closed forms for the union over the FULL index set.
    """

    name: str
    params: tuple[tuple[str, str], ...]
    make_child: Callable[[dict, int, int], SetExpr]
    dim: Callable[[dict, IndexSet], Scalar]
    measure: Callable[[dict, IndexSet], Scalar]


_FAMILIES: dict[str, FamilyDef] = {}


def register_family(fam: FamilyDef) -> None:
    _FAMILIES[fam.name] = fam


def get_family(name: str) -> FamilyDef:
    if name not in _FAMILIES:
        raise FrxSemanticError(f"unknown family {name!r}; known: {sorted(_FAMILIES)}")
    return _FAMILIES[name]


def make_union_indexed(
    family: str, args: dict, index: IndexSet, truncation: int
) -> UnionIndexed:
    """Build an indexed union, computing closed forms and validating
    pairwise interior-disjointness of the truncated children's bounding
    boxes (full verification over an infinite family is impossible; the
    truncation depth is the documented validation depth)."""
    fam = get_family(family)
    node = UnionIndexed(
        family=family,
        args=tuple(sorted(args.items())),
        index=index,
        truncation=truncation,
        symbolic_dim=ensure_scalar(fam.dim(args, index)),
        symbolic_measure=ensure_scalar(fam.measure(args, index)),
    )
    kids = node.child_exprs()
    dims = {k.ndim for k in kids}
    if dims != {1}:
        raise WrongDimension("family children must be one-dimensional")
    bbs = [expr_bbox(k) for k in kids]
    for i in range(len(bbs)):
        for j in range(i + 1, len(bbs)):
            if boxes_interior_overlap(bbs[i], bbs[j]):
                raise OverlapDetected(
                    f"family {family!r} children at indices "
                    f"{node.index.members(truncation)[i]} and "
                    f"{node.index.members(truncation)[j]} overlap: {bbs[i]} vs {bbs[j]}"
                )
    return node


# ---------------------------------------------------------------------------
# geometry helpers


def boxes_interior_overlap(a: Box, b: Box) -> bool:
    """True iff the two closed boxes share an interior point (all axes
    overlap with positive length)."""
    for (alo, ahi), (blo, bhi) in zip(a, b):
        lo = alo if scalar_cmp(alo, blo) >= 0 else blo
        hi = ahi if scalar_cmp(ahi, bhi) <= 0 else bhi
        if scalar_cmp(lo, hi) >= 0:
            return False
    return True


def _map_interval(iv: Interval, scale: Scalar, shift: Scalar) -> Interval:
    a = scale * iv.lo + shift
    b = scale * iv.hi + shift
    if scalar_cmp(scale, ZERO) < 0:
        a, b = b, a
    return Interval(a, b)


def expr_bbox(expr: SetExpr) -> Box:
    """Exact bounding box of the expression's stage-0 geometry (for
    indexed unions: of the truncated children)."""
    if isinstance(expr, CantorPrim):
        return (Interval(ZERO, ONE),)
    if isinstance(expr, CubePrim):
        return tuple(Interval(ZERO, ONE) for _ in range(expr.n))
    if isinstance(expr, AffineAxis):
        bb = expr_bbox(expr.child)
        return tuple(
            _map_interval(iv, c, t) for iv, c, t in zip(bb, expr.scales, expr.shifts)
        )
    if isinstance(expr, (UnionFinite, UnionIndexed)):
        kids = expr.children if isinstance(expr, UnionFinite) else expr.child_exprs()
        bbs = [expr_bbox(k) for k in kids]
        out = []
        for ax in range(len(bbs[0])):
            lo = bbs[0][ax].lo
            hi = bbs[0][ax].hi
            for bb in bbs[1:]:
                if scalar_cmp(bb[ax].lo, lo) < 0:
                    lo = bb[ax].lo
                if scalar_cmp(bb[ax].hi, hi) > 0:
                    hi = bb[ax].hi
            out.append(Interval(lo, hi))
        return tuple(out)
    if isinstance(expr, Product):
        out: list[Interval] = []
        for c in expr.children:
            out.extend(expr_bbox(c))
        return tuple(out)
    if isinstance(expr, PrunePaths):
        return expr_bbox(expr.child)
    raise TypeError(f"not a SetExpr: {expr!r}")


def expr_count(expr: SetExpr, stage: int, truncation: int | None = None) -> int:
    """Upper bound on |expr_stage_cover| (exact for prune-free trees)."""
    if isinstance(expr, CantorPrim):
        return (expr.spec.s + 1) ** stage
    if isinstance(expr, CubePrim):
        return 1
    if isinstance(expr, AffineAxis):
        return expr_count(expr.child, stage, truncation)
    if isinstance(expr, UnionFinite):
        return sum(expr_count(c, stage, truncation) for c in expr.children)
    if isinstance(expr, UnionIndexed):
        return sum(expr_count(c, stage, truncation) for c in expr.child_exprs(truncation))
    if isinstance(expr, Product):
        total = 1
        for c in expr.children:
            total *= expr_count(c, stage, truncation)
        return total
    if isinstance(expr, PrunePaths):
        return expr_count(expr.child, stage, truncation)
    raise TypeError(f"not a SetExpr: {expr!r}")


# ---------------------------------------------------------------------------
# stage covers


@dataclass(frozen=True)
class BoxCover:
    stage: int
    ndim: int
    boxes: tuple[Box, ...]

    @property
    def count(self) -> int:
        return len(self.boxes)

    def volume(self) -> Scalar:
        from .scalars import canon_value

        total = ZERO
        for b in self.boxes:
            v = ONE
            for iv in b:
                v = v * (iv.hi - iv.lo)
            total = total + v
        return canon_value(total)

    def min_side(self) -> Scalar:
        return scalar_min(iv.hi - iv.lo for b in self.boxes for iv in b)


def expr_stage_cover(
    expr: SetExpr, stage: int, truncation: int | None = None, cap: int = BOX_CAP
) -> BoxCover:
    """Exact stage-`stage` box cover of the expression.

    Each Cantor primitive contributes its 1-D stage cover; products take
    the box-wise Cartesian product (distributivity over unions); unions
    concatenate after an interior-overlap check; pruning filters by the
    seeded path decisions.  ``truncation`` overrides every indexed union's
    stored depth when given.
    """
    if stage < 0:
        raise FrxSemanticError("stage must be >= 0")
    n = expr_count(expr, stage, truncation)
    if n > cap:
        raise CapExceeded(f"stage {stage} would need {n} boxes (cap {cap})")
    boxes = _expand(expr, stage, truncation, cap)
    return BoxCover(stage=stage, ndim=expr.ndim, boxes=tuple(boxes))


def _expand(expr: SetExpr, stage: int, trunc: int | None, cap: int) -> list[Box]:
    if isinstance(expr, CantorPrim):
        sc = stage_cover(expr.spec, stage, cap)
        return [(iv,) for iv in sc.intervals]
    if isinstance(expr, CubePrim):
        return [tuple(Interval(ZERO, ONE) for _ in range(expr.n))]
    if isinstance(expr, AffineAxis):
        kids = _expand(expr.child, stage, trunc, cap)
        return [
            tuple(_map_interval(iv, c, t) for iv, c, t in zip(b, expr.scales, expr.shifts))
            for b in kids
        ]
    if isinstance(expr, (UnionFinite, UnionIndexed)):
        children = (
            list(expr.children) if isinstance(expr, UnionFinite) else expr.child_exprs(trunc)
        )
        parts = [_expand(c, stage, trunc, cap) for c in children]
        _check_parts_disjoint(parts)
        return [b for p in parts for b in p]
    if isinstance(expr, Product):
        parts = [_expand(c, stage, trunc, cap) for c in expr.children]
        total = 1
        for p in parts:
            total *= len(p)
        if total > cap:
            raise CapExceeded(f"product cover needs {total} boxes (cap {cap})")
        out: list[Box] = []
        for combo in itertools.product(*parts):
            box: tuple[Interval, ...] = ()
            for part in combo:
                box = box + part
            out.append(box)
        return out
    if isinstance(expr, PrunePaths):
        nodes = _cover_nodes(expr.child, stage, trunc, cap)
        keep = _PruneDecider(expr.seed, _branching(expr.child))
        return [box for path, box in nodes if keep.survives(path)]
    raise TypeError(f"not a SetExpr: {expr!r}")


def _bbox_of_boxes(boxes: list[Box]) -> Box:
    out = []
    for ax in range(len(boxes[0])):
        lo = boxes[0][ax].lo
        hi = boxes[0][ax].hi
        for b in boxes[1:]:
            if scalar_cmp(b[ax].lo, lo) < 0:
                lo = b[ax].lo
            if scalar_cmp(b[ax].hi, hi) > 0:
                hi = b[ax].hi
        out.append(Interval(lo, hi))
    return tuple(out)


def _check_parts_disjoint(parts: list[list[Box]]) -> None:
    """Raise OverlapDetected if boxes from different union branches share
    interior.  Bounding-box separation short-circuits the common case."""
    hulls = [_bbox_of_boxes(p) for p in parts if p]
    live = [p for p in parts if p]
    for i in range(len(live)):
        for j in range(i + 1, len(live)):
            if not boxes_interior_overlap(hulls[i], hulls[j]):
                continue
            for a in live[i]:
                for b in live[j]:
                    if boxes_interior_overlap(a, b):
                        raise OverlapDetected(f"union branches overlap: {a} vs {b}")


# --- prune machinery -------------------------------------------------------


def _prunable(expr: SetExpr) -> bool:
    if isinstance(expr, CantorPrim):
        return True
    if isinstance(expr, AffineAxis):
        return _prunable(expr.child)
    if isinstance(expr, Product):
        return all(_prunable(c) for c in expr.children)
    return False


def _branching(expr: SetExpr) -> int:
    """Children per construction node per stage (uniform for prunable trees)."""
    if isinstance(expr, CantorPrim):
        return expr.spec.s + 1
    if isinstance(expr, AffineAxis):
        return _branching(expr.child)
    if isinstance(expr, Product):
        b = 1
        for c in expr.children:
            b *= _branching(c)
        return b
    raise FrxSemanticError("not a prunable expression")


def _cover_nodes(
    expr: SetExpr, stage: int, trunc: int | None, cap: int
) -> list[tuple[tuple[int, ...], Box]]:
    """Stage boxes of a prunable tree, each tagged with its construction
    path: the per-stage child indices (mixed-radix-combined for products)."""
    if isinstance(expr, CantorPrim):
        sc = stage_cover(expr.spec, stage, cap)
        base = expr.spec.s + 1
        out = []
        for i, iv in enumerate(sc.intervals):
            digits = []
            x = i
            for _ in range(stage):
                digits.append(x % base)
                x //= base
            out.append((tuple(reversed(digits)), (iv,)))
        return out
    if isinstance(expr, AffineAxis):
        kids = _cover_nodes(expr.child, stage, trunc, cap)
        return [
            (
                path,
                tuple(_map_interval(iv, c, t) for iv, c, t in zip(b, expr.scales, expr.shifts)),
            )
            for path, b in kids
        ]
    if isinstance(expr, Product):
        parts = [_cover_nodes(c, stage, trunc, cap) for c in expr.children]
        radixes = [_branching(c) for c in expr.children]
        total = 1
        for p in parts:
            total *= len(p)
        if total > cap:
            raise CapExceeded(f"product cover needs {total} boxes (cap {cap})")
        out = []
        for combo in itertools.product(*parts):
            path = []
            for depth in range(stage):
                local = 0
                for (cpath, _), radix in zip(combo, radixes):
                    local = local * radix + cpath[depth]
                path.append(local)
            box: tuple[Interval, ...] = ()
            for _, part in combo:
                box = box + part
            out.append((tuple(path), box))
        return out
    raise FrxSemanticError("not a prunable expression")


class _PruneDecider:
    """Seeded deterministic choice of a nonempty child subset per node.

    The mask for a node is derived from blake2b(seed || path); bit i keeps
    child i.  Masks are uniform over [1, 2**branching - 1], so at least
    one child always survives and identical (seed, path) pairs agree
    across stages, platforms, and runs.
    """

    def __init__(self, seed: int, branching: int):
        self.seed = seed
        self.branching = branching
        self._masks: dict[tuple[int, ...], int] = {}

    def _mask(self, prefix: tuple[int, ...]) -> int:
        m = self._masks.get(prefix)
        if m is None:
            key = self.seed.to_bytes(8, "big") + b"".join(
                i.to_bytes(4, "big") for i in prefix
            )
            bits_needed = self.branching + 64
            raw = b""
            counter = 0
            while len(raw) * 8 < bits_needed:
                raw += hashlib.blake2b(
                    key + counter.to_bytes(4, "big"), digest_size=64
                ).digest()
                counter += 1
            v = int.from_bytes(raw, "big")
            m = 1 + v % (2 ** self.branching - 1)
            self._masks[prefix] = m
        return m

    def survives(self, path: tuple[int, ...]) -> bool:
        for depth in range(len(path)):
            if not (self._mask(path[:depth]) >> path[depth]) & 1:
                return False
        return True


# ---------------------------------------------------------------------------
# symmetrize


def symmetrize(expr: SetExpr) -> SetExpr:
    """The point-symmetric version (about 1/2) of a one-dimensional set:
    reflect through 0, union with the original, then halve and recenter.
    Dimension is unchanged (reflection is an isometry, the final map a
    positive similarity); measure is halved twice and doubled once, i.e.
    preserved."""
    if expr.ndim != 1:
        raise WrongDimension(f"symmetrize needs a 1-D expression, got {expr.ndim}-D")
    reflected = AffineAxis((Fraction(-1),), (ZERO,), expr)
    both = UnionFinite((expr, reflected), disjoint=None)
    return AffineAxis((Fraction(1, 2),), (Fraction(1, 2),), both)

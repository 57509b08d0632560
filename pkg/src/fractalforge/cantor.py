"""Uniform Cantor-type subsets of [0,1] built by symmetric gap removal.

A spec fixes a branching count s >= 1 and a removing sequence (beta_n) with
sum(beta_n) <= 1.  Stage n keeps (s+1)**n closed intervals of equal length
delta_n = (1 - sum_{k<=n} beta_k) / (s+1)**n; passing from stage n-1 to
stage n removes s open gaps of length g_n = beta_n / (s (s+1)**(n-1)) from
each interval, placed symmetrically so the s+1 children have equal length.
The limit set has Lebesgue measure 1 - sum(beta_n).

Removing sequences come in two flavours: ``Geometric`` (the workhorse; its
total and dimension have closed forms) and ``Explicit`` (arbitrary term /
partial-sum callables plus optional declared rules for the total and for
the tail log-ratio limit that the dimension formula needs).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple, Optional, Union

import sympy as sp

from .errors import CapExceeded, ConditionUnverified, NoClosedForm, OutOfRange
from .scalars import (
    ONE,
    ZERO,
    Scalar,
    canon_value,
    ensure_scalar,
    is_rational,
    make_pow,
    scalar_cmp,
    sym,
)

BOX_CAP = 2_000_000


class Interval(NamedTuple):
    lo: Scalar
    hi: Scalar

    @property
    def length(self) -> Scalar:
        return self.hi - self.lo


@dataclass(frozen=True)
class Geometric:
    """beta_n = ((s+1) beta)**(n-1) * (1 - (s+1) beta) * (1 - l).

    The first stage removes beta * (1 - l) of mass; successive stages scale
    by (s+1) beta < 1, so the total removed mass is exactly 1 - l and the
    limit set has measure l.  With l = 0 every stage interval has length
    beta**n and the similarity dimension log(s+1)/log(1/beta) is attained.
    """

    beta: Scalar
    l: Scalar = ZERO

    def __post_init__(self):
        object.__setattr__(self, "beta", ensure_scalar(self.beta))
        object.__setattr__(self, "l", ensure_scalar(self.l))


@dataclass(frozen=True)
class Explicit:
    """User-supplied removing sequence.

    ``term(n)`` and ``partial(n)`` must return exact scalars (partial(0)=0).
    ``total`` declares sum(beta_n) when known; without it the limit measure
    has no closed form here.  ``decay_rate`` declares the symbolic value of
    L = limsup_n (-log(beta_n)/(n-1)), the exponential decay rate of the
    removed masses, which the measure-zero dimension formula consumes.
    A finite prefix cannot certify a limsup, so L must be supplied as a
    rule; prefix estimates stay estimates (see estimate_decay_rate).
    """

    term: Callable[[int], Scalar]
    partial: Callable[[int], Scalar]
    total: Optional[Scalar] = None
    decay_rate: Optional[Scalar] = None
    label: str = "explicit"

    def __eq__(self, other):  # callables compare by identity
        return self is other

    def __hash__(self):
        return id(self)


Family = Union[Geometric, Explicit]


@dataclass(frozen=True)
class RemovingSequence:
    s: int
    family: Family

    def __post_init__(self):
        if not isinstance(self.s, int) or self.s < 1:
            raise OutOfRange(f"s must be a positive integer, got {self.s}")
        fam = self.family
        if isinstance(fam, Geometric):
            sb = Fraction(1, self.s + 1)
            if scalar_cmp(fam.beta, ZERO) <= 0 or scalar_cmp(fam.beta, sb) >= 0:
                raise OutOfRange(
                    f"beta must lie in (0, 1/{self.s + 1}) for s={self.s}, got {fam.beta}"
                )
            if scalar_cmp(fam.l, ZERO) < 0 or scalar_cmp(fam.l, ONE) >= 0:
                raise OutOfRange(f"l must lie in [0, 1), got {fam.l}")


@dataclass(frozen=True)
class CantorSpec:
    seq: RemovingSequence

    @property
    def s(self) -> int:
        return self.seq.s

    @property
    def family(self) -> Family:
        return self.seq.family


@dataclass(frozen=True)
class StageCover:
    """The (s+1)**stage closed intervals kept at a given stage, left to right."""

    stage: int
    intervals: tuple[Interval, ...]

    @property
    def count(self) -> int:
        return len(self.intervals)


def uniform_cantor(s: int, beta: Scalar, l: Scalar = ZERO) -> CantorSpec:
    return CantorSpec(RemovingSequence(s, Geometric(beta, l)))


def explicit_cantor(s: int, family: Explicit) -> CantorSpec:
    return CantorSpec(RemovingSequence(s, family))


def beta_term(seq: RemovingSequence, n: int) -> Scalar:
    """Mass removed at stage n (n >= 1)."""
    if n < 1:
        raise OutOfRange("stage index starts at 1")
    fam = seq.family
    if isinstance(fam, Geometric):
        sb = (seq.s + 1) * fam.beta
        return canon_value(sb ** (n - 1) * (1 - sb) * (1 - fam.l))
    return ensure_scalar(fam.term(n))


def partial_sum(seq: RemovingSequence, n: int) -> Scalar:
    """Mass removed by stages 1..n."""
    if n < 0:
        raise OutOfRange("stage index must be >= 0")
    fam = seq.family
    if isinstance(fam, Geometric):
        if n == 0:
            return ZERO
        sb = (seq.s + 1) * fam.beta
        return canon_value((1 - fam.l) * (1 - sb ** n))
    return ensure_scalar(fam.partial(n))


def gap_length(seq: RemovingSequence, n: int) -> Scalar:
    """Length of each of the s*(s+1)**(n-1) gaps opened at stage n."""
    b = beta_term(seq, n)
    return canon_value(b / (seq.s * (seq.s + 1) ** (n - 1)))


def delta_length(spec: CantorSpec, n: int) -> Scalar:
    """Common length of the stage-n intervals."""
    rem = 1 - partial_sum(spec.seq, n)
    return canon_value(rem / (spec.s + 1) ** n)


def stage_measure(spec: CantorSpec, n: int) -> Scalar:
    """Total length of the stage-n cover: 1 - partial_sum(n)."""
    return canon_value(1 - partial_sum(spec.seq, n))


def limit_measure(spec: CantorSpec) -> Scalar:
    """Lebesgue measure of the limit set."""
    fam = spec.family
    if isinstance(fam, Geometric):
        return fam.l
    if fam.total is None:
        raise NoClosedForm(f"removing sequence {fam.label!r} declares no total sum")
    return canon_value(1 - ensure_scalar(fam.total))


def stage_cover(spec: CantorSpec, n: int, cap: int = BOX_CAP) -> StageCover:
    """Construct the stage-n cover exactly.

    All intervals at one stage share the same length, so only the left
    endpoints are tracked while recursing; each stage-(n-1) interval of
    length d splits into s+1 children with stride delta_n + g_n.
    """
    if n < 0:
        raise OutOfRange("stage must be >= 0")
    s = spec.s
    if (s + 1) ** n > cap:
        raise CapExceeded(f"stage {n} needs {(s + 1) ** n} boxes (cap {cap})")
    los: list[Scalar] = [ZERO]
    for k in range(1, n + 1):
        delta = delta_length(spec, k)
        gap = gap_length(spec.seq, k)
        if scalar_cmp(gap, ZERO) < 0 or scalar_cmp(delta, ZERO) <= 0:
            raise OutOfRange(f"degenerate stage {k}: delta={delta}, gap={gap}")
        stride = delta + gap
        los = [lo + i * stride for lo in los for i in range(s + 1)]
    delta = delta_length(spec, n)
    ivs = tuple(Interval(canon_value(lo), canon_value(lo + delta)) for lo in los)
    return StageCover(stage=n, intervals=ivs)


def hausdorff_dim_uniform(spec: CantorSpec, prefix: int = 64) -> Scalar:
    """Hausdorff dimension of the limit set.

    Positive limit measure forces dimension 1.  For measure zero the
    dimension is log(s+1) / (log(s+1) + L) with L the declared decay rate
    limsup(-log(beta_n)/(n-1)); for geometric sequences L = -log((s+1)beta)
    and the formula collapses to log(s+1)/log(1/beta).  The formula's
    hypothesis inf_n beta_n/(1 - sum_{k<n} beta_k) > 0 is checked on the
    first ``prefix`` terms (a certificate for the prefix only; the declared
    rule is trusted for the tail).
    """
    s = spec.s
    fam = spec.family
    if isinstance(fam, Geometric):
        if scalar_cmp(fam.l, ZERO) > 0:
            return ONE
        return canon_value(sp.log(s + 1) / (-sp.log(sym(fam.beta))))
    if fam.total is None:
        raise ConditionUnverified(
            f"{fam.label!r}: limit measure unknown; declare a total sum"
        )
    l = canon_value(1 - ensure_scalar(fam.total))
    if scalar_cmp(l, ZERO) > 0:
        if scalar_cmp(l, ONE) >= 0:
            raise OutOfRange(f"{fam.label!r}: limit measure {l} outside [0, 1)")
        return ONE
    if fam.decay_rate is None:
        raise ConditionUnverified(
            f"{fam.label!r}: no decay-rate rule declared; a finite prefix cannot certify the limsup"
        )
    for n in range(1, prefix + 1):
        term = beta_term(spec.seq, n)
        rem_before = 1 - partial_sum(spec.seq, n - 1)
        if scalar_cmp(term, ZERO) <= 0 or scalar_cmp(rem_before, ZERO) <= 0:
            raise ConditionUnverified(
                f"{fam.label!r}: term/remainder ratio not positive at stage {n}"
            )
    L = sym(ensure_scalar(fam.decay_rate))
    if scalar_cmp(L, ZERO) < 0:
        raise OutOfRange("decay_rate must be >= 0 (beta_n < 1)")
    return canon_value(sp.log(s + 1) / (sp.log(s + 1) + L))


def estimate_decay_rate(spec: CantorSpec, prefix: int = 64) -> float:
    """Numeric prefix estimate of limsup(-log(beta_n)/(n-1)).

    Diagnostic only: returns the max of -log(beta_n)/(n-1) over the tail
    half of the checked prefix.  Never a substitute for a declared rule.
    """
    import math

    from .scalars import to_float

    vals = []
    for n in range(max(2, prefix // 2), prefix + 1):
        b = to_float(beta_term(spec.seq, n))
        vals.append(-math.log(b) / (n - 1))
    return float(max(vals))


def solve_beta_for_dim(r: Scalar, s: int = 1) -> Scalar:
    """The geometric ratio beta with dim C(s, beta, 0) = r, r in (0, 1).

    beta = (s+1)**(-1/r); rational for e.g. r = 1/k, a canonical sympy
    power otherwise.
    """
    r = ensure_scalar(r)
    if s < 1:
        raise OutOfRange("s must be >= 1")
    if scalar_cmp(r, ZERO) <= 0 or scalar_cmp(r, ONE) >= 0:
        raise OutOfRange(f"solvable range is 0 < r < 1, got {r}")
    if is_rational(r):
        e = -1 / r
    else:
        e = canon_value(-1 / sym(r))
    return make_pow(s + 1, e)

"""Uniform Cantor sets: removing sequences, stage covers, closed-form dims.

The fixed numerical cases here were all derived by hand from the defining
recurrences before the implementation existed; they are the oracle layer
everything else leans on.
"""

from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from fractalforge.cantor import (
    Explicit,
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
from fractalforge.errors import (
    CapExceeded,
    ConditionUnverified,
    NoClosedForm,
    OutOfRange,
)
from fractalforge.scalars import scalar_cmp, scalar_eq, to_float

MT = uniform_cantor(1, Fraction(1, 3), 0)  # middle thirds
FAT = uniform_cantor(1, Fraction(1, 4), Fraction(1, 2))
S3 = uniform_cantor(3, Fraction(1, 8), Fraction(3, 4))


# -- removing sequence terms -------------------------------------------------


def test_beta_terms():
    assert beta_term(MT.seq, 1) == Fraction(1, 3)
    # 2^n/(2*3^n) at n=3: the stage removes 4 gaps of length 1/27
    assert beta_term(MT.seq, 3) == Fraction(4, 27)
    assert beta_term(FAT.seq, 2) == Fraction(1, 8)


def test_partial_sums():
    assert partial_sum(MT.seq, 0) == 0
    assert partial_sum(MT.seq, 2) == Fraction(5, 9)
    assert partial_sum(FAT.seq, 10) == Fraction(1, 2) - Fraction(1, 2**11)


def test_partial_sum_is_term_sum():
    for spec in (MT, FAT, S3):
        acc = Fraction(0)
        for n in range(1, 9):
            acc += beta_term(spec.seq, n)
            assert partial_sum(spec.seq, n) == acc


def test_terms_positive_sums_increase_to_target():
    for spec, l in ((MT, Fraction(0)), (FAT, Fraction(1, 2)), (S3, Fraction(3, 4))):
        prev = Fraction(0)
        for n in range(1, 12):
            assert beta_term(spec.seq, n) > 0
            cur = partial_sum(spec.seq, n)
            assert cur > prev
            assert cur < 1 - l
            prev = cur


# -- spec invariants of the construction ---------------------------------------


def test_stage_covers_fixed_cases():
    c = stage_cover(MT, 1)
    assert [(iv.lo, iv.hi) for iv in c.intervals] == [
        (0, Fraction(1, 3)),
        (Fraction(2, 3), 1),
    ]
    c0 = stage_cover(MT, 0)
    assert [(iv.lo, iv.hi) for iv in c0.intervals] == [(0, 1)]
    cf = stage_cover(FAT, 1)
    assert [(iv.lo, iv.hi) for iv in cf.intervals] == [
        (0, Fraction(3, 8)),
        (Fraction(5, 8), 1),
    ]


def test_stage_measures():
    assert stage_measure(MT, 2) == Fraction(4, 9)
    assert stage_measure(MT, 0) == 1
    assert stage_measure(FAT, 10) == Fraction(1, 2) + Fraction(1, 2**11)


def test_limit_measures():
    assert limit_measure(MT) == 0
    assert limit_measure(FAT) == Fraction(1, 2)
    assert limit_measure(S3) == Fraction(3, 4)


def test_cover_cap():
    with pytest.raises(CapExceeded):
        stage_cover(MT, 40)


# -- dimensions ----------------------------------------------------------------


def test_hausdorff_dims():
    d = hausdorff_dim_uniform(MT)
    assert scalar_eq(d, sp.log(2) / sp.log(3))
    assert abs(to_float(d) - 0.6309297535714574) < 1e-15
    assert hausdorff_dim_uniform(FAT) == 1
    # log 3 / log 9 collapses to the exact rational 1/2
    half = hausdorff_dim_uniform(uniform_cantor(2, Fraction(1, 9), 0))
    assert half == Fraction(1, 2)


def test_solve_beta_for_dim():
    assert solve_beta_for_dim(Fraction(1, 2), 1) == Fraction(1, 4)
    assert solve_beta_for_dim(Fraction(1, 3), 1) == Fraction(1, 8)
    assert solve_beta_for_dim(Fraction(1, 2), 3) == Fraction(1, 16)
    with pytest.raises(OutOfRange):
        solve_beta_for_dim(Fraction(1), 1)
    with pytest.raises(OutOfRange):
        solve_beta_for_dim(Fraction(0), 1)


def test_solve_round_trip_exact():
    for r in (Fraction(1, 2), Fraction(2, 3), Fraction(3, 8), Fraction(5, 7)):
        for s in (1, 2, 3):
            spec = uniform_cantor(s, solve_beta_for_dim(r, s), 0)
            assert scalar_cmp(hausdorff_dim_uniform(spec), r) == 0


def test_beta_range_validation():
    with pytest.raises(OutOfRange):
        uniform_cantor(1, Fraction(1, 2), 0)
    with pytest.raises(OutOfRange):
        uniform_cantor(1, Fraction(1, 3), 1)
    with pytest.raises(OutOfRange):
        uniform_cantor(0, Fraction(1, 3), 0)


# -- explicit sequences cross-checked against the geometric closed forms --------


def _explicit_like(spec):
    seq = spec.seq
    return explicit_cantor(
        seq.s,
        Explicit(
            term=lambda n: beta_term(seq, n),
            partial=lambda n: partial_sum(seq, n),
            total=1 - seq.family.l,
            label="mirror",
        ),
    )


def test_explicit_matches_geometric():
    mirror = _explicit_like(MT)
    for n in range(0, 7):
        assert stage_cover(mirror, n).intervals == stage_cover(MT, n).intervals
    assert limit_measure(mirror) == 0


def test_explicit_dim_needs_declared_rate():
    mirror = _explicit_like(MT)
    with pytest.raises(ConditionUnverified):
        hausdorff_dim_uniform(mirror)


def test_explicit_dim_with_rate():
    seq = MT.seq
    mirror = explicit_cantor(
        1,
        Explicit(
            term=lambda n: beta_term(seq, n),
            partial=lambda n: partial_sum(seq, n),
            total=Fraction(1),
            decay_rate=sp.log(3) - sp.log(2),  # -log(beta_n)/(n-1) -> log(3/2)
            label="mt-expl",
        ),
    )
    d = hausdorff_dim_uniform(mirror)
    assert scalar_eq(d, sp.log(2) / sp.log(3))


def test_explicit_without_total_has_no_measure():
    seq = MT.seq
    mirror = explicit_cantor(
        1,
        Explicit(
            term=lambda n: beta_term(seq, n),
            partial=lambda n: partial_sum(seq, n),
        ),
    )
    with pytest.raises(NoClosedForm):
        limit_measure(mirror)


# -- hypothesis: construction identities over random geometric specs ------------

specs = st.builds(
    lambda s, bnum, bden, lnum: uniform_cantor(
        s,
        Fraction(bnum, (s + 1) * (bnum + bden)),  # always in (0, 1/(s+1))
        Fraction(lnum, 64),
    ),
    st.integers(min_value=1, max_value=3),
    st.integers(min_value=1, max_value=30),
    st.integers(min_value=1, max_value=30),
    st.integers(min_value=0, max_value=63),
)


@settings(max_examples=40, deadline=None)
@given(specs, st.integers(min_value=1, max_value=5))
def test_split_identity(spec, n):
    # delta_{n-1} = (s+1) delta_n + s g_n ties child lengths to gap lengths
    s = spec.s
    lhs = delta_length(spec, n - 1)
    rhs = (s + 1) * delta_length(spec, n) + s * gap_length(spec, n)
    assert lhs == rhs
    assert gap_length(spec, n) > 0


@settings(max_examples=25, deadline=None)
@given(specs, st.integers(min_value=0, max_value=5))
def test_cover_census(spec, n):
    cover = stage_cover(spec, n)
    s = spec.s
    assert len(cover.intervals) == (s + 1) ** n
    want = delta_length(spec, n)
    total = Fraction(0)
    prev_hi = None
    for iv in cover.intervals:
        assert iv.hi - iv.lo == want
        if prev_hi is not None:
            assert iv.lo > prev_hi  # strictly positive gaps
        prev_hi = iv.hi
        total += iv.hi - iv.lo
    assert total == stage_measure(spec, n)


@settings(max_examples=20, deadline=None)
@given(specs, st.integers(min_value=1, max_value=5))
def test_cover_nesting(spec, n):
    outer = stage_cover(spec, n - 1).intervals
    inner = stage_cover(spec, n).intervals
    s = spec.s
    for i, iv in enumerate(inner):
        parent = outer[i // (s + 1)]
        assert parent.lo <= iv.lo and iv.hi <= parent.hi


@settings(max_examples=20, deadline=None)
@given(specs)
def test_natural_scale_identity(spec):
    # for l = 0 the stage ratio equals the dimension at every stage;
    # rebuild with l forced to 0
    import math

    thin = uniform_cantor(spec.s, spec.family.beta, 0)
    d = to_float(hausdorff_dim_uniform(thin))
    for n in (1, 2, 3):
        eps = to_float(delta_length(thin, n))
        ratio = math.log((spec.s + 1) ** n) / -math.log(eps)
        assert abs(ratio - d) < 1e-9

"""End-to-end acceptance gate.

Each test prints exactly one PASS/FAIL line (run with -s to see them all
on success; a FAIL line accompanies the pytest failure either way).
"""

import math
import random
import time
from fractions import Fraction

import pytest
import sympy as sp

from fractalforge.boxdim import (
    GridSpec,
    box_count,
    box_count_brute,
    box_dim_fit,
    grid_over,
    stage_ratios,
)
from fractalforge.build import ConstructionRequest, lemma32, thm34, nonfractal_family
from fractalforge.calculus import analytic_hausdorff_dim, is_fractal
from fractalforge.cantor import (
    delta_length,
    stage_cover,
    stage_measure,
    uniform_cantor,
)
from fractalforge.cli import cli_main
from fractalforge.errors import Infeasible
from fractalforge.expr import (
    AffineAxis,
    CantorPrim,
    Product,
    UnionFinite,
    expr_stage_cover,
)
from fractalforge.frx import emit_frx, parse_frx
from fractalforge.indexset import arithmetic_set, first_difference
from fractalforge.scalars import scalar_cmp, scalar_eq

MT = CantorPrim(uniform_cantor(1, Fraction(1, 3), 0))
FAT = CantorPrim(uniform_cantor(1, Fraction(1, 4), Fraction(1, 2)))
MT_SQUARE = Product((MT, MT))

GOLDEN = "tests/golden"


def _report(num, label, body):
    try:
        body()
    except BaseException:
        print(f"FAIL criterion {num}: {label}")
        raise
    print(f"PASS criterion {num}: {label}")


# -- 1: middle-third Cantor set ---------------------------------------------------


def test_criterion_1_middle_third():
    def body():
        t0 = time.perf_counter()
        dim = analytic_hausdorff_dim(MT)
        assert scalar_eq(dim, sp.log(2) / sp.log(3))
        fit = box_dim_fit(MT, range(1, 9))
        want = math.log(2) / math.log(3)
        assert abs(fit.slope - want) <= 1e-12
        elapsed = time.perf_counter() - t0
        assert elapsed < 1.0, f"took {elapsed:.3f}s"

    _report(1, "middle-third dim log2/log3, natural fit within 1e-12, under 1s", body)


# -- 2: fat Cantor set --------------------------------------------------------------


def test_criterion_2_fat_cantor():
    def body():
        assert analytic_hausdorff_dim(FAT) == Fraction(1)
        rep = is_fractal(FAT)
        assert rep.lebesgue_measure == Fraction(1, 2)
        vol10 = expr_stage_cover(FAT, 10).volume()
        assert vol10 == Fraction(1, 2) + Fraction(1, 2**11)
        ratios = [r for _, r in stage_ratios(FAT, range(1, 11))]
        assert all(b > a for a, b in zip(ratios, ratios[1:]))
        assert ratios[-1] > 0.90

    _report(2, "fat Cantor exact dim/measure/volume, ratios rise past 0.90", body)


# -- 3: Cantor dust square ------------------------------------------------------------


def test_criterion_3_cantor_square():
    def body():
        t0 = time.perf_counter()
        dim = analytic_hausdorff_dim(MT_SQUARE)
        assert scalar_eq(dim, 2 * sp.log(2) / sp.log(3))
        for k in range(1, 7):
            cov = expr_stage_cover(MT_SQUARE, k)
            grid = grid_over(MT_SQUARE, Fraction(1, 3**k))
            assert box_count(cov, grid) == 4**k
        fit = box_dim_fit(MT_SQUARE, range(1, 7))
        want = 2 * math.log(2) / math.log(3)
        assert abs(fit.slope - want) <= 1e-12
        elapsed = time.perf_counter() - t0
        assert elapsed < 5.0, f"took {elapsed:.3f}s"

    _report(3, "dust square counts 4^k, dim 2log2/log3, under 5s", body)


# -- 4: constructor contract sweep ------------------------------------------------------


R_GRID = [Fraction(1, 3), Fraction(1, 2), Fraction(3, 4), Fraction(1), Fraction(3, 2), Fraction(2)]
L_GRID = [Fraction(0), Fraction(1, 2), Fraction(3, 2)]


def _sweep_cells():
    for r in R_GRID:
        lo_n = math.ceil(r)
        for l in L_GRID:
            for n in (lo_n, lo_n + 1):
                yield r, l, n


def _feasible(r, l, n):
    return l == 0 or r == n


def test_criterion_4_constructor_sweep():
    def body():
        feasible = infeasible = 0
        for r, l, n in _sweep_cells():
            req = ConstructionRequest(r=r, l=l, n=n, prune_seed=17)
            if not _feasible(r, l, n):
                with pytest.raises(Infeasible):
                    thm34(req)
                infeasible += 1
                continue
            rep = is_fractal(thm34(req))
            want_dim = r if l == 0 else Fraction(n)
            assert scalar_eq(rep.hausdorff_dim, want_dim), (r, l, n)
            assert scalar_cmp(rep.lebesgue_measure, l) == 0, (r, l, n)
            assert rep.inductive_dim == 0, (r, l, n)
            assert rep.is_fractal, (r, l, n)
            feasible += 1
        assert feasible == 16 and infeasible == 20

    _report(4, "36-cell sweep: exact dim/measure/ind-dim, DNE cells rejected", body)


# -- 5: non-fractal family ---------------------------------------------------------------


def test_criterion_5_nonfractal_family():
    def body():
        for n in (1, 2, 3):
            for seed in range(10):
                rep = is_fractal(nonfractal_family(n, prune_seed=seed))
                assert rep.hausdorff_dim == Fraction(n)
                assert rep.inductive_dim == n
                assert not rep.is_fractal

    _report(5, "non-fractal family: dim_H = dim_ind = n over 3 x 10 seeds", body)


# -- 6: oracle equivalence ----------------------------------------------------------------


def _random_case(rng):
    kind = rng.choice(["mt", "fat", "s2", "shift", "square", "union"])
    if kind == "mt":
        e, max_stage = MT, 5
    elif kind == "fat":
        e, max_stage = FAT, 5
    elif kind == "s2":
        e, max_stage = CantorPrim(uniform_cantor(2, Fraction(1, 5), 0)), 4
    elif kind == "shift":
        e = AffineAxis(
            (Fraction(rng.choice([1, 2, 3]), rng.choice([1, 2])),),
            (Fraction(rng.randint(-2, 2), 3),),
            rng.choice([MT, FAT]),
        )
        max_stage = 4
    elif kind == "square":
        e, max_stage = Product((MT, FAT)), 2
    else:
        e = UnionFinite(
            (MT, AffineAxis((Fraction(1),), (Fraction(3, 2),), FAT))
        )
        max_stage = 4
    stage = rng.randint(0, max_stage)
    den = rng.randint(2, 64) if e.ndim == 1 else rng.randint(2, 24)
    eps = Fraction(1, den)
    origin = tuple(Fraction(rng.randint(-5, 5), 7) for _ in range(e.ndim))
    return e, stage, GridSpec(eps, origin)


def test_criterion_6_oracle_equivalence():
    def body():
        rng = random.Random(20260818)
        mismatches = 0
        for i in range(199):
            e, stage, grid = _random_case(rng)
            cov = expr_stage_cover(e, stage)
            if box_count(cov, grid) != box_count_brute(cov, grid):
                mismatches += 1
        # one near-cap one-dimensional grid
        cov = expr_stage_cover(MT, 1)
        grid = GridSpec(Fraction(1, 999_983), (Fraction(-1, 13),))
        if box_count(cov, grid) != box_count_brute(cov, grid):
            mismatches += 1
        assert mismatches == 0

    _report(6, "fast box_count equals brute enumeration on 200 random grids", body)


# -- 7: distinctness ------------------------------------------------------------------------


def _covers_differ(a, b, stages, truncation=None):
    for k in stages:
        ca = expr_stage_cover(a, k, truncation=truncation)
        cb = expr_stage_cover(b, k, truncation=truncation)
        if set(ca.boxes) != set(cb.boxes):
            return True
    return False


def test_criterion_7_distinctness():
    def body():
        collisions = 0
        # 25 pairs: same request, adjacent prune seeds
        for i in range(25):
            a = thm34(ConstructionRequest(r=Fraction(3, 2), l=0, n=2,
                                          prune_seed=2 * i, truncation=2))
            b = thm34(ConstructionRequest(r=Fraction(3, 2), l=0, n=2,
                                          prune_seed=2 * i + 1, truncation=2))
            if not _covers_differ(a, b, stages=(1, 2, 3), truncation=2):
                collisions += 1
        # 25 pairs: index sets first differing below the truncation depth
        for i in range(25):
            gap = 2 + i % 4
            ia = arithmetic_set(1 + i % gap, gap)
            ib = arithmetic_set(1 + (i + 1) % gap, gap)
            assert first_difference(ia, ib) <= 6
            a = lemma32(Fraction(1, 2), 0, ia, truncation=6)
            b = lemma32(Fraction(1, 2), 0, ib, truncation=6)
            if not _covers_differ(a, b, stages=(0,), truncation=6):
                collisions += 1
        assert collisions == 0

    _report(7, "50 seed/index-set pairs give distinct covers, zero collisions", body)


# -- 8: invariant suite -----------------------------------------------------------------------


MAX_STAGE_FOR_S = {1: 8, 2: 7, 3: 6}


def test_criterion_8_invariant_suite():
    def body():
        rng = random.Random(8241)
        for case in range(100):
            s = rng.choice([1, 1, 1, 2, 2, 3])
            num = rng.randint(1, 30)
            den = rng.randint(1, 30)
            beta = Fraction(num, (s + 1) * (num + den))
            l = rng.choice([Fraction(0), Fraction(0), Fraction(rng.randint(1, 9), 10)])
            spec = uniform_cantor(s, beta, l)
            prev = None
            for n in range(0, MAX_STAGE_FOR_S[s] + 1):
                cov = stage_cover(spec, n)
                ivs = cov.intervals
                assert cov.count == (s + 1) ** n
                want_len = delta_length(spec, n)
                assert all(iv.hi - iv.lo == want_len for iv in ivs)
                assert all(
                    ivs[i].hi <= ivs[i + 1].lo for i in range(len(ivs) - 1)
                ), "intervals out of order or overlapping"
                if prev is not None:
                    for i, iv in enumerate(ivs):
                        parent = prev[i // (s + 1)]
                        assert parent.lo <= iv.lo and iv.hi <= parent.hi
                total = sum((iv.hi - iv.lo for iv in ivs), Fraction(0))
                assert total == stage_measure(spec, n)
                prev = ivs

    _report(8, "nesting/disjointness/counts/lengths/measure on 100 random specs", body)


# -- 9: DSL round-trip and golden files ----------------------------------------------------------


def test_criterion_9_roundtrip_and_goldens(tmp_path):
    def body():
        for r, l, n in _sweep_cells():
            if not _feasible(r, l, n):
                continue
            e = thm34(ConstructionRequest(r=r, l=l, n=n, prune_seed=17))
            assert parse_frx(emit_frx(e)) == e, (r, l, n)

        mt_src = tmp_path / "mt.frx"
        mt_src.write_text("cantor(s=1, beta=1/3, l=0)\n")
        sq_src = tmp_path / "sq.frx"
        sq_src.write_text(
            "product(cantor(s=1, beta=1/3, l=0), cantor(s=1, beta=1/3, l=0))\n"
        )
        outputs = [
            (["cover", str(mt_src), "--stage", "3", "--out"],
             tmp_path / "mt.csv", f"{GOLDEN}/middle_third_stage3.csv"),
            (["cover", str(sq_src), "--stage", "2", "--out"],
             tmp_path / "sq.csv", f"{GOLDEN}/cantor_square_stage2.csv"),
            (["render", str(sq_src), "--stage", "3", "--resolution", "81", "--out"],
             tmp_path / "sq.pgm", f"{GOLDEN}/cantor_square_stage3_res81.pgm"),
        ]
        for argv, fresh, golden in outputs:
            assert cli_main(argv + [str(fresh)]) == 0
            assert fresh.read_bytes() == open(golden, "rb").read(), golden

    _report(9, "parse-emit identity on sweep outputs; golden CSV/PGM byte-equal", body)

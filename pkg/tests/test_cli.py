"""Command-line surface: subcommands, exit codes, and deterministic outputs."""

import json

import pytest

from fractalforge.cli import cli_main

MT_TEXT = "cantor(s=1, beta=1/3, l=0)\n"
SQ_TEXT = "product(cantor(s=1, beta=1/3, l=0), cantor(s=1, beta=1/3, l=0))\n"


@pytest.fixture
def mt_file(tmp_path):
    p = tmp_path / "mt.frx"
    p.write_text(MT_TEXT)
    return str(p)


@pytest.fixture
def sq_file(tmp_path):
    p = tmp_path / "sq.frx"
    p.write_text(SQ_TEXT)
    return str(p)


def run(capsys, argv):
    code = cli_main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- eval ------------------------------------------------------------------------


def test_eval_text_report(capsys, mt_file):
    code, out, _ = run(capsys, ["eval", mt_file])
    assert code == 0
    assert "hausdorff_dim: log(2)/log(3) ~ 0.630929753571" in out
    assert "inductive_dim: 0" in out
    assert "measure: 0" in out
    assert "fractal: true" in out
    assert "trace:" in out


def test_eval_json_report(capsys, mt_file):
    code, out, _ = run(capsys, ["eval", mt_file, "--report", "json"])
    assert code == 0
    d = json.loads(out)
    assert d["hausdorff_dim"]["exact"] == "log(2)/log(3)"
    assert abs(d["hausdorff_dim"]["float"] - 0.6309297535714574) < 1e-15
    assert d["inductive_dim"] == 0
    assert d["measure"]["exact"] == "0"
    assert d["fractal"] is True
    assert isinstance(d["trace"], list) and d["trace"]


def test_eval_parse_error_exits_2(capsys, tmp_path):
    p = tmp_path / "bad.frx"
    p.write_text("cantor(s=1, beta=1/2, l=0)\n")
    code, _, err = run(capsys, ["eval", str(p)])
    assert code == 2
    assert "beta" in err


def test_eval_missing_file_exits_2(capsys, tmp_path):
    code, _, err = run(capsys, ["eval", str(tmp_path / "nope.frx")])
    assert code == 2


# -- construct -------------------------------------------------------------------


def test_construct_then_eval_main_family(capsys, tmp_path):
    out_path = str(tmp_path / "f.frx")
    code, _, _ = run(
        capsys,
        ["construct", "thm34", "--r", "3/2", "--l", "0", "--n", "2",
         "--seed", "42", "--emit", out_path],
    )
    assert code == 0
    code, out, _ = run(capsys, ["eval", out_path, "--report", "json"])
    assert code == 0
    d = json.loads(out)
    assert d["hausdorff_dim"]["exact"] == "3/2"
    assert d["measure"]["exact"] == "0"
    assert d["fractal"] is True
    assert d["inductive_dim"] == 0


def test_construct_infeasible_exits_3(capsys, tmp_path):
    code, _, err = run(
        capsys,
        ["construct", "lemma33", "--r", "3/2", "--l", "1/2", "--n", "2",
         "--emit", str(tmp_path / "x.frx")],
    )
    assert code == 3
    assert "DNE" in err


def test_construct_nonfractal_needs_no_r(capsys, tmp_path):
    out_path = str(tmp_path / "nf.frx")
    code, _, _ = run(
        capsys, ["construct", "nonfractal", "--n", "2", "--seed", "5", "--emit", out_path]
    )
    assert code == 0
    code, out, _ = run(capsys, ["eval", out_path, "--report", "json"])
    d = json.loads(out)
    assert d["fractal"] is False
    assert d["measure"]["exact"] == "1"


def test_construct_lemma_without_r_exits_2(capsys, tmp_path):
    code, _, err = run(
        capsys, ["construct", "lemma31", "--emit", str(tmp_path / "y.frx")]
    )
    assert code == 2


def test_construct_emitted_text_reparses(capsys, tmp_path):
    out_path = tmp_path / "l32.frx"
    code, _, _ = run(
        capsys,
        ["construct", "lemma32", "--r", "1/2", "--l", "0",
         "--index", "{2; period=01}", "--emit", str(out_path)],
    )
    assert code == 0
    text = out_path.read_text()
    assert text.endswith("\n")
    assert "thin_blocks" in text and "{2; period=01}" in text


# -- cover -----------------------------------------------------------------------


def test_cover_csv_exact_and_deterministic(capsys, mt_file, tmp_path):
    a, b = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    assert run(capsys, ["cover", mt_file, "--stage", "2", "--out", a])[0] == 0
    assert run(capsys, ["cover", mt_file, "--stage", "2", "--out", b])[0] == 0
    blob = open(a, "rb").read()
    assert blob == open(b, "rb").read()
    lines = blob.decode().splitlines()
    assert lines[0] == "ax0_lo,ax0_hi"
    assert lines[1] == "0,1/9"
    assert len(lines) == 1 + 4


def test_cover_2d_has_four_columns(capsys, sq_file, tmp_path):
    out = str(tmp_path / "sq.csv")
    assert run(capsys, ["cover", sq_file, "--stage", "1", "--out", out])[0] == 0
    lines = open(out).read().splitlines()
    assert lines[0] == "ax0_lo,ax0_hi,ax1_lo,ax1_hi"
    assert len(lines) == 1 + 4


# -- boxdim ----------------------------------------------------------------------


def test_boxdim_table_and_slope(capsys, mt_file):
    code, out, _ = run(capsys, ["boxdim", mt_file, "--stages", "1..8"])
    assert code == 0
    assert "slope: 0.630929753571" in out
    # the ratio column is constant at the analytic dimension
    rows = [line.split() for line in out.splitlines() if line.strip()[:1].isdigit()]
    assert len(rows) == 8
    assert {r[-1] for r in rows} == {"0.630930"}


def test_boxdim_dyadic_flag(capsys, mt_file):
    code, out, _ = run(capsys, ["boxdim", mt_file, "--stages", "1..6", "--grid", "dyadic"])
    assert code == 0
    assert "slope:" in out


def test_boxdim_bad_stage_range_exits_2(capsys, mt_file):
    code, _, err = run(capsys, ["boxdim", mt_file, "--stages", "5..1"])
    assert code == 2


# -- verify ----------------------------------------------------------------------


def test_verify_pass_exit_0(capsys, mt_file):
    code, out, _ = run(capsys, ["verify", mt_file, "--stages", "1..6"])
    assert code == 0
    lines = out.strip().splitlines()
    assert all(line.startswith("PASS ") for line in lines[:-1])
    assert lines[-1] == "verdict: PASS"


def test_verify_fail_exit_1(capsys, tmp_path):
    p = tmp_path / "cube.frx"
    p.write_text("cube(n=1)\n")
    code, out, _ = run(capsys, ["verify", str(p), "--stages", "1..3"])
    assert code == 1
    assert "FAIL boxdim:" in out
    assert out.strip().splitlines()[-1] == "verdict: FAIL"


# -- render ----------------------------------------------------------------------


def test_render_pgm_deterministic(capsys, sq_file, tmp_path):
    a, b = str(tmp_path / "a.pgm"), str(tmp_path / "b.pgm")
    assert run(capsys, ["render", sq_file, "--stage", "2", "--resolution", "81", "--out", a])[0] == 0
    assert run(capsys, ["render", sq_file, "--stage", "2", "--resolution", "81", "--out", b])[0] == 0
    blob = open(a, "rb").read()
    assert blob == open(b, "rb").read()
    assert blob.startswith(b"P5\n81 81\n255\n")
    assert len(blob) == len(b"P5\n81 81\n255\n") + 81 * 81
    body = blob[len(b"P5\n81 81\n255\n"):]
    # 16 stage-2 squares of side 1/9, each covering a 9x9 pixel block
    assert body.count(b"\x00") == 16 * 81
    assert set(body) == {0, 255}


def test_render_rejects_1d_exits_2(capsys, mt_file, tmp_path):
    code, _, err = run(
        capsys, ["render", mt_file, "--stage", "2", "--resolution", "64",
                 "--out", str(tmp_path / "x.pgm")]
    )
    assert code == 2


def test_render_resolution_cap_exits_4(capsys, sq_file, tmp_path):
    code, _, err = run(
        capsys, ["render", sq_file, "--stage", "1", "--resolution", "5000",
                 "--out", str(tmp_path / "x.pgm")]
    )
    assert code == 4


# -- argument parsing edge cases ---------------------------------------------------


def test_single_stage_spec(capsys, mt_file, tmp_path):
    out = str(tmp_path / "c.csv")
    code, _, _ = run(capsys, ["cover", mt_file, "--stage", "0", "--out", out])
    assert code == 0
    assert open(out).read().splitlines()[1] == "0,1"


def test_unknown_subcommand_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli_main(["frobnicate"])
    assert exc.value.code == 2

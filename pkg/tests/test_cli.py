"""Command-line interface: subcommands, files, exit codes."""

import json

import pytest

from projcirc.cli import run

DET = """\
blocks x:2 y:2
field gf 3
g0 = input x 0
g1 = input x 1
g2 = input y 0
g3 = input y 1
g4 = prod 1*g0 2*g3
g5 = prod 1*g1 2*g2
g6 = sum 1*g4 2*g5
outputs g6
"""


@pytest.fixture
def det_file(tmp_path):
    p = tmp_path / "det.slp"
    p.write_text(DET)
    return str(p)


def test_validate_ok(det_file, capsys):
    assert run(["validate", det_file]) == 0
    assert "homogeneous=yes" in capsys.readouterr().out


def test_validate_negative_exit_code(tmp_path):
    bad = tmp_path / "bad.slp"
    bad.write_text(
        "blocks x:2\nfield q\ng0 = input x 0\ng1 = input x 1\n"
        "g2 = prod 1*g0 1*g1\ng3 = sum 1*g0 1*g2\noutputs g3\n"
    )
    assert run(["validate", str(bad)]) == 1


def test_usage_error_exit_code(tmp_path):
    assert run(["validate", str(tmp_path / "missing.slp")]) == 2


def test_normalize_then_check(det_file, tmp_path):
    out = str(tmp_path / "nf.slp")
    assert run(["normalize", det_file, "-o", out]) == 0
    assert run(["check-nf", out]) == 0
    assert run(["pit", det_file, out]) == 0


def test_pit_unequal_exit(det_file, tmp_path, capsys):
    other = tmp_path / "other.slp"
    other.write_text(DET.replace("sum 1*g4 2*g5", "sum 1*g4 1*g5"))
    assert run(["pit", det_file, str(other)]) == 1
    assert "witness=" in capsys.readouterr().out


def test_universal_and_embed(det_file, tmp_path):
    phi = str(tmp_path / "phi.slp")
    assert run(["universal", "--n", "2", "--m", "2", "--r1", "1", "--r2", "1",
                "--s", "8", "--field", "gf:3", "-o", phi]) == 0
    tau = str(tmp_path / "tau.txt")
    assert run(["embed", det_file, "--n", "2", "--m", "2", "--r1", "1", "--r2", "1",
                "--s", "8", "--field", "gf:3", "-o", tau]) == 0
    header = open(tau).readline()
    assert header.startswith("tau ")


def test_resource_limit_exit_code(tmp_path):
    out = str(tmp_path / "phi.slp")
    code = run(["--max-gates", "10", "universal", "--n", "2", "--m", "2",
                "--r1", "2", "--r2", "2", "--s", "16", "-o", out])
    assert code == 3


def test_budget_exceeded_exit_code(tmp_path):
    out = str(tmp_path / "pts.txt")
    code = run(["--max-points", "10", "enumerate", "--ambient", "3,3", "--q", "5", "-o", out])
    assert code == 3


def test_zeroset_project_roundtrip(tmp_path):
    fam = str(tmp_path / "fam.slp")
    assert run(["family", "point", "--n", "2", "--field", "q", "-o", fam]) == 0
    meta = json.loads(open(fam + ".meta.jsonl").readline())
    assert meta["family"] == "point"
    zs = str(tmp_path / "zs.txt")
    assert run(["zeroset", fam, "--q", "3", "-o", zs]) == 0
    assert open(zs).read().splitlines()[1] == "[1:0:0]"
    pr = str(tmp_path / "pr.txt")
    assert run(["project", zs, "--keep", "0", "-o", pr]) == 0


def test_eval_and_expand(det_file, capsys):
    assert run(["eval", det_file, "--point", "1,0;0,1"]) == 0
    # g4 carries an internal weight 2 on the y edge, so the value is 2
    assert capsys.readouterr().out.strip() == "2"
    assert run(["expand", det_file]) == 0
    out = capsys.readouterr().out
    assert out.startswith("output 0:")


def test_pair_cli(capsys):
    assert run(["pair", "--n", "3", "--m", "2"]) == 0
    k = int(capsys.readouterr().out.strip().split("=")[1])
    assert run(["pair", "--k", str(k)]) == 0
    assert capsys.readouterr().out.strip() == "n=3 m=2"


def test_stats_writes_csv_and_figures(tmp_path, capsys):
    csv_path = tmp_path / "stats.csv"
    figs = tmp_path / "figs"
    assert run(["stats", "--n", "2", "--m", "1", "--r1", "1", "--r2", "1", "--s", "4",
                "--csv", str(csv_path), "--plots", str(figs)]) == 0
    assert csv_path.read_text().startswith("degree_pair,level,")
    assert (figs / "level_profile.png").stat().st_size > 0
    assert (figs / "growth.png").stat().st_size > 0


def test_export_dot(det_file, tmp_path):
    out = tmp_path / "c.dot"
    assert run(["export-dot", det_file, "-o", str(out)]) == 0
    assert out.read_text().startswith("digraph")

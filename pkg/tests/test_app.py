"""Tests for the command-line interface"""
import json
import os
import struct

import pytest
from click.testing import CliRunner

from src.app import cli


@pytest.fixture(scope="module")
def table_path(tmp_path_factory):
    """Saved table shared by the read-only commands"""
    path = str(tmp_path_factory.mktemp("tables") / "h2000.hcn")
    result = CliRunner().invoke(cli, ["sieve", "--limit", "2000", "--out", path])
    assert result.exit_code == 0, result.output
    return path


@pytest.fixture
def runner():
    return CliRunner()


def test_sieve_command(runner, table_path):
    """Test the saved table file"""
    assert os.path.getsize(table_path) == 16 + 4 * 2000
    result = runner.invoke(cli, ["sieve", "--limit", "10", "--out", table_path + ".small"])
    assert result.exit_code == 0
    assert "sha256" in result.stdout


def test_sieve_independent_of_threads(runner, tmp_path):
    """Test byte-identical files for different thread counts"""
    one, four = str(tmp_path / "one.hcn"), str(tmp_path / "four.hcn")
    assert runner.invoke(cli, ["--threads", "1", "sieve", "--limit", "200000", "--out", one]).exit_code == 0
    result = runner.invoke(cli, ["sieve", "--limit", "200000", "--out", four], env={"HCN_THREADS": "4"})
    assert result.exit_code == 0
    with open(one, "rb") as a, open(four, "rb") as b:
        assert a.read() == b.read()


def test_value_command(runner, table_path):
    """Test exact values with and without a table"""
    result = runner.invoke(cli, ["value", "23"])
    assert result.exit_code == 0
    assert result.stdout.strip() == "H(23) = 3 (36/12)"

    result = runner.invoke(cli, ["value", "12", "--table", table_path])
    assert result.stdout.strip() == "H(12) = 4/3 (16/12)"

    result = runner.invoke(cli, ["value", "23", "--forms"])
    lines = result.stdout.splitlines()
    assert lines[1:] == ["  (1, 1, 6)  weight 12/12", "  (2, 1, 3)  weight 12/12",
                         "  (2, -1, 3)  weight 12/12"]

    result = runner.invoke(cli, ["value", "5000", "--table", table_path])
    assert result.exit_code == 2


def test_sum_command(runner, table_path, tmp_path):
    """Test the CSV report on stdout and in a file"""
    result = runner.invoke(cli, ["sum", "--ell", "1", "--limit", "23", "--table", table_path])
    assert result.exit_code == 0
    header, row = result.stdout.splitlines()
    assert header == "X,S_num,S_den,main,secondary,residual,residual2"
    assert row.startswith("23,27,2,")

    csv_path = str(tmp_path / "s.csv")
    result = runner.invoke(cli, ["sum", "--ell", "4", "--limit", "1000", "--table", table_path,
                                 "--grid", "geometric:10:10:3", "--csv", csv_path])
    assert result.exit_code == 0
    with open(csv_path) as f:
        assert [line.split(",")[0] for line in f.read().splitlines()] == ["X", "10", "100", "1000"]


def test_sum_errors(runner, table_path):
    """Test range and grid errors"""
    result = runner.invoke(cli, ["sum", "--ell", "1", "--limit", "5000", "--table", table_path])
    assert result.exit_code == 2
    result = runner.invoke(cli, ["sum", "--ell", "1", "--limit", "100", "--table", table_path,
                                 "--grid", "geometric:10:10:4"])
    assert result.exit_code == 2
    result = runner.invoke(cli, ["sum", "--ell", "1", "--limit", "100", "--table", "missing.hcn"])
    assert result.exit_code == 2


def test_smooth_command(runner, table_path):
    """Test the smoothed sum for a vanishing shift"""
    result = runner.invoke(cli, ["smooth", "--ell", "2", "--scale", "2", "--table", table_path])
    assert result.exit_code == 0
    document = json.loads(result.stdout)
    assert document["command"] == "smooth"
    assert document["summary"]["smooth_sum"] == 0
    assert document["summary"]["prediction"] == 0
    assert "wall_time" not in document

    result = runner.invoke(cli, ["smooth", "--ell", "1", "--scale", "100", "--table", table_path])
    assert result.exit_code == 2


def test_verify_passes(runner, table_path):
    """Test passing suites"""
    result = runner.invoke(cli, ["verify", "--suite", "vanishing", "--limit", "1000", "--table", table_path])
    assert result.exit_code == 0
    document = json.loads(result.stdout)
    assert document["summary"]["passed"] is True
    assert document["parameters"]["table_sha256"]

    result = runner.invoke(cli, ["verify", "--suite", "kronecker-hurwitz", "--limit", "400",
                                 "--table", table_path])
    assert result.exit_code == 0


def test_verify_r1_divisor_json(runner, tmp_path):
    """Test deterministic reports and the timing field"""
    result = runner.invoke(cli, ["verify", "--suite", "r1-divisor", "--limit", "50"])
    assert result.exit_code == 0
    document = json.loads(result.stdout)
    assert "wall_time" not in document
    assert document["rows"][0]["suite"] == "r1-divisor"
    assert document["summary"]["checked"] == 200
    assert runner.invoke(cli, ["verify", "--suite", "r1-divisor", "--limit", "50"]).stdout == result.stdout

    path = str(tmp_path / "reports" / "r1.json")
    result = runner.invoke(cli, ["verify", "--suite", "r1-divisor", "--limit", "10", "--json", path, "--timing"])
    assert result.exit_code == 0
    with open(path, encoding="utf-8") as f:
        saved = json.load(f)
    assert saved["command"] == "verify"
    assert saved["wall_time"] >= 0


def test_verify_detects_corrupted_payload(runner, tmp_path):
    """Test that a wrong cell makes the suite fail with status 1"""
    path = str(tmp_path / "bad.hcn")
    assert runner.invoke(cli, ["sieve", "--limit", "400", "--out", path]).exit_code == 0
    with open(path, "r+b") as f:
        f.seek(16 + 4 * (12 - 1))
        f.write(struct.pack("<I", 28))

    result = runner.invoke(cli, ["verify", "--suite", "kronecker-hurwitz", "--limit", "100", "--table", path])
    assert result.exit_code == 1
    document = json.loads(result.stdout)
    assert document["summary"]["passed"] is False
    assert 3 in document["rows"][0]["witnesses"]


def test_verify_rejects_corrupted_header(runner, tmp_path):
    """Test that an unreadable table exits with status 2"""
    path = str(tmp_path / "bad.hcn")
    assert runner.invoke(cli, ["sieve", "--limit", "400", "--out", path]).exit_code == 0
    with open(path, "r+b") as f:
        f.write(b"JUNK")
    result = runner.invoke(cli, ["verify", "--suite", "r3", "--limit", "100", "--table", path])
    assert result.exit_code == 2

    # Valid magic and version, impossible limit
    with open(path, "r+b") as f:
        f.write(struct.pack("<4sIQ", b"HCN1", 1, 2**62))
    result = runner.invoke(cli, ["verify", "--suite", "r3", "--limit", "100", "--table", path])
    assert result.exit_code == 2


def test_verify_needs_table(runner):
    """Test suites that read a Hurwitz table"""
    result = runner.invoke(cli, ["verify", "--suite", "r3", "--limit", "100"])
    assert result.exit_code == 2


def test_verify_moment_without_table(runner):
    """Test the moment suite sieving its own primitive table"""
    result = runner.invoke(cli, ["verify", "--suite", "moment", "--limit", "300"])
    assert result.exit_code == 0
    document = json.loads(result.stdout)
    assert document["rows"][0]["parameters"]["low_confidence"] == [1.0, 2.0]


def test_fit_command(runner, table_path):
    """Test the error-exponent fit and its failure modes"""
    result = runner.invoke(cli, ["fit", "--ell", "1", "--table", table_path])
    assert result.exit_code == 0
    document = json.loads(result.stdout)
    assert document["summary"]["c2"] == "1"
    assert len(document["parameters"]["grid"]) == 9
    assert document["parameters"]["grid"][-1] <= 1999

    assert runner.invoke(cli, ["fit", "--ell", "2", "--table", table_path]).exit_code == 2
    result = runner.invoke(cli, ["fit", "--ell", "1", "--table", table_path, "--grid", "linear:1"])
    assert result.exit_code == 2


def test_malformed_thread_env(runner, tmp_path):
    """Test a non-integer HCN_THREADS is a usage error"""
    path = str(tmp_path / "h.hcn")
    result = runner.invoke(cli, ["sieve", "--limit", "10", "--out", path], env={"HCN_THREADS": "many"})
    assert result.exit_code == 2
    assert not os.path.exists(path)


def test_sieve_reports_growth_constant(runner, tmp_path):
    """Test the growth constant line after sieving"""
    result = runner.invoke(cli, ["sieve", "--limit", "1000", "--out", str(tmp_path / "g.hcn")])
    assert result.exit_code == 0
    line = result.stdout.splitlines()[-1]
    assert line.startswith("Growth constant C = ")
    assert 0 < float(line.split("=")[1]) <= 2


def test_sum_backward(runner, table_path):
    """Test the backward form with the H(0) term"""
    result = runner.invoke(cli, ["sum", "--ell", "1", "--limit", "23", "--table", table_path, "--backward"])
    assert result.exit_code == 0
    assert result.stdout.splitlines() == ["X,S_num,S_den", "23,15,2"]

    # At X = ell only H(ell) H(0) = (1/3)(-1/12) remains
    result = runner.invoke(cli, ["sum", "--ell", "3", "--limit", "3", "--table", table_path, "--backward"])
    assert result.stdout.splitlines()[1] == "3,-1,36"


def test_fit_reports_perron_height(runner, table_path):
    """Test the truncation height in the fit summary"""
    result = runner.invoke(cli, ["fit", "--ell", "1", "--table", table_path])
    document = json.loads(result.stdout)
    top = document["parameters"]["grid"][-1]
    assert document["summary"]["perron_height"] == pytest.approx(top ** (1 / 3))


def test_dirichlet_command(runner, table_path):
    """Test the truncated series, its tail bound and the extrapolated value"""
    result = runner.invoke(cli, ["dirichlet", "--ell", "1", "--s", "3", "--terms", "1000", "--table", table_path])
    assert result.exit_code == 0
    summary = json.loads(result.stdout)["summary"]
    partial, tail, limit = summary["partial_sum"], summary["tail_bound"], summary["extrapolated"]
    assert partial[0] > 0 and partial[1] == 0
    assert tail > 0
    assert partial[0] < limit[0] <= partial[0] + tail

    result = runner.invoke(cli, ["dirichlet", "--ell", "2", "--s", "2+3j", "--terms", "100", "--table", table_path])
    assert json.loads(result.stdout)["summary"]["partial_sum"] == [0.0, 0.0]

    for args in (["--s", "1"], ["--s", "abc"], ["--s", "3", "--terms", "2000"]):
        options = ["dirichlet", "--ell", "1", "--terms", "100", "--table", table_path] + args
        assert runner.invoke(cli, options).exit_code == 2, args


def test_envelope_command(runner):
    """Test the G_{3/2} envelope calibration report"""
    result = runner.invoke(cli, ["envelope"])
    assert result.exit_code == 0
    document = json.loads(result.stdout)
    assert [row["height"] for row in document["rows"]] == [5.0, 10.0, 20.0]
    assert document["summary"]["non_increasing"] is True

    assert runner.invoke(cli, ["envelope", "--n1", "3", "--n2", "2"]).exit_code == 2
    assert runner.invoke(cli, ["envelope", "--heights", "a,b"]).exit_code == 2

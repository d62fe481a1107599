import csv
import math
import os
import subprocess

import pytest

CLI = os.environ.get("DEPBOUNDS_CLI")

pytestmark = pytest.mark.skipif(not CLI, reason="DEPBOUNDS_CLI not set")


def run(*args, expect=0):
    proc = subprocess.run([CLI, *args], capture_output=True, text=True)
    assert proc.returncode == expect, proc.stderr or proc.stdout
    return proc


def test_report_standard_uniform(tmp_path):
    out = tmp_path / "report.csv"
    run("report", "--d", "2", "--beta", "1", "--out", str(out))
    rows = {r["name"]: r for r in csv.DictReader(out.open())}
    assert float(rows["comonotone-lower"]["value"]) == pytest.approx(0.471405, abs=1e-6)
    assert float(rows["same-copula-upper"]["value"]) == pytest.approx(0.523599, abs=1e-6)
    assert rows["same-copula-upper"]["sharp"] == "true"
    assert float(rows["jensen-upper"]["value"]) == pytest.approx(0.577350, abs=1e-6)


def test_report_d3_and_d4():
    out = run("report", "--d", "3", "--beta", "1").stdout
    assert "0.66666666666666" in out
    out = run("report", "--d", "4", "--beta", "1").stdout
    assert "0.784112" in "".join(out.split())  # improved, non-sharp
    assert "0.81649658" in out  # Jensen


def test_estimate_quadrature_value():
    proc = run("estimate", "--f", "comonotone", "--g", "countermonotone",
               "--d", "2", "--beta", "1", "--method", "quadrature")
    value = float(proc.stdout.split()[1])
    expected = (math.sqrt(2) + math.log(1 + math.sqrt(2))) / (3 * math.sqrt(2))
    assert value == pytest.approx(expected, abs=1e-10)


def test_estimate_requires_seed_for_mc():
    run("estimate", "--f", "spherical", "--g", "spherical", "--method", "mc",
        expect=2)


def test_estimate_capability_error_is_exit_3():
    run("estimate", "--f", "spherical", "--g", "spherical",
        "--method", "quadrature", expect=3)


def test_usage_errors_are_exit_2():
    run("estimate", "--f", "nonsense", "--g", "comonotone", expect=2)
    run("figure", "--name", "bogus", expect=2)
    run("report", "--fm", "uniform:1", expect=2)


def test_byte_identical_outputs(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        run("estimate", "--f", "spherical", "--g", "spherical", "--d", "2",
            "--method", "mc", "--samples", "20000", "--seed", "9",
            "--out", str(out))
    assert a.read_bytes() == b.read_bytes()


def test_score_command():
    proc = run("score", "--f", "comonotone", "--y", "0,0", "--d", "2",
               "--method", "quadrature")
    value = float(proc.stdout.split()[1])
    assert value == pytest.approx(math.sqrt(2) / 3, abs=1e-10)


def test_optimize_roundtrip(tmp_path):
    copula_path = tmp_path / "best.txt"
    trace_path = tmp_path / "trace.csv"
    proc = run("optimize", "--objective", "min-scc", "--n", "8",
               "--restarts", "5", "--seed", "3",
               "--out-copula", str(copula_path), "--out-trace", str(trace_path))
    best = float(proc.stdout.split()[1])
    header = copula_path.read_text().splitlines()[0].split()
    assert header == ["8", "2", "8"]
    with trace_path.open() as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 5
    assert min(float(r["final_value"]) for r in rows) == pytest.approx(best)

    # the written copula round-trips through file: and scores identically
    proc2 = run("estimate", "--f", f"file:{copula_path}",
                "--g", f"file:{copula_path}", "--method", "exact")
    assert float(proc2.stdout.split()[1]) == pytest.approx(best, abs=1e-12)


def test_figure_parallel_support(tmp_path):
    out = tmp_path / "pts.csv"
    run("figure", "--name", "parallel-support", "--points", "64",
        "--out", str(out))
    with out.open() as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 64
    assert all(abs(abs(float(r["y"]) - float(r["x"])) - 0.5) < 1e-15
               for r in rows)


def test_figure_spherical(tmp_path):
    out = tmp_path / "disk.csv"
    run("figure", "--name", "spherical-scatter", "--points", "500",
        "--seed", "3", "--out", str(out))
    with out.open() as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 500
    assert all((2 * float(r["x"]) - 1) ** 2 + (2 * float(r["y"]) - 1) ** 2 < 1
               for r in rows)


def test_figure_counterex_requires_seed():
    run("figure", "--name", "counterex-left", expect=2)


def test_reproduce_passes():
    proc = run("reproduce", "--seed", "1")
    assert "all checks passed" in proc.stdout


def test_reproduce_exit_code_tracks_row_status(tmp_path):
    # a few rows are fixed-effort statistical tests; whatever the draw, the
    # exit code must mirror the printed verdict
    out = tmp_path / "rows.json"
    proc = subprocess.run(
        [CLI, "reproduce", "--seed", "2024", "--out", str(out), "--format",
         "json"], capture_output=True, text=True)
    if "all checks passed" in proc.stdout:
        assert proc.returncode == 0
    else:
        assert proc.returncode == 1
        assert "CHECKS FAILED" in proc.stdout
    assert out.exists()

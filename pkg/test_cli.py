#!/usr/bin/env python3
"""
End-to-end tests for the robinlab command line.
"""

import csv
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from main import EXIT_ERROR, EXIT_FAILED, EXIT_OK, main
from report_writer import csv_text, format_value
from studies.experiments import dirichlet_table


def _read_csv(path: Path) -> list[list[str]]:
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.reader(f))


def test_expand_writes_table(tmp_path):
    out = tmp_path / "expand.csv"
    archive = tmp_path / "series.txt"
    code = main(["expand", "--m", "0", "--n", "1", "--order", "3", "--csv", str(out), "--archive", str(archive)])
    assert code == EXIT_OK
    rows = _read_csv(out)
    assert rows[0] == ["k", "lambda_k", "g_k", "defect"]
    lam0, lam1 = float(rows[1][1]), float(rows[2][1])
    assert lam1 / lam0 == pytest.approx(2.0, rel=1e-6)
    assert archive.read_text(encoding="utf-8").startswith("k lambda_k g_k\n")


def test_converge_exit_code_and_header(tmp_path):
    out = tmp_path / "converge.csv"
    code = main(["converge", "--m", "0", "--n", "1", "--order", "1", "--delta", "0.1:0.0125:log6", "--csv", str(out)])
    assert code == EXIT_OK
    rows = _read_csv(out)
    assert rows[0] == ["delta", "lambda_exact", "lambda_series", "error"]
    assert len(rows) == 7


def test_surface_small_delta(capsys):
    assert main(["surface", "--m", "0", "--delta", "0.001"]) == EXIT_OK
    output = capsys.readouterr().out
    assert "m,delta,lambda,delta2_lambda" in output
    assert "PASS" in output


def test_dirichlet_table(tmp_path):
    out = tmp_path / "dirichlet.csv"
    assert main(["dirichlet", "--m", "1", "--count", "2", "--csv", str(out)]) == EXIT_OK
    rows = _read_csv(out)
    assert rows[0] == ["m", "n", "lambda"]
    assert [r[1] for r in rows[1:]] == ["1", "2"]


def test_usage_errors():
    assert main(["converge", "--no-such-flag"]) == EXIT_ERROR
    assert main([]) == EXIT_ERROR
    assert main(["robin", "--deltas", "abc"]) == EXIT_ERROR
    assert main(["converge", "--deltas", "0.1,0.05"]) == EXIT_ERROR


def test_failed_check_exit_code():
    # a coarse linear grid cannot match the secular root to 1e-7
    code = main(["robin", "--m", "0", "--n", "1", "--elements", "8", "--element-order", "1", "--deltas", "0.1,0.05"])
    assert code == EXIT_FAILED


def test_runs_are_deterministic(tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (first, second):
        assert main(["track", "--m", "1", "--deltas", "0.2,0.1,0.05", "--csv", str(path)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()


def test_csv_floats_survive_parsing(tmp_path):
    out = tmp_path / "dirichlet.csv"
    assert main(["dirichlet", "--m", "0", "--count", "3", "--csv", str(out)]) == EXIT_OK
    expected = dirichlet_table(0, 3).eigenvalues
    assert [float(r[2]) for r in _read_csv(out)[1:]] == expected


def test_empty_table_has_header_only():
    assert csv_text(dirichlet_table(0, 0)) == "m,n,lambda\r\n"


def test_format_value():
    assert format_value(0.1) == "0.10000000000000001"
    assert format_value(3) == "3"
    assert format_value("surface") == "surface"

import csv
import io
import json

import pytest

from kohnspec import checks
from kohnspec.cli import main, parse_exact, parse_real


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    return json.loads(out)["rows"]


def test_dims(capsys):
    assert rows(capsys, "dims", "--n", "2", "--p", "1", "--q", "1")[0]["dim"] == 3
    assert rows(capsys, "dims", "--n", "1", "--p", "2", "--q", "3")[0]["dim"] == 0
    assert len(rows(capsys, "dims", "--n", "2", "--all-upto", "2")) == 6


def test_dims_bad_range(capsys):
    code, _, err = run(capsys, "dims", "--n", "2", "--p", "-1", "--q", "0")
    assert code == 2 and "error" in err
    assert run(capsys, "dims", "--n", "2")[0] == 2


def test_eigen(capsys):
    assert rows(capsys, "eigen", "--n", "2", "--p", "1", "--q", "1")[0]["eigenvalue"] == 4
    assert rows(capsys, "eigen", "--n", "2", "--p", "3", "--q", "0")[0]["eigenvalue"] == 0
    code, out, _ = run(capsys, "eigen", "--n", "3", "--p", "0", "--q", "2", "--verify")
    doc = json.loads(out)
    assert code == 0 and doc["meta"]["eigenvalue"] == 8
    assert len(doc["rows"]) == 6 and all(r["pass"] for r in doc["rows"])


def test_count(capsys):
    code, out, _ = run(capsys, "count", "--n", "2", "--m-max", "4", "--format", "csv")
    assert code == 0
    assert [(r["m"], r["N"]) for r in csv.DictReader(io.StringIO(out))] == [("2", "2"), ("4", "8")]
    assert rows(capsys, "count", "--n", "2", "--m-max", "-1") == []
    table = rows(capsys, "count", "--n", "2", "--m-max", "2000", "--step", "50")
    ratios = [float(r["ratio"]) for r in table]
    assert len(table) == 40 and 0.3 < min(ratios) <= max(ratios) < 0.5


def test_mb(capsys):
    row = rows(capsys, "mb", "--pvec", "2,0", "--qvec", "0,2")[0]
    assert row["formula"] == 6 and row["verified"]
    assert rows(capsys, "mb", "--pvec", "3,0", "--qvec", "0,0")[0]["formula"] == 0
    for q in ("3,2", "0,2"):
        code, _, err = run(capsys, "mb", "--pvec", "2,1", "--qvec", q)
        assert code == 2 and "hypothesis violated" in err
    row = rows(capsys, "mb", "--pvec", "2,1", "--qvec", "3,2", "--unchecked")[0]
    assert row["formula"] == 12 and row["eigen_check"] is None


def test_rossi_single(capsys):
    (row,) = rows(capsys, "rossi", "--k", "2", "--t", "0.5", "--family", "W")
    assert row["certificate"] == 4.75
    (row,) = rows(capsys, "rossi", "--k", "2", "--t", "1/2", "--family", "W", "--degree")
    assert row["lambda_max"] == pytest.approx(2.5, abs=1e-8)


def test_rossi_range_window(capsys):
    table = rows(capsys, "rossi", "--k-range", "4:256", "--t", "0.5")
    ratios = [r["ratio"] for r in table]
    lo, hi = checks.GOLDEN_ROSSI_RATIO
    assert len(table) == 253
    assert abs(min(ratios) - lo) <= 1e-6 and abs(max(ratios) - hi) <= 1e-6


def test_rossi_threads_preserve_order(capsys):
    args = ["rossi", "--k-range", "3:12", "--t", "1/3", "--family", "V", "--format", "csv"]
    _, one, _ = run(capsys, *args)
    _, two, _ = run(capsys, *args, "--threads", "2")
    assert one == two


def test_rossi_oracle(capsys):
    code, out, _ = run(capsys, "rossi", "--k", "4", "--t", "1/4", "--oracle")
    doc = json.loads(out)
    assert code == 0
    assert all(r["tridiagonal"] and r["derived_match"] for r in doc["rows"])
    assert {r["family"]: r["printed_match"] for r in doc["rows"]} == {"V": False, "W": True}
    code, _, _ = run(capsys, "rossi", "--k", "4", "--t", "1/4", "--oracle", "--formulas", "printed")
    assert code == 1


def test_rossi_oracle_needs_fraction(capsys):
    code, _, err = run(capsys, "rossi", "--k", "4", "--t", "0.25", "--oracle")
    assert code == 2 and "a/b" in err


def test_rossi_rejects_bad_t(capsys):
    assert run(capsys, "rossi", "--k", "2", "--t", "1")[0] == 2
    assert run(capsys, "rossi", "--k", "2", "--t", "x")[0] == 2


def test_selftest_subset(capsys):
    code, out, _ = run(capsys, "selftest", "--only", "divisor", "--only", "sturm", "--format", "text")
    assert code == 0 and out.count("PASS") == 2


def test_out_file(tmp_path, capsys):
    target = tmp_path / "dims.csv"
    assert main(["dims", "--n", "3", "--all-upto", "1", "--format", "csv", "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert target.read_text().splitlines()[0] == "n,p,q,dim"


def test_deterministic_text(capsys):
    args = ["count", "--n", "3", "--m-max", "100", "--step", "10", "--format", "text"]
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_rational_parsing():
    from fractions import Fraction

    assert parse_real("0.25") == Fraction(1, 4) == parse_real("1/4")
    assert parse_exact("1/4+1/3*i").im == Fraction(1, 3)
    with pytest.raises(Exception):
        parse_exact("0.25")


def test_threads_flag_validated(capsys):
    with pytest.raises(SystemExit):
        main(["dims", "--n", "2", "--p", "0", "--q", "0", "--threads", "0"])


def test_global_flags_either_side(capsys):
    before = run(capsys, "--format", "csv", "dims", "--n", "2", "--p", "1", "--q", "1")[1]
    after = run(capsys, "dims", "--n", "2", "--p", "1", "--q", "1", "--format", "csv")[1]
    assert before == after == "n,p,q,dim\n2,1,1,3\n"

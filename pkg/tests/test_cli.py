import json
import subprocess
import sys

import pytest

from krpoly.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def payload(text):
    return json.loads(text)["payload"]


def test_cn_value(capsys):
    code, out, _ = run(capsys, "cn", "2", "--q", "2")
    assert code == 0 and payload(out)["value"] == "7/1"
    code, out, _ = run(capsys, "cn", "2", "--q", "2", "--format", "pretty")
    assert out == "7\n"


def test_cn_coefficients(capsys):
    code, out, _ = run(capsys, "cn", "1")
    assert payload(out)["terms"] == [[0, 1], [1, -2], [2, 1]]
    code, out, _ = run(capsys, "cn", "1", "--format", "pretty")
    assert out.splitlines()[0] == "[(0,1),(1,-2),(2,1)]"
    code, out, _ = run(capsys, "cn", "1", "--format", "csv")
    assert out == "exponent,coefficient\n0,1\n1,-2\n2,1\n"


@pytest.mark.parametrize("route", ["coeffs", "divisors", "gf"])
def test_cn_routes(capsys, route):
    code, out, _ = run(capsys, "cn", "6", "--q", "2", "--route", route)
    assert payload(out)["value"] == "2079/1"


def test_cn_rational_q(capsys):
    code, out, _ = run(capsys, "cn", "1", "--q", "1/2")
    assert payload(out)["value"] == "1/4"


@pytest.mark.parametrize("argv", [["cn", "0"], ["cn", "2", "--q", "0"], ["cn", "x"], ["scan"],
                                  ["verify", "--max-n", "3", "--gf-max", "5"], ["ek", "--k", "1", "--max-h", "0"],
                                  ["oracle", "--n", "4"], ["oracle", "--n", "3", "--q", "5"], ["bogus"]])
def test_usage_errors_exit_2(capsys, argv):
    assert main(argv) == 2


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--max-n", "40", "--gf-max", "30")
    p = payload(out)
    assert code == 0 and p["discrepancy_count"] == 0 and p["rows"] == 40 and p["gf_checked"] == 30
    code, out, _ = run(capsys, "verify", "--max-n", "1")
    assert code == 0 and payload(out)["rows"] == 1


def test_verify_oracle_rows(capsys):
    code, out, _ = run(capsys, "verify", "--max-n", "3", "--oracle", "--oracle-q", "2")
    rows = {(r["n"], r["q"]): r["bruteforce"] for r in payload(out)["oracle"]}
    assert code == 0 and rows == {(1, 2): 1, (2, 2): 7, (3, 2): 27}


def test_verify_reports_mismatch(capsys, monkeypatch):
    import krpoly.verify as verify
    from krpoly.exact import LaurentPoly

    real = verify.cn_via_divisors
    monkeypatch.setattr(verify, "cn_via_divisors", lambda n: real(n) + (LaurentPoly({0: 1}) if n == 4 else 0))
    code, out, _ = run(capsys, "verify", "--max-n", "5", "--gf-max", "5")
    assert code == 1
    assert payload(out)["discrepancies"] == [{"n": 4, "routes": "coeffs/divisors", "first_exponent": 4}]


def test_scan_inconsistency_exit_1(capsys, monkeypatch):
    from fractions import Fraction

    import krpoly.limits as limits

    monkeypatch.setattr(limits, "direct_deviation", lambda n, q: Fraction(1))
    code, _, err = run(capsys, "scan", "--max-n", "50")
    assert code == 1 and "n=3" in err


def test_criterion(capsys):
    code, out, _ = run(capsys, "criterion", "--max-n", "10000", "--flagged-only")
    p = payload(out)
    assert p["flagged"] == [3, 6, 10, 28, 136, 496, 8128]
    assert [r["n"] for r in p["rows"]] == p["flagged"]
    assert p["rows"][1]["abs_deviation"] == "31/64"


def test_ek_csv(capsys):
    code, out, _ = run(capsys, "ek", "--k", "-1", "--max-h", "9", "--format", "csv")
    lines = out.splitlines()
    assert lines[0] == "n,h,p,k,deviation_num,deviation_den,limit_num,limit_den,residual_exp2,certainty"
    assert [line.split(",")[2] for line in lines[1:]] == ["3", "5", "17", "257"]
    assert lines[1] == "3,1,3,-1,-5,8,-1,2,-3,proved"


def test_ek_even_k_is_empty(capsys):
    code, out, err = run(capsys, "ek", "--k", "4", "--max-h", "9", "--progress")
    assert code == 0 and payload(out)["records"] == [] and "even" in err


def test_ek_huge_values_are_omitted(capsys):
    code, out, _ = run(capsys, "ek", "--k", "1", "--max-h", "130")
    recs = payload(out)["records"]
    assert recs[-1]["p"] == 2 ** 127 - 1 and recs[-1]["certainty"] == "probable"
    assert recs[-1]["deviation"] is None and recs[-1]["limit"] == "1/2"
    assert json.loads(out)["certainty"] == {"proved": 9, "probable": 3}


def test_scan_boundary(capsys):
    code, out, _ = run(capsys, "scan", "--max-n", "2")
    assert code == 0 and payload(out)["groups"] == []


def test_scan_csv_columns(capsys):
    code, out, _ = run(capsys, "scan", "--max-n", "12", "--format", "csv")
    lines = out.splitlines()
    assert lines[0].split(",")[-2:] == ["residual_exp2", "certainty"]
    assert lines[1] == "3,1,3,-1,-5,8,-1,2,-3,proved"
    assert [int(line.split(",")[0]) for line in lines[1:]] == [3, 5, 6, 7, 10, 11, 12]


def test_oracle_command(capsys):
    code, out, _ = run(capsys, "oracle", "--n", "1,2", "--q", "2,3")
    rows = payload(out)["rows"]
    assert code == 0 and [r["bruteforce"] for r in rows] == [1, 4, 7, 52]


def test_timing_is_opt_in(capsys):
    _, out, _ = run(capsys, "cn", "3")
    assert "wall_time_s" not in json.loads(out)
    _, out, _ = run(capsys, "cn", "3", "--timing")
    assert "wall_time_s" in json.loads(out)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "krpoly", "cn", "2", "--q", "3", "--format", "pretty"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "52\n"
    proc = subprocess.run([sys.executable, "-m", "krpoly", "cn", "0"], capture_output=True, text=True)
    assert proc.returncode == 2 and proc.stdout == ""

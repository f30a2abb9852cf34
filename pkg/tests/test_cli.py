import json
import subprocess
import sys
from decimal import Decimal
from fractions import Fraction

import pytest

from kstab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_df_p1(capsys, fixture_path):
    code, out = run_json(capsys, "df", fixture_path("p1"))
    assert code == 0
    rep = out["report"]
    assert (rep["F"], rep["F0"], rep["a0"], rep["a1"], rep["b0"], rep["b1"]) == ("0", "1/2", "1", "1", "1/2", "1/2")


def test_df_conic(capsys, fixture_path):
    code, out = run_json(capsys, "df", fixture_path("conic"))
    assert code == 0
    assert out["report"]["F"] == "-1/2"
    assert out["flatness"]["passed"] is True


def test_df_zero_lambda(capsys, fixture_path):
    code, out = run_json(capsys, "df", fixture_path("conic_trivial"))
    assert code == 0 and out["report"]["F"] == "0"


def test_report_p1(capsys, fixture_path):
    code, out = run_json(capsys, "report", fixture_path("p1"))
    assert code == 0
    assert out["report"]["norm_sq"] == "1/12"
    assert out["report"]["psi_sq_signed"] == "0"


def test_report_trivial_action_exits_5(capsys, fixture_path):
    code, out = run_json(capsys, "report", fixture_path("p1_trivial"))
    assert code == 5
    assert out["report"]["norm_sq"] == "0"
    assert out["exit_code"] == 5


def test_report_conic_has_zero_norm(capsys, fixture_path):
    code, out = run_json(capsys, "report", fixture_path("conic"))
    assert code == 5 and out["report"]["norm_sq"] == "0"


def test_report_precision(capsys, fixture_path):
    code, out = run_json(capsys, "report", fixture_path("conic_two_lines"), "--precision", "30")
    assert code == 0
    rep = out["report"]
    psi = Decimal(rep["psi"])
    assert len(rep["psi"].lstrip("-0.")) == 30
    exact = Fraction(rep["psi_sq_signed"])
    assert exact == Fraction(-3, 10)
    assert abs(psi * abs(psi) - Decimal(exact.numerator) / exact.denominator) < Decimal("1e-28")


def test_base_change(capsys, fixture_path):
    code, out = run_json(capsys, "base-change", fixture_path("conic"), "-d", "3")
    assert code == 0
    assert out["report"]["F"] == "-3/2" and out["check"] == "ratio = 3"
    code, out = run_json(capsys, "base-change", fixture_path("p1"), "-d", "7")
    assert code == 0 and out["report"]["F"] == "0" and out["check"] == "0 = 0"


def test_base_change_one_matches_df(capsys, fixture_path):
    _, df = run_json(capsys, "df", fixture_path("pentagon"))
    _, bc = run_json(capsys, "base-change", fixture_path("pentagon"), "-d", "1")
    assert bc["report"] == df["report"]
    assert bc["check"] == "ratio = 1"


def test_sweep(capsys, fixture_path):
    code, out = run_json(capsys, "sweep", fixture_path("segment2"), fixture_path("twist_segment"), "--rmax", "6")
    assert code == 0 and all(row["F"] == "0" for row in out["report"]["rows"])
    code, out = run_json(capsys, "sweep", fixture_path("p2_double_sweep"), fixture_path("twist_origin"), "--rmax", "4")
    assert code == 0 and {row["F"] for row in out["report"]["rows"]} == {out["report"]["F_inf"]}
    code, out = run_json(capsys, "sweep", fixture_path("p2_double_sweep"), fixture_path("twist_square"), "--rmax", "30")
    assert code == 0
    assert len(out["report"]["rows"]) == 30
    assert Fraction(out["report"]["sup_r_times_gap"]) < 1
    assert out["report"]["limit_r_times_gap"] == "-1/6"


def test_sweep_dimension_mismatch(capsys, fixture_path):
    code, _ = run_json(capsys, "sweep", fixture_path("p2"), fixture_path("twist_segment"))
    assert code == 2


def test_check_passes(capsys, fixture_path):
    code, out = run_json(capsys, "check", fixture_path("p2"))
    assert code == 0
    names = [c["name"] for c in out["checks"]]
    for expected in ("cauchy_schwarz", "power_invariance[m=2]", "power_invariance[m=3]", "linearization[c=-2]",
                     "linearization[c=2]", "base_change[d=2]", "base_change[d=3]", "sign_flip"):
        assert expected in names


def test_check_corrupted_names_cauchy_schwarz(capsys, fixture_path):
    code, out = run_json(capsys, "check", fixture_path("corrupted_s2"))
    assert code == 1
    assert "cauchy_schwarz" in out["error"]


def test_check_trivial_action_notes_zero_norm(capsys, fixture_path):
    code, out = run_json(capsys, "check", fixture_path("p1_trivial"))
    assert code == 0
    assert "norm is 0" in out["checks"][0]["detail"]


def test_check_monomial_includes_flatness(capsys, fixture_path):
    code, out = run_json(capsys, "check", fixture_path("quadric_two_planes"))
    assert code == 0 and out["checks"][-1]["name"] == "flatness"
    code, out = run_json(capsys, "check", fixture_path("line_not_flat"))
    assert code == 1 and "flatness" in out["error"]


def test_flatness_gate_and_skip(capsys, fixture_path):
    code, out = run_json(capsys, "df", fixture_path("line_not_flat"))
    assert code == 4 and "report" not in out
    assert [m["k"] for m in out["flatness"]["mismatches"]] == list(range(1, 7))
    code, out = run_json(capsys, "df", fixture_path("line_not_flat"), "--skip-flatness")
    assert code == 0
    assert out["flags"]["skip_flatness"] is True and out["flatness"] == {"skipped": True}


def test_unstable_exit_3(capsys, fixture_path, monkeypatch):
    code, _ = run_json(capsys, "df", fixture_path("not_polynomial"))
    assert code == 3
    monkeypatch.setenv("KSTAB_MAX_K", "5")
    code, out = run_json(capsys, "df", fixture_path("conic"))
    assert code == 3 and "SamplingCapExceeded" in out["error"]


def test_malformed_exit_2(capsys, fixture_path, tmp_path):
    code, _ = run_json(capsys, "df", fixture_path("malformed_degenerate"))
    assert code == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run_json(capsys, "df", str(bad))[0] == 2
    assert run_json(capsys, "df", str(tmp_path / "missing.json"))[0] == 2
    bad.write_text(json.dumps({"kind": "weird"}))
    assert run_json(capsys, "df", str(bad))[0] == 2


def test_escalation_warning(capsys, fixture_path):
    code, out = run_json(capsys, "df", fixture_path("escalation"))
    assert code == 0
    assert out["diagnostics"]["k0"] == 8 and out["diagnostics"]["warnings"]


def test_sign_flip_and_k0(capsys, fixture_path):
    _, out = run_json(capsys, "df", fixture_path("hirzebruch1"), "--sign-flip")
    assert out["report"]["F"] == "-1/27"
    _, out = run_json(capsys, "df", fixture_path("conic"), "--k0", "10")
    assert out["report"]["F"] == "-1/2" and out["diagnostics"]["k0"] == 10


def test_compare(capsys, fixture_path):
    code, out = run_json(capsys, "compare", fixture_path("conic"), fixture_path("conic_product"))
    assert code == 0
    assert out["report"]["difference"] == "1/2" and out["report"]["dominant"] == "second"
    code, _ = run_json(capsys, "compare", fixture_path("conic"), fixture_path("line_not_flat"))
    assert code == 4


def test_oracle_check(capsys):
    code, out = run_json(capsys, "oracle-check")
    assert code == 0
    assert all(row["passed"] for row in out["checks"])
    names = {row["name"] for row in out["checks"]}
    assert "conic F" in names and "P2 F" in names


def test_text_output(capsys, fixture_path):
    code, out = run(capsys, "df", fixture_path("conic"), "--text")
    assert code == 0
    assert "  F: -1/2" in out.splitlines()


def test_deterministic_output(capsys, fixture_path):
    for argv in (("report", fixture_path("pentagon")), ("check", fixture_path("conic")),
                 ("sweep", fixture_path("p2_double_sweep"), fixture_path("twist_square"), "--rmax", "5")):
        first = run(capsys, *argv)
        second = run(capsys, *argv)
        assert first == second


def test_module_entry_point(fixture_path):
    proc = subprocess.run([sys.executable, "-m", "kstab", "df", fixture_path("p1")], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["report"]["F"] == "0"

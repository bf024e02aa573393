"""Command-line behavior: output schemas, exit codes, campaign files."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

FAIL_FIXTURE = str(Path(__file__).parent / "data" / "failing-campaign.ini")

from coprime_lab import cli
from coprime_lab.constraints import Box, TupleConstraint
from coprime_lab.counting import count_box


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- constant -------------------------------------------------------------------


def test_constant_mutual_pair(capsys):
    code, out, _ = run_cli(capsys, "constant", "--class", "mutual", "-r", "2")
    assert code == 0
    row = json.loads(out)
    assert list(row) == ["constraint", "lo", "hi", "midpoint"]
    assert row["constraint"] == "mutual r=2"
    assert 0.6079 <= row["lo"] <= row["midpoint"] <= row["hi"] <= 0.6080


def test_constant_csv_header(capsys):
    code, out, _ = run_cli(capsys, "constant", "--class", "pairwise", "-r", "3", "--format", "csv")
    assert code == 0
    header, row = out.strip().split("\n")
    assert header == "constraint,lo,hi,midpoint"
    assert row.startswith("pairwise r=3,0.28674")


def test_constant_unsupported_exit_code(capsys):
    code, out, err = run_cli(
        capsys, "constant", "--class", "kwise", "-k", "2", "-r", "3", "--coprime-to", "5,1,1"
    )
    assert code == 3
    assert out == ""
    assert "unsupported" in err


def test_constant_invalid_sides(capsys):
    code, _, err = run_cli(
        capsys, "constant", "--class", "mutual", "-r", "2", "--divisible", "4,6"
    )
    assert code == 2
    assert "invalid" in err


def test_constant_cutoff_flag(capsys):
    code, out, _ = run_cli(
        capsys, "constant", "--class", "pairwise", "-r", "2", "--cutoff", "1000"
    )
    assert code == 0
    wide = json.loads(out)
    assert wide["hi"] - wide["lo"] > 1e-7  # visibly wider than the default cutoff


# -- count ----------------------------------------------------------------------


def test_count_frozen_example(capsys):
    code, out, _ = run_cli(capsys, "count", "-r", "2", "-n", "4", "--class", "mutual")
    assert code == 0
    row = json.loads(out)
    assert row == {
        "count": 11,
        "method": "Mobius",
        "bounds": [4, 4],
        "constraint": "mutual r=2",
    }


def test_count_zero_alpha(capsys):
    code, out, _ = run_cli(
        capsys, "count", "-r", "2", "-n", "4", "--class", "mutual", "--alpha", "0,1"
    )
    assert code == 0
    assert json.loads(out)["count"] == 0


def test_count_fractional_alpha_matches_library(capsys):
    code, out, _ = run_cli(
        capsys,
        "count",
        "-r",
        "2",
        "-n",
        "9",
        "--class",
        "pairwise",
        "--alpha",
        "1,1/3",
        "--method",
        "bruteforce",
    )
    assert code == 0
    want = count_box(Box(bounds=(9, 3), n=9), TupleConstraint.pairwise(2)).count
    row = json.loads(out)
    assert row["count"] == want and row["bounds"] == [9, 3]
    assert row["method"] == "BruteForce"


def test_count_grouped_toth(capsys):
    code, out, _ = run_cli(
        capsys,
        "count",
        "-r",
        "3",
        "-n",
        "30",
        "--class",
        "pairwise",
        "--blocks",
        "1,1,1",
        "--block-moduli",
        "6",
        "--method",
        "toth",
    )
    assert code == 0
    assert json.loads(out)["count"] == 700


def test_count_capacity_exit(capsys):
    code, _, err = run_cli(
        capsys,
        "count",
        "-r",
        "2",
        "-n",
        "200000",
        "--class",
        "mutual",
        "--method",
        "bruteforce",
    )
    assert code == 4
    assert "capacity" in err


def test_count_bad_alpha_exit(capsys):
    code, _, err = run_cli(
        capsys, "count", "-r", "2", "-n", "4", "--class", "mutual", "--alpha", "2,1"
    )
    assert code == 2


def test_argparse_rejects_unknown_method():
    with pytest.raises(SystemExit) as exc:
        cli.main(["count", "-r", "2", "-n", "4", "--class", "mutual", "--method", "magic"])
    assert exc.value.code == 2


# -- verify -----------------------------------------------------------------------


def test_builtin_suite_shape():
    args = cli.build_parser().parse_args(["verify", "--suite", "paper"])
    rows = cli.builtin_suite(args)
    names = [row.name for row in rows]
    assert len(names) == len(set(names)) == 19
    methods = {row.name: row.method for row in rows}
    assert methods["PC-r4"] == "montecarlo"
    assert methods["kC-r4-k2"] == "montecarlo"
    assert methods["kC-r4-k3"] == "montecarlo"
    exact_rows = [name for name, m in methods.items() if m == "exact"]
    assert len(exact_rows) == 16
    assert all(row.n == 1024 and row.tolerance == 0.005 for row in rows)


def test_verify_small_campaign_passes(tmp_path, capsys):
    campaign = tmp_path / "small.ini"
    campaign.write_text(
        "[pairs]\nclass = mutual\nr = 2\nn = 512\n\n"
        "[pairs-mc]\nclass = mutual\nr = 2\nmethod = montecarlo\nsamples = 20000\n"
    )
    code, out, _ = run_cli(capsys, "verify", str(campaign))
    assert code == 0
    rows = [json.loads(line) for line in out.strip().split("\n")]
    assert [row["name"] for row in rows] == ["pairs", "pairs-mc"]
    assert all(row["verdict"] == "PASS" for row in rows)
    assert rows[0]["n"] == 512 and rows[0]["mc_samples"] is None
    assert rows[1]["mc_samples"] == 20000 and rows[1]["mc_seed"] == 20260816


def test_verify_failing_fixture_exits_one(capsys):
    code, out, _ = run_cli(capsys, "verify", FAIL_FIXTURE)
    assert code == 1
    row = json.loads(out)
    assert row["verdict"] == "FAIL"
    assert row["midpoint"] == pytest.approx(0.90005)


def test_verify_unsupported_row_keeps_exit_zero(tmp_path, capsys):
    campaign = tmp_path / "unsup.ini"
    campaign.write_text("[ksides]\nclass = kwise\nr = 3\nk = 2\ncoprime-to = 5,1,1\n")
    code, out, _ = run_cli(capsys, "verify", str(campaign))
    assert code == 0
    row = json.loads(out)
    assert row["verdict"] == "UNSUPPORTED"
    assert row["lo"] is None and row["empirical"] is None


def test_verify_empty_campaign(tmp_path, capsys):
    campaign = tmp_path / "empty.ini"
    campaign.write_text("")
    code, out, _ = run_cli(capsys, "verify", str(campaign))
    assert code == 0 and out == ""


def test_verify_rejects_unknown_keys(tmp_path, capsys):
    campaign = tmp_path / "bad.ini"
    campaign.write_text("[oops]\nclass = mutual\nr = 2\nspeed = fast\n")
    code, _, err = run_cli(capsys, "verify", str(campaign))
    assert code == 2 and "unknown keys" in err


def test_verify_requires_exactly_one_source(capsys):
    code, _, _ = run_cli(capsys, "verify")
    assert code == 2
    code, _, _ = run_cli(capsys, "verify", "--suite", "paper", FAIL_FIXTURE)
    assert code == 2


def test_verify_missing_file(capsys):
    code, _, err = run_cli(capsys, "verify", "no/such/file.ini")
    assert code == 2


def test_verify_campaign_is_byte_deterministic(tmp_path, capsys):
    campaign = tmp_path / "det.ini"
    campaign.write_text(
        "[mc]\nclass = pairwise\nr = 3\nmethod = montecarlo\nsamples = 5000\n"
    )
    _, first, _ = run_cli(capsys, "verify", str(campaign))
    _, second, _ = run_cli(capsys, "verify", str(campaign))
    assert first == second


def test_verify_csv_schema(tmp_path, capsys):
    campaign = tmp_path / "one.ini"
    # n=64 sits ~7.1e-3 from the limit, so widen the per-row tolerance
    campaign.write_text("[row]\nclass = mutual\nr = 2\nn = 64\ntolerance = 0.02\n")
    code, out, _ = run_cli(capsys, "verify", str(campaign), "--format", "csv")
    assert code == 0
    header = out.split("\n", 1)[0]
    assert header == ",".join(cli.VERIFY_FIELDS)


def test_verify_target_override_rows_can_pass(tmp_path, capsys):
    campaign = tmp_path / "target.ini"
    campaign.write_text(
        "[pinned]\nclass = mutual\nr = 2\nn = 1024\n"
        "target-lo = 0.6079\ntarget-hi = 0.6080\n"
    )
    code, out, _ = run_cli(capsys, "verify", str(campaign))
    assert code == 0
    assert json.loads(out)["verdict"] == "PASS"


# -- discrepancy --------------------------------------------------------------------


def test_discrepancy_scan_rows(capsys):
    code, out, _ = run_cli(
        capsys, "discrepancy", "--class", "mutual", "-r", "2", "--scan", "8,16,32"
    )
    assert code == 0
    rows = [json.loads(line) for line in out.strip().split("\n")]
    assert [row["n"] for row in rows] == [8, 16, 32]
    for row in rows:
        assert set(row) == {"constraint", "n", "value", "argmax", "flag", "total", "rate_ratio"}
        assert row["flag"] in ("AtCorner", "LeftLimit")


def test_discrepancy_degenerate_n1(capsys):
    code, out, _ = run_cli(capsys, "discrepancy", "--class", "mutual", "-r", "2", "-n", "1")
    assert code == 0
    row = json.loads(out)
    assert row["value"] == 1 and row["argmax"] == [0, 0] and row["rate_ratio"] is None


def test_discrepancy_measure_modes(capsys):
    code, out, _ = run_cli(capsys, "discrepancy", "--measure", "gcd", "-n", "64", "--step", "4")
    assert code == 0
    row = json.loads(out)
    assert row["kind"] == "gcd" and row["n"] == 64 and row["step"] == 4
    assert 0 < row["max_error"] < 1
    code, out, _ = run_cli(capsys, "discrepancy", "--measure", "lcm", "-n", "64", "--step", "4")
    assert code == 0
    assert json.loads(out)["kind"] == "lcm"


def test_discrepancy_needs_parameters(capsys):
    code, _, _ = run_cli(capsys, "discrepancy", "--class", "mutual", "-r", "2")
    assert code == 2
    code, _, _ = run_cli(capsys, "discrepancy", "--measure", "gcd")
    assert code == 2


def test_module_entrypoint_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "coprime_lab.cli", "count", "-r", "2", "-n", "4", "--class", "mutual"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["count"] == 11

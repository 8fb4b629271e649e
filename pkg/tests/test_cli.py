"""Command-line plumbing: outputs, reports, caching, exit codes."""

import json

import pytest

from overrank.cli import main
from overrank.report import Report, RunConfig


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_count_pbar(capsys):
    code, out = run_cli(capsys, "count", "--n", "4")
    assert code == 0
    assert "value=14" in out


def test_count_rank_class_row(capsys):
    code, out = run_cli(capsys, "count", "--n", "3", "--c", "3")
    assert code == 0
    assert "a=0 value=4" in out and "a=1 value=2" in out and "a=2 value=2" in out


def test_count_single_class(capsys):
    code, out = run_cli(capsys, "count", "--n", "0", "--c", "5", "--a", "0")
    assert code == 0
    assert "value=1" in out


def test_count_range_guard(capsys):
    code = main(["count", "--n", "50", "--n-max", "10"])
    assert code == 2


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["count"])  # missing required --n
    assert exc.value.code == 2


def test_asymptotic_side_by_side(capsys):
    code, out = run_cli(capsys, "asymptotic", "--a", "1", "--c", "3",
                        "--n", "400", "--n-max", "400")
    assert code == 0
    assert "exact=" in out and "estimate=" in out
    assert "envelope_verdict=pass" in out


def test_asymptotic_exact_unavailable(capsys):
    code, out = run_cli(capsys, "asymptotic", "--a", "1", "--c", "3",
                        "--n", "500", "--n-max", "100")
    assert code == 0  # nothing to verify, nothing failed
    assert "exact=unavailable" in out


def test_bounds_verdicts(capsys):
    code, out = run_cli(capsys, "bounds", "--c", "3", "--n", "2089")
    assert code == 0
    assert "threshold_verdict lower=pass upper=pass" in out
    assert "aux_inequality" in out
    code, out = run_cli(capsys, "bounds", "--c", "6", "--n", "100")
    assert code == 0
    assert "giant_threshold" in out


def test_verify_clean_and_dirty(capsys, tmp_path):
    code, out = run_cli(capsys, "verify", "--c", "3", "--n-lo", "9",
                        "--n-hi", "40", "--n-max", "80")
    assert code == 0
    assert sum(1 for ln in out.splitlines() if ln.startswith("certificate ")) == 3
    code, out = run_cli(capsys, "verify", "--c", "3", "--n-lo", "1",
                        "--n-hi", "8", "--n-max", "16")
    assert code == 1  # below-range violations exist and are reported


def test_verify_a_list(capsys):
    code, out = run_cli(capsys, "verify", "--c", "4", "--n-lo", "9",
                        "--n-hi", "20", "--a-list", "1,3", "--n-max", "40")
    assert code == 0
    assert "a=1" in out and "a=3" in out and "a=0" not in out


def test_json_lines_round_trip(capsys, tmp_path):
    path = tmp_path / "report.jsonl"
    code, out = run_cli(capsys, "count", "--n", "4", "--format", "json-lines",
                        "--report", str(path))
    assert code == 0
    text = path.read_text()
    assert text == out
    report = Report.from_json_lines(text)
    assert report.command == "count"
    assert report.outputs[0]["value"] == "14"
    assert report.to_json_lines() == text  # lossless round trip


def test_report_embeds_config(capsys):
    code, out = run_cli(capsys, "count", "--n", "2", "--precision", "96",
                        "--format", "json-lines")
    rec = [json.loads(line) for line in out.splitlines()
           if '"record": "config"' in line][0]
    assert rec["precision_bits"] == 96


def test_cache_round_trip_and_reuse(capsys, tmp_path):
    cache = tmp_path / "t3.tbl"
    code, out1 = run_cli(capsys, "verify", "--c", "3", "--n-lo", "9",
                         "--n-hi", "30", "--n-max", "60", "--cache", str(cache))
    assert code == 0 and cache.exists()
    code, out2 = run_cli(capsys, "verify", "--c", "3", "--n-lo", "9",
                         "--n-hi", "30", "--n-max", "60", "--cache", str(cache))
    assert code == 0

    def cert_lines(s):
        return [line for line in s.splitlines() if line.startswith("certificate")]

    assert cert_lines(out1) == cert_lines(out2)  # byte-identical certificates
    # a cache with the wrong modulus is refused
    code = main(["verify", "--c", "5", "--n-lo", "9", "--n-hi", "30",
                 "--n-max", "60", "--cache", str(cache)])
    assert code == 2


def test_env_overrides(capsys, monkeypatch):
    monkeypatch.setenv("OVERRANK_PRECISION", "128")
    monkeypatch.setenv("OVERRANK_FORMAT", "json-lines")
    code, out = run_cli(capsys, "count", "--n", "2")
    assert code == 0
    rec = [json.loads(line) for line in out.splitlines()
           if '"record": "config"' in line][0]
    assert rec["precision_bits"] == 128


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(precision_bits=32)
    with pytest.raises(ValueError):
        RunConfig(parallelism=0)

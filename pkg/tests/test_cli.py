import math
import subprocess
import sys

import pytest

from kgsharp import __version__
from kgsharp.cli import UsageError, main, parse_args


def _rows(text):
    return [line for line in text.splitlines() if not line.startswith("#")]


def _notes(text):
    out = {}
    for line in text.splitlines()[1:]:
        if line.startswith("# "):
            k, v = line[2:].split("=", 1)
            out[k] = v
    return out


def test_parse_constants_example():
    cfg = parse_args(["constants", "--kind", "F", "--d", "5", "--beta", "0"])
    assert (cfg.command, cfg.d, cfg.beta, cfg.options["kind"]) == ("constants", 5, 0.0, "F")


def test_parse_ratio_scan_example():
    cfg = parse_args(["ratio-scan", "--regime", "wave", "--d", "3", "--beta", "0",
                      "--a-grid", "0.1,0.05,0.025"])
    assert cfg.grid == [0.1, 0.05, 0.025] and cfg.options["regime"] == "wave"


def test_parse_knapp_accepts_beta_below_threshold():
    cfg = parse_args(["knapp", "--d", "3", "--beta", "-0.5", "--L-grid", "10,30,100"])
    assert cfg.grid == [10.0, 30.0, 100.0] and cfg.beta == -0.5


@pytest.mark.parametrize("argv", [
    ["constants", "--kind", "F", "--bogus"],
    ["constants", "--kind", "nope"],
    ["constants", "--d", "1"],
    ["constants", "--s", "-1"],
    ["ratio-scan", "--regime", "wave", "--d", "2", "--beta", "-0.3"],
    ["ratio-scan", "--a-grid", "0.1,abc"],
    ["ratio-scan", "--a-grid", "0.025,0.05,0.1"],
    ["counterexample", "--d", "3", "--beta", "0.6"],
    ["knapp", "--L-grid", "5,10"],
    ["plusplus", "--tau", "1.0", "--xi-norm", "0"],
    ["export", "--table", "nothing"],
    ["kernel", "--kind", "theta", "--d", "2", "--beta", "-0.5"],
])
def test_parse_rejects(argv):
    with pytest.raises(UsageError):
        parse_args(argv)


def test_usage_error_exit_status(capsys):
    assert main(["constants", "--kind", "nope"]) == 1
    assert "--kind" in capsys.readouterr().err


def test_domain_error_from_library_exits_one(capsys):
    assert main(["kernel", "--kind", "K", "--r1", "1", "--r2", "1", "--cos", "1.5"]) == 1
    captured = capsys.readouterr()
    assert captured.out == "" and "cos_angle" in captured.err


def test_constants_prints_f05(capsys):
    assert main(["constants", "--kind", "F", "--d", "5", "--beta", "0"]) == 0
    out = capsys.readouterr().out
    lines = out.splitlines()
    assert lines[0].startswith("# command=constants d=5 s=1 beta=0 tol=")
    assert f"version={__version__}" in lines[0]
    assert lines[1] == "kind,d,s,beta,value"
    value = float(lines[2].split(",")[-1])
    assert value == pytest.approx(1 / (24 * math.pi ** 2), rel=1e-15)
    assert f"{1 / (24 * math.pi ** 2):.15g}"[:15] in lines[2]


def test_ratio_scan_output_and_footer(capsys):
    assert main(["ratio-scan", "--regime", "half", "--d", "2"]) == 0
    out = capsys.readouterr().out
    rows = _rows(out)
    assert rows[0] == "a,ratio,error_estimate" and len(rows) == 4
    notes = _notes(out)
    assert float(notes["target"]) == pytest.approx(0.5)
    assert float(notes["rel_error"]) < 1e-3 and notes["within_tol"] == "true"


def test_ratio_scan_exit_two_on_tolerance(capsys):
    assert main(["ratio-scan", "--regime", "half", "--d", "2", "--tol", "1e-12"]) == 2


def test_counterexample_exit_codes(capsys):
    assert main(["counterexample", "--d", "3", "--beta", "0.25", "--delta", "1e-3"]) == 0
    assert _notes(capsys.readouterr().out)["strict_inequality"] == "true"


def test_kernel_command(capsys):
    assert main(["kernel", "--kind", "KBV", "--d", "2", "--r1", "1", "--r2", "1", "--cos", "1"]) == 0
    val = float(_rows(capsys.readouterr().out)[1].split(",")[-1])
    # tau = 2 sqrt(2), |xi| = 2: 2 pi / sqrt(8 - 4) = pi
    assert val == pytest.approx(math.pi, rel=1e-9)


def test_plusplus_range_mode(capsys):
    assert main(["plusplus", "--range", "--d", "2", "--beta", "-0.3"]) == 0
    row = _rows(capsys.readouterr().out)[1].split(",")
    assert row[4] == "true" and row[5] == "inf"


def test_export_gap_table(capsys):
    assert main(["export", "--table", "gap", "--d", "3"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert rows[0] == "d,beta,gamma_ratio" and len(rows) == 1 + 5 * 52


def test_output_is_byte_identical_for_same_seed(tmp_path):
    argv = ["knapp", "--d", "2", "--L-grid", "10,30", "--mc-samples", "5000", "--seed", "4"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(argv + ["-o", str(a)]) == 0
    assert main(argv + ["-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.csv"
    main(argv[:-1] + ["5", "-o", str(c)])
    assert c.read_bytes() != a.read_bytes()


def test_config_file_merged_under_flags(tmp_path):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text("# grid for the scan\nd = 5\nbeta=0.25\na-grid = 0.2,0.1,0.05\nseed=9\n")
    cfg = parse_args(["ratio-scan", "--config", str(cfg_file), "--d", "4"])
    assert cfg.d == 4 and cfg.beta == 0.25 and cfg.seed == 9 and cfg.grid == [0.2, 0.1, 0.05]


@pytest.mark.parametrize("text", ["d 5\n", "colour=red\n", "d=five\n"])
def test_config_file_errors(tmp_path, text):
    cfg_file = tmp_path / "bad.cfg"
    cfg_file.write_text(text)
    with pytest.raises(UsageError):
        parse_args(["constants", "--config", str(cfg_file)])


def test_missing_config_file(tmp_path):
    with pytest.raises(UsageError):
        parse_args(["constants", "--config", str(tmp_path / "absent.cfg")])


def test_output_dir_environment(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("KGSHARP_OUTPUT_DIR", str(tmp_path / "out"))
    assert main(["constants", "--kind", "F", "--d", "3"]) == 0
    assert capsys.readouterr().out == ""
    text = (tmp_path / "out" / "constants.csv").read_text()
    assert text.splitlines()[1] == "kind,d,s,beta,value"


def test_explicit_output_beats_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("KGSHARP_OUTPUT_DIR", str(tmp_path / "env"))
    target = tmp_path / "explicit.csv"
    assert main(["constants", "--kind", "F", "--d", "3", "-o", str(target)]) == 0
    assert target.exists() and not (tmp_path / "env").exists()


def test_console_entry_point_module():
    res = subprocess.run([sys.executable, "-m", "kgsharp.cli", "constants", "--kind", "F",
                          "--d", "5"], capture_output=True, text=True)
    assert res.returncode == 0 and "kind,d,s,beta,value" in res.stdout


def test_quick_verify_passes(capsys):
    assert main(["verify"]) == 0
    captured = capsys.readouterr()
    assert _notes(captured.out)["all_passed"] == "true"
    assert "[PASS]" in captured.err and "[FAIL]" not in captured.err

import json
import subprocess
import sys

import numpy as np
import pytest

from rbfourier.cli import EXIT_INVALID, EXIT_NUMERICAL, EXIT_OK, main
from rbfourier.reps import MatrixFunction
from rbfourier.scenarios import gateset_to_config


def test_proctor_cli(tmp_path, capsys):
    out = tmp_path / "p"
    code = main(["proctor", "--seed", "1", "--samples", "30", "--lengths", "1,2,4,8,16,32", "--out-dir", str(out)])
    assert code == EXIT_OK
    stdout = capsys.readouterr().out
    assert "delta" in stdout and "error (optimal)" in stdout
    report = json.loads((out / "report.json").read_text())
    assert report["params"]["seed"] == 1 and report["params"]["samples"] == 30
    assert (out / "decay.csv").read_text().startswith("m,mean,stderr,exact")


def test_cli_bit_reproducible(tmp_path):
    args = ["proctor", "--seed", "4", "--samples", "20", "--lengths", "1,3,9"]
    main(args + ["--out-dir", str(tmp_path / "a")])
    main(args + ["--out-dir", str(tmp_path / "b")])
    for name in ("report.json", "decay.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_wallman_and_leakage_cli(tmp_path, capsys):
    assert main(["wallman", "--samples", "5", "--out-dir", str(tmp_path / "w")]) == EXIT_OK
    assert main(["leakage", "--out-dir", str(tmp_path / "l")]) == EXIT_OK
    stdout = capsys.readouterr().out
    assert "unit eigenvalues" in stdout
    assert json.loads((tmp_path / "l" / "report.json").read_text())["unit_eigenvalues"] == 5


def test_validation_exit_code(tmp_path, capsys):
    assert main(["wallman", "--nu", "1.5", "--out-dir", str(tmp_path)]) == EXIT_INVALID
    assert main(["proctor", "--theta", "nan", "--out-dir", str(tmp_path)]) == EXIT_INVALID
    bad = tmp_path / "bad.yaml"
    bad.write_text("group: S4\ngates:\n  e: [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]\n")
    assert main(["custom", str(bad), "--out-dir", str(tmp_path)]) == EXIT_INVALID
    assert "'e'" in capsys.readouterr().err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["proctor", "--lengths", "1,x"])
    assert exc.value.code == EXIT_INVALID


def test_numerical_exit_code(tmp_path, s4, capsys):
    zero = MatrixFunction(s4.table, np.zeros((24, 4, 4)))
    cfg = tmp_path / "zero.yaml"
    cfg.write_text(gateset_to_config(zero, "S4", lengths=[1, 2, 4]))
    assert main(["custom", str(cfg), "--no-monte-carlo", "--out-dir", str(tmp_path)]) == EXIT_NUMERICAL
    assert "Degenerate" in capsys.readouterr().err


def test_custom_flags_override_config(tmp_path, ideal):
    cfg = tmp_path / "ideal.yaml"
    cfg.write_text(gateset_to_config(ideal, "S4", seed=1, samples=10, lengths=[1, 2, 4]))
    out = tmp_path / "c"
    assert main(["custom", str(cfg), "--seed", "8", "--lengths", "1,5,7", "--out-dir", str(out)]) == EXIT_OK
    params = json.loads((out / "report.json").read_text())["params"]
    assert params["seed"] == 8 and params["lengths"] == [1, 5, 7] and params["samples"] == 10


def test_selftest_cli(capsys):
    assert main(["selftest"]) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines and all(line.startswith("PASS") for line in lines)


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "rbfourier", "leakage", "--out-dir", str(tmp_path)],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert "unit eigenvalues" in res.stdout

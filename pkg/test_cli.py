#!/usr/bin/env python3
"""
Tests for argument parsing, config files, exit codes and artifacts of the strip command line.
"""

import sys
import os
import json
import tempfile
from pathlib import Path

# Add src to Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

import pytest

from cli.main import DEFAULT_N, OPERATOR_N, main, parse_config
from models.domain import FunctionKind, GaugeConvention, OutputFormat, RunConfig, Subcommand
from strip.errors import UsageError
from utils.crypto import verify_config_hash
from utils.line_io import line_from_csv


def test_defaults():
    cfg = parse_config(["oracle"])
    assert cfg.subcommand == Subcommand.ORACLE
    assert cfg.alpha == 0.5
    assert cfg.grid.n == DEFAULT_N and cfg.grid.spacing == 0.04
    assert cfg.format == OutputFormat.JSON
    assert cfg.seed == 42
    assert cfg.gauge == GaugeConvention.PHASE_ZERO_AT_CENTER
    assert cfg.function.kind == FunctionKind.IDENTITY


def test_operator_commands_use_small_grid():
    cfg = parse_config(["qheis"])
    assert cfg.grid.n == OPERATOR_N
    assert cfg.beta_index == 4
    assert parse_config(["opcheck", "--n", "128"]).grid.n == 128


def test_function_from_beta_index():
    cfg = parse_config(["factorize", "--function", "scaled-sine", "--beta-index", "4"])
    assert cfg.function.beta == pytest.approx(4 * cfg.grid.frequency_step)
    with pytest.raises(UsageError):
        parse_config(["factorize", "--function", "scaled-sine"])
    with pytest.raises(UsageError):
        parse_config(["factorize", "--function", "exponential"])


def test_rejects_bad_values():
    with pytest.raises(UsageError):
        parse_config(["oracle", "--alpha", "-1"])
    with pytest.raises(UsageError):
        parse_config(["oracle", "--alpha", "abc"])
    with pytest.raises(UsageError):
        parse_config(["oracle", "--bogus", "1"])
    with pytest.raises(UsageError):
        parse_config(["transmogrify"])
    with pytest.raises(UsageError):
        parse_config(["oracle", "--n", "1000"])


def test_tolerance_overrides():
    cfg = parse_config(["oracle", "--tolerance", "exact=1e-3", "--tolerance", "oracle=0.5"])
    assert cfg.tolerances == {"exact": 1e-3, "oracle": 0.5}
    with pytest.raises(UsageError):
        parse_config(["oracle", "--tolerance", "nope=1"])
    with pytest.raises(UsageError):
        parse_config(["oracle", "--tolerance", "exact"])


def test_flag_beats_config_file():
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "run.cfg"
        path.write_text("# lab run\nn=1024\nalpha=0.3\nline=0.1,0.2\n")
        cfg = parse_config(["oracle", "--config", str(path), "--n", "2048"])
        assert cfg.grid.n == 2048
        assert cfg.alpha == 0.3
        assert cfg.lines == [0.1, 0.2]
        assert RunConfig.from_argv(["oracle", "--config", str(path)]).grid.n == 1024


def test_config_file_errors():
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "bad.cfg"
        path.write_text("bogus=1\n")
        with pytest.raises(UsageError):
            parse_config(["oracle", "--config", str(path)])
        with pytest.raises(UsageError):
            parse_config(["oracle", "--config", str(Path(tmp) / "missing.cfg")])


def test_oracle_run_succeeds():
    with tempfile.TemporaryDirectory() as tmp:
        assert main(["oracle", "--output", tmp, "--quiet"]) == 0
        names = {p.name for p in Path(tmp).iterdir()}
        assert {"w1_y+0.json", "w2_y+0.json", "oracle_residuals.json", "manifest.json"} <= names


def test_module_error_exit_code():
    with tempfile.TemporaryDirectory() as tmp:
        status = main(["factorize", "--function", "scaled-sine", "--beta-index", "0", "--output", tmp, "--quiet"])
        assert status == 3


def test_usage_exit_code():
    assert main(["oracle", "--alpha", "-1"]) == 2


def test_tolerance_failure_exit_code():
    with tempfile.TemporaryDirectory() as tmp:
        assert main(["oracle", "--tolerance", "exact=1e-300", "--output", tmp, "--quiet"]) == 1


def test_qheis_run_succeeds():
    with tempfile.TemporaryDirectory() as tmp:
        assert main(["qheis", "--alpha", "0.1", "--beta-index", "4", "--output", tmp, "--quiet"]) == 0
        payload = json.loads((Path(tmp) / "qheis.json").read_text())
        assert payload["q"] > 1.0


def test_artifacts_are_deterministic():
    with tempfile.TemporaryDirectory() as first, tempfile.TemporaryDirectory() as second:
        for out in (first, second):
            assert main(["oracle", "--format", "csv", "--line", "0.25", "--output", out, "--quiet"]) == 0
        for name in ("w1_y+0.25.csv", "w2_y+0.25.csv", "oracle_residuals.csv"):
            assert (Path(first) / name).read_bytes() == (Path(second) / name).read_bytes()


def test_csv_artifacts_read_back():
    with tempfile.TemporaryDirectory() as tmp:
        assert main(["oracle", "--format", "csv", "--output", tmp, "--quiet"]) == 0
        cfg = parse_config(["oracle"])
        text = (Path(tmp) / "w1_y+0.csv").read_text()
        assert text.startswith("x,re,im\n")
        line = line_from_csv(text, 0.0, cfg.grid)
        assert line.values.shape == (cfg.grid.n,)
        table = (Path(tmp) / "oracle_residuals.csv").read_text()
        assert table.startswith("relation,residual,tolerance,passed\n")


def test_manifest_hash_matches_config():
    with tempfile.TemporaryDirectory() as tmp:
        assert main(["delta", "--re", "0.3", "--im", "1.2", "--output", tmp, "--quiet"]) == 0
        manifest = json.loads((Path(tmp) / "manifest.json").read_text())
        assert verify_config_hash(manifest["config"], manifest["config_hash"])
        assert manifest["verified"] is True
        assert "delta.json" in manifest["artifacts"]


if __name__ == "__main__":
    tests = [(name, fn) for name, fn in sorted(globals().items()) if name.startswith("test_") and callable(fn)]
    failed = 0
    for name, fn in tests:
        try:
            fn()
            print(f"✅ {name}")
        except Exception as e:
            failed += 1
            print(f"❌ {name}: {e}")
    print(f"\n{len(tests) - failed}/{len(tests)} passed")
    exit(1 if failed else 0)

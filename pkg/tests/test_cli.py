"""
Tests for argument resolution and the subcommands
"""

import argparse
import json
import sys

import pytest

import main as cli
from core.exceptions import ConfigError


def run_main(monkeypatch, *argv):
    monkeypatch.setattr(sys, "argv", ["main.py", *argv])
    with pytest.raises(SystemExit) as info:
        cli.main()
    return info.value.code


def resolve(*argv):
    return cli.resolve_config(cli.build_parser().parse_args(list(argv)))


class TestResolveConfig:
    """Flags over config file over presets"""

    def test_presets(self):
        resolved = resolve("section")
        assert resolved["h"] == 3.0
        assert resolved["count"] == 10
        assert resolved["format"] == ["csv", "json", "svg"]
        assert resolved["out"].endswith("section")

    def test_config_file_then_flag(self, temp_dir):
        cfg = temp_dir / "run.json"
        cfg.write_text(json.dumps({"h": 2.0, "count": 4, "params": {"m": 2.0}}))
        resolved = resolve("section", "--config", str(cfg), "--count", "6")
        assert resolved["h"] == 2.0
        assert resolved["count"] == 6
        assert resolved["params"]["m"] == 2.0

    def test_scalar_epsilon_becomes_list(self, temp_dir):
        cfg = temp_dir / "run.json"
        cfg.write_text(json.dumps({"epsilon": 0.3}))
        assert resolve("simulate", "--config", str(cfg))["epsilon"] == [0.3]

    def test_unknown_params(self, temp_dir):
        cfg = temp_dir / "run.json"
        cfg.write_text(json.dumps({"params": {"g": 9.81}}))
        with pytest.raises(ConfigError):
            resolve("simulate", "--config", str(cfg))

    def test_unreadable_config(self, temp_dir):
        with pytest.raises(ConfigError):
            resolve("simulate", "--config", str(temp_dir / "missing.json"))

    def test_presets_are_not_mutated(self):
        resolve("reduce", "--epsilon", "0.2")
        assert cli.PRESETS["reduce"]["epsilon"] == [0.01, 0.05, 0.1]

    def test_threshold_flag(self):
        resolved = resolve("verify", "--threshold", "period=0", "--only", "10")
        assert resolved["threshold"] == {"period": 0.0}

    def test_threshold_parse_errors(self):
        for text in ("period", "nonsense=1"):
            with pytest.raises(argparse.ArgumentTypeError):
                cli.parse_threshold(text)


class TestValidation:
    def test_negative_level(self):
        assert not cli.validate_arguments(resolve("reduce", "--h", "-1"))

    def test_simulate_without_epsilon(self):
        assert not cli.validate_arguments(resolve("simulate"))

    def test_negative_epsilon(self):
        assert not cli.validate_arguments(resolve("section", "--epsilon", "-0.5"))

    def test_unknown_only(self):
        assert not cli.validate_arguments(resolve("verify", "--only", "everything"))

    def test_valid(self):
        assert cli.validate_arguments(resolve("verify", "--only", "symbolic", "7", "bracket_table"))


class TestSubcommands:
    """End to end through main()"""

    def test_simulate_needs_epsilon(self, monkeypatch, temp_dir):
        assert resolve("simulate")["epsilon"] is None
        assert run_main(monkeypatch, "simulate", "--out", str(temp_dir)) == cli.EXIT_USAGE
        assert not (temp_dir / "run-manifest.json").exists()

    def test_simulate_outputs(self, monkeypatch, temp_dir):
        code = run_main(monkeypatch, "simulate", "--epsilon", "0", "0.5", "--t-final", "1",
                        "--out", str(temp_dir), "--format", "csv")
        assert code == cli.EXIT_OK
        rows = (temp_dir / "trajectory_eps0p5.csv").read_text().splitlines()
        assert rows[0] == "t,q1,p1,q2,p2"
        assert rows[1] == "0.0,1.0,1.0,1.0,1.0"
        manifest = json.loads((temp_dir / "run-manifest.json").read_text())
        assert manifest["outputs"] == ["trajectory_eps0.csv", "trajectory_eps0p5.csv"]

    def test_simulate_is_reproducible(self, monkeypatch, temp_dir):
        for name in ("a", "b"):
            run_main(monkeypatch, "simulate", "--epsilon", "0.4", "--t-final", "2",
                     "--out", str(temp_dir / name), "--format", "csv")
        a = (temp_dir / "a" / "trajectory_eps0p4.csv").read_bytes()
        assert a == (temp_dir / "b" / "trajectory_eps0p4.csv").read_bytes()

    def test_section_empty_level(self, monkeypatch, temp_dir):
        code = run_main(monkeypatch, "section", "--h", "0.001", "--epsilon", "0",
                        "--out", str(temp_dir), "--format", "json")
        assert code == cli.EXIT_EMPTY

    def test_section_small(self, monkeypatch, temp_dir):
        code = run_main(monkeypatch, "section", "--epsilon", "0.5", "--count", "2", "--crossings", "5",
                        "--out", str(temp_dir), "--format", "csv")
        assert code == cli.EXIT_OK
        header = (temp_dir / "section_h3_eps0p5.csv").read_text().splitlines()[0]
        assert header == "ic_index,t_cross,p1,q1,p2_sign,q2_residual,circle_residual"

    def test_normal_form_json(self, monkeypatch, temp_dir):
        code = run_main(monkeypatch, "normal-form", "--out", str(temp_dir), "--format", "json")
        assert code == cli.EXIT_OK
        data = json.loads((temp_dir / "normal_form.json").read_text())["normal_form"]
        assert data["N1"]["text"] == "(1/16)*rho1*rho2"
        assert data["N2"]["convention"] == "printed"
        assert data["brackets"]["rho3,rho4"]["matches_exact"]
        assert not data["brackets"]["rho3,rho4"]["matches_printed"]

    def test_orbit_shoot_needs_seed(self, monkeypatch, temp_dir):
        code = run_main(monkeypatch, "orbit", "--mode", "shoot", "--epsilon", "0.05",
                        "--out", str(temp_dir), "--format", "json")
        assert code == cli.EXIT_USAGE
        manifest = json.loads((temp_dir / "run-manifest.json").read_text())
        assert manifest["outputs"] == []

    def test_orbit_shoot(self, monkeypatch, temp_dir):
        code = run_main(monkeypatch, "orbit", "--mode", "shoot", "--seed-state", "0", "0", "1", "0",
                        "--period", "3.14159", "--epsilon", "0.05", "--out", str(temp_dir), "--format", "json")
        assert code == cli.EXIT_OK
        orbit = json.loads((temp_dir / "orbits_shoot.json").read_text())["orbits"][0]
        assert orbit["period"] == pytest.approx(3.141592653589793, abs=1e-8)
        assert orbit["kind"] == "shoot"

    def test_orbit_at_zero_coupling_fails(self, monkeypatch, temp_dir):
        code = run_main(monkeypatch, "orbit", "--mode", "shoot", "--seed-state", "1", "0", "0", "0",
                        "--period", "6.28", "--epsilon", "0", "--out", str(temp_dir), "--format", "json")
        assert code == cli.EXIT_EMPTY

    def test_verify_symbolic(self, monkeypatch, temp_dir):
        code = run_main(monkeypatch, "verify", "--only", "symbolic", "--out", str(temp_dir), "--format", "json")
        assert code == cli.EXIT_OK
        data = json.loads((temp_dir / "verify.json").read_text())
        assert data["passed"] == data["total"] == 4

    def test_verify_tampered(self, monkeypatch, temp_dir):
        code = run_main(monkeypatch, "verify", "--only", "10", "--threshold", "period=0",
                        "--out", str(temp_dir), "--format", "json")
        assert code == cli.EXIT_FAILED
        data = json.loads((temp_dir / "verify.json").read_text())
        assert data["failed"] == ["normal_mode_orbits"]

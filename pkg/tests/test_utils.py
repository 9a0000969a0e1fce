"""
Tests for CSV, JSON and SVG output helpers
"""

import json

import numpy as np
import pytest

from core.symmath import N2_PRINTED
from utils.json_generator import JSONGenerator
from utils.plotting import plot_reduced_space, plot_section, plot_trajectory


class TestFileOperations:
    """CSV writing"""

    def test_round_trip_keeps_every_digit(self, temp_dir, file_ops):
        path = temp_dir / "out" / "values.csv"
        count = file_ops.write_csv(path, ["t", "q1"], [(0.1, 1 / 3), (0.2, -2.5e-17)])
        assert count == 2
        cols = file_ops.read_csv_columns(path, ["t", "q1"])
        assert cols["q1"] == [1 / 3, -2.5e-17]

    def test_header_and_line_endings(self, temp_dir, file_ops):
        path = temp_dir / "plain.csv"
        file_ops.write_csv(path, ["a", "b"], [(1, "x")])
        assert path.read_bytes() == b"a,b\n1,x\n"


class TestJSONGenerator:
    """Deterministic JSON"""

    def test_sorted_and_plain(self, temp_dir):
        path = JSONGenerator.write({"b": np.float64(1.5), "a": np.arange(3), "c": np.bool_(True)},
                                   temp_dir / "x.json")
        text = path.read_text()
        assert text.index('"a"') < text.index('"b"') < text.index('"c"')
        assert json.loads(text) == {"a": [0, 1, 2], "b": 1.5, "c": True}

    def test_identical_inputs_identical_bytes(self, temp_dir):
        data = {"eps": [0.01, 0.05], "nested": {"z": 1, "y": 2}}
        a = JSONGenerator.write(data, temp_dir / "a.json").read_bytes()
        b = JSONGenerator.write(data, temp_dir / "b.json").read_bytes()
        assert a == b

    def test_complex_values(self, temp_dir):
        path = JSONGenerator.write({"mu": [complex(0.5, -0.5)]}, temp_dir / "mu.json")
        assert json.loads(path.read_text())["mu"] == [[0.5, -0.5]]

    def test_polynomial_entry(self):
        entry = JSONGenerator.polynomial_entry(N2_PRINTED, "printed")
        assert entry["convention"] == "printed"
        assert entry["variables"] == ["rho1", "rho2", "rho3", "rho4"]
        assert entry["terms"]["0,0,2,0"] == "-1/192"

    def test_verify_summary(self, temp_dir):
        results = [{"name": "a", "passed": True}, {"name": "b", "passed": False}]
        data = json.loads(JSONGenerator.create_verify_json(results, temp_dir / "v.json").read_text())
        assert (data["passed"], data["failed"], data["total"]) == (1, ["b"], 2)

    def test_manifest_outputs_sorted(self, temp_dir):
        path = JSONGenerator.create_manifest({"seed": 42}, ["b.csv", "a.csv"], temp_dir / "m.json")
        assert json.loads(path.read_text())["outputs"] == ["a.csv", "b.csv"]


class TestPlotting:
    """SVG figures from CSV"""

    def test_trajectory_svg(self, temp_dir, file_ops):
        csv_path = temp_dir / "traj.csv"
        t = np.linspace(0.0, 6.0, 50)
        file_ops.write_csv(csv_path, ["t", "q1", "p1", "q2", "p2"],
                           [(float(s), float(np.cos(s)), 0.0, float(np.sin(2 * s)), 0.0) for s in t])
        svg = plot_trajectory(csv_path, temp_dir / "traj.svg", 0.5)
        text = svg.read_text()
        assert text.lstrip().startswith("<?xml")
        assert "<dc:date>" not in text

    def test_svg_is_reproducible(self, temp_dir, file_ops):
        csv_path = temp_dir / "sec.csv"
        header = ["ic_index", "t_cross", "p1", "q1", "p2_sign", "q2_residual", "circle_residual"]
        file_ops.write_csv(csv_path, header, [(i % 2, float(i), 0.1 * i, -0.1 * i, "+", 0.0, 0.0)
                                              for i in range(10)])
        a = plot_section(csv_path, temp_dir / "a.svg", 0.0, 3.0).read_bytes()
        b = plot_section(csv_path, temp_dir / "b.svg", 0.0, 3.0).read_bytes()
        assert a == b

    def test_reduced_space_svg(self, temp_dir, file_ops):
        surface = temp_dir / "surface.csv"
        z = np.linspace(0.0, 2.0, 30)
        x = np.sqrt(z ** 2 * (2.0 - z))
        file_ops.write_csv(surface, ["x", "y", "z"], [(float(a), 0.0, float(c)) for a, c in zip(x, z)])
        critical = temp_dir / "critical.csv"
        file_ops.write_csv(critical, ["type", "x", "y", "z"], [("point", 0.0, 0.0, 2.0), ("circle", 1.0, 0.0, 1.0)])
        svg = plot_reduced_space(surface, critical, temp_dir / "m.svg", 1.0, epsilon=0.05)
        assert svg.exists()
        assert svg.stat().st_size > 0

    def test_missing_csv(self, temp_dir):
        with pytest.raises(FileNotFoundError):
            plot_trajectory(temp_dir / "absent.csv", temp_dir / "x.svg", 0.0)

import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from bgrdmft.cli import main


def run_cli(args):
    return subprocess.run(
        [sys.executable, "-m", "bgrdmft.cli"] + args,
        capture_output=True,
        text=True,
    )


def read_csv(path):
    header, rows = None, []
    with open(path) as handle:
        for line in handle:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if header is None:
                header = line.split(",")
            else:
                rows.append(line.split(","))
    return header, rows


class TestSectorCommand:
    def test_stdout_listing(self, capsys):
        assert main(["sector", "--d", "3", "--N", "3", "--P", "0"]) == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj["states"] == [[3, 0, 0], [0, 3, 0], [0, 0, 3], [1, 1, 1]]

    def test_two_state_sector(self, capsys):
        assert main(["sector", "--d", "2", "--N", "4", "--P", "1"]) == 0
        obj = json.loads(capsys.readouterr().out)
        assert len(obj["states"]) == 2

    def test_invalid_momentum_exit_code(self):
        proc = run_cli(["sector", "--d", "3", "--N", "3", "--P", "5"])
        assert proc.returncode == 2
        assert "error" in proc.stderr

    def test_usage_error_exit_code(self):
        proc = run_cli(["sector", "--d", "3"])
        assert proc.returncode == 2


class TestDomainCommand:
    def test_files_and_round_trip(self, tmp_path):
        out = str(tmp_path)
        assert main(
            ["domain", "--d", "3", "--N", "3", "--P", "1", "--out", out,
             "--grid", "6"]
        ) == 0
        obj = json.loads((tmp_path / "domain.json").read_text())
        assert len(obj["facets"]) == 3
        from bgrdmft.polytope import build_domain
        from bgrdmft.sectors import enumerate_sector

        poly = build_domain(enumerate_sector(3, 3, 1))
        np.testing.assert_array_equal(np.array(obj["T"]), poly.T)
        np.testing.assert_array_equal(np.array(obj["T_pinv"]), poly.T_pinv)
        header, rows = read_csv(tmp_path / "facet_distances.csv")
        assert header == ["n0", "n1", "n2", "D1", "D2", "D3"]
        assert len(rows) > 0

    def test_segment_domain(self, tmp_path):
        out = str(tmp_path)
        assert main(
            ["domain", "--d", "2", "--N", "4", "--P", "0", "--out", out]
        ) == 0
        obj = json.loads((tmp_path / "domain.json").read_text())
        assert obj["meta"]["affine_dim"] == 1
        assert sorted(obj["vertices"]) == [[0, 4], [4, 0]]


class TestFunctionalCommand:
    def test_simplex_grid_csv(self, tmp_path):
        out = str(tmp_path)
        assert main(
            ["functional", "--d", "3", "--N", "3", "--P", "1", "--method",
             "simplex", "--grid", "8", "--out", out]
        ) == 0
        header, rows = read_csv(tmp_path / "functional.csv")
        assert header == ["n0", "n1", "n2", "F", "grad_norm", "method",
                          "degenerate_flag"]
        assert all(row[5] == "simplex-form" for row in rows)
        meta = json.loads((tmp_path / "functional_meta.json").read_text())
        assert meta["d"] == 3 and meta["method"] == "simplex"

    def test_determinism(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            assert main(
                ["functional", "--d", "3", "--N", "3", "--P", "0",
                 "--method", "general", "--grid", "6", "--seed", "7",
                 "--out", str(out)]
            ) == 0
        assert (a / "functional.csv").read_bytes() == (
            b / "functional.csv"
        ).read_bytes()

    def test_t_scan_method(self, tmp_path):
        out = str(tmp_path)
        assert main(
            ["functional", "--d", "2", "--N", "4", "--P", "0", "--method",
             "t-scan", "--out", out]
        ) == 0
        header, rows = read_csv(tmp_path / "functional.csv")
        assert header[:3] == ["n0", "n1", "F"]
        assert {row[4] for row in rows} == {"t-scan"}

    def test_interaction_file(self, tmp_path):
        spec = {
            "d": 2,
            "coefficients": [
                [k1, k2, k3, (k1 + k2 - k3) % 2, 0.5]
                for k1 in range(2)
                for k2 in range(2)
                for k3 in range(2)
            ],
        }
        path = tmp_path / "w.json"
        path.write_text(json.dumps(spec))
        assert main(
            ["functional", "--d", "2", "--N", "4", "--P", "0",
             "--interaction", str(path), "--method", "general",
             "--grid", "4", "--out", str(tmp_path)]
        ) == 0

    def test_malformed_interaction_file(self, tmp_path):
        path = tmp_path / "w.json"
        path.write_text("{not json")
        assert main(
            ["functional", "--d", "2", "--N", "4", "--P", "0",
             "--interaction", str(path), "--grid", "4"]
        ) == 2


class TestForceCommand:
    def test_force_report(self, tmp_path):
        out = str(tmp_path)
        assert main(
            ["force", "--d", "3", "--N", "6", "--P", "0",
             "--facet-point", "0,3,3", "--eps-steps", "6", "--out", out]
        ) == 0
        report = json.loads((tmp_path / "force.json").read_text())
        assert report["G"] == pytest.approx(
            -(4 * 2**0.25 * 3**0.75 / 9) * math.sqrt(30.0), abs=1e-8
        )
        assert abs(report["G_fit"] - report["G"]) / abs(report["G"]) < 0.02
        assert report["F_on_facet"] == pytest.approx(10.0, abs=1e-6)
        header, rows = read_csv(tmp_path / "slope.csv")
        assert header == ["sqrt_eps", "F"]
        assert len(rows) == 6

    def test_ridge_point_rejected(self):
        assert main(
            ["force", "--d", "3", "--N", "6", "--P", "0",
             "--facet-point", "0,6,0"]
        ) == 2


class TestApproxCommand:
    def test_functional_map(self, tmp_path):
        out = str(tmp_path)
        assert main(
            ["approx", "--study", "functional-map", "--grid", "25",
             "--out", out]
        ) == 0
        header, rows = read_csv(tmp_path / "approx_functional.csv")
        assert header == ["n0", "n1", "n2", "F_exact", "F_approx",
                          "zbar_exact", "zbar_approx"]
        errs = [float(r[4]) - float(r[3]) for r in rows]
        assert min(errs) >= -1e-10

    def test_energy_disk(self, tmp_path):
        out = str(tmp_path)
        assert main(
            ["approx", "--study", "energy-disk", "--r-steps", "3",
             "--theta-steps", "6", "--grid", "60", "--out", out]
        ) == 0
        header, rows = read_csv(tmp_path / "energy_disk.csv")
        assert header == ["r", "theta", "E_exact", "E_approx", "delta_E"]
        assert len(rows) == 18
        assert all(float(r[4]) >= -1e-12 for r in rows)


def test_atomic_write_no_stray_temp(tmp_path):
    assert main(
        ["sector", "--d", "3", "--N", "4", "--P", "2", "--out", str(tmp_path)]
    ) == 0
    assert sorted(os.listdir(tmp_path)) == ["sector.json"]

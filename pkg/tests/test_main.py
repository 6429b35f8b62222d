"""
Tests the command-line front end and the run configuration behind it.
"""

from qthermo.errors import ValidationError
from qthermo.main import main, output_location
from qthermo.run_config import RunConfig
from qthermo.scan import NbarGrid
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path
from typing import Dict, List, Tuple
from unittest.mock import patch
import io
import os
import tempfile
import unittest

dir = os.path.dirname(__file__)
materials_dir = os.path.join(dir, "materials")


### HELPERS
def run(argv: List[str]) -> Tuple[int, str, str]:
    out = io.StringIO()
    err = io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


# @returns the values printed as "name = value unit", keyed by name
def printed_values(text: str) -> Dict[str, float]:
    values = dict()
    for line in text.splitlines():
        for part in line.split(","):
            if " = " not in part:
                continue
            name, value = part.split(" = ", 1)
            try:
                values[name.strip()] = float(value.split()[0])
            except ValueError:
                pass
    return values


class PyrometerCommandTest(unittest.TestCase):
    def test_room_temperature(self):
        code, out, _ = run(["pyrometer", "--T", "298", "--area-cm2", "1", "--dt-ms", "10"])
        self.assertEqual(code, 0)
        dT = printed_values(out)["pyrometer delta_T"]
        self.assertLess(abs(dT - 4.52e-7) / 4.52e-7, 0.01)
        self.assertIn("quadrature check", out)

    def test_missing_flag(self):
        with redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as ctx:
                main(["pyrometer", "--T", "298", "--area-cm2", "1"])
        self.assertEqual(ctx.exception.code, 2)

    def test_negative_temperature(self):
        code, _, err = run(["pyrometer", "--T", "-1", "--area-cm2", "1", "--dt-ms", "10"])
        self.assertEqual(code, 2)
        self.assertIn("error", err)


class GlobalOptionsTest(unittest.TestCase):
    def test_explain_units(self):
        code, out, _ = run(["--explain-units"])
        self.assertEqual(code, 0)
        self.assertIn("cm^2", out)
        self.assertIn("J/(g K)", out)

    def test_no_command(self):
        code, _, err = run([])
        self.assertEqual(code, 2)
        self.assertIn("usage", err)


class QfiCommandTest(unittest.TestCase):
    def test_coherent_photon(self):
        code, out, _ = run(["qfi", "--xbar0", "1.4142135623730951"])
        self.assertEqual(code, 0)
        values = printed_values(out)
        self.assertAlmostEqual(values["Q_phi"], 4.0, places=5)
        self.assertAlmostEqual(values["Cramer-Rao delta_T"], 0.5, places=5)

    def test_invalid_channel(self):
        code, _, _ = run(["qfi", "--eta", "0"])
        self.assertEqual(code, 2)


class OptimizeCommandTest(unittest.TestCase):
    def test_squeezed(self):
        code, out, _ = run(["optimize", "--kind", "squeezed"])
        self.assertEqual(code, 0)
        values = printed_values(out)
        self.assertLess(abs(values["minimum delta_T"] - 1.4e-9) / 1.4e-9, 0.15)
        self.assertTrue(1e13 <= values["optimal nbar"] <= 1e14)
        self.assertIn("pulse energy", values)
        self.assertIn("converged", out)

    def test_coherent(self):
        code, out, _ = run(["optimize", "--kind", "coherent"])
        self.assertEqual(code, 0)
        self.assertLess(abs(printed_values(out)["minimum delta_T"] - 2.4e-8) / 2.4e-8, 0.15)

    def test_exact_state_at_fixed_nbar(self):
        code, out, _ = run(["optimize", "--kind", "exact", "--nbar", "1e10", "--restarts", "1"])
        self.assertEqual(code, 0)
        self.assertLess(printed_values(out)["displacement fraction"], 1e-3)

    def test_fixed_nbar_needs_exact_kind(self):
        code, _, _ = run(["optimize", "--kind", "squeezed", "--nbar", "1e10"])
        self.assertEqual(code, 2)

    def test_range_without_minimum(self):
        code, _, err = run(["optimize", "--kind", "squeezed", "--nbar-start", "8", "--nbar-stop", "10"])
        self.assertEqual(code, 1)
        self.assertIn("edge of the search range", err)


class SweepCommandTest(unittest.TestCase):
    def test_writes_csv(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "sweep.csv")
            code, out, _ = run(
                [
                    "sweep",
                    "--kinds",
                    "pyrometer,coherent,squeezed",
                    "--points",
                    "5",
                    "--jobs",
                    "1",
                    "--output",
                    path,
                ]
            )
            with open(path, "r") as f:
                lines = f.read().splitlines()
        self.assertEqual(code, 0)
        self.assertEqual(lines[0], "nbar,dt_sq_asym,dt_coh_asym,dt_pyro")
        self.assertEqual(len(lines), 6)
        self.assertIn("wrote 5 rows", out)

    def test_missing_directory(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "missing", "sweep.csv")
            with patch("qthermo.main.sweep_nbar") as sweep:
                code, _, err = run(["sweep", "--kinds", "coherent", "--points", "3", "--output", path])
        self.assertEqual(code, 1)
        self.assertIn("does not exist", err)
        sweep.assert_not_called()

    def test_output_location(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "sweep.csv")
            self.assertEqual(output_location(path), Path(path))
            with self.assertRaises(FileNotFoundError):
                output_location(os.path.join(directory, "missing", "sweep.csv"))

    def test_empty_kinds(self):
        code, _, _ = run(["sweep", "--kinds", "", "--output", "sweep.csv"])
        self.assertEqual(code, 2)

    def test_bad_material_file(self):
        code, _, err = run(
            ["sweep", "--material", os.path.join(materials_dir, "unknown_key.toml"), "--output", "sweep.csv"]
        )
        self.assertEqual(code, 2)
        self.assertIn("density", err)


class OracleCheckCommandTest(unittest.TestCase):
    def test_passes(self):
        code, out, _ = run(["oracle-check", "--nbar", "0.5,1", "--eta", "0.8", "--N", "0.2"])
        self.assertEqual(code, 0)
        self.assertIn("worst relative error", out)
        self.assertIn("passed", out)

    def test_corrupted_covariance_fails(self):
        code, out, _ = run(
            ["oracle-check", "--nbar", "1", "--eta", "1", "--N", "0", "--families", "squeezed-vacuum", "--perturb", "1e-2"]
        )
        self.assertEqual(code, 1)
        self.assertIn("FAIL squeezed-vacuum nbar=1 eta=1 N=0", out)

    def test_dimension_too_small(self):
        code, _, err = run(["oracle-check", "--nbar", "4", "--families", "squeezed-vacuum", "--dim", "20"])
        self.assertEqual(code, 1)
        self.assertIn("try dim =", err)


class RunConfigTest(unittest.TestCase):
    def test_defaults(self):
        config = RunConfig("ppktp", NbarGrid(8, 16, 50), ["exact", "pyrometer"])
        self.assertEqual(config.kind_names(), ["exact-qfi", "pyrometer"])
        self.assertAlmostEqual(config.setup().alpha, 1.4846, places=3)

    def test_wavelength_override(self):
        config = RunConfig("ppktp", NbarGrid(8, 16, 50), ["coherent"], wavelength=532e-9)
        self.assertAlmostEqual(config.setup().alpha / RunConfig("ppktp", NbarGrid(8, 16, 50), ["coherent"]).setup().alpha, 2.0)

    def test_invalid(self):
        grid = NbarGrid(8, 16, 50)
        with self.assertRaises(ValidationError):
            RunConfig("ppktp", grid, [])
        with self.assertRaises(ValidationError):
            RunConfig("ppktp", grid, ["thermistor"])
        with self.assertRaises(ValidationError):
            RunConfig("ppktp", grid, ["exact"], wavelength=1064e-9, omega=1.77e15)
        with self.assertRaises(ValidationError):
            RunConfig("ppktp", grid, ["exact"], jobs=0)
        with self.assertRaises(ValidationError):
            RunConfig("ppktp", grid, ["exact"], temperature=-3.0)


if __name__ == "__main__":
    unittest.main()

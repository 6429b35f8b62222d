"""
Tests material models, material files and the thermometer setup built from them.
"""

from qthermo.channel import ChannelParams
from qthermo.errors import ParseError, ValidationError
from qthermo.material import (
    PPKTP,
    Material,
    ThermometerSetup,
    load_material,
    phase_coupling,
    phase_shift,
    save_material,
    transmissivity,
)
import math
import os
import tempfile
import unittest

dir = os.path.dirname(__file__)
materials_dir = os.path.join(dir, "materials")


class MaterialTest(unittest.TestCase):
    def test_ppktp_transmissivity(self):
        eta = transmissivity(PPKTP)
        self.assertAlmostEqual(eta, math.exp(-0.0002), places=15)
        self.assertAlmostEqual((1 - eta) / 1.9998e-4, 1.0, places=4)

    def test_ppktp_phase_coupling(self):
        self.assertAlmostEqual(phase_coupling(PPKTP, 1.77e15), 1.48429, places=4)

    def test_phase_shift_is_linear(self):
        self.assertAlmostEqual(phase_shift(PPKTP, 1.77e15, 1e-3), phase_coupling(PPKTP, 1.77e15) * 1e-3)

    def test_invariants(self):
        fields = PPKTP.as_dict()
        fields["n"] = 0.9
        with self.assertRaises(ValidationError) as ctx:
            Material(**fields)
        self.assertEqual(ctx.exception.field, "n")

        fields = PPKTP.as_dict()
        fields["alpha_abs"] = -1.0
        with self.assertRaises(ValidationError):
            Material(**fields)

    def test_preset_by_name(self):
        self.assertIs(load_material("ppktp"), PPKTP)
        self.assertIs(load_material("PPKTP"), PPKTP)

    def test_file_with_units(self):
        m = load_material(os.path.join(materials_dir, "ppktp_units.toml"))
        self.assertEqual(m.name, "ppktp-lab")
        self.assertAlmostEqual(m.length, 0.01)
        self.assertAlmostEqual(m.mass, 0.003)
        self.assertAlmostEqual(m.specific_heat, 688.0)
        self.assertAlmostEqual(m.alpha_abs, 0.02)
        self.assertAlmostEqual(m.probe_wavelength, 1064e-9)
        self.assertAlmostEqual(phase_coupling(m, 1.77e15), phase_coupling(PPKTP, 1.77e15), places=10)

    def test_nonpositive_specific_heat(self):
        with self.assertRaises(ValidationError) as ctx:
            load_material(os.path.join(materials_dir, "negative_specific_heat.toml"))
        self.assertEqual(ctx.exception.field, "specific_heat")

    def test_unknown_key(self):
        with self.assertRaises(ParseError) as ctx:
            load_material(os.path.join(materials_dir, "unknown_key.toml"))
        self.assertEqual(ctx.exception.field, "density")

    def test_unit_not_allowed(self):
        with self.assertRaises(ParseError) as ctx:
            load_material(os.path.join(materials_dir, "bad_unit.toml"))
        self.assertEqual(ctx.exception.field, "length")

    def test_missing_field(self):
        with self.assertRaises(ParseError) as ctx:
            load_material(os.path.join(materials_dir, "missing_field.toml"))
        self.assertEqual(ctx.exception.field, "mass")

    def test_name_defaults_to_file_stem(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "sapphire.toml")
            with open(path, "w", encoding="utf-8") as f:
                f.write("n = 1.76\nn_prime = 1.3e-5\nalpha_T = 5e-6\nlength = 0.01\nmass = 0.004\n")
                f.write("specific_heat = 750.0\nalpha_abs = 0.01\n")
            m = load_material(path)
        self.assertEqual(m.name, "sapphire")
        self.assertIsNone(m.probe_wavelength)

    def test_save_and_load(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "copy.toml")
            save_material(PPKTP, path)
            self.assertEqual(load_material(path), PPKTP)


class ThermometerSetupTest(unittest.TestCase):
    def test_ppktp_at_room_temperature(self):
        setup = ThermometerSetup(PPKTP)
        self.assertAlmostEqual(setup.alpha, 1.4846, places=3)
        self.assertLess(setup.N, 1e-15)
        self.assertAlmostEqual(setup.heating_slope / 1.8087e-23, 1.0, places=3)
        self.assertAlmostEqual(setup.heating(1e14), 1e14 * setup.heating_slope)

    def test_channel(self):
        setup = ThermometerSetup(PPKTP)
        c = setup.channel()
        self.assertIsInstance(c, ChannelParams)
        self.assertEqual(c.phi, 0.0)
        self.assertEqual(c.eta, setup.eta)

    def test_needs_a_probe_frequency(self):
        fields = PPKTP.as_dict()
        del fields["probe_wavelength"]
        with self.assertRaises(ValidationError):
            ThermometerSetup(Material(**fields))
        setup = ThermometerSetup(Material(**fields), omega=1.77e15)
        self.assertAlmostEqual(setup.alpha, 1.48429, places=4)

    def test_temperature(self):
        with self.assertRaises(ValidationError):
            ThermometerSetup(PPKTP, temperature=0.0)


if __name__ == "__main__":
    unittest.main()

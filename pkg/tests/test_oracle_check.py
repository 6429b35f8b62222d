"""
Tests the cross-check between the Gaussian and the truncated Fock-space phase QFI, and the thermal-state temperature QFI.
"""

from qthermo.constants import CODATA_2018
from qthermo.errors import InvalidParameter, TruncationError
from qthermo.oracle_check import (
    FAMILIES,
    OracleCase,
    gaussian_output,
    oracle_grid,
    run_oracle_check,
    thermal_temperature_qfi,
)
from qthermo.pyrometer import single_frequency_fisher
import unittest


class OracleCheckTest(unittest.TestCase):
    def test_default_grid_passes(self):
        report = run_oracle_check()
        self.assertEqual(len(report.results), 4 * 3 * 2 * 2)
        self.assertTrue(report.passed, f"worst case {report.worst.case}: {report.worst.relative_error}")
        self.assertEqual(report.failures(), [])

    def test_corrupted_covariance_is_caught(self):
        cases = oracle_grid(nbars=[1.0, 2.0], families=["squeezed-vacuum", "coherent"], etas=[1.0], reservoirs=[0.0])
        report = run_oracle_check(cases, perturbation=1e-2)
        self.assertFalse(report.passed)
        failed = {r.case.family for r in report.failures()}
        self.assertIn("squeezed-vacuum", failed)
        self.assertEqual(report.worst.case.family, "squeezed-vacuum")

    def test_perturbation_only_touches_sigma_11(self):
        case = OracleCase("coherent", 1.0, 0.8, 0.2)
        clean = gaussian_output(case)
        dirty = gaussian_output(case, perturbation=1e-2)
        self.assertAlmostEqual(dirty.cov[0, 0] - clean.cov[0, 0], 1e-2)
        self.assertEqual(dirty.cov[1, 1], clean.cov[1, 1])

    def test_fixed_dimension_too_small(self):
        cases = oracle_grid(nbars=[4.0], families=["squeezed-vacuum"], etas=[1.0], reservoirs=[0.0])
        with self.assertRaises(TruncationError) as ctx:
            run_oracle_check(cases, dim=20)
        self.assertGreater(ctx.exception.suggested_dim, 20)

    def test_unknown_family(self):
        with self.assertRaises(InvalidParameter):
            OracleCase("cat", 1.0, 1.0, 0.0)

    def test_grid(self):
        cases = oracle_grid(nbars=[1.0], etas=[0.8], reservoirs=[0.0, 0.2])
        self.assertEqual(len(cases), len(FAMILIES) * 2)
        self.assertIn("eta=0.8", str(cases[0]))


class ThermalStateTest(unittest.TestCase):
    def test_qfi_equals_photon_counting_fisher(self):
        for T in [10.0, 300.0, 5000.0]:
            for x in [0.5, 1.0, 3.0]:
                omega = x * CODATA_2018.k_B * T / CODATA_2018.hbar
                expected = single_frequency_fisher(omega, T, CODATA_2018)
                q = thermal_temperature_qfi(omega, T, constants=CODATA_2018)
                self.assertLess(abs(q - expected) / expected, 1e-6, f"T = {T}, x = {x}")

    def test_needs_positive_temperature(self):
        with self.assertRaises(InvalidParameter):
            thermal_temperature_qfi(1e14, 0.0)


if __name__ == "__main__":
    unittest.main()

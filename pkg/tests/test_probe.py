"""
Tests the probes compared in a sweep.
"""

from qthermo.errors import InvalidParameter
from qthermo.material import PPKTP, ThermometerSetup
from qthermo.metrology import BoundKind, total_bound
from qthermo.probe import (
    AbstractProbe,
    CoherentProbe,
    OptimalGaussianProbe,
    PyrometerBenchmark,
    SqueezedVacuumProbe,
    probe_for,
)
from qthermo.pyrometer import PyrometerConfig, pyrometer_precision
import unittest

setup = ThermometerSetup(PPKTP)


class ProbeTest(unittest.TestCase):
    def test_probe_for_kind(self):
        self.assertIsInstance(probe_for("exact"), OptimalGaussianProbe)
        self.assertIsInstance(probe_for("squeezed"), SqueezedVacuumProbe)
        self.assertIsInstance(probe_for("coherent"), CoherentProbe)
        self.assertIsInstance(probe_for(BoundKind.PYROMETER), PyrometerBenchmark)
        for kind in BoundKind:
            self.assertIsInstance(probe_for(kind), AbstractProbe)
        with self.assertRaises(InvalidParameter):
            probe_for("thermocouple")

    def test_asymptotic_probes_use_closed_forms(self):
        nbar = 1e12
        for probe in [SqueezedVacuumProbe(), CoherentProbe()]:
            bound = probe.bound(setup, nbar)
            expected = total_bound(
                probe.kind, setup.eta, setup.N, nbar, setup.alpha, setup.omega, PPKTP.mass, PPKTP.specific_heat
            )
            self.assertEqual(bound.delta_t, expected.delta_t)
            self.assertAlmostEqual(probe.statistical_coefficient(setup) / bound.statistical / 1e6, 1.0, places=12)

    def test_pyrometer_does_not_heat(self):
        probe = PyrometerBenchmark(area=1e-4, response_time=1e-2)
        bound = probe.bound(setup, 1e10)
        self.assertFalse(probe.uses_photons())
        self.assertEqual(bound.heating, 0.0)
        self.assertEqual(bound.statistical, pyrometer_precision(PyrometerConfig(S=1e-4, dt=1e-2, T=298.0)))

    def test_optimal_probe(self):
        nbar = 1e10
        probe = OptimalGaussianProbe(restarts=1)
        result = probe.optimize(setup, nbar)
        self.assertEqual(result.bound.kind, BoundKind.EXACT_QFI)
        self.assertEqual(result.bound.heating, setup.heating(nbar))
        self.assertLess(result.bound.statistical, CoherentProbe().bound(setup, nbar).statistical)
        self.assertLess(result.displacement_fraction, 1e-3)


if __name__ == "__main__":
    unittest.main()

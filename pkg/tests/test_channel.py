"""
Tests the thermal-loss channel on Gaussian moments and its master-equation counterpart.
"""

from qthermo.channel import (
    ChannelParams,
    PhysicalChannelParams,
    apply_channel,
    compose_channels,
    covariance_update_factored,
    integrate_master_equation,
    physical_from_effective,
    thermal_occupation,
)
from qthermo.constants import HBAR, K_B
from qthermo.errors import InvalidParameter, InvalidState
from qthermo.gaussian import (
    GaussianState,
    InputStateParams,
    make_gaussian_state,
    mean_photon_number,
    vacuum,
    validate_physical,
)
import math
import numpy as np
import unittest


def random_state(rng: np.random.Generator) -> GaussianState:
    p = InputStateParams(
        xbar0=rng.uniform(-2, 2),
        pbar0=rng.uniform(-2, 2),
        N0=rng.uniform(0, 1),
        r0=rng.uniform(-1, 1),
    )
    return make_gaussian_state(p)


class ThermalOccupationTest(unittest.TestCase):
    def test_bose_einstein(self):
        omega = K_B / HBAR
        self.assertAlmostEqual(thermal_occupation(omega, 1.0), 1.0 / math.expm1(1.0), places=12)

    def test_zero_temperature(self):
        self.assertEqual(thermal_occupation(1e15, 0.0), 0.0)

    def test_deep_quantum_regime(self):
        self.assertEqual(thermal_occupation(1e18, 1e-3), 0.0)

    def test_invalid_arguments(self):
        with self.assertRaises(InvalidParameter):
            thermal_occupation(0.0, 300.0)
        with self.assertRaises(InvalidParameter):
            thermal_occupation(1e15, -1.0)


class ChannelParamsTest(unittest.TestCase):
    def test_ranges(self):
        with self.assertRaises(InvalidParameter):
            ChannelParams(0.0, 0.0, 0.0)
        with self.assertRaises(InvalidParameter):
            ChannelParams(0.0, 1.5, 0.0)
        with self.assertRaises(InvalidParameter):
            ChannelParams(0.0, 0.5, -1.0)
        with self.assertRaises(InvalidParameter):
            ChannelParams(math.nan, 0.5, 0.0)

    def test_physical_needs_one_reservoir(self):
        with self.assertRaises(InvalidParameter):
            PhysicalChannelParams(omega=1.0, Gamma=1.0, t=1.0)
        with self.assertRaises(InvalidParameter):
            PhysicalChannelParams(omega=1.0, Gamma=1.0, t=1.0, T=300.0, N=0.1)

    def test_physical_effective_round_trip(self):
        c = ChannelParams(0.3, 0.8, 0.2)
        effective = physical_from_effective(c, t=2.0).effective()
        self.assertAlmostEqual(effective.phi, c.phi, places=12)
        self.assertAlmostEqual(effective.eta, c.eta, places=12)
        self.assertAlmostEqual(effective.N, c.N, places=12)


class ApplyChannelTest(unittest.TestCase):
    def test_vacuum_through_cold_loss(self):
        s = apply_channel(vacuum(), ChannelParams(0.4, 0.3, 0.0))
        self.assertTrue(np.allclose(s.cov, 0.5 * np.eye(2)))
        self.assertTrue(np.allclose(s.mean, [0.0, 0.0]))

    def test_rotation_direction(self):
        s = GaussianState([math.sqrt(2), 0.0], 0.5 * np.eye(2))
        out = apply_channel(s, ChannelParams(math.pi / 2, 1.0, 0.0))
        self.assertAlmostEqual(out.xbar, 0.0, places=12)
        self.assertAlmostEqual(out.pbar, -math.sqrt(2), places=12)

    def test_thermalizes_towards_reservoir(self):
        s = make_gaussian_state(InputStateParams.squeezed_vacuum(3.0))
        out = apply_channel(s, ChannelParams(0.0, 1e-9, 0.7))
        self.assertTrue(np.allclose(out.cov, 1.2 * np.eye(2), atol=1e-7))

    def test_unphysical_input(self):
        with self.assertRaises(InvalidState):
            apply_channel(GaussianState([0.0, 0.0], 0.1 * np.eye(2)), ChannelParams(0.0, 0.5, 0.0))

    def test_factored_update_agrees(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            s = random_state(rng)
            c = ChannelParams(rng.uniform(-math.pi, math.pi), rng.uniform(0.05, 1.0), rng.uniform(0, 2))
            self.assertTrue(np.allclose(covariance_update_factored(s.cov, c), apply_channel(s, c).cov, atol=1e-12))

    def test_composition(self):
        s = make_gaussian_state(InputStateParams(xbar0=1.0, N0=0.2, r0=0.5))
        first = ChannelParams(0.2, 0.9, 0.1)
        second = ChannelParams(-0.5, 0.7, 0.4)
        sequential = apply_channel(apply_channel(s, first), second)
        composed = apply_channel(s, compose_channels(first, second))
        self.assertTrue(np.allclose(sequential.mean, composed.mean, atol=1e-12))
        self.assertTrue(np.allclose(sequential.cov, composed.cov, atol=1e-12))

    def test_composition_randomized(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            s = random_state(rng)
            first = ChannelParams(rng.uniform(-math.pi, math.pi), rng.uniform(0.05, 1.0), rng.uniform(0, 2))
            second = ChannelParams(rng.uniform(-math.pi, math.pi), rng.uniform(0.05, 1.0), rng.uniform(0, 2))
            composed_channel = compose_channels(first, second)
            self.assertAlmostEqual(composed_channel.eta, first.eta * second.eta, places=14)
            sequential = apply_channel(apply_channel(s, first), second)
            composed = apply_channel(s, composed_channel)
            self.assertTrue(np.allclose(sequential.mean, composed.mean, rtol=0, atol=1e-10))
            self.assertTrue(np.allclose(sequential.cov, composed.cov, rtol=0, atol=1e-10))

    def test_output_stays_physical(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            s = random_state(rng)
            c = ChannelParams(rng.uniform(-math.pi, math.pi), rng.uniform(1e-3, 1.0), rng.uniform(0, 3))
            out = apply_channel(s, c)
            self.assertTrue(validate_physical(out), msg=str(validate_physical(out)))
            self.assertGreaterEqual(out.det(), 0.25 * (1 - 1e-12))

    def test_photon_number_independent_of_phase(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            s = random_state(rng)
            eta, N = rng.uniform(0.05, 1.0), rng.uniform(0, 2)
            reference = mean_photon_number(apply_channel(s, ChannelParams(0.0, eta, N)))
            for phi in rng.uniform(-math.pi, math.pi, size=5):
                n = mean_photon_number(apply_channel(s, ChannelParams(phi, eta, N)))
                self.assertAlmostEqual(n, reference, places=10)


class MasterEquationTest(unittest.TestCase):
    def test_matches_closed_form_channel(self):
        rng = np.random.default_rng(2024)
        for _ in range(20):
            s = random_state(rng)
            pc = PhysicalChannelParams(
                omega=rng.uniform(0, 2),
                Gamma=rng.uniform(0.1, 2),
                t=rng.uniform(0.1, 1),
                N=rng.uniform(0, 2),
            )
            integrated = integrate_master_equation(s, pc)
            closed = apply_channel(s, pc.effective())
            self.assertTrue(np.allclose(integrated.mean, closed.mean, rtol=0, atol=1e-8))
            self.assertTrue(np.allclose(integrated.cov, closed.cov, rtol=0, atol=1e-8))

    def test_fourth_order_convergence(self):
        s = make_gaussian_state(InputStateParams(xbar0=1.0, pbar0=-0.5, N0=0.2, r0=0.6))
        pc = PhysicalChannelParams(omega=2.0, Gamma=1.0, t=1.0, N=0.3)
        closed = apply_channel(s, pc.effective())

        def error(steps):
            out = integrate_master_equation(s, pc, steps=steps)
            return max(np.max(np.abs(out.mean - closed.mean)), np.max(np.abs(out.cov - closed.cov)))

        for steps in [20, 40]:
            ratio = error(steps) / error(2 * steps)
            self.assertGreater(ratio, 13.0)
            self.assertLess(ratio, 19.0)

    def test_reservoir_from_temperature(self):
        pc = PhysicalChannelParams(omega=K_B / HBAR, Gamma=1.0, t=1.0, T=1.0)
        self.assertAlmostEqual(pc.N, 1.0 / math.expm1(1.0), places=12)

    def test_needs_a_step(self):
        pc = PhysicalChannelParams(omega=1.0, Gamma=1.0, t=1.0, N=0.0)
        with self.assertRaises(InvalidParameter):
            integrate_master_equation(vacuum(), pc, steps=0)

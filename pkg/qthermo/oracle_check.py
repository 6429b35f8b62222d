import itertools
import logging
import math
from typing import Callable, Dict, List, Sequence

import numpy as np

from qthermo.channel import ChannelParams, PhysicalChannelParams, apply_channel, thermal_occupation
from qthermo.constants import PhysicalConstants
from qthermo.errors import InvalidParameter
from qthermo.fock import build_state, evolve_lindblad, phase_derivative, qfi_from_spectrum
from qthermo.gaussian import GaussianState, InputStateParams, make_gaussian_state
from qthermo.metrology import qfi_phase

logger = logging.getLogger(__name__)

"""
Cross-check of the Gaussian phase QFI against the truncated Fock-space computation
over a grid of probe families, photon numbers, transmissivities and reservoirs.
The temperature QFI of a thermal mode is checked the same way against photon counting.
"""

DEFAULT_NBARS = (0.5, 1.0, 2.0, 4.0)
DEFAULT_ETAS = (1.0, 0.8)
DEFAULT_RESERVOIRS = (0.0, 0.2)
DEFAULT_TOLERANCE = 1e-3

FAMILIES: Dict[str, Callable[[float], InputStateParams]] = {
    "coherent": InputStateParams.coherent,
    "squeezed-vacuum": InputStateParams.squeezed_vacuum,
    "displaced-thermal": InputStateParams.displaced_thermal,
}


class OracleCase(object):
    family: str
    nbar: float
    eta: float
    N: float

    def __init__(self, family: str, nbar: float, eta: float, N: float):
        if family not in FAMILIES:
            raise InvalidParameter(f"Unknown probe family {family}. Choose from {sorted(FAMILIES)}")
        self.family = family
        self.nbar = nbar
        self.eta = eta
        self.N = N

    def input_state(self) -> InputStateParams:
        return FAMILIES[self.family](self.nbar)

    def channel(self) -> ChannelParams:
        return ChannelParams(0.0, self.eta, self.N)

    def __str__(self):
        return f"{self.family} nbar={self.nbar:g} eta={self.eta:g} N={self.N:g}"


class OracleResult(object):
    case: OracleCase
    q_gaussian: float
    q_fock: float
    relative_error: float
    dim: int

    def __init__(self, case: OracleCase, q_gaussian: float, q_fock: float, dim: int):
        self.case = case
        self.q_gaussian = q_gaussian
        self.q_fock = q_fock
        self.relative_error = abs(q_fock - q_gaussian) / q_gaussian
        self.dim = dim


class OracleReport(object):
    results: List[OracleResult]
    tolerance: float

    def __init__(self, results: List[OracleResult], tolerance: float):
        assert len(results) > 0
        self.results = results
        self.tolerance = tolerance

    @property
    def worst(self) -> OracleResult:
        return max(self.results, key=lambda r: r.relative_error)

    @property
    def passed(self) -> bool:
        return self.worst.relative_error < self.tolerance

    def failures(self) -> List[OracleResult]:
        return [r for r in self.results if r.relative_error >= self.tolerance]


def oracle_grid(
    nbars: Sequence[float] = DEFAULT_NBARS,
    families: Sequence[str] = tuple(FAMILIES),
    etas: Sequence[float] = DEFAULT_ETAS,
    reservoirs: Sequence[float] = DEFAULT_RESERVOIRS,
) -> List[OracleCase]:
    return [OracleCase(f, n, e, N) for f, n, e, N in itertools.product(families, nbars, etas, reservoirs)]


# @param perturbation is added to Sigma_11 of the Gaussian output, to show that the check can fail
def gaussian_output(case: OracleCase, perturbation: float = 0.0) -> GaussianState:
    s = apply_channel(make_gaussian_state(case.input_state()), case.channel())
    if perturbation == 0:
        return s
    cov = np.array(s.cov)
    cov[0, 0] += perturbation
    return GaussianState(s.mean, cov)


def fock_qfi(case: OracleCase, dim: int = None):
    """Phase QFI of the case from the truncated density matrix, with the truncation used."""
    rho = build_state(case.input_state(), dim)
    if case.eta < 1:
        # Unit damping rate for the time that gives the requested transmissivity
        pc = PhysicalChannelParams(omega=0.0, Gamma=1.0, t=-math.log(case.eta), N=case.N)
        rho = evolve_lindblad(rho, pc)
    return qfi_from_spectrum(rho, phase_derivative(rho)), rho.dim


def run_oracle_check(
    cases: Sequence[OracleCase] = None,
    perturbation: float = 0.0,
    dim: int = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> OracleReport:
    """Compare Gaussian and Fock-space phase QFIs over ``cases``

    Parameters
    ----------
    cases : sequence of OracleCase, optional
        Defaults to :func:`oracle_grid`.
    perturbation : float
        Test hook that corrupts the Gaussian covariance update.
    dim : int, optional
        Fixed truncation. A dimension that is too small raises TruncationError.
    tolerance : float
        Largest accepted relative error.

    Returns
    -------
    OracleReport
    """
    if cases is None:
        cases = oracle_grid()
    results = list()
    for case in cases:
        q_gaussian = qfi_phase(gaussian_output(case, perturbation))
        q_fock, used_dim = fock_qfi(case, dim)
        result = OracleResult(case, q_gaussian, q_fock, used_dim)
        logger.debug(f"{case}: gaussian {q_gaussian:.6g}, fock {q_fock:.6g}, dim {used_dim}")
        results.append(result)
    return OracleReport(results, tolerance)


def thermal_temperature_qfi(
    omega: float,
    T: float,
    rel_step: float = 1e-4,
    constants: PhysicalConstants = None,
) -> float:
    """QFI about T of the thermal state of a mode at ``omega``, from the truncated density matrix

    d rho / dT is a central difference with one Richardson extrapolation, step ``rel_step`` T.
    The states share the truncation chosen for the hottest one. Agrees with
    :func:`qthermo.pyrometer.single_frequency_fisher` since rho and its SLD are number-diagonal.

    Raises
    ------
    InvalidParameter
        If T is not positive.
    """
    if not T > 0:
        raise InvalidParameter(f"Temperature must be positive, got {T}")
    h = rel_step * T
    hottest = build_state(InputStateParams.thermal(thermal_occupation(omega, T + h, constants)))
    dim = hottest.dim

    def state(temperature):
        return build_state(InputStateParams.thermal(thermal_occupation(omega, temperature, constants)), dim)

    def central(step):
        return (state(T + step).data - state(T - step).data) / (2 * step)

    drho = (4 * central(h / 2) - central(h)) / 3
    rho = state(T)
    q = qfi_from_spectrum(rho, drho)
    logger.debug(f"Thermal state at omega = {omega:.6g}, T = {T:g}: QFI {q:.6g}, dim {dim}")
    return q

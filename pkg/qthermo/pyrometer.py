import logging
import math

import numpy as np
from scipy.integrate import quad

from qthermo.channel import thermal_occupation
from qthermo.constants import PhysicalConstants, get_constants
from qthermo.errors import InvalidParameter, NumericFailure, ValidationError
from qthermo.metrology import classical_fisher, error_propagation

logger = logging.getLogger(__name__)

"""
Idealized pyrometer: a perfect blackbody read out through its total emitted flux.
"""

# Upper limit of the dimensionless frequency x = hbar omega / k_B T
X_MAX = 100.0
QUAD_EPSREL = 1e-9
QUAD_LIMIT = 200
FISHER_SUM_CUTOFF = 500


class PyrometerConfig(object):
    """Detector area ``S`` (m^2), response time ``dt`` (s) and sample temperature ``T`` (K)."""

    S: float
    dt: float
    T: float

    def __init__(self, S: float, dt: float, T: float):
        for name, value in (("S", S), ("dt", dt), ("T", T)):
            if not (value > 0 and math.isfinite(value)):
                raise ValidationError(f"Pyrometer parameter {name} must be positive, got {value}", name)
        self.S = float(S)
        self.dt = float(dt)
        self.T = float(T)

    def __repr__(self):
        return f"PyrometerConfig(S={self.S!r}, dt={self.dt!r}, T={self.T!r})"


class ThermalPhotonStats(object):
    N: float
    varN: float

    def __init__(self, N: float):
        if N < 0:
            raise InvalidParameter(f"Mean photon number must be >= 0, got {N}")
        self.N = float(N)
        self.varN = self.N * (self.N + 1)

    def __repr__(self):
        return f"ThermalPhotonStats(N={self.N!r}, varN={self.varN!r})"


def thermal_photon_stats(omega: float, T: float, constants: PhysicalConstants = None) -> ThermalPhotonStats:
    return ThermalPhotonStats(thermal_occupation(omega, T, constants))


def stefan_boltzmann_flux(T: float, constants: PhysicalConstants = None) -> float:
    """Blackbody flux sigma T^4 in W/m^2."""
    if constants is None:
        constants = get_constants()
    if T < 0:
        raise InvalidParameter(f"Temperature must be >= 0, got {T}")
    return constants.sigma * T ** 4


def flux_noise(T: float, constants: PhysicalConstants = None) -> float:
    """Flux fluctuation sqrt(4 k_B sigma T^5) of a blackbody at temperature ``T``."""
    if constants is None:
        constants = get_constants()
    if T < 0:
        raise InvalidParameter(f"Temperature must be >= 0, got {T}")
    return math.sqrt(4 * constants.k_B * constants.sigma * T ** 5)


def _bose_variance_weight(x: float) -> float:
    # x^4 N(N+1) with N = 1/(e^x - 1), written to avoid overflow
    if x <= 0:
        return 0.0
    em = math.exp(-x)
    return x ** 4 * em / (-math.expm1(-x)) ** 2


# @returns int_0^X_MAX x^4 e^x / (e^x - 1)^2 dx
# @raises NumericFailure if the adaptive quadrature reports a problem
def _planck_moment() -> float:
    result = quad(
        _bose_variance_weight,
        0.0,
        X_MAX,
        epsabs=0.0,
        epsrel=QUAD_EPSREL,
        limit=QUAD_LIMIT,
        full_output=1,
    )
    if len(result) > 3:
        raise NumericFailure(f"Quadrature of the thermal spectrum did not converge: {result[3]}")
    logger.debug(f"Thermal spectrum moment {result[0]:.12g}, error estimate {result[1]:.3g}, {result[2]['neval']} evaluations")
    return result[0]


def flux_noise_quadrature(T: float, constants: PhysicalConstants = None) -> float:
    """Flux fluctuation from the frequency integral of (hbar omega Delta N)^2 omega^2 / (4 pi^2 c^2)

    Integrated in x = hbar omega / k_B T on (0, 100] with adaptive quadrature.

    Raises
    ------
    NumericFailure
        If the quadrature does not converge.
    """
    if constants is None:
        constants = get_constants()
    if T < 0:
        raise InvalidParameter(f"Temperature must be >= 0, got {T}")
    if T == 0:
        return 0.0
    kT = constants.k_B * T
    prefactor = kT ** 5 / (4 * math.pi ** 2 * constants.hbar ** 3 * constants.c ** 2)
    return math.sqrt(prefactor * _planck_moment())


def pyrometer_precision(cfg: PyrometerConfig, constants: PhysicalConstants = None) -> float:
    """Temperature error of the idealized pyrometer

    Parameters
    ----------
    cfg : PyrometerConfig

    Returns
    -------
    float
        sqrt(k_B / (4 sigma S dt T)) in K.

    Examples
    --------
    One square centimetre read out for 10 ms at room temperature:

    >>> round(pyrometer_precision(PyrometerConfig(S=1e-4, dt=1e-2, T=298.0)) * 1e9)
    452
    """
    if constants is None:
        constants = get_constants()
    return math.sqrt(constants.k_B / (4 * constants.sigma * cfg.S * cfg.dt * cfg.T))


def pyrometer_sql_constant(S: float, T: float, constants: PhysicalConstants = None) -> float:
    """Prefactor c with pyrometer error c / sqrt(dt), in K s^(1/2)."""
    if constants is None:
        constants = get_constants()
    if not (S > 0 and T > 0):
        raise InvalidParameter(f"Area and temperature must be positive, got S={S}, T={T}")
    return math.sqrt(constants.k_B / (4 * constants.sigma * S * T))


def pyrometer_precision_by_propagation(cfg: PyrometerConfig, constants: PhysicalConstants = None) -> float:
    """Pyrometer error from flux noise over the flux slope 4 sigma T^3, averaged over S dt."""
    if constants is None:
        constants = get_constants()
    slope = 4 * constants.sigma * cfg.T ** 3
    return error_propagation(slope, flux_noise(cfg.T, constants)) / math.sqrt(cfg.S * cfg.dt)


def thermal_pmf(n, N: float):
    """Thermal photon-number distribution N^n / (1 + N)^(n + 1)

    ``n`` may be an integer or an integer array.
    """
    if N < 0:
        raise InvalidParameter(f"Mean photon number must be >= 0, got {N}")
    n_arr = np.asarray(n)
    if np.any(n_arr < 0):
        raise InvalidParameter(f"Photon numbers must be >= 0, got {n}")
    if N == 0:
        p = np.where(n_arr == 0, 1.0, 0.0)
    else:
        p = np.exp(n_arr * math.log(N) - (n_arr + 1) * math.log1p(N))
    if np.ndim(p) == 0:
        return float(p)
    return p


def single_frequency_fisher(omega: float, T: float, constants: PhysicalConstants = None) -> float:
    """Fisher information about T from photon counting in one mode, (hbar omega / k_B T^2)^2 N (N + 1)."""
    if constants is None:
        constants = get_constants()
    if not T > 0:
        raise InvalidParameter(f"Temperature must be positive, got {T}")
    N = thermal_occupation(omega, T, constants)
    return (constants.hbar * omega / (constants.k_B * T ** 2)) ** 2 * N * (N + 1)


def thermal_fisher_sum(
    omega: float,
    T: float,
    n_max: int = FISHER_SUM_CUTOFF,
    rel_step: float = 1e-4,
    constants: PhysicalConstants = None,
) -> float:
    """Brute-force Fisher information sum_n (d_T p(n))^2 / p(n)

    d_T p is a central difference with one Richardson extrapolation, step ``rel_step`` T.
    """
    if constants is None:
        constants = get_constants()
    n = np.arange(n_max + 1)
    h = rel_step * T

    def central(step):
        upper = thermal_pmf(n, thermal_occupation(omega, T + step, constants))
        lower = thermal_pmf(n, thermal_occupation(omega, T - step, constants))
        return (upper - lower) / (2 * step)

    dp = (4 * central(h / 2) - central(h)) / 3
    p = thermal_pmf(n, thermal_occupation(omega, T, constants))
    return classical_fisher(p, dp)


def total_fisher(T: float, constants: PhysicalConstants = None) -> float:
    """Fisher information per unit area and time, integral of F_T(omega) omega^2 / (4 pi^2 c^2)

    Raises
    ------
    NumericFailure
        If the quadrature does not converge.
    """
    if constants is None:
        constants = get_constants()
    if not T > 0:
        raise InvalidParameter(f"Temperature must be positive, got {T}")
    kT = constants.k_B * T
    prefactor = kT ** 3 / (T ** 2 * 4 * math.pi ** 2 * constants.hbar ** 3 * constants.c ** 2)
    return prefactor * _planck_moment()


def fisher_precision(cfg: PyrometerConfig, constants: PhysicalConstants = None) -> float:
    """Pyrometer error 1 / sqrt(dt S F_T) from the integrated Fisher information."""
    return 1.0 / math.sqrt(cfg.dt * cfg.S * total_fisher(cfg.T, constants))

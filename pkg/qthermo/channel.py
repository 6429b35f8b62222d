import logging
import math

import numpy as np

from qthermo.constants import PhysicalConstants, get_constants
from qthermo.errors import InvalidParameter, InvalidState
from qthermo.gaussian import GaussianState, rotation_matrix, validate_physical

logger = logging.getLogger(__name__)

"""
Phase rotation followed by a thermal-loss channel, acting on Gaussian moments.
"""

# Above this hbar*omega/(k_B*T) the Bose-Einstein occupation is returned as 0
OCCUPATION_CUTOFF = 700.0
DEFAULT_STEPS_PER_UNIT = 1000


def thermal_occupation(omega: float, T: float, constants: PhysicalConstants = None) -> float:
    """Bose-Einstein mean photon number of a mode at angular frequency ``omega`` and temperature ``T``

    Parameters
    ----------
    omega : float
        Angular frequency in rad/s, must be positive.
    T : float
        Temperature in K. T = 0 gives the zero-temperature limit.
    constants : PhysicalConstants, optional

    Returns
    -------
    float
        1 / (exp(hbar omega / k_B T) - 1), or 0 when the exponent exceeds 700.

    Raises
    ------
    InvalidParameter
        If omega <= 0 or T < 0.
    """
    if constants is None:
        constants = get_constants()
    if not omega > 0:
        raise InvalidParameter(f"Angular frequency must be positive, got {omega}")
    if not T >= 0:
        raise InvalidParameter(f"Temperature must be >= 0, got {T}")
    if T == 0:
        return 0.0
    x = constants.hbar * omega / (constants.k_B * T)
    if x > OCCUPATION_CUTOFF:
        return 0.0
    return 1.0 / math.expm1(x)


class ChannelParams(object):
    """Effective channel: rotation by ``phi``, transmissivity ``eta``, reservoir occupation ``N``

    Raises
    ------
    InvalidParameter
        Unless 0 < eta <= 1, N >= 0 and phi is finite.
    """

    phi: float
    eta: float
    N: float

    def __init__(self, phi: float, eta: float, N: float):
        if not math.isfinite(phi):
            raise InvalidParameter(f"Channel phase must be finite, got {phi}")
        if not (0 < eta <= 1):
            raise InvalidParameter(f"Transmissivity must lie in (0, 1], got {eta}")
        if not (N >= 0 and math.isfinite(N)):
            raise InvalidParameter(f"Reservoir occupation must be >= 0, got {N}")
        self.phi = float(phi)
        self.eta = float(eta)
        self.N = float(N)

    @property
    def gamma(self) -> float:
        return -math.log(self.eta)

    def at_zero_phase(self) -> "ChannelParams":
        return ChannelParams(0.0, self.eta, self.N)

    def __repr__(self):
        return f"ChannelParams(phi={self.phi!r}, eta={self.eta!r}, N={self.N!r})"


class PhysicalChannelParams(object):
    """Master-equation parameters: frequency, damping rate, interaction time and reservoir

    The reservoir is given either by its temperature ``T`` (occupation from the
    Bose-Einstein law at ``omega``) or directly by its occupation ``N``.

    Parameters
    ----------
    omega : float
        Mode frequency in rad/s.
    Gamma : float
        Damping rate in 1/s.
    t : float
        Interaction time in s.
    T : float, optional
        Reservoir temperature in K.
    N : float, optional
        Reservoir occupation, for use without a temperature (e.g. omega = 0).
    """

    omega: float
    Gamma: float
    t: float
    T: float
    N: float

    def __init__(
        self,
        omega: float,
        Gamma: float,
        t: float,
        T: float = None,
        N: float = None,
        constants: PhysicalConstants = None,
    ):
        for name, value in (("omega", omega), ("Gamma", Gamma), ("t", t)):
            if not (value >= 0 and math.isfinite(value)):
                raise InvalidParameter(f"Channel parameter {name} must be >= 0, got {value}")
        if (T is None) == (N is None):
            raise InvalidParameter("Give exactly one of the reservoir temperature T or occupation N")
        if T is not None:
            if not T > 0:
                raise InvalidParameter(f"Reservoir temperature must be positive, got {T}")
            N = thermal_occupation(omega, T, constants)
        elif not (N >= 0 and math.isfinite(N)):
            raise InvalidParameter(f"Reservoir occupation must be >= 0, got {N}")
        self.omega = float(omega)
        self.Gamma = float(Gamma)
        self.t = float(t)
        self.T = T
        self.N = float(N)

    @property
    def phi(self) -> float:
        return self.omega * self.t

    @property
    def gamma(self) -> float:
        return self.Gamma * self.t

    @property
    def eta(self) -> float:
        return math.exp(-self.gamma)

    def effective(self) -> ChannelParams:
        return ChannelParams(self.phi, self.eta, self.N)

    def __repr__(self):
        return f"PhysicalChannelParams(omega={self.omega!r}, Gamma={self.Gamma!r}, t={self.t!r}, N={self.N!r})"


# @param t is the interaction time assigned to the effective channel
# @returns the physical parameters reproducing c after time t
def physical_from_effective(c: ChannelParams, t: float = 1.0) -> PhysicalChannelParams:
    if not t > 0:
        raise InvalidParameter(f"Interaction time must be positive, got {t}")
    if c.phi < 0:
        raise InvalidParameter(f"A non-negative frequency cannot produce phase {c.phi}")
    return PhysicalChannelParams(omega=c.phi / t, Gamma=c.gamma / t, t=t, N=c.N)


def apply_channel(s: GaussianState, c: ChannelParams) -> GaussianState:
    """Send ``s`` through the rotation and thermal-loss channel ``c``

    Parameters
    ----------
    s : GaussianState
        A physical input state.
    c : ChannelParams

    Returns
    -------
    GaussianState
        mean sqrt(eta) R(phi) mean and covariance eta R cov R^T + (1 - eta)(N + 1/2) I.

    Raises
    ------
    InvalidState
        If ``s`` is not physical.

    Examples
    --------
    >>> s = GaussianState([2 ** 0.5, 0], [[0.5, 0], [0, 0.5]])
    >>> apply_channel(s, ChannelParams(math.pi / 2, 1.0, 0.0)).mean.round(12).tolist()
    [0.0, -1.414213562373]
    """
    report = validate_physical(s)
    if not report:
        raise InvalidState(f"Channel input is not physical: {report}")
    R = rotation_matrix(c.phi)
    mean = math.sqrt(c.eta) * (R @ s.mean)
    cov = c.eta * (R @ s.cov @ R.T) + (1 - c.eta) * (c.N + 0.5) * np.eye(2)
    cov = 0.5 * (cov + cov.T)
    return GaussianState(mean, cov)


def covariance_update_factored(cov: np.ndarray, c: ChannelParams) -> np.ndarray:
    """The covariance update in its unsimplified Sigma_eta (Sigma_phi - Sigma_N) Sigma_eta + Sigma_N form."""
    R = rotation_matrix(c.phi)
    sigma_eta = math.sqrt(c.eta) * np.eye(2)
    sigma_phi = R @ np.asarray(cov, dtype=float) @ R.T
    sigma_N = (c.N + 0.5) * np.eye(2)
    return sigma_eta @ (sigma_phi - sigma_N) @ sigma_eta + sigma_N


def compose_channels(first: ChannelParams, second: ChannelParams) -> ChannelParams:
    """The single channel equal to applying ``first`` and then ``second``."""
    eta = first.eta * second.eta
    if eta == 1.0:
        return ChannelParams(first.phi + second.phi, 1.0, 0.0)
    noise = second.eta * (1 - first.eta) * (first.N + 0.5) + (1 - second.eta) * (second.N + 0.5)
    N = max(noise / (1 - eta) - 0.5, 0.0)
    return ChannelParams(first.phi + second.phi, eta, N)


def default_steps(pc: PhysicalChannelParams, per_unit: int = DEFAULT_STEPS_PER_UNIT) -> int:
    return max(1, int(math.ceil(per_unit * max(pc.phi, pc.gamma))))


def _moment_derivative(mean: np.ndarray, cov: np.ndarray, A: np.ndarray, diffusion: float):
    dmean = A @ mean
    dcov = A @ cov + cov @ A.T + diffusion * np.eye(2)
    return dmean, dcov


def integrate_master_equation(s: GaussianState, pc: PhysicalChannelParams, steps: int = None) -> GaussianState:
    """Integrate the moment equations of the master equation with fixed-step RK4

    d mean/dt = A mean and d cov/dt = A cov + cov A^T + Gamma (N + 1/2) I with
    A = [[-Gamma/2, omega], [-omega, -Gamma/2]].

    Parameters
    ----------
    s : GaussianState
    pc : PhysicalChannelParams
    steps : int, optional
        Number of RK4 steps. Defaults to 1000 per unit of max(omega t, Gamma t).

    Returns
    -------
    GaussianState

    Raises
    ------
    InvalidParameter
        If steps < 1.
    """
    if steps is None:
        steps = default_steps(pc)
    if steps < 1:
        raise InvalidParameter(f"The integrator needs at least one step, got {steps}")
    report = validate_physical(s)
    if not report:
        raise InvalidState(f"Master equation input is not physical: {report}")

    A = np.array([[-pc.Gamma / 2, pc.omega], [-pc.omega, -pc.Gamma / 2]])
    diffusion = pc.Gamma * (pc.N + 0.5)
    h = pc.t / steps
    mean = np.array(s.mean)
    cov = np.array(s.cov)
    for _ in range(steps):
        k1m, k1c = _moment_derivative(mean, cov, A, diffusion)
        k2m, k2c = _moment_derivative(mean + 0.5 * h * k1m, cov + 0.5 * h * k1c, A, diffusion)
        k3m, k3c = _moment_derivative(mean + 0.5 * h * k2m, cov + 0.5 * h * k2c, A, diffusion)
        k4m, k4c = _moment_derivative(mean + h * k3m, cov + h * k3c, A, diffusion)
        mean = mean + (h / 6) * (k1m + 2 * k2m + 2 * k3m + k4m)
        cov = cov + (h / 6) * (k1c + 2 * k2c + 2 * k3c + k4c)
    logger.debug(f"Integrated moments over t = {pc.t} in {steps} steps")
    return GaussianState(mean, 0.5 * (cov + cov.T))

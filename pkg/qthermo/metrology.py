import logging
import math
from enum import Enum
from typing import Tuple, Union

import numpy as np

from qthermo.constants import PhysicalConstants, get_constants
from qthermo.errors import InsensitiveObservable, InvalidParameter, InvalidState, NoInformation
from qthermo.gaussian import GaussianState, quadrature_purity

logger = logging.getLogger(__name__)

"""
Quantum Fisher information of the channel phase, its symmetric logarithmic
derivative, Cramer-Rao bounds and the closed-form temperature precision bounds.
"""

# Generator of phase-space rotations, dR/dphi at phi = 0
OMEGA = np.array([[0.0, 1.0], [-1.0, 0.0]])


class BoundKind(Enum):
    EXACT_QFI = "exact-qfi"
    ASYMPTOTIC_SQUEEZED = "asymptotic-squeezed"
    ASYMPTOTIC_COHERENT = "asymptotic-coherent"
    PYROMETER = "pyrometer"


# Short names accepted on the command line and in RunConfig
KIND_ALIASES = {
    "exact": BoundKind.EXACT_QFI,
    "squeezed": BoundKind.ASYMPTOTIC_SQUEEZED,
    "coherent": BoundKind.ASYMPTOTIC_COHERENT,
    "pyrometer": BoundKind.PYROMETER,
}


def parse_kind(kind: Union[str, BoundKind]) -> BoundKind:
    if isinstance(kind, BoundKind):
        return kind
    name = str(kind).strip().lower()
    if name in KIND_ALIASES:
        return KIND_ALIASES[name]
    for k in BoundKind:
        if k.value == name:
            return k
    raise InvalidParameter(f"Unknown bound kind {kind}. Choose from {sorted(KIND_ALIASES)}")


class SldForm(object):
    """Symmetric logarithmic derivative of the phase for a Gaussian state

    L = c_xp x~ o p~ + c_x x~ + c_p p~, where x~ = x - xbar, p~ = p - pbar and
    o is the symmetrized product.
    """

    c_xp: float
    c_x: float
    c_p: float

    def __init__(self, c_xp: float, c_x: float, c_p: float):
        self.c_xp = float(c_xp)
        self.c_x = float(c_x)
        self.c_p = float(c_p)

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.c_xp, self.c_x, self.c_p)

    def __repr__(self):
        return f"SldForm(c_xp={self.c_xp!r}, c_x={self.c_x!r}, c_p={self.c_p!r})"


class PrecisionBound(object):
    """A temperature error split into its statistical part and the heating of the sample

    Parameters
    ----------
    statistical : float
        Cramer-Rao (or pyrometer) error in K.
    heating : float
        Worst-case temperature rise caused by the probe in K.
    kind : BoundKind
        Which bound produced the statistical part.
    nbar : float, optional
        Mean photon number of the probe, if any.

    Attributes
    ----------
    delta_t : float
        statistical + heating.
    """

    delta_t: float
    statistical: float
    heating: float
    kind: BoundKind
    nbar: float

    def __init__(self, statistical: float, heating: float, kind: BoundKind, nbar: float = None):
        if not (statistical >= 0 and heating >= 0):
            raise InvalidParameter(
                f"Bound components must be >= 0, got statistical={statistical}, heating={heating}"
            )
        self.statistical = float(statistical)
        self.heating = float(heating)
        self.delta_t = self.statistical + self.heating
        self.kind = parse_kind(kind)
        self.nbar = nbar

    @property
    def heating_ratio(self) -> float:
        if self.statistical == 0:
            return math.inf if self.heating > 0 else 0.0
        return self.heating / self.statistical

    def is_noninvasive(self) -> bool:
        """True when the probe heats the sample by less than the statistical error."""
        return self.heating < self.statistical

    def __repr__(self):
        return (
            f"PrecisionBound(delta_t={self.delta_t!r}, statistical={self.statistical!r}, "
            f"heating={self.heating!r}, kind={self.kind.value}, nbar={self.nbar!r})"
        )


def _check_diagonal_variances(s: GaussianState):
    if s.cov[0, 0] <= 0 or s.cov[1, 1] <= 0:
        raise InvalidState(f"Quadrature variances must be positive, got cov={s.cov.tolist()}")


def qfi_phase(s_out: GaussianState) -> float:
    """Quantum Fisher information of the channel phase, from the output moments at phi = 0

    Parameters
    ----------
    s_out : GaussianState
        Channel output evaluated with phi = 0, so its covariance is diagonal.

    Returns
    -------
    float
        4 (Sigma_22 - Sigma_11)^2 / (1 + 4 Sigma_11 Sigma_22) + xbar^2 / Sigma_22 + pbar^2 / Sigma_11

    Raises
    ------
    InvalidState
        If a diagonal variance is not positive.

    See Also
    --------
    qfi_phase_general : the same quantity for an arbitrary covariance.

    Examples
    --------
    Lossless coherent state with one photon:

    >>> qfi_phase(GaussianState([2 ** 0.5, 0], [[0.5, 0], [0, 0.5]]))
    4.000000000000001
    """
    _check_diagonal_variances(s_out)
    s11 = float(s_out.cov[0, 0])
    s22 = float(s_out.cov[1, 1])
    squeezing_term = 4 * (s22 - s11) ** 2 / (1 + 4 * s11 * s22)
    displacement_term = s_out.xbar ** 2 / s22 + s_out.pbar ** 2 / s11
    return squeezing_term + displacement_term


def qfi_phase_general(s: GaussianState) -> float:
    """Phase QFI of a single-mode Gaussian state with any covariance

    Tr[(cov^-1 cov')^2] / (2 (1 + mu^2)) + mean'^T cov^-1 mean', where cov' = Omega cov + cov Omega^T,
    mean' = Omega mean and mu is the purity. Agrees with :func:`qfi_phase` for diagonal covariances
    and does not change under phase-space rotations of ``s``.
    """
    _check_diagonal_variances(s)
    mu = quadrature_purity(s)
    cov_inv = np.linalg.inv(s.cov)
    dcov = OMEGA @ s.cov + s.cov @ OMEGA.T
    dmean = OMEGA @ s.mean
    M = cov_inv @ dcov
    return float(np.trace(M @ M) / (2 * (1 + mu ** 2)) + dmean @ cov_inv @ dmean)


def sld_phase(s_out: GaussianState) -> SldForm:
    """Quadratic-form coefficients of the phase SLD for the phi = 0 output state

    Returns
    -------
    SldForm
        c_xp = 4 (Sigma_22 - Sigma_11) / (1 + 4 Sigma_11 Sigma_22), c_x = pbar / Sigma_11,
        c_p = -xbar / Sigma_22.
    """
    _check_diagonal_variances(s_out)
    s11 = float(s_out.cov[0, 0])
    s22 = float(s_out.cov[1, 1])
    c_xp = 4 * (s22 - s11) / (1 + 4 * s11 * s22)
    return SldForm(c_xp=c_xp, c_x=s_out.pbar / s11, c_p=-s_out.xbar / s22)


def sld_expectations(sld: SldForm, s: GaussianState) -> Tuple[float, float]:
    """<L> and <L^2> in the Gaussian state ``s``, from its second moments

    Odd central moments vanish and <(x~ o p~)^2> = Sigma_11 Sigma_22 + 2 Sigma_12^2 + 1/4.
    """
    s11 = float(s.cov[0, 0])
    s12 = float(s.cov[0, 1])
    s22 = float(s.cov[1, 1])
    first = sld.c_xp * s12
    second = (
        sld.c_xp ** 2 * (s11 * s22 + 2 * s12 ** 2 + 0.25)
        + sld.c_x ** 2 * s11
        + sld.c_p ** 2 * s22
        + 2 * sld.c_x * sld.c_p * s12
    )
    return first, second


def qfi_temperature(q_phi: float, alpha: float) -> float:
    """Reparametrize a phase QFI to temperature: alpha^2 q_phi, alpha in rad/K."""
    if q_phi < 0:
        raise InvalidParameter(f"A Fisher information cannot be negative, got {q_phi}")
    return alpha ** 2 * q_phi


def cramer_rao(q: float, k: int = 1) -> float:
    """Cramer-Rao bound 1 / sqrt(k q) for ``k`` repetitions

    Raises
    ------
    NoInformation
        If q <= 0.
    InvalidParameter
        If k < 1.
    """
    if k < 1:
        raise InvalidParameter(f"Number of repetitions must be >= 1, got {k}")
    if not q > 0:
        raise NoInformation(f"Fisher information {q} carries no information about the parameter")
    return 1.0 / math.sqrt(k * q)


def classical_fisher(p, dp) -> float:
    """Fisher information sum (dp)^2 / p over outcomes with p > 0."""
    p = np.asarray(p, dtype=float)
    dp = np.asarray(dp, dtype=float)
    if p.shape != dp.shape:
        raise InvalidParameter(f"Probabilities and derivatives differ in shape: {p.shape} vs {dp.shape}")
    support = p > 0
    return float(np.sum(dp[support] ** 2 / p[support]))


def error_propagation(dA_dtheta: float, deltaA: float) -> float:
    """Error on theta inferred from an observable with spread ``deltaA`` and slope ``dA_dtheta``

    Raises
    ------
    InsensitiveObservable
        If the slope is zero.
    """
    if dA_dtheta == 0:
        raise InsensitiveObservable("The observable does not depend on the parameter")
    return deltaA / abs(dA_dtheta)


def _check_bound_args(eta: float, N: float, nbar: float, alpha: float):
    if not (0 < eta <= 1):
        raise InvalidParameter(f"Transmissivity must lie in (0, 1], got {eta}")
    if N < 0:
        raise InvalidParameter(f"Reservoir occupation must be >= 0, got {N}")
    if not nbar > 0:
        raise InvalidParameter(f"Mean photon number must be positive, got {nbar}")
    if not alpha > 0:
        raise InvalidParameter(f"Phase-temperature coupling must be positive, got {alpha}")


def asymptotic_bound_squeezed(eta: float, N: float, nbar: float, alpha: float) -> float:
    """Large-nbar temperature error of a squeezed-vacuum probe

    Parameters
    ----------
    eta : float
        Transmissivity of the sample.
    N : float
        Reservoir occupation.
    nbar : float
        Mean photon number of the probe.
    alpha : float
        Phase-temperature coupling in rad/K.

    Returns
    -------
    float
        sqrt((1 - eta)(1 + 2N) / (4 eta nbar)) / alpha. At eta = 1 the leading term
        vanishes and 0 is returned with a warning.

    Examples
    --------
    >>> asymptotic_bound_squeezed(0.5, 0.0, 1.0, 1.0)
    0.5
    """
    _check_bound_args(eta, N, nbar, alpha)
    if eta == 1:
        logger.warning(
            f"Lossless channel (eta = 1): the squeezed-vacuum leading term vanishes, returning 0 for nbar = {nbar}"
        )
        return 0.0
    return math.sqrt((1 - eta) * (1 + 2 * N) / (4 * eta * nbar)) / alpha


def asymptotic_bound_coherent(eta: float, N: float, nbar: float, alpha: float) -> float:
    """Large-nbar temperature error of a coherent probe, sqrt((1 + 2(1 - eta)N) / (4 eta nbar)) / alpha."""
    _check_bound_args(eta, N, nbar, alpha)
    return math.sqrt((1 + 2 * (1 - eta) * N) / (4 * eta * nbar)) / alpha


def heating_disturbance(
    nbar: float,
    eta: float,
    omega: float,
    M: float,
    Cs: float,
    constants: PhysicalConstants = None,
) -> float:
    """Temperature rise (K) when the absorbed (1 - eta) nbar photons all turn into heat

    Parameters
    ----------
    nbar : float
    eta : float
    omega : float
        Probe angular frequency in rad/s.
    M : float
        Sample mass in kg.
    Cs : float
        Specific heat in J/(kg K).
    constants : PhysicalConstants, optional

    Returns
    -------
    float
        (1 - eta) hbar omega nbar / (M Cs)
    """
    if constants is None:
        constants = get_constants()
    if not (M > 0 and Cs > 0):
        raise InvalidParameter(f"Mass and specific heat must be positive, got M={M}, Cs={Cs}")
    if nbar < 0:
        raise InvalidParameter(f"Mean photon number must be >= 0, got {nbar}")
    return (1 - eta) * constants.hbar * omega * nbar / (M * Cs)


def total_bound(
    kind: Union[str, BoundKind],
    eta: float,
    N: float,
    nbar: float,
    alpha: float,
    omega: float,
    M: float,
    Cs: float,
    constants: PhysicalConstants = None,
) -> PrecisionBound:
    """Asymptotic statistical error of a squeezed or coherent probe plus its heating tail

    Parameters
    ----------
    kind : str or BoundKind
        "squeezed" or "coherent" (or the matching BoundKind).

    Returns
    -------
    PrecisionBound
    """
    kind = parse_kind(kind)
    if kind == BoundKind.ASYMPTOTIC_SQUEEZED:
        statistical = asymptotic_bound_squeezed(eta, N, nbar, alpha)
    elif kind == BoundKind.ASYMPTOTIC_COHERENT:
        statistical = asymptotic_bound_coherent(eta, N, nbar, alpha)
    else:
        raise InvalidParameter(f"total_bound has no closed form for {kind.value}")
    heating = heating_disturbance(nbar, eta, omega, M, Cs, constants)
    return PrecisionBound(statistical, heating, kind, nbar)


def exact_bound(
    q_phi: float,
    eta: float,
    nbar: float,
    alpha: float,
    omega: float,
    M: float,
    Cs: float,
    constants: PhysicalConstants = None,
) -> PrecisionBound:
    """Single-shot Cramer-Rao bound from an exact phase QFI, with the same heating tail."""
    statistical = cramer_rao(qfi_temperature(q_phi, alpha), k=1)
    heating = heating_disturbance(nbar, eta, omega, M, Cs, constants)
    return PrecisionBound(statistical, heating, BoundKind.EXACT_QFI, nbar)


def analytic_optimal_nbar(a: float, b: float) -> float:
    """Minimizer (a / 2b)^(2/3) of a / sqrt(nbar) + b nbar; the minimum value is 3 b nbar*."""
    if not (a > 0 and b > 0):
        raise InvalidParameter(f"Both coefficients must be positive, got a={a}, b={b}")
    return (a / (2 * b)) ** (2.0 / 3.0)


def pulse_energy(nbar: float, omega: float, constants: PhysicalConstants = None) -> float:
    """Energy (J) carried by ``nbar`` photons at angular frequency ``omega``."""
    if constants is None:
        constants = get_constants()
    return nbar * constants.hbar * omega

import logging
import math
from typing import List

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from qthermo.channel import ChannelParams, apply_channel
from qthermo.errors import InvalidParameter
from qthermo.gaussian import InputStateParams, make_gaussian_state, mean_photon_number
from qthermo.metrology import PrecisionBound, qfi_phase, qfi_temperature

logger = logging.getLogger(__name__)

"""
Numerical optimization of the probe state at a fixed mean photon number.

The search runs over coordinates u = (u1, u2) that satisfy the photon-number
constraint by construction:
    f = sin(u1)^2 is the fraction of photons in the displacement,
    g = sin(u2)^2 is the fraction of the remaining photons in the thermal seed,
    the rest goes into squeezing with r0 >= 0 (x anti-squeezed).
The displacement enters the phase QFI as eta (xbar0^2 / Sigma_22 + pbar0^2 / Sigma_11) and
Sigma_22 <= Sigma_11 when r0 >= 0, so it is placed along x.
"""

XATOL = 1e-10
FATOL = 1e-13
MAX_EVALUATIONS = 10000
DEFAULT_RESTARTS = 8
SIMPLEX_EDGE = 0.1
# Random starts stay this far from the stationary edges f, g in {0, 1}
START_MARGIN = 0.05
# Relative spread of the restart optima above which a warning is logged
RESTART_RTOL = 1e-6
# Below this displacement fraction the displacement angle is reported canonically
TIE_FRACTION = 1e-12


class OptimizationResult(object):
    """Best probe found by an optimization run

    Attributes
    ----------
    params : InputStateParams
        The optimizing input state.
    q_t : float
        Temperature QFI of the optimum, 1/K^2.
    delta_t : float
        Temperature error in K. The statistical Cramer-Rao error for
        :func:`optimize_state_at_nbar`, the total error for an optimization over nbar.
    nbar : float
        Mean photon number of the probe.
    iterations : int
        Iterations used by the run that produced the optimum.
    converged : bool
        Whether that run met its tolerances before the evaluation cap.
    restart_q_t : List[float]
        q_t reached from each starting point.
    bound : PrecisionBound, optional
        Decomposition of delta_t, if a heating model was involved.
    """

    params: InputStateParams
    q_t: float
    delta_t: float
    nbar: float
    iterations: int
    converged: bool
    restart_q_t: List[float]
    bound: PrecisionBound

    def __init__(
        self,
        params: InputStateParams,
        q_t: float,
        delta_t: float,
        nbar: float,
        iterations: int,
        converged: bool,
        restart_q_t: List[float] = None,
        bound: PrecisionBound = None,
    ):
        assert q_t >= 0
        self.params = params
        self.q_t = q_t
        self.delta_t = delta_t
        self.nbar = nbar
        self.iterations = iterations
        self.converged = converged
        self.restart_q_t = restart_q_t if restart_q_t is not None else list()
        self.bound = bound

    @property
    def displacement_fraction(self) -> float:
        if self.nbar == 0:
            return 0.0
        return (self.params.xbar0 ** 2 + self.params.pbar0 ** 2) / (2 * self.nbar)

    # @returns (max - min) / max over the restart optima, 0 without restarts
    @property
    def restart_spread(self) -> float:
        if len(self.restart_q_t) < 2 or max(self.restart_q_t) == 0:
            return 0.0
        return (max(self.restart_q_t) - min(self.restart_q_t)) / max(self.restart_q_t)

    def __repr__(self):
        return (
            f"OptimizationResult(nbar={self.nbar!r}, q_t={self.q_t!r}, delta_t={self.delta_t!r}, "
            f"params={self.params!r}, iterations={self.iterations}, converged={self.converged})"
        )


def state_from_coordinates(u, nbar: float, theta: float = 0.0) -> InputStateParams:
    """Input state with ``nbar`` photons at search coordinates ``u = (u1, u2)``, displaced at angle ``theta``."""
    f = math.sin(u[0]) ** 2
    g = math.sin(u[1]) ** 2
    amplitude = math.sqrt(2 * f * nbar)
    rest = (1 - f) * nbar
    N0 = g * rest
    ratio = (rest + 0.5) / (N0 + 0.5)
    # e^{2 r0} from cosh(2 r0) = ratio
    e2r = ratio + math.sqrt(max(ratio * ratio - 1.0, 0.0))
    return InputStateParams(
        xbar0=amplitude * math.cos(theta),
        pbar0=amplitude * math.sin(theta),
        N0=N0,
        r0=0.5 * math.log(e2r),
    )


# @returns the phase QFI of the channel output for input p, without building state objects
def _fast_qfi_phase(p: InputStateParams, eta: float, N: float) -> float:
    scale = p.N0 + 0.5
    e2r = math.exp(2 * p.r0)
    noise = (1 - eta) * (N + 0.5)
    s11 = eta * scale * e2r + noise
    s22 = eta * scale / e2r + noise
    return (
        4 * (s22 - s11) ** 2 / (1 + 4 * s11 * s22)
        + eta * p.xbar0 ** 2 / s22
        + eta * p.pbar0 ** 2 / s11
    )


def output_qfi_phase(p: InputStateParams, channel: ChannelParams) -> float:
    """Phase QFI of the state built from ``p`` after the channel, evaluated at phi = 0."""
    return qfi_phase(apply_channel(make_gaussian_state(p), channel.at_zero_phase()))


def optimize_state_at_nbar(
    nbar: float,
    channel: ChannelParams,
    alpha: float,
    seed: int = 0,
    restarts: int = DEFAULT_RESTARTS,
    max_evaluations: int = MAX_EVALUATIONS,
) -> OptimizationResult:
    """Maximize the temperature QFI over all Gaussian input states with ``nbar`` photons

    A golden-section search along the squeezing/displacement slice seeds a Nelder-Mead
    simplex, which is then repeated from ``restarts`` random starting points. Each run is
    restarted once from its own optimum, and a warning is logged when the runs disagree on
    q_t by more than RESTART_RTOL relative.

    Parameters
    ----------
    nbar : float
        Mean photon number of the probe, must be positive.
    channel : ChannelParams
        The channel; its phase is ignored since the QFI is evaluated at phi = 0.
    alpha : float
        Phase-temperature coupling in rad/K.
    seed : int
        Seed for the random restarts. Run ``i`` draws from ``default_rng([seed, i])``.
    restarts : int
        Number of random restarts on top of the seeded run.
    max_evaluations : int
        Evaluation cap of each simplex run.

    Returns
    -------
    OptimizationResult

    Raises
    ------
    InvalidParameter
        If nbar <= 0.

    Examples
    --------
    >>> result = optimize_state_at_nbar(1.0, ChannelParams(0.0, 1.0, 0.0), alpha=1.0)
    >>> round(result.q_t, 6)
    16.0
    """
    if not (nbar > 0 and math.isfinite(nbar)):
        raise InvalidParameter(f"Mean photon number must be positive, got {nbar}")
    if restarts < 0:
        raise InvalidParameter(f"Number of restarts must be >= 0, got {restarts}")
    eta = channel.eta
    N = channel.N

    def slice_objective(u1):
        return -_fast_qfi_phase(state_from_coordinates((u1, 0.0), nbar), eta, N)

    # The coordinates are periodic, so the bracket search may wander freely
    try:
        seed_u1 = minimize_scalar(slice_objective, bracket=(0.2, 0.6), method="golden", tol=1e-8).x
    except (RuntimeError, ValueError) as e:
        logger.debug(f"Golden-section seed failed at nbar = {nbar}: {e}")
        seed_u1 = 0.0
    starts = [np.array([seed_u1, 0.0])]
    low = np.full(2, START_MARGIN)
    high = np.full(2, math.pi / 2 - START_MARGIN)
    for i in range(restarts):
        starts.append(np.random.default_rng([seed, i]).uniform(low, high))

    scale = max(-slice_objective(seed_u1), 4 * eta * nbar / (1 + 2 * (1 - eta) * N))

    def objective(u):
        return -_fast_qfi_phase(state_from_coordinates(u, nbar), eta, N) / scale

    runs = list()
    for x0 in starts:
        run = _nelder_mead(objective, x0, max_evaluations)
        # Restart once from the first optimum with a fresh simplex
        polished = _nelder_mead(objective, run.x, max_evaluations)
        polished.nit += run.nit
        runs.append(polished if polished.fun <= run.fun else run)
    best = min(runs, key=lambda run: run.fun)
    if not best.success:
        logger.warning(f"State optimization at nbar = {nbar} stopped without converging: {best.message}")

    u = np.array(best.x)
    theta = 0.0
    params = state_from_coordinates(u, nbar)
    if math.sin(u[0]) ** 2 <= TIE_FRACTION or params.r0 == 0:
        theta = math.pi / 2
        params = state_from_coordinates(u, nbar, theta)

    q_t = qfi_temperature(output_qfi_phase(params, channel), alpha)
    delta_t = 1.0 / math.sqrt(q_t) if q_t > 0 else math.inf
    restart_q_t = [qfi_temperature(-run.fun * scale, alpha) for run in runs]
    assert abs(mean_photon_number(params) - nbar) <= 1e-6 * nbar
    result = OptimizationResult(
        params=params,
        q_t=q_t,
        delta_t=delta_t,
        nbar=nbar,
        iterations=int(best.nit),
        converged=bool(best.success),
        restart_q_t=restart_q_t,
    )
    if result.restart_spread > RESTART_RTOL:
        logger.warning(
            f"Restarts at nbar = {nbar} disagree: q_t ranges over {min(restart_q_t):.12g} to {max(restart_q_t):.12g}"
        )
    return result


def _nelder_mead(objective, x0, max_evaluations: int):
    x0 = np.asarray(x0, dtype=float)
    simplex = np.vstack([x0, x0 + SIMPLEX_EDGE * np.eye(len(x0))])
    return minimize(
        objective,
        x0,
        method="Nelder-Mead",
        options={
            "xatol": XATOL,
            "fatol": FATOL,
            "maxfev": max_evaluations,
            "initial_simplex": simplex,
        },
    )

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from typing import List, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.optimize import minimize_scalar

from qthermo.data import KIND_COLUMNS, NBAR_COLUMN, SweepTable
from qthermo.errors import InvalidParameter, RangeError, ValidationError
from qthermo.material import ThermometerSetup
from qthermo.metrology import BoundKind, PrecisionBound, analytic_optimal_nbar, parse_kind
from qthermo.optimizer import DEFAULT_RESTARTS, OptimizationResult
from qthermo.probe import (
    DEFAULT_AREA,
    DEFAULT_RESPONSE_TIME,
    AbstractProbe,
    OptimalGaussianProbe,
    probe_for,
)

logger = logging.getLogger(__name__)

"""
Precision as a function of the probe's mean photon number: sweeps over an nbar grid and
the search for the photon number that balances statistical error against heating.
"""

# Search interval of optimize_nbar, in log10(nbar)
DEFAULT_SEARCH_RANGE = (8.0, 16.0)
SEARCH_POINTS = 33
GOLDEN_TOL = 1e-11


class NbarGrid(object):
    """Log-spaced grid of ``points`` photon numbers from 10^start to 10^stop

    Raises
    ------
    ValidationError
        If points < 1, the exponents are not finite, or stop <= start for more than one point.
    """

    start: float
    stop: float
    points: int

    def __init__(self, start: float, stop: float, points: int):
        if not (math.isfinite(start) and math.isfinite(stop)):
            raise ValidationError(f"Grid exponents must be finite, got {start} and {stop}", "grid")
        if points < 1:
            raise ValidationError(f"A grid needs at least one point, got {points}", "grid")
        if points > 1 and not stop > start:
            raise ValidationError(f"Grid must increase: start {start} >= stop {stop}", "grid")
        self.start = float(start)
        self.stop = float(stop)
        self.points = int(points)

    def values(self) -> np.ndarray:
        return np.logspace(self.start, self.stop, self.points)

    def __repr__(self):
        return f"NbarGrid(start={self.start!r}, stop={self.stop!r}, points={self.points!r})"


def _total_error(probe: AbstractProbe, setup: ThermometerSetup, log_nbar: float) -> float:
    return probe.bound(setup, 10.0 ** log_nbar).delta_t


def optimize_nbar(
    kind: Union[str, BoundKind],
    setup: ThermometerSetup,
    search_range: Tuple[float, float] = DEFAULT_SEARCH_RANGE,
    points: int = SEARCH_POINTS,
    seed: int = 0,
    restarts: int = DEFAULT_RESTARTS,
) -> OptimizationResult:
    """Photon number minimizing statistical error plus heating

    A log-spaced grid locates the minimum, which golden-section search then refines in
    log10(nbar). For the asymptotic kinds the closed-form optimum (a / 2b)^(2/3) is used
    as the starting point.

    Parameters
    ----------
    kind : str or BoundKind
        "exact", "squeezed" or "coherent".
    setup : ThermometerSetup
    search_range : (float, float)
        Search interval as (log10 nbar_min, log10 nbar_max).
    points : int
        Number of grid points, at least 3.
    seed : int
        Seed for the state optimizer (exact kind only).
    restarts : int
        Restarts of the state optimizer (exact kind only).

    Returns
    -------
    OptimizationResult
        ``delta_t`` is the total error at the optimum and ``bound`` its decomposition.

    Raises
    ------
    RangeError
        If the grid minimum lies on the boundary of the search range.
    """
    kind = parse_kind(kind)
    probe = probe_for(kind, seed=seed, restarts=restarts)
    if not probe.uses_photons():
        raise InvalidParameter(f"The {kind.value} sends no photons through the sample, there is no nbar to optimize")
    if points < 3:
        raise InvalidParameter(f"The search grid needs at least 3 points, got {points}")
    grid = NbarGrid(search_range[0], search_range[1], points)

    u = np.log10(grid.values())
    totals = np.array([_total_error(probe, setup, x) for x in u])
    i = int(np.argmin(totals))
    if i == 0 or i == len(u) - 1:
        raise RangeError(
            f"Total error of {kind.value} is smallest at the edge of the search range (nbar = {10 ** u[i]:.6g}); "
            "widen the range or check that the probe heats the sample",
            nbar=float(10 ** u[i]),
        )

    middle = u[i]
    a = probe.statistical_coefficient(setup)
    b = setup.heating_slope
    if a is not None and b > 0:
        guess = math.log10(analytic_optimal_nbar(a, b))
        if u[i - 1] < guess < u[i + 1]:
            middle = guess
    refined = minimize_scalar(
        lambda x: _total_error(probe, setup, x),
        bracket=(u[i - 1], middle, u[i + 1]),
        method="golden",
        tol=GOLDEN_TOL,
    )
    nbar = float(10 ** refined.x)
    logger.info(f"Optimal photon number for {kind.value}: {nbar:.6g} after {refined.nit} iterations")

    if isinstance(probe, OptimalGaussianProbe):
        result = probe.optimize(setup, nbar)
        result.delta_t = result.bound.delta_t
        result.iterations = int(refined.nit)
        return result

    bound = probe.bound(setup, nbar)
    return OptimizationResult(
        params=probe.input_state(nbar),
        q_t=1.0 / bound.statistical ** 2 if bound.statistical > 0 else 0.0,
        delta_t=bound.delta_t,
        nbar=nbar,
        iterations=int(refined.nit),
        converged=bool(refined.success),
        bound=bound,
    )


def _sweep_row(args) -> List[float]:
    probes, setup, nbar = args
    return [nbar] + [probe.bound(setup, nbar).delta_t for probe in probes]


def sweep_nbar(
    grid: Union[NbarGrid, Sequence[float]],
    setup: ThermometerSetup,
    kinds: Sequence[Union[str, BoundKind]],
    seed: int = 0,
    restarts: int = DEFAULT_RESTARTS,
    area: float = DEFAULT_AREA,
    response_time: float = DEFAULT_RESPONSE_TIME,
    jobs: int = 1,
) -> SweepTable:
    """Temperature error of each bound kind at every photon number of ``grid``

    Parameters
    ----------
    grid : NbarGrid or sequence of float
        Strictly increasing photon numbers.
    setup : ThermometerSetup
    kinds : sequence of str or BoundKind
        Any of "exact", "squeezed", "coherent", "pyrometer". Columns appear in the order
        nbar, dt_exact, dt_sq_asym, dt_coh_asym, dt_pyro.
    seed, restarts : int
        Settings of the state optimizer for the exact kind.
    area, response_time : float
        Pyrometer benchmark settings in m^2 and s.
    jobs : int
        Worker processes. Rows are returned in grid order whatever the completion order.

    Returns
    -------
    SweepTable
    """
    if len(kinds) == 0:
        raise ValidationError("At least one bound kind is needed for a sweep", "kinds")
    wanted = {parse_kind(k) for k in kinds}
    ordered = [k for k in BoundKind if k in wanted]
    probes = [
        probe_for(k, seed=seed, restarts=restarts, area=area, response_time=response_time) for k in ordered
    ]

    nbars = grid.values() if isinstance(grid, NbarGrid) else np.asarray(grid, dtype=float)
    if len(nbars) == 0:
        raise ValidationError("The nbar grid is empty", "grid")
    if np.any(np.diff(nbars) <= 0) or np.any(nbars <= 0):
        raise ValidationError("The nbar grid must be positive and strictly increasing", "grid")

    work = [(probes, setup, float(nbar)) for nbar in nbars]
    if jobs is None or jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            rows = list(executor.map(_sweep_row, work))
    else:
        rows = [_sweep_row(w) for w in work]
    logger.info(f"Swept {len(rows)} photon numbers for {[k.value for k in ordered]}")

    columns = [NBAR_COLUMN] + [KIND_COLUMNS[k.value] for k in ordered]
    return SweepTable(pd.DataFrame(rows, columns=columns))


def available_jobs() -> int:
    return os.cpu_count() or 1

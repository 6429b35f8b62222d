import math
from typing import List, Union

import numpy as np

from qthermo.errors import InvalidParameter, InvalidState

"""
Single-mode Gaussian states in dimensionless quadratures x = (a + a^dagger)/sqrt(2),
p = -i(a - a^dagger)/sqrt(2). The vacuum has covariance I/2.
"""

# Absolute tolerance on det(cov) - 1/4
PHYSICALITY_TOL = 1e-12


class InputStateParams(object):
    """Parameters of the probe state D(d0) S(r0) rho_thermal(N0) S(r0)^dagger D(d0)^dagger

    Parameters
    ----------
    xbar0 : float
        Displacement of the x quadrature.
    pbar0 : float
        Displacement of the p quadrature.
    N0 : float
        Mean photon number of the thermal seed state, must be >= 0.
    r0 : float
        Squeezing parameter. Positive values anti-squeeze x.

    Raises
    ------
    InvalidParameter
        If a field is not finite or N0 is negative.

    Examples
    --------
    >>> p = InputStateParams.squeezed_vacuum(nbar=1.0)
    >>> round(mean_photon_number(p), 12)
    1.0
    """

    xbar0: float
    pbar0: float
    N0: float
    r0: float

    def __init__(self, xbar0: float = 0.0, pbar0: float = 0.0, N0: float = 0.0, r0: float = 0.0):
        self.xbar0 = float(xbar0)
        self.pbar0 = float(pbar0)
        self.N0 = float(N0)
        self.r0 = float(r0)
        self.check()

    def check(self):
        for name in ("xbar0", "pbar0", "N0", "r0"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise InvalidParameter(f"Input state parameter {name} must be finite, got {value}")
        if self.N0 < 0:
            raise InvalidParameter(f"Thermal seed photon number N0 must be >= 0, got {self.N0}")

    @classmethod
    def coherent(cls, nbar: float, theta: float = 0.0) -> "InputStateParams":
        amplitude = math.sqrt(2 * nbar)
        return cls(xbar0=amplitude * math.cos(theta), pbar0=amplitude * math.sin(theta))

    @classmethod
    def squeezed_vacuum(cls, nbar: float) -> "InputStateParams":
        return cls(r0=math.asinh(math.sqrt(nbar)))

    # Half the photons thermal, half in an x displacement
    @classmethod
    def displaced_thermal(cls, nbar: float) -> "InputStateParams":
        return cls(xbar0=math.sqrt(nbar), N0=nbar / 2)

    @classmethod
    def thermal(cls, N0: float) -> "InputStateParams":
        return cls(N0=N0)

    def __repr__(self):
        return f"InputStateParams(xbar0={self.xbar0!r}, pbar0={self.pbar0!r}, N0={self.N0!r}, r0={self.r0!r})"

    def __eq__(self, other):
        if not isinstance(other, InputStateParams):
            return NotImplemented
        return (self.xbar0, self.pbar0, self.N0, self.r0) == (other.xbar0, other.pbar0, other.N0, other.r0)

    def as_dict(self) -> dict:
        return {"xbar0": self.xbar0, "pbar0": self.pbar0, "N0": self.N0, "r0": self.r0}


class GaussianState(object):
    """First moments and covariance matrix of a single bosonic mode

    Both arrays are read-only copies, so a GaussianState can be shared freely.

    Parameters
    ----------
    mean : array_like, shape (2,)
        Quadrature means (xbar, pbar).
    cov : array_like, shape (2, 2)
        Symmetric covariance matrix.
    """

    mean: np.ndarray
    cov: np.ndarray

    def __init__(self, mean, cov):
        mean = np.array(mean, dtype=float).reshape(-1)
        cov = np.array(cov, dtype=float)
        if mean.shape != (2,) or cov.shape != (2, 2):
            raise InvalidState(
                f"A single-mode state needs a mean of shape (2,) and covariance of shape (2, 2), got {mean.shape} and {cov.shape}"
            )
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise InvalidState(f"State moments must be finite: mean={mean}, cov={cov}")
        mean.setflags(write=False)
        cov.setflags(write=False)
        self.mean = mean
        self.cov = cov

    @property
    def xbar(self) -> float:
        return float(self.mean[0])

    @property
    def pbar(self) -> float:
        return float(self.mean[1])

    def det(self) -> float:
        return float(self.cov[0, 0] * self.cov[1, 1] - self.cov[0, 1] * self.cov[1, 0])

    def __repr__(self):
        return f"GaussianState(mean={self.mean.tolist()}, cov={self.cov.tolist()})"


class PhysicalityReport(object):
    ok: bool
    violations: List[str]

    def __init__(self, violations: List[str]):
        self.violations = violations
        self.ok = len(violations) == 0

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "physical"
        return "; ".join(self.violations)


def make_gaussian_state(p: InputStateParams) -> GaussianState:
    """Build the Gaussian state described by ``p``

    Parameters
    ----------
    p : InputStateParams

    Returns
    -------
    GaussianState
        mean (xbar0, pbar0) and covariance (N0 + 1/2) diag(e^{2 r0}, e^{-2 r0}).

    Raises
    ------
    InvalidParameter
        If ``p`` is invalid, e.g. N0 < 0.
    """
    p.check()
    scale = p.N0 + 0.5
    cov = np.diag([scale * math.exp(2 * p.r0), scale * math.exp(-2 * p.r0)])
    return GaussianState([p.xbar0, p.pbar0], cov)


def validate_physical(s: GaussianState) -> PhysicalityReport:
    """Check that ``s`` is a valid quantum state: symmetric, positive definite, det >= 1/4."""
    violations = list()
    cov = s.cov
    if abs(cov[0, 1] - cov[1, 0]) > PHYSICALITY_TOL * max(1.0, abs(cov[0, 1])):
        violations.append(f"covariance is not symmetric ({cov[0, 1]} != {cov[1, 0]})")
    det = s.det()
    if cov[0, 0] <= 0 or det <= 0:
        violations.append(f"covariance is not positive definite (cov={cov.tolist()})")
    if det < 0.25 - PHYSICALITY_TOL:
        violations.append(f"det(cov) = {det} violates the uncertainty bound 1/4")
    return PhysicalityReport(violations)


def mean_photon_number(s: Union[GaussianState, InputStateParams]) -> float:
    """Mean photon number of a state or of the state built from input parameters

    Parameters
    ----------
    s : GaussianState or InputStateParams

    Returns
    -------
    float
        ((Sigma_11 + Sigma_22 + xbar^2 + pbar^2) - 1) / 2, never negative.

    Raises
    ------
    InvalidState
        If ``s`` is a GaussianState that fails :func:`validate_physical`.

    Examples
    --------
    >>> mean_photon_number(InputStateParams(xbar0=2 ** 0.5))
    1.0000000000000002
    """
    if isinstance(s, InputStateParams):
        s.check()
        nbar = 0.5 * ((s.N0 + 0.5) * 2 * math.cosh(2 * s.r0) + s.xbar0 ** 2 + s.pbar0 ** 2 - 1)
        return max(nbar, 0.0)

    report = validate_physical(s)
    if not report:
        raise InvalidState(f"Cannot count photons of an unphysical state: {report}")
    nbar = 0.5 * (s.cov[0, 0] + s.cov[1, 1] + s.xbar ** 2 + s.pbar ** 2 - 1)
    return max(float(nbar), 0.0)


def rotation_matrix(theta: float) -> np.ndarray:
    c = math.cos(theta)
    s = math.sin(theta)
    return np.array([[c, s], [-s, c]])


def rotate_state(s: GaussianState, theta: float) -> GaussianState:
    """Phase-space rotation by ``theta``: mean R mean, covariance R cov R^T."""
    R = rotation_matrix(theta)
    return GaussianState(R @ s.mean, R @ s.cov @ R.T)


def quadrature_purity(s: GaussianState) -> float:
    det = s.det()
    if det <= 0:
        raise InvalidState(f"Purity is undefined for det(cov) = {det}")
    return 1.0 / (2.0 * math.sqrt(det))


def vacuum() -> GaussianState:
    return GaussianState([0.0, 0.0], 0.5 * np.eye(2))

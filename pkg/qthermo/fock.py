import logging
import math

import numpy as np
from scipy.linalg import expm

from qthermo.channel import PhysicalChannelParams
from qthermo.errors import InvalidParameter, InvalidState, NoInformation, NumericFailure, TruncationError
from qthermo.gaussian import GaussianState, InputStateParams, mean_photon_number
from qthermo.metrology import SldForm

logger = logging.getLogger(__name__)

"""
Brute-force counterpart of the Gaussian formulas: density matrices on a truncated
photon-number basis, Lindblad evolution and the QFI from an eigendecomposition.
"""

TAIL_TOL = 1e-10
HERMITIAN_TOL = 1e-12
NEGATIVE_EIGENVALUE_TOL = 1e-10
EIGENVALUE_FLOOR = 1e-12
TRACE_DRIFT_TOL = 1e-6
LINDBLAD_STEPS_PER_UNIT = 2000
MAX_DIM = 600


def annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


def number_operator(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def quadratures(dim: int):
    # x = (a + a^dagger)/sqrt(2), p = -i(a - a^dagger)/sqrt(2)
    a = annihilation(dim)
    ad = a.conj().T
    return (a + ad) / math.sqrt(2), -1j * (a - ad) / math.sqrt(2)


def oracle_dimension(nbar: float) -> int:
    """Starting truncation for a state with ``nbar`` photons, max(30, ceil(nbar + 8 sqrt(nbar + 1) + 20))."""
    return max(30, int(math.ceil(nbar + 8 * math.sqrt(nbar + 1) + 20)))


class FockDensityMatrix(object):
    """Density matrix on the photon-number basis truncated to ``dim`` levels

    Parameters
    ----------
    data : array_like, shape (dim, dim)
        Hermitian matrix with trace in [1 - tail_tol, 1].

    Raises
    ------
    InvalidState
        If ``data`` is not square, not Hermitian to 1e-12, or its trace is out of range.
    """

    dim: int
    data: np.ndarray

    def __init__(self, data, tail_tol: float = TAIL_TOL):
        data = np.array(data, dtype=complex)
        if data.ndim != 2 or data.shape[0] != data.shape[1] or data.shape[0] < 2:
            raise InvalidState(f"A density matrix must be square with dim >= 2, got shape {data.shape}")
        asymmetry = np.max(np.abs(data - data.conj().T))
        if asymmetry > HERMITIAN_TOL:
            raise InvalidState(f"Density matrix is not Hermitian (deviation {asymmetry:.3g})")
        trace = float(np.real(np.trace(data)))
        if not (1 - tail_tol - 1e-12 <= trace <= 1 + 1e-9):
            raise InvalidState(f"Density matrix trace {trace} is outside [1 - {tail_tol}, 1]")
        self.data = 0.5 * (data + data.conj().T)
        self.dim = data.shape[0]

    def trace(self) -> float:
        return float(np.real(np.trace(self.data)))

    def populations(self) -> np.ndarray:
        return np.real(np.diag(self.data))

    def eigh(self):
        """Eigenvalues (clipped at 0) and eigenvectors. Clipping beyond -1e-10 is logged."""
        values, vectors = np.linalg.eigh(self.data)
        if values.min() < -NEGATIVE_EIGENVALUE_TOL:
            logger.warning(f"Clipping negative eigenvalue {values.min():.3g} of a {self.dim}-level density matrix")
        return np.clip(values, 0.0, None), vectors

    def __repr__(self):
        return f"FockDensityMatrix(dim={self.dim}, trace={self.trace():.12f})"


# @returns the dimension at which the populations in pops have accumulated 1 - tail_tol / 10
def _suggest_dimension(pops: np.ndarray, dim: int, tail_tol: float) -> int:
    cumulative = np.cumsum(pops)
    level = int(np.searchsorted(cumulative, 1 - tail_tol / 10))
    if level >= len(pops) - 20:
        return 2 * len(pops)
    return max(level + 10, dim + 10)


def build_state(p: InputStateParams, dim: int = None, tail_tol: float = TAIL_TOL) -> FockDensityMatrix:
    """Truncated density matrix of D(d0) S(r0) rho_thermal(N0) S(r0)^dagger D(d0)^dagger

    Displacement and squeezing are matrix exponentials of the ladder-operator generators,
    computed on an enlarged space and cropped to ``dim``.

    Parameters
    ----------
    p : InputStateParams
    dim : int, optional
        Truncation. When omitted, starts from :func:`oracle_dimension` and grows to the
        suggested dimension until the tail fits (up to 600 levels).
    tail_tol : float
        Largest allowed trace deficit.

    Returns
    -------
    FockDensityMatrix

    Raises
    ------
    TruncationError
        If the population beyond ``dim`` exceeds ``tail_tol``. Carries a suggested dimension.
    """
    if dim is None:
        dim = oracle_dimension(mean_photon_number(p))
        while True:
            try:
                return build_state(p, dim, tail_tol)
            except TruncationError as e:
                if e.suggested_dim > MAX_DIM:
                    raise
                logger.info(f"Raising truncation from {dim} to {e.suggested_dim}")
                dim = e.suggested_dim

    if dim < 2:
        raise InvalidParameter(f"Truncation must keep at least 2 levels, got {dim}")
    work = max(2 * dim, dim + 40)
    a = annihilation(work)
    ad = a.conj().T

    if p.N0 > 0:
        n = np.arange(work)
        thermal = np.diag(np.exp(n * math.log(p.N0) - (n + 1) * math.log1p(p.N0))).astype(complex)
    else:
        thermal = np.zeros((work, work), dtype=complex)
        thermal[0, 0] = 1.0
    # Positive r0 anti-squeezes x
    S = expm(0.5 * p.r0 * (ad @ ad - a @ a))
    amplitude = (p.xbar0 + 1j * p.pbar0) / math.sqrt(2)
    D = expm(amplitude * ad - np.conj(amplitude) * a)
    U = D @ S
    full = U @ thermal @ U.conj().T
    full = 0.5 * (full + full.conj().T)

    rho = full[:dim, :dim]
    deficit = 1.0 - float(np.real(np.trace(rho)))
    if deficit > tail_tol:
        suggested = _suggest_dimension(np.real(np.diag(full)), dim, tail_tol)
        raise TruncationError(
            f"Truncating at {dim} levels loses {deficit:.3g} of the trace (tolerance {tail_tol}); try dim = {suggested}",
            suggested_dim=suggested,
        )
    return FockDensityMatrix(rho, tail_tol)


class _LindbladGenerator(object):
    # Right-hand side of the master equation using only elementwise products and shifted slices

    def __init__(self, dim: int, omega: float, Gamma: float, N: float):
        n = np.arange(dim, dtype=float)
        # diagonal of a a^dagger in the truncated space
        m = np.append(np.arange(1, dim, dtype=float), 0.0)
        s = np.sqrt(np.arange(1, dim, dtype=float))
        loss = 0.5 * Gamma * (N + 1)
        gain = 0.5 * Gamma * N
        self.diagonal = (
            -1j * omega * (n[:, None] - n[None, :])
            - loss * (n[:, None] + n[None, :])
            - gain * (m[:, None] + m[None, :])
        )
        self.loss_jump = 2 * loss * np.outer(s, s)
        self.gain_jump = 2 * gain * np.outer(s, s)

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        out = self.diagonal * rho
        out[:-1, :-1] += self.loss_jump * rho[1:, 1:]
        out[1:, 1:] += self.gain_jump * rho[:-1, :-1]
        return out


def evolve_lindblad(rho: FockDensityMatrix, pc: PhysicalChannelParams, steps: int = None) -> FockDensityMatrix:
    """Integrate the thermal-loss master equation with fixed-step RK4

    d rho/dt = -i omega [a^dagger a, rho] + (Gamma/2)(N L[a^dagger] + (N + 1) L[a]) rho,
    L[o] rho = 2 o rho o^dagger - o^dagger o rho - rho o^dagger o.

    Parameters
    ----------
    rho : FockDensityMatrix
    pc : PhysicalChannelParams
    steps : int, optional
        Defaults to 2000 per unit of max(omega t, Gamma t).

    Returns
    -------
    FockDensityMatrix

    Raises
    ------
    NumericFailure
        If the trace drifts by more than 1e-6.
    """
    if steps is None:
        steps = int(math.ceil(LINDBLAD_STEPS_PER_UNIT * max(pc.phi, pc.gamma)))
    if steps < 0:
        raise InvalidParameter(f"Number of steps must be >= 0, got {steps}")
    if steps == 0 or pc.t == 0:
        return FockDensityMatrix(rho.data.copy())

    generator = _LindbladGenerator(rho.dim, pc.omega, pc.Gamma, pc.N)
    h = pc.t / steps
    state = rho.data.copy()
    for _ in range(steps):
        k1 = generator(state)
        k2 = generator(state + 0.5 * h * k1)
        k3 = generator(state + 0.5 * h * k2)
        k4 = generator(state + h * k3)
        state = state + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)

    drift = abs(float(np.real(np.trace(state))) - rho.trace())
    if drift > TRACE_DRIFT_TOL:
        raise NumericFailure(f"Trace drifted by {drift:.3g} during Lindblad evolution over {steps} steps")
    logger.debug(f"Evolved a {rho.dim}-level state over t = {pc.t} in {steps} steps")
    return FockDensityMatrix(0.5 * (state + state.conj().T))


def phase_derivative(rho: FockDensityMatrix) -> np.ndarray:
    """d rho / d phi = -i [a^dagger a, rho]."""
    n = np.arange(rho.dim, dtype=float)
    return -1j * (n[:, None] - n[None, :]) * rho.data


def _sld_eigenbasis(rho: FockDensityMatrix, drho: np.ndarray, eps: float):
    values, vectors = rho.eigh()
    D = vectors.conj().T @ np.asarray(drho) @ vectors
    denominators = values[:, None] + values[None, :]
    support = denominators > eps
    if not np.any(support):
        raise NoInformation("Every eigenvalue pair of the state is below the floor, the SLD is undefined")
    return values, vectors, D, denominators, support


def qfi_from_spectrum(rho: FockDensityMatrix, drho: np.ndarray, eps: float = EIGENVALUE_FLOOR) -> float:
    """Quantum Fisher information sum 2 |<i|drho|j>|^2 / (lambda_i + lambda_j) over pairs above ``eps``

    Raises
    ------
    NoInformation
        If no eigenvalue pair of ``rho`` is above ``eps``.
    """
    values, vectors, D, denominators, support = _sld_eigenbasis(rho, drho, eps)
    return float(np.sum(2 * np.abs(D[support]) ** 2 / denominators[support]))


def sld_matrix(rho: FockDensityMatrix, drho: np.ndarray, eps: float = EIGENVALUE_FLOOR) -> np.ndarray:
    """Symmetric logarithmic derivative L with drho = (rho L + L rho) / 2 on the support of rho."""
    values, vectors, D, denominators, support = _sld_eigenbasis(rho, drho, eps)
    L = np.zeros_like(D)
    L[support] = 2 * D[support] / denominators[support]
    return vectors @ L @ vectors.conj().T


def fock_moments(rho: FockDensityMatrix) -> GaussianState:
    """First moments and symmetrized covariance of the quadratures in ``rho``."""
    x, p = quadratures(rho.dim)

    def expect(op):
        return float(np.real(np.trace(rho.data @ op)))

    xbar = expect(x)
    pbar = expect(p)
    s11 = expect(x @ x) - xbar ** 2
    s22 = expect(p @ p) - pbar ** 2
    s12 = expect(0.5 * (x @ p + p @ x)) - xbar * pbar
    return GaussianState([xbar, pbar], [[s11, s12], [s12, s22]])


def fit_sld_coefficients(rho: FockDensityMatrix, L: np.ndarray, moments: GaussianState = None) -> SldForm:
    """Project ``L`` onto span{x~ o p~, x~, p~, I} in the rho-weighted inner product Re Tr[rho A o B]

    Returns
    -------
    SldForm
        The coefficients of x~ o p~, x~ and p~. The identity component is dropped.
    """
    if moments is None:
        moments = fock_moments(rho)
    x, p = quadratures(rho.dim)
    identity = np.eye(rho.dim, dtype=complex)
    xt = x - moments.xbar * identity
    pt = p - moments.pbar * identity
    basis = [0.5 * (xt @ pt + pt @ xt), xt, pt, identity]

    def inner(A, B):
        return float(np.real(np.trace(rho.data @ A @ B)))

    G = np.array([[inner(A, B) for B in basis] for A in basis])
    b = np.array([inner(L, B) for B in basis])
    c = np.linalg.solve(G, b)
    return SldForm(c_xp=c[0], c_x=c[1], c_p=c[2])

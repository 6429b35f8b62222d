import logging
import math
import os
from typing import Dict

import toml

from qthermo.errors import ParseError, ValidationError

logger = logging.getLogger(__name__)

"""
SI physical constants. CODATA 2018 exact values; sigma is derived so that it is
consistent with k_B, hbar and c to machine precision.
"""

CONSTANTS_DIR_ENV = "QTHERMO_CONSTANTS_DIR"
CONSTANTS_FILE = "constants.toml"
SIGMA_RTOL = 1e-12

PLANCK = 6.62607015e-34
HBAR = PLANCK / (2 * math.pi)
K_B = 1.380649e-23
SPEED_OF_LIGHT = 299792458.0


def stefan_boltzmann_constant(hbar: float, k_B: float, c: float) -> float:
    return math.pi ** 2 * k_B ** 4 / (60 * hbar ** 3 * c ** 2)


class PhysicalConstants(object):
    """SI constants used by every unit-carrying computation

    Parameters
    ----------
    hbar : float
        Reduced Planck constant, J s.
    k_B : float
        Boltzmann constant, J/K.
    c : float
        Speed of light, m/s.
    sigma : float, optional
        Stefan-Boltzmann constant, W/(m^2 K^4). Derived from the other three when omitted.

    Raises
    ------
    ValidationError
        If a constant is not positive, or sigma disagrees with pi^2 k_B^4/(60 hbar^3 c^2)
        by more than 1e-12 relative.
    """

    hbar: float
    k_B: float
    c: float
    sigma: float

    def __init__(self, hbar: float, k_B: float, c: float, sigma: float = None):
        for name, value in (("hbar", hbar), ("k_B", k_B), ("c", c)):
            if not (math.isfinite(value) and value > 0):
                raise ValidationError(f"Constant {name} must be positive, got {value}", name)
        expected = stefan_boltzmann_constant(hbar, k_B, c)
        if sigma is None:
            sigma = expected
        if abs(sigma - expected) > SIGMA_RTOL * expected:
            raise ValidationError(
                f"sigma = {sigma} is inconsistent with hbar, k_B and c (expected {expected})",
                "sigma",
            )
        self.hbar = float(hbar)
        self.k_B = float(k_B)
        self.c = float(c)
        self.sigma = float(sigma)

    def __repr__(self):
        return f"PhysicalConstants(hbar={self.hbar!r}, k_B={self.k_B!r}, c={self.c!r}, sigma={self.sigma!r})"

    def as_dict(self) -> Dict[str, float]:
        return {"hbar": self.hbar, "k_B": self.k_B, "c": self.c, "sigma": self.sigma}


CODATA_2018 = PhysicalConstants(hbar=HBAR, k_B=K_B, c=SPEED_OF_LIGHT)


# @param directory holds a constants.toml with keys hbar, k_B, c and optionally sigma
def load_constants(directory: os.PathLike) -> PhysicalConstants:
    path = os.path.join(directory, CONSTANTS_FILE)
    try:
        with open(path, "r") as f:
            raw = toml.loads(f.read())
    except toml.TomlDecodeError as e:
        raise ParseError(f"Could not parse {path}: {e}")

    known = {"hbar", "k_B", "c", "sigma"}
    for key in raw:
        if key not in known:
            raise ParseError(f"Unknown constant {key} in {path}", key)
    for key in ("hbar", "k_B", "c"):
        if key not in raw:
            raise ParseError(f"Missing constant {key} in {path}", key)
    values = dict()
    for key, value in raw.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ParseError(f"Constant {key} must be a number, got {value!r}", key)
        values[key] = float(value)

    return PhysicalConstants(**values)


def get_constants() -> PhysicalConstants:
    """The constants in effect: CODATA 2018 unless QTHERMO_CONSTANTS_DIR names an override directory."""
    directory = os.environ.get(CONSTANTS_DIR_ENV)
    if not directory:
        return CODATA_2018
    logger.info(f"Using physical constants from {directory}")
    return load_constants(directory)


def wavelength_to_omega(wavelength: float, constants: PhysicalConstants = None) -> float:
    """Angular frequency (rad/s) of light with vacuum wavelength ``wavelength`` (m)."""
    if constants is None:
        constants = get_constants()
    if wavelength <= 0:
        raise ValidationError(f"Wavelength must be positive, got {wavelength}", "wavelength")
    return 2 * math.pi * constants.c / wavelength


def omega_to_wavelength(omega: float, constants: PhysicalConstants = None) -> float:
    if constants is None:
        constants = get_constants()
    if omega <= 0:
        raise ValidationError(f"Angular frequency must be positive, got {omega}", "omega")
    return 2 * math.pi * constants.c / omega

import logging
import math
import os
from typing import Dict, Union

import toml

from qthermo.channel import ChannelParams, thermal_occupation
from qthermo.constants import PhysicalConstants, get_constants, wavelength_to_omega
from qthermo.errors import InvalidParameter, ParseError, ValidationError
from qthermo.metrology import heating_disturbance

logger = logging.getLogger(__name__)

"""
Sample models: refractive and thermal constants, transmissivity and the phase-temperature coupling.
All stored values are SI.
"""

# Unit suffixes accepted in material files, per physical dimension, as factors to SI
LENGTH_UNITS = {"m": 1.0, "cm": 1e-2, "mm": 1e-3}
WAVELENGTH_UNITS = {"m": 1.0, "um": 1e-6, "nm": 1e-9}
MASS_UNITS = {"kg": 1.0, "g": 1e-3}
INVERSE_LENGTH_UNITS = {"1/m": 1.0, "m^-1": 1.0, "1/cm": 1e2, "cm^-1": 1e2}
INVERSE_KELVIN_UNITS = {"1/K": 1.0, "K^-1": 1.0}
SPECIFIC_HEAT_UNITS = {"J/(kg K)": 1.0, "J/(g K)": 1e3}

FIELD_UNITS = {
    "n": None,
    "n_prime": INVERSE_KELVIN_UNITS,
    "alpha_T": INVERSE_KELVIN_UNITS,
    "length": LENGTH_UNITS,
    "mass": MASS_UNITS,
    "specific_heat": SPECIFIC_HEAT_UNITS,
    "alpha_abs": INVERSE_LENGTH_UNITS,
    "probe_wavelength": WAVELENGTH_UNITS,
}
REQUIRED_FIELDS = ["n", "n_prime", "alpha_T", "length", "mass", "specific_heat", "alpha_abs"]
OPTIONAL_FIELDS = ["name", "probe_wavelength"]


class Material(object):
    """Optical and thermal constants of a sample, in SI units

    Parameters
    ----------
    name : str
    n : float
        Refractive index, >= 1.
    n_prime : float
        Thermo-optic coefficient dn/dT in 1/K.
    alpha_T : float
        Thermal expansion coefficient in 1/K.
    length : float
        Optical path length in m.
    mass : float
        Mass in kg.
    specific_heat : float
        Specific heat in J/(kg K).
    alpha_abs : float
        Absorption coefficient in 1/m.
    probe_wavelength : float, optional
        Default probe wavelength in m.

    Raises
    ------
    ValidationError
        If a value violates n >= 1, length, mass, specific_heat > 0 or alpha_abs >= 0.
    """

    name: str
    n: float
    n_prime: float
    alpha_T: float
    length: float
    mass: float
    specific_heat: float
    alpha_abs: float
    probe_wavelength: float

    def __init__(
        self,
        name: str,
        n: float,
        n_prime: float,
        alpha_T: float,
        length: float,
        mass: float,
        specific_heat: float,
        alpha_abs: float,
        probe_wavelength: float = None,
    ):
        self.name = name
        self.n = n
        self.n_prime = n_prime
        self.alpha_T = alpha_T
        self.length = length
        self.mass = mass
        self.specific_heat = specific_heat
        self.alpha_abs = alpha_abs
        self.probe_wavelength = probe_wavelength
        self.validate()

    def validate(self):
        for field in REQUIRED_FIELDS:
            value = getattr(self, field)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ValidationError(f"Material field {field} must be a finite number, got {value!r}", field)
        if self.n < 1:
            raise ValidationError(f"Refractive index must be >= 1, got {self.n}", "n")
        for field in ("length", "mass", "specific_heat"):
            if not getattr(self, field) > 0:
                raise ValidationError(f"Material field {field} must be positive, got {getattr(self, field)}", field)
        if self.alpha_abs < 0:
            raise ValidationError(f"Absorption coefficient must be >= 0, got {self.alpha_abs}", "alpha_abs")
        if self.probe_wavelength is not None and not self.probe_wavelength > 0:
            raise ValidationError(
                f"Probe wavelength must be positive, got {self.probe_wavelength}", "probe_wavelength"
            )

    def as_dict(self) -> Dict[str, Union[str, float]]:
        fields = {"name": self.name}
        for field in REQUIRED_FIELDS:
            fields[field] = float(getattr(self, field))
        if self.probe_wavelength is not None:
            fields["probe_wavelength"] = float(self.probe_wavelength)
        return fields

    def __eq__(self, other):
        if not isinstance(other, Material):
            return NotImplemented
        return self.as_dict() == other.as_dict()

    def __repr__(self):
        return f"Material({self.as_dict()})"


# PPKTP crystal probed at 1064 nm
PPKTP = Material(
    name="ppktp",
    n=1.74,
    n_prime=0.6e-5,
    alpha_T=1.1e-5,
    length=0.01,
    mass=0.003,
    specific_heat=688.0,
    alpha_abs=0.02,
    probe_wavelength=1064e-9,
)

PRESETS = {"ppktp": PPKTP}


def transmissivity(m: Material) -> float:
    """Power transmission exp(-length alpha_abs) through the sample."""
    return math.exp(-m.length * m.alpha_abs)


def phase_coupling(m: Material, omega: float, constants: PhysicalConstants = None) -> float:
    """Phase-temperature coupling alpha = (omega L / c)(n alpha_T + n') in rad/K

    Examples
    --------
    >>> round(phase_coupling(PPKTP, 1.77e15), 3)
    1.484
    """
    if constants is None:
        constants = get_constants()
    if not omega > 0:
        raise InvalidParameter(f"Angular frequency must be positive, got {omega}")
    return omega * m.length / constants.c * (m.n * m.alpha_T + m.n_prime)


def phase_shift(m: Material, omega: float, delta_T: float, constants: PhysicalConstants = None) -> float:
    """Phase (rad) picked up for a temperature deviation ``delta_T`` from the calibration point, to first order."""
    return phase_coupling(m, omega, constants) * delta_T


# @param field is the material key the value belongs to
# @returns the SI value of a number or a "<number> <unit>" string
def _parse_quantity(field: str, value) -> float:
    units = FIELD_UNITS[field]
    if isinstance(value, bool):
        raise ParseError(f"Material field {field} must be a number, got {value!r}", field)
    if isinstance(value, (int, float)):
        return float(value)
    if not isinstance(value, str):
        raise ParseError(f"Material field {field} must be a number or a quantity string, got {value!r}", field)

    parts = value.strip().split(None, 1)
    try:
        magnitude = float(parts[0])
    except (ValueError, IndexError):
        raise ParseError(f"Could not read a number from {field} = {value!r}", field)
    if len(parts) == 1:
        return magnitude
    unit = parts[1].strip()
    if units is None or unit not in units:
        allowed = [] if units is None else sorted(units)
        raise ParseError(f"Unit {unit!r} is not allowed for {field}. Allowed units: {allowed}", field)
    return magnitude * units[unit]


def load_material(source: Union[str, os.PathLike]) -> Material:
    """Load a material from a built-in preset name or a TOML file

    Parameters
    ----------
    source : str or os.PathLike
        "ppktp" or the path to a material file with keys n, n_prime, alpha_T,
        length, mass, specific_heat, alpha_abs and optionally name, probe_wavelength.

    Returns
    -------
    Material

    Raises
    ------
    ParseError
        If the file cannot be parsed, a key is missing or unknown, or a unit is not allowed.
    ValidationError
        If the values violate the material invariants.
    """
    if isinstance(source, str) and source.lower() in PRESETS:
        return PRESETS[source.lower()]

    try:
        with open(source, "r", encoding="utf-8") as f:
            raw = toml.loads(f.read())
    except toml.TomlDecodeError as e:
        raise ParseError(f"Could not parse material file {source}: {e}")

    for key in raw:
        if key not in REQUIRED_FIELDS and key not in OPTIONAL_FIELDS:
            raise ParseError(f"Unknown material field {key} in {source}", key)
    for key in REQUIRED_FIELDS:
        if key not in raw:
            raise ParseError(f"Missing material field {key} in {source}", key)

    values = dict()
    for key, value in raw.items():
        if key == "name":
            values[key] = str(value)
        else:
            values[key] = _parse_quantity(key, value)
    if "name" not in values:
        values["name"] = os.path.splitext(os.path.basename(str(source)))[0]

    logger.debug(f"Loaded material {values['name']} from {source}")
    return Material(**values)


def save_material(m: Material, path: Union[str, os.PathLike]):
    """Write ``m`` as a TOML material file with plain SI numbers."""
    with open(path, "w", encoding="utf-8") as f:
        f.write(toml.dumps(m.as_dict()))


class ThermometerSetup(object):
    """A sample probed at angular frequency ``omega`` while sitting at temperature ``temperature``

    Parameters
    ----------
    material : Material
    omega : float, optional
        Probe angular frequency in rad/s. Defaults to the material's probe wavelength.
    temperature : float
        Sample (and reservoir) temperature in K.
    constants : PhysicalConstants, optional
    """

    material: Material
    omega: float
    temperature: float
    constants: PhysicalConstants

    def __init__(
        self,
        material: Material,
        omega: float = None,
        temperature: float = 298.0,
        constants: PhysicalConstants = None,
    ):
        if constants is None:
            constants = get_constants()
        if omega is None:
            if material.probe_wavelength is None:
                raise ValidationError(
                    f"Material {material.name} has no probe wavelength, give the probe frequency explicitly",
                    "probe_wavelength",
                )
            omega = wavelength_to_omega(material.probe_wavelength, constants)
        if not omega > 0:
            raise ValidationError(f"Probe angular frequency must be positive, got {omega}", "omega")
        if not temperature > 0:
            raise ValidationError(f"Temperature must be positive, got {temperature}", "temperature")
        self.material = material
        self.omega = float(omega)
        self.temperature = float(temperature)
        self.constants = constants

    @property
    def eta(self) -> float:
        return transmissivity(self.material)

    @property
    def N(self) -> float:
        return thermal_occupation(self.omega, self.temperature, self.constants)

    @property
    def alpha(self) -> float:
        return phase_coupling(self.material, self.omega, self.constants)

    @property
    def heating_slope(self) -> float:
        """Temperature rise per probe photon, (1 - eta) hbar omega / (M Cs)."""
        return heating_disturbance(
            1.0, self.eta, self.omega, self.material.mass, self.material.specific_heat, self.constants
        )

    def heating(self, nbar: float) -> float:
        return heating_disturbance(
            nbar, self.eta, self.omega, self.material.mass, self.material.specific_heat, self.constants
        )

    def channel(self) -> ChannelParams:
        return ChannelParams(0.0, self.eta, self.N)

    def __repr__(self):
        return f"ThermometerSetup(material={self.material.name}, omega={self.omega!r}, temperature={self.temperature!r})"

import os
from typing import List, Union

from qthermo.constants import wavelength_to_omega
from qthermo.errors import ValidationError
from qthermo.material import Material, ThermometerSetup, load_material
from qthermo.metrology import BoundKind, parse_kind
from qthermo.optimizer import DEFAULT_RESTARTS
from qthermo.probe import DEFAULT_AREA, DEFAULT_RESPONSE_TIME
from qthermo.scan import NbarGrid

"""
Everything a sweep or optimization run needs, checked once on construction.
"""


class RunConfig(object):
    """A thermometry scenario

    Parameters
    ----------
    material : Material or str
        A Material, a preset name such as "ppktp", or the path to a material file.
    grid : NbarGrid
        Photon numbers to sweep.
    kinds : List[str or BoundKind]
        Bound kinds to compute, at least one.
    temperature : float
        Reservoir (sample) temperature in K.
    wavelength : float, optional
        Probe wavelength in m. Defaults to the material's probe wavelength.
    omega : float, optional
        Probe angular frequency in rad/s, instead of ``wavelength``.
    output : os.PathLike, optional
        Where to write the CSV table.
    seed : int
        Seed of the optimizer restarts.
    restarts : int
    area : float
        Pyrometer area in m^2.
    response_time : float
        Pyrometer response time in s.
    jobs : int
        Worker processes for sweeps.

    Raises
    ------
    ValidationError
        If kinds is empty, wavelength and omega are both given, or a value is out of range.
    """

    material: Material
    grid: NbarGrid
    kinds: List[BoundKind]
    temperature: float
    omega: float
    output: os.PathLike
    seed: int
    restarts: int
    area: float
    response_time: float
    jobs: int

    def __init__(
        self,
        material: Union[Material, str, os.PathLike],
        grid: NbarGrid,
        kinds: List[Union[str, BoundKind]],
        temperature: float = 298.0,
        wavelength: float = None,
        omega: float = None,
        output: os.PathLike = None,
        seed: int = 0,
        restarts: int = DEFAULT_RESTARTS,
        area: float = DEFAULT_AREA,
        response_time: float = DEFAULT_RESPONSE_TIME,
        jobs: int = 1,
    ):
        if not isinstance(material, Material):
            material = load_material(material)
        self.material = material

        if kinds is None or len(kinds) == 0:
            raise ValidationError("Choose at least one bound kind", "kinds")
        try:
            self.kinds = [parse_kind(k) for k in kinds]
        except ValueError as e:
            raise ValidationError(str(e), "kinds")

        if wavelength is not None and omega is not None:
            raise ValidationError("Give the probe wavelength or its angular frequency, not both", "wavelength")
        if wavelength is not None:
            omega = wavelength_to_omega(wavelength)
        self.omega = omega

        if not temperature > 0:
            raise ValidationError(f"Temperature must be positive, got {temperature}", "temperature")
        if restarts < 0:
            raise ValidationError(f"Number of restarts must be >= 0, got {restarts}", "restarts")
        if jobs is not None and jobs < 1:
            raise ValidationError(f"Number of jobs must be >= 1, got {jobs}", "jobs")
        for name, value in (("area", area), ("response_time", response_time)):
            if not value > 0:
                raise ValidationError(f"Pyrometer {name} must be positive, got {value}", name)

        self.grid = grid
        self.temperature = temperature
        self.output = output
        self.seed = seed
        self.restarts = restarts
        self.area = area
        self.response_time = response_time
        self.jobs = jobs

    def setup(self) -> ThermometerSetup:
        return ThermometerSetup(self.material, omega=self.omega, temperature=self.temperature)

    def kind_names(self) -> List[str]:
        return [k.value for k in self.kinds]

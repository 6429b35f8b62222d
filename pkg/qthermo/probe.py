from abc import ABC, abstractmethod
from typing import Union

from qthermo.errors import InvalidParameter
from qthermo.gaussian import InputStateParams
from qthermo.material import ThermometerSetup
from qthermo.metrology import (
    BoundKind,
    PrecisionBound,
    asymptotic_bound_coherent,
    asymptotic_bound_squeezed,
    exact_bound,
    parse_kind,
    total_bound,
)
from qthermo.optimizer import (
    DEFAULT_RESTARTS,
    OptimizationResult,
    optimize_state_at_nbar,
    output_qfi_phase,
)
from qthermo.pyrometer import PyrometerConfig, pyrometer_precision

"""
Abstract super class for all thermometers whose precision can be compared at a given nbar.
"""

# Defaults for the pyrometer benchmark: 1 cm^2 read out for 10 ms
DEFAULT_AREA = 1e-4
DEFAULT_RESPONSE_TIME = 1e-2


class AbstractProbe(ABC):
    kind: BoundKind

    @abstractmethod
    def bound(self, setup: ThermometerSetup, nbar: float) -> PrecisionBound:
        pass

    # @returns a with statistical error a / sqrt(nbar), or None if there is no closed form
    def statistical_coefficient(self, setup: ThermometerSetup) -> float:
        return None

    def uses_photons(self) -> bool:
        return True


class SqueezedVacuumProbe(AbstractProbe):
    def __init__(self):
        self.kind = BoundKind.ASYMPTOTIC_SQUEEZED

    def bound(self, setup: ThermometerSetup, nbar: float) -> PrecisionBound:
        return total_bound(
            self.kind,
            setup.eta,
            setup.N,
            nbar,
            setup.alpha,
            setup.omega,
            setup.material.mass,
            setup.material.specific_heat,
            setup.constants,
        )

    def statistical_coefficient(self, setup: ThermometerSetup) -> float:
        return asymptotic_bound_squeezed(setup.eta, setup.N, 1.0, setup.alpha)

    def input_state(self, nbar: float) -> InputStateParams:
        return InputStateParams.squeezed_vacuum(nbar)


class CoherentProbe(AbstractProbe):
    def __init__(self):
        self.kind = BoundKind.ASYMPTOTIC_COHERENT

    def bound(self, setup: ThermometerSetup, nbar: float) -> PrecisionBound:
        return total_bound(
            self.kind,
            setup.eta,
            setup.N,
            nbar,
            setup.alpha,
            setup.omega,
            setup.material.mass,
            setup.material.specific_heat,
            setup.constants,
        )

    def statistical_coefficient(self, setup: ThermometerSetup) -> float:
        return asymptotic_bound_coherent(setup.eta, setup.N, 1.0, setup.alpha)

    def input_state(self, nbar: float) -> InputStateParams:
        return InputStateParams.coherent(nbar)


class OptimalGaussianProbe(AbstractProbe):
    """Best Gaussian probe at each nbar, with the exact QFI of the channel output."""

    seed: int
    restarts: int

    def __init__(self, seed: int = 0, restarts: int = DEFAULT_RESTARTS):
        self.kind = BoundKind.EXACT_QFI
        self.seed = seed
        self.restarts = restarts

    def optimize(self, setup: ThermometerSetup, nbar: float) -> OptimizationResult:
        result = optimize_state_at_nbar(
            nbar, setup.channel(), setup.alpha, seed=self.seed, restarts=self.restarts
        )
        result.bound = exact_bound(
            output_qfi_phase(result.params, setup.channel()),
            setup.eta,
            nbar,
            setup.alpha,
            setup.omega,
            setup.material.mass,
            setup.material.specific_heat,
            setup.constants,
        )
        return result

    def bound(self, setup: ThermometerSetup, nbar: float) -> PrecisionBound:
        return self.optimize(setup, nbar).bound


class PyrometerBenchmark(AbstractProbe):
    """The idealized pyrometer, which neither uses probe photons nor heats the sample."""

    area: float
    response_time: float

    def __init__(self, area: float = DEFAULT_AREA, response_time: float = DEFAULT_RESPONSE_TIME):
        self.kind = BoundKind.PYROMETER
        self.area = area
        self.response_time = response_time

    def bound(self, setup: ThermometerSetup, nbar: float = None) -> PrecisionBound:
        cfg = PyrometerConfig(S=self.area, dt=self.response_time, T=setup.temperature)
        return PrecisionBound(pyrometer_precision(cfg, setup.constants), 0.0, self.kind, nbar)

    def uses_photons(self) -> bool:
        return False


def probe_for(
    kind: Union[str, BoundKind],
    seed: int = 0,
    restarts: int = DEFAULT_RESTARTS,
    area: float = DEFAULT_AREA,
    response_time: float = DEFAULT_RESPONSE_TIME,
) -> AbstractProbe:
    """Construct the probe for a bound kind ("exact", "squeezed", "coherent" or "pyrometer")."""
    kind = parse_kind(kind)
    if kind == BoundKind.EXACT_QFI:
        return OptimalGaussianProbe(seed=seed, restarts=restarts)
    elif kind == BoundKind.ASYMPTOTIC_SQUEEZED:
        return SqueezedVacuumProbe()
    elif kind == BoundKind.ASYMPTOTIC_COHERENT:
        return CoherentProbe()
    elif kind == BoundKind.PYROMETER:
        return PyrometerBenchmark(area=area, response_time=response_time)
    raise InvalidParameter(f"No probe for bound kind {kind}")

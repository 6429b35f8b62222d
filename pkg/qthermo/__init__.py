from qthermo.gaussian import (
    InputStateParams,
    GaussianState,
    make_gaussian_state,
    validate_physical,
    mean_photon_number,
)

from qthermo.channel import ChannelParams, PhysicalChannelParams, apply_channel, thermal_occupation

from qthermo.metrology import (
    BoundKind,
    PrecisionBound,
    qfi_phase,
    sld_phase,
    qfi_temperature,
    cramer_rao,
    error_propagation,
    asymptotic_bound_squeezed,
    asymptotic_bound_coherent,
    heating_disturbance,
    total_bound,
)

from qthermo.pyrometer import PyrometerConfig, pyrometer_precision

from qthermo.material import Material, PPKTP, ThermometerSetup, load_material, transmissivity, phase_coupling

from qthermo.optimizer import OptimizationResult, optimize_state_at_nbar

from qthermo.scan import NbarGrid, optimize_nbar, sweep_nbar

from qthermo.oracle_check import run_oracle_check

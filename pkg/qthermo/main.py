import argparse
import logging
import sys
from pathlib import Path
from typing import List

from qthermo.channel import ChannelParams, apply_channel
from qthermo.errors import USAGE_ERRORS, QThermoError, ValidationError
from qthermo.gaussian import InputStateParams, make_gaussian_state
from qthermo.metrology import BoundKind, cramer_rao, pulse_energy, qfi_phase, qfi_temperature
from qthermo.optimizer import OptimizationResult, optimize_state_at_nbar
from qthermo.oracle_check import (
    DEFAULT_ETAS,
    DEFAULT_NBARS,
    DEFAULT_RESERVOIRS,
    FAMILIES,
    oracle_grid,
    run_oracle_check,
)
from qthermo.pyrometer import (
    PyrometerConfig,
    fisher_precision,
    flux_noise,
    flux_noise_quadrature,
    pyrometer_precision,
)
from qthermo.run_config import RunConfig
from qthermo.scan import NbarGrid, available_jobs, optimize_nbar, sweep_nbar

logger = logging.getLogger(__name__)

DEFAULT_KINDS = "exact,squeezed,coherent,pyrometer"

UNITS_TABLE = """Command-line units (converted to SI on input)
  --area-cm2        cm^2   x 1e-4  -> m^2
  --dt-ms           ms     x 1e-3  -> s
  --wavelength-nm   nm     x 1e-9  -> m
  --T, --temperature K     (SI)
  --alpha           rad/K  (SI)
  --nbar-start/stop log10 of the mean photon number
Material files (numbers are SI, strings may carry a unit)
  length            m, cm, mm
  mass              kg, g
  alpha_abs         1/m, m^-1, 1/cm, cm^-1
  n_prime, alpha_T  1/K, K^-1
  specific_heat     J/(kg K), J/(g K)
  probe_wavelength  m, um, nm
Output: printed values in SI with 6 significant digits, CSV with 17."""


def fmt(value: float) -> str:
    return f"{value:.6g}"


def _csv_list(text: str) -> List[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _float_list(text: str) -> List[float]:
    try:
        return [float(item) for item in _csv_list(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}")


# @returns @param output_path as a Path; its directory must already exist
def output_location(output_path: str) -> Path:
    path = Path(output_path)
    if not path.parent.is_dir():
        raise FileNotFoundError(f"Output directory {path.parent} does not exist")
    return path


def _run_config(args, kinds: List[str]) -> RunConfig:
    wavelength = args.wavelength_nm * 1e-9 if args.wavelength_nm is not None else None
    return RunConfig(
        material=args.material,
        grid=NbarGrid(args.nbar_start, args.nbar_stop, args.points),
        kinds=kinds,
        temperature=args.temperature,
        wavelength=wavelength,
        output=getattr(args, "output", None),
        seed=args.seed,
        restarts=args.restarts,
        area=args.area_cm2 * 1e-4,
        response_time=args.dt_ms * 1e-3,
        jobs=getattr(args, "jobs", 1),
    )


def cmd_pyrometer(args) -> int:
    cfg = PyrometerConfig(S=args.area_cm2 * 1e-4, dt=args.dt_ms * 1e-3, T=args.T)
    delta_t = pyrometer_precision(cfg)
    by_fisher = fisher_precision(cfg)
    noise = flux_noise(cfg.T)
    noise_quad = flux_noise_quadrature(cfg.T)
    print(f"pyrometer delta_T = {fmt(delta_t)} K")
    print(f"quadrature check: Fisher integral delta_T = {fmt(by_fisher)} K, relative difference {fmt(abs(by_fisher - delta_t) / delta_t)}")
    print(f"quadrature check: flux noise relative difference {fmt(abs(noise_quad - noise) / noise)}")
    return 0


def cmd_sweep(args) -> int:
    config = _run_config(args, _csv_list(args.kinds))
    path = output_location(config.output)
    table = sweep_nbar(
        config.grid,
        config.setup(),
        config.kinds,
        seed=config.seed,
        restarts=config.restarts,
        area=config.area,
        response_time=config.response_time,
        jobs=config.jobs,
    )
    table.write_csv(path)
    print(f"wrote {table.get_length()} rows to {path}")
    for column in table.bound_columns():
        nbar, value = table.minimum(column)
        where = "interior" if table.has_interior_minimum(column) else "at the grid edge"
        print(f"{column}: minimum {fmt(value)} K at nbar = {fmt(nbar)} ({where})")
    return 0


def _print_state(result: OptimizationResult):
    p = result.params
    print(f"optimal state: xbar0 = {fmt(p.xbar0)}, pbar0 = {fmt(p.pbar0)}, N0 = {fmt(p.N0)}, r0 = {fmt(p.r0)}")
    print(f"displacement fraction = {fmt(result.displacement_fraction)}")
    print(f"converged = {result.converged} ({result.iterations} iterations)")


def cmd_optimize(args) -> int:
    config = _run_config(args, [args.kind])
    setup = config.setup()
    kind = config.kinds[0]

    if args.nbar is not None:
        if kind != BoundKind.EXACT_QFI:
            raise ValidationError("--nbar evaluates the optimal state and needs --kind exact", "nbar")
        result = optimize_state_at_nbar(args.nbar, setup.channel(), setup.alpha, seed=config.seed, restarts=config.restarts)
        print(f"nbar = {fmt(args.nbar)}")
        print(f"Q_T = {fmt(result.q_t)} 1/K^2")
        print(f"statistical delta_T = {fmt(result.delta_t)} K")
        print(f"heating delta_T = {fmt(setup.heating(args.nbar))} K")
        _print_state(result)
        return 0

    result = optimize_nbar(
        kind,
        setup,
        search_range=(args.nbar_start, args.nbar_stop),
        points=args.points,
        seed=config.seed,
        restarts=config.restarts,
    )
    print(f"kind = {kind.value}")
    print(f"minimum delta_T = {fmt(result.delta_t)} K")
    print(f"  statistical = {fmt(result.bound.statistical)} K, heating = {fmt(result.bound.heating)} K")
    print(f"optimal nbar = {fmt(result.nbar)}")
    print(f"pulse energy = {fmt(pulse_energy(result.nbar, setup.omega, setup.constants))} J")
    _print_state(result)
    return 0


def cmd_oracle_check(args) -> int:
    cases = oracle_grid(
        nbars=args.nbar,
        families=_csv_list(args.families),
        etas=args.eta,
        reservoirs=args.N,
    )
    report = run_oracle_check(cases, perturbation=args.perturb, dim=args.dim, tolerance=args.tol)
    for result in report.failures():
        print(
            f"FAIL {result.case}: gaussian {fmt(result.q_gaussian)}, fock {fmt(result.q_fock)}, "
            f"relative error {fmt(result.relative_error)} (dim {result.dim})"
        )
    worst = report.worst
    print(f"checked {len(report.results)} cases, worst relative error {fmt(worst.relative_error)} at {worst.case}")
    if report.passed:
        print("oracle check passed")
        return 0
    print(f"oracle check failed: {len(report.failures())} cases above tolerance {fmt(args.tol)}")
    return 1


def cmd_qfi(args) -> int:
    params = InputStateParams(xbar0=args.xbar0, pbar0=args.pbar0, N0=args.N0, r0=args.r0)
    s_out = apply_channel(make_gaussian_state(params), ChannelParams(0.0, args.eta, args.N))
    q_phi = qfi_phase(s_out)
    q_t = qfi_temperature(q_phi, args.alpha)
    print(f"Q_phi = {fmt(q_phi)}")
    print(f"Q_T = {fmt(q_t)} 1/K^2")
    print(f"Cramer-Rao delta_T = {fmt(cramer_rao(q_t))} K")
    return 0


def _add_setup_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--material", default="ppktp", help="preset name or material file (default: ppktp)")
    parser.add_argument("--wavelength-nm", type=float, default=None, help="probe wavelength (default: the material's)")
    parser.add_argument("--temperature", type=float, default=298.0, help="sample temperature in K (default: 298)")
    parser.add_argument("--nbar-start", type=float, default=8.0, help="log10 of the smallest nbar (default: 8)")
    parser.add_argument("--nbar-stop", type=float, default=16.0, help="log10 of the largest nbar (default: 16)")
    parser.add_argument("--points", type=int, default=50, help="number of grid points (default: 50)")
    parser.add_argument("--seed", type=int, default=0, help="seed of the optimizer restarts (default: 0)")
    parser.add_argument("--restarts", type=int, default=8, help="random optimizer restarts (default: 8)")
    parser.add_argument("--area-cm2", type=float, default=1.0, help="pyrometer area (default: 1 cm^2)")
    parser.add_argument("--dt-ms", type=float, default=10.0, help="pyrometer response time (default: 10 ms)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qthermo",
        description="Precision bounds of interferometric thermometers with Gaussian probes",
    )
    parser.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    parser.add_argument("--explain-units", action="store_true", help="print the unit conventions and exit")
    subparsers = parser.add_subparsers(dest="command")

    pyro = subparsers.add_parser("pyrometer", help="idealized pyrometer bound")
    pyro.add_argument("--T", type=float, required=True, help="temperature in K")
    pyro.add_argument("--area-cm2", type=float, required=True, help="detector area in cm^2")
    pyro.add_argument("--dt-ms", type=float, required=True, help="response time in ms")
    pyro.set_defaults(func=cmd_pyrometer)

    sweep = subparsers.add_parser("sweep", help="temperature error per bound kind over an nbar grid, as CSV")
    _add_setup_arguments(sweep)
    sweep.add_argument("--kinds", default=DEFAULT_KINDS, help=f"comma-separated kinds (default: {DEFAULT_KINDS})")
    sweep.add_argument("--output", required=True, help="CSV file to write")
    sweep.add_argument("--jobs", type=int, default=available_jobs(), help="worker processes (default: all cores)")
    sweep.set_defaults(func=cmd_sweep)

    optimize = subparsers.add_parser("optimize", help="photon number and probe state of smallest error")
    _add_setup_arguments(optimize)
    optimize.add_argument("--kind", default="exact", choices=["exact", "squeezed", "coherent"])
    optimize.add_argument("--nbar", type=float, default=None, help="only optimize the state at this nbar")
    optimize.set_defaults(func=cmd_optimize, points=33)

    oracle = subparsers.add_parser("oracle-check", help="compare Gaussian and Fock-space QFIs")
    oracle.add_argument("--nbar", type=_float_list, default=list(DEFAULT_NBARS))
    oracle.add_argument("--eta", type=_float_list, default=list(DEFAULT_ETAS))
    oracle.add_argument("--N", type=_float_list, default=list(DEFAULT_RESERVOIRS))
    oracle.add_argument("--families", default=",".join(FAMILIES))
    oracle.add_argument("--dim", type=int, default=None, help="fixed truncation (default: automatic)")
    oracle.add_argument("--tol", type=float, default=1e-3)
    oracle.add_argument("--perturb", type=float, default=0.0, help=argparse.SUPPRESS)
    oracle.set_defaults(func=cmd_oracle_check)

    qfi = subparsers.add_parser("qfi", help="phase and temperature QFI of one probe state")
    qfi.add_argument("--xbar0", type=float, default=0.0)
    qfi.add_argument("--pbar0", type=float, default=0.0)
    qfi.add_argument("--N0", type=float, default=0.0)
    qfi.add_argument("--r0", type=float, default=0.0)
    qfi.add_argument("--eta", type=float, default=1.0)
    qfi.add_argument("--N", type=float, default=0.0)
    qfi.add_argument("--alpha", type=float, default=1.0, help="phase-temperature coupling in rad/K")
    qfi.set_defaults(func=cmd_qfi)

    return parser


def main(argv: List[str] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level), format="%(levelname)s %(name)s: %(message)s")

    if args.explain_units:
        print(UNITS_TABLE)
        return 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2

    try:
        return args.func(args)
    except USAGE_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (QThermoError, OSError) as e:
        logger.debug(f"{args.command} failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

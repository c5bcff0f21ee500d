"""
Command line front end.

    python -m TransducerSimulator derive --config configs/reference_device.json --out out/derive.csv
    python -m TransducerSimulator efficiency --config configs/reference_device.json --mode full --points 10001
    python -m TransducerSimulator sweep --config configs/reference_device.json --power-range 1e-3 0.3 30 \
        --kappa-range 25e6 250e6 10 --jobs 4

Exit codes: 0 success, 2 invalid configuration or arguments, 3 numerical
failure, 4 I/O failure, 1 anything else.
"""
import argparse
import logging
import os
from typing import List, Optional

import numpy as np

from .models.response_model import RunManifest
from .models.run_data import GridSpec, RunResult
from .models.transducer_config import TransducerConfig
from .services.artifact_writer import write_artifacts
from .services.config_loader import ConfigError, load_config, serialize_config
from .services.grid_reader import GridFormatError, read_field_grid, read_materials, read_surface_samples
from .services.mode_overlap import ModeOverlapError
from .services.network_service import EFFICIENCY_MODES, FULL_NUMERATOR_TERMS, SingularNetworkError
from .services.piezo_service import ExtractionError
from .services.simulations import (
    DEFAULT_POINTS,
    run_admittance,
    run_derive,
    run_efficiency,
    run_g0,
    run_s11,
    run_sweep,
    run_transmission,
)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

LOG_LEVEL_ENV = "TRANSDUCER_LOG_LEVEL"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def _grid(args) -> Optional[GridSpec]:
    bounds = (args.fmin, args.fmax)
    if all(value is None for value in bounds):
        return None
    if any(value is None for value in bounds):
        raise ValueError("--fmin and --fmax must be given together")
    return GridSpec(fmin_hz=args.fmin, fmax_hz=args.fmax, points=args.points)


def _range(values: Optional[List[float]], spaced: Optional[List[float]], geometric: bool, name: str) -> np.ndarray:
    if values is not None:
        return np.asarray(values, dtype=float)
    if spaced is None:
        raise ValueError(f"{name} needs a list or a range")
    start, stop, count = spaced
    if count < 0 or count != int(count):
        raise ValueError(f"{name} range count must be a non-negative integer")
    space = np.geomspace if geometric else np.linspace
    return space(start, stop, int(count))


def cmd_derive(args, config: TransducerConfig) -> RunResult:
    result = run_derive(config)
    print(result.frame.to_string(index=False))
    return result


def cmd_efficiency(args, config: TransducerConfig) -> RunResult:
    return run_efficiency(config, _grid(args), mode=args.mode, terms=args.terms, target=args.target)


def cmd_admittance(args, config: TransducerConfig) -> RunResult:
    return run_admittance(config, _grid(args), extract=args.extract)


def cmd_s11(args, config: TransducerConfig) -> RunResult:
    return run_s11(config, _grid(args))


def cmd_transmission(args, config: TransducerConfig) -> RunResult:
    return run_transmission(config, _grid(args))


def cmd_sweep(args, config: TransducerConfig) -> RunResult:
    powers = _range(args.power_list, args.power_range, geometric=True, name="power")
    kappas = _range(args.kappa_list, args.kappa_range, geometric=False, name="kappa_ex")
    return run_sweep(config, powers, kappas, grid=_grid(args), mode=args.mode, jobs=args.jobs)


def cmd_g0(args, config: Optional[TransducerConfig]) -> RunResult:
    materials = read_materials(args.materials)
    e_grid = read_field_grid(args.e_field, "electric")
    s_grid = read_field_grid(args.strain, "strain")
    surface = read_surface_samples(args.surface) if args.surface else None
    displacement = read_field_grid(args.displacement, "displacement") if args.displacement else None

    omega_m = None
    if args.omega_m is not None:
        omega_m = 2.0 * np.pi * args.omega_m
    elif config is not None:
        omega_m = config.omega_m

    result = run_g0(
        e_grid, s_grid, materials,
        omega_0=2.0 * np.pi * args.omega_0,
        u_zpf=args.u_zpf,
        displacement=displacement,
        omega_m=omega_m,
        surface=surface,
        interface=tuple(args.interface) if args.interface else None,
    )
    print(result.frame.to_string(index=False))
    return result


def _add_common(parser: argparse.ArgumentParser, config_required: bool = True) -> None:
    parser.add_argument("--config", required=config_required, help="JSON configuration file")
    parser.add_argument("--out", help="Output CSV path or blob://<container>/<path> (default: <command>.csv)")
    parser.add_argument("--verbose", action="store_true", help="Debug logging")


def _add_grid(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--fmin", type=float, help="Lower grid frequency [Hz]")
    parser.add_argument("--fmax", type=float, help="Upper grid frequency [Hz]")
    parser.add_argument("--points", type=int, default=DEFAULT_POINTS, help="Grid points")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="TransducerSimulator",
                                     description="Piezo-optomechanical transducer simulator.")
    commands = parser.add_subparsers(dest="command", required=True)

    derive = commands.add_parser("derive", help="Derived-parameter table")
    _add_common(derive)
    derive.set_defaults(handler=cmd_derive)

    efficiency = commands.add_parser("efficiency", help="Microwave-to-optical conversion efficiency")
    _add_common(efficiency)
    _add_grid(efficiency)
    efficiency.add_argument("--mode", choices=EFFICIENCY_MODES, default="rwa")
    efficiency.add_argument("--terms", choices=FULL_NUMERATOR_TERMS, default="exact",
                            help="Full-model numerator and denominator (with --mode full)")
    efficiency.add_argument("--target", choices=("symmetric", "asymmetric"), default="symmetric",
                            help="Supermode the pump sits on")
    efficiency.set_defaults(handler=cmd_efficiency)

    admittance = commands.add_parser("admittance", help="BVD admittance spectrum")
    _add_common(admittance)
    _add_grid(admittance)
    admittance.add_argument("--extract", action="store_true", help="Read the BVD circuit back from the spectrum")
    admittance.set_defaults(handler=cmd_admittance)

    reflection = commands.add_parser("s11", help="Microwave reflection spectrum")
    _add_common(reflection)
    _add_grid(reflection)
    reflection.set_defaults(handler=cmd_s11)

    transmission = commands.add_parser("transmission", help="Bus transmission versus probe detuning")
    _add_common(transmission)
    _add_grid(transmission)
    transmission.set_defaults(handler=cmd_transmission)

    sweep = commands.add_parser("sweep", help="Peak efficiency over pump power and bus coupling")
    _add_common(sweep)
    _add_grid(sweep)
    sweep.add_argument("--mode", choices=EFFICIENCY_MODES, default="rwa")
    sweep.add_argument("--jobs", type=int, default=1, help="Worker processes")
    powers = sweep.add_mutually_exclusive_group(required=True)
    powers.add_argument("--power-list", nargs="+", type=float, help="Pump powers [W]")
    powers.add_argument("--power-range", nargs=3, type=float, metavar=("START", "STOP", "NUM"),
                        help="Geometric power range [W]")
    kappas = sweep.add_mutually_exclusive_group(required=True)
    kappas.add_argument("--kappa-list", nargs="+", type=float, help="Bus couplings kappa_ex/2pi [Hz]")
    kappas.add_argument("--kappa-range", nargs=3, type=float, metavar=("START", "STOP", "NUM"),
                        help="Linear kappa_ex/2pi range [Hz]")
    sweep.set_defaults(handler=cmd_sweep)

    g0 = commands.add_parser("g0", help="Single-photon optomechanical coupling from field grids")
    _add_common(g0, config_required=False)
    g0.add_argument("--e-field", required=True, help="Electric field grid CSV")
    g0.add_argument("--strain", required=True, help="Strain grid CSV")
    g0.add_argument("--materials", required=True, help="Material table JSON")
    g0.add_argument("--omega-0", type=float, required=True, help="Optical frequency [Hz]")
    g0.add_argument("--surface", help="Interface samples CSV")
    g0.add_argument("--interface", nargs=2, metavar=("INNER", "OUTER"), help="Material ids across the interface")
    zpf = g0.add_mutually_exclusive_group(required=True)
    zpf.add_argument("--u-zpf", type=float, help="Zero-point displacement [m]")
    zpf.add_argument("--displacement", help="Displacement grid CSV; needs --omega-m or --config")
    g0.add_argument("--omega-m", type=float, help="Mechanical frequency [Hz]")
    g0.set_defaults(handler=cmd_g0)

    return parser


def configure_logging(verbose: bool) -> None:
    name = "DEBUG" if verbose else os.getenv(LOG_LEVEL_ENV, "INFO").upper()
    level = logging.getLevelName(name)
    logging.basicConfig(level=level if isinstance(level, int) else logging.INFO, format=LOG_FORMAT)


def build_manifest(result: RunResult, config: Optional[TransducerConfig]) -> RunManifest:
    snapshot = serialize_config(config) if config is not None else {}
    return RunManifest(command=result.command, config=snapshot, derived=result.derived, grid=result.grid)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)

    try:
        config = load_config(args.config) if args.config else None
        result = args.handler(args, config)
        paths = write_artifacts(result.frame, build_manifest(result, config), args.out or f"{args.command}.csv")
        logging.info(f"{args.command}: wrote {paths.csv}")
        return EXIT_OK
    except ConfigError as e:
        logging.error(f"Configuration error ({e.key}): {e}")
        return EXIT_CONFIG
    except ValueError as e:
        logging.error(f"Invalid arguments: {e}")
        return EXIT_CONFIG
    except (SingularNetworkError, ExtractionError, ModeOverlapError) as e:
        logging.error(f"Numerical failure: {e}")
        return EXIT_NUMERICAL
    except (OSError, GridFormatError) as e:
        logging.error(f"I/O failure: {e}")
        return EXIT_IO
    except Exception as e:
        logging.error(f"Unexpected error: {e}", exc_info=True)
        return EXIT_UNEXPECTED

"""
Batch front-end.

    python -m app.cli analyze  --config configs/baseline.conf
    python -m app.cli simulate --config configs/baseline.conf --trials 20000 --seed 7
    python -m app.cli optimize --config configs/baseline.conf --mode radar --out radar.json
    python -m app.cli sweep    --config configs/baseline.conf --variable lambda_b \\
                               --logspace 1e-7 1e-3 50 --engine analytic --out ee_vs_density.csv
    python -m app.cli validate --config configs/baseline.conf --trials 100000 --out report.json

Exit status: 0 on success, 1 on failed validation or solver failure,
2 on configuration or parameter errors.
"""
import argparse
import logging
import sys
from typing import List, Optional

import numpy as np
from pydantic import ValidationError

from app.config import settings
from app.core.errors import ConvergenceError, NoSolutionError, ParameterError, PlannerError
from app.schemas.optimization import OptimizationMode
from app.schemas.sweep import Engine, SweepSpec, SweepVariable
from app.services.sweep_service import sweep_service

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2

ENGINES = {
    "analytic": {Engine.ANALYTIC},
    "mc": {Engine.MONTECARLO},
    "both": {Engine.ANALYTIC, Engine.MONTECARLO},
}
MODES = {
    "isac": OptimizationMode.ISAC,
    "comm": OptimizationMode.COMM_ONLY,
    "radar": OptimizationMode.RADAR_ONLY,
}


def _configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.StreamHandler(),
        ],
    )


def _sweep_values(args: argparse.Namespace) -> List[float]:
    if args.values:
        return [float(v) for v in args.values.split(",") if v.strip()]
    if args.logspace:
        start, stop, num = args.logspace
        return np.geomspace(float(start), float(stop), int(num)).tolist()
    start, stop, num = args.linspace
    return np.linspace(float(start), float(stop), int(num)).tolist()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isac-planner",
        description="Stochastic-geometry ISAC planner: coverage, energy efficiency and optimal BS density",
    )
    parser.add_argument("--log-level", default=settings.LOG_LEVEL, help="Logging level (default from LOG_LEVEL)")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def common(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--config", required=True, help="Scenario file (key = value lines)")
        sub.add_argument("--out", help="Output file; JSON results go to stdout when omitted")

    analyze = subparsers.add_parser("analyze", help="Closed-form coverage, PSE and EE")
    common(analyze)
    analyze.add_argument("--quad-order", type=int, default=settings.QUAD_ORDER)

    simulate = subparsers.add_parser("simulate", help="Monte Carlo estimates with 95% CIs")
    common(simulate)
    simulate.add_argument("--trials", type=int, default=settings.MC_TRIALS)
    simulate.add_argument("--seed", type=int, default=settings.MC_SEED)
    simulate.add_argument("--workers", type=int, default=settings.MC_WORKERS)
    simulate.add_argument("--records", help="Optional per-snapshot SINR CSV")

    optimize = subparsers.add_parser("optimize", help="EE-maximizing BS density")
    common(optimize)
    optimize.add_argument("--mode", choices=sorted(MODES), default="isac")

    sweep = subparsers.add_parser("sweep", help="Parameter sweep to CSV")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--out", required=True, help="CSV output path")
    sweep.add_argument("--variable", required=True, choices=[v.value for v in SweepVariable])
    values = sweep.add_mutually_exclusive_group(required=True)
    values.add_argument("--values", help="Comma-separated sweep values")
    values.add_argument("--logspace", nargs=3, metavar=("START", "STOP", "NUM"))
    values.add_argument("--linspace", nargs=3, metavar=("START", "STOP", "NUM"))
    sweep.add_argument("--engine", choices=sorted(ENGINES), default="analytic")
    sweep.add_argument("--trials", type=int, default=settings.MC_TRIALS)
    sweep.add_argument("--seed", type=int, default=settings.MC_SEED)
    sweep.add_argument("--workers", type=int, default=settings.MC_WORKERS)
    sweep.add_argument("--quad-order", type=int, default=settings.QUAD_ORDER)

    validate = subparsers.add_parser("validate", help="Analytic values against Monte Carlo CIs")
    common(validate)
    validate.add_argument("--trials", type=int, default=settings.MC_TRIALS)
    validate.add_argument("--seed", type=int, default=settings.MC_SEED)
    validate.add_argument("--workers", type=int, default=settings.MC_WORKERS)
    validate.add_argument("--quad-order", type=int, default=settings.QUAD_ORDER)

    return parser


def _emit(payload: str, out: Optional[str]) -> None:
    if not out:
        sys.stdout.write(payload + "\n")


def run(args: argparse.Namespace) -> int:
    if args.command == "analyze":
        result = sweep_service.run_analyze(args.config, args.out, args.quad_order)
        _emit(result.model_dump_json(indent=2), args.out)
        return EXIT_OK

    if args.command == "simulate":
        estimates = sweep_service.run_simulate(
            args.config, args.trials, args.seed, args.out, workers=args.workers, record_path=args.records
        )
        _emit(estimates.model_dump_json(indent=2), args.out)
        return EXIT_OK

    if args.command == "optimize":
        result = sweep_service.run_optimize(args.config, MODES[args.mode], args.out)
        logger.info(
            f"lambda* = {result.lambda_star:.6e} /m^2, EE = {result.ee_star:.6e} bit/J, "
            f"cell radius = {result.cell_radius:.4f} m ({result.method.value}, {result.iterations} iterations)"
        )
        _emit(result.model_dump_json(indent=2), args.out)
        return EXIT_OK

    if args.command == "sweep":
        try:
            spec = SweepSpec(
                variable=SweepVariable(args.variable),
                values=_sweep_values(args),
                engines=ENGINES[args.engine],
                trials=args.trials,
                seed=args.seed,
            )
        except (ValidationError, ValueError) as exc:
            raise ParameterError(f"Invalid sweep: {exc}") from exc
        sweep_service.run_sweep(args.config, spec, args.out, workers=args.workers, quad_order=args.quad_order)
        return EXIT_OK

    report = sweep_service.run_validate(
        args.config, args.trials, args.seed, args.out, workers=args.workers, quad_order=args.quad_order
    )
    _emit(report.model_dump_json(indent=2), args.out)
    return EXIT_OK if report.passed else EXIT_FAILED


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.log_level)

    try:
        return run(args)
    except ParameterError as exc:
        logger.error(f"Configuration error: {exc}")
        return EXIT_CONFIG
    except ConvergenceError as exc:
        logger.error(f"{exc} (last iterate {exc.last_iterate}, residual {exc.residual})")
        return EXIT_FAILED
    except NoSolutionError as exc:
        logger.error(f"No solution: {exc}")
        return EXIT_FAILED
    except PlannerError as exc:
        logger.error(f"{args.command} failed: {exc}")
        return EXIT_FAILED
    except OSError as exc:
        logger.error(f"I/O error: {exc}")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

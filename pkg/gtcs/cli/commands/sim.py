import argparse
import json
from datetime import datetime, timezone
from typing import Any, Dict

from pydantic import ValidationError

from gtcs.cli.options import float_list, int_list
from gtcs.core.config import PROTOCOL_SIZES, Protocol, Settings, settings
from gtcs.core.errors import UsageError
from gtcs.models.schemas import SolverParams, SweepConfig
from gtcs.services.sim import max_supported_d, run_config
from gtcs.store.results_store import results_store

CONFIG_HELP = """\
Configuration precedence (lowest to highest): built-in defaults, .env and
GTCS_* environment variables, the --config JSON file, command-line flags.

The JSON config file uses the result schema's field names, e.g.
  {"n": 400, "m": 96, "alpha_list": [10, 22], "d_list": [1, 2, 3],
   "designs_per_config": 20, "trials_per_design": 50, "master_seed": 7,
   "solver": {"normalize": false}}
"""


def register(subparsers) -> None:
    """Add the `sim` command group."""
    parser = subparsers.add_parser("sim", help="Run Monte Carlo success-rate sweeps")
    commands = parser.add_subparsers(dest="sim_command", required=True)

    run = commands.add_parser(
        "run",
        help="Sweep an alpha x d grid and write a results manifest",
        epilog=CONFIG_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    run.add_argument("--config", type=str, help="JSON config file")
    run.add_argument("--n", type=int, help="Number of samples")
    run.add_argument("--m", type=int, help="Number of tests")
    run.add_argument("--alphas", type=int_list, help="Pool sizes, e.g. 10,22 or 10-28:2")
    grid = run.add_mutually_exclusive_group()
    grid.add_argument("--d", type=int_list, help="Numbers of positives, e.g. 1-20")
    grid.add_argument("--prevalence", type=float_list, help="Positive rates in percent, e.g. 1,2,3,4,5")
    run.add_argument("--protocol", choices=[p.value for p in Protocol],
                     help="Preset designs x trials: desk=20x50, full=100x100")
    run.add_argument("--designs", type=int, help="Designs per cell")
    run.add_argument("--trials", type=int, help="Trials per design")
    run.add_argument("--seed", type=int, help="Master seed")
    run.add_argument("--load-floor", type=float, help="Smallest positive load")
    run.add_argument("--normalize", action="store_true", default=None, help="Column-normalized OMP correlations")
    run.add_argument("--threads", type=int, help="Worker processes (default: GTCS_THREADS)")
    run.add_argument("--out", type=str, help="Results JSON path (default: <output dir>/sim-results.json)")
    run.add_argument("--plot-data", type=str, help="Also write per-alpha (d, success rate) series as CSV")
    run.set_defaults(func=cmd_sim_run)

    maxd = commands.add_parser(
        "max-d",
        help="Largest number of positives each alpha decodes at the threshold",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    maxd.add_argument("--n", type=int, required=True, help="Number of samples")
    maxd.add_argument("--m", type=int, required=True, help="Number of tests")
    maxd.add_argument("--alphas", type=int_list, required=True, help="Pool sizes")
    maxd.add_argument("--threshold", type=float, default=settings.SUCCESS_THRESHOLD, help="Required success rate")
    maxd.add_argument("--designs", type=int, default=settings.DESIGNS_PER_CONFIG, help="Designs per d")
    maxd.add_argument("--trials", type=int, default=settings.TRIALS_PER_DESIGN, help="Trials per design")
    maxd.add_argument("--seed", type=int, default=settings.DEFAULT_MASTER_SEED, help="Master seed")
    maxd.add_argument("--d-max", type=int, default=None, help="Stop searching at this d")
    maxd.add_argument("--threads", type=int, default=None, help="Worker processes (default: GTCS_THREADS)")
    maxd.set_defaults(func=cmd_sim_max_d)


def load_sweep_config(args: argparse.Namespace) -> SweepConfig:
    """Merge the config file and flags into a validated SweepConfig.

    Raises:
        UsageError: If the file cannot be read or the merged grid is invalid
    """
    values: Dict[str, Any] = {}
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as f:
                values = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"cannot read config file '{args.config}': {e}")
        if not isinstance(values, dict):
            raise UsageError(f"config file '{args.config}' must hold a JSON object")
        if "version" in values and isinstance(values.get("config"), dict):
            # a results manifest: rerun its configuration
            values = dict(values["config"])

    if args.protocol is not None:
        values["designs_per_config"], values["trials_per_design"] = PROTOCOL_SIZES[Protocol(args.protocol)]

    overrides = {
        "n": args.n,
        "m": args.m,
        "alpha_list": args.alphas,
        "designs_per_config": args.designs,
        "trials_per_design": args.trials,
        "master_seed": args.seed,
        "load_floor": args.load_floor,
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    if args.d is not None:
        values["d_list"] = args.d
        values.pop("prevalence_list", None)
    if args.prevalence is not None:
        values["prevalence_list"] = [p / 100.0 for p in args.prevalence]
        values.pop("d_list", None)
    if args.normalize:
        solver = dict(values.get("solver") or {})
        solver["normalize"] = True
        values["solver"] = solver

    try:
        return SweepConfig.model_validate(values)
    except ValidationError as e:
        raise UsageError(f"invalid sweep configuration: {e}")


def cmd_sim_run(args: argparse.Namespace) -> int:
    """Run a sweep and write the manifest (and optional plot data)."""
    config = load_sweep_config(args)
    threads = args.threads or Settings().THREADS
    out = args.out or results_store.default_path("sim-results.json")

    started_at = datetime.now(timezone.utc)
    result = run_config(config, workers=threads)
    finished_at = datetime.now(timezone.utc)

    manifest = results_store.build_manifest(result, started_at, finished_at)
    results_store.save_manifest(manifest, out)
    if args.plot_data:
        results_store.save_plot_data(result, args.plot_data)

    print(f"{'alpha':>6} {'d':>5} {'successes':>10} {'trials':>7} {'rate':>7}")
    for cell in result.cells:
        print(f"{cell.alpha:>6} {cell.d:>5} {cell.successes:>10} {cell.trials:>7} {cell.rate:>7.3f}")
    print(f"Wrote {len(result.cells)} cells to {out} in {result.wall_time_seconds:.1f}s")
    return 0


def cmd_sim_max_d(args: argparse.Namespace) -> int:
    """Print the largest supported d per alpha."""
    threads = args.threads or Settings().THREADS
    for alpha in args.alphas:
        supported, _ = max_supported_d(
            n=args.n,
            m=args.m,
            alpha=alpha,
            threshold=args.threshold,
            designs=args.designs,
            trials=args.trials,
            master_seed=args.seed,
            params=SolverParams(),
            d_max=args.d_max,
            workers=threads,
        )
        print(
            f"alpha={alpha:>3}  max d={supported:>4}  "
            f"({100.0 * supported / args.n:.1f}% of n={args.n}, threshold {args.threshold:g})"
        )
    return 0

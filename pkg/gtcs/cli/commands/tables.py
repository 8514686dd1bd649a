import argparse

from gtcs.core.config import settings
from gtcs.core.errors import GridCoverageError
from gtcs.services.sim import best_alpha, missing_cells
from gtcs.store.results_store import results_store


def register(subparsers) -> None:
    """Add the `best-alpha` command."""
    parser = subparsers.add_parser(
        "best-alpha",
        help="Minimal pool size per number of positives from a results file",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--results", type=str, required=True, help="Results JSON written by `sim run`")
    parser.add_argument("--threshold", type=float, default=settings.SUCCESS_THRESHOLD, help="Required success rate")
    parser.add_argument("--out", type=str, default=None, help="Also write the table as CSV")
    parser.set_defaults(func=cmd_best_alpha)


def cmd_best_alpha(args: argparse.Namespace) -> int:
    """Print the minimal-alpha table, "−" where no alpha reaches the threshold."""
    result = results_store.load_manifest(args.results).to_result()
    missing = missing_cells(result)
    if missing:
        raise GridCoverageError(missing)

    table = best_alpha(result, args.threshold)
    n, m = result.config.n, result.config.m
    print(results_store.best_alpha_text(table, n, m, args.threshold), end="")
    if args.out:
        results_store.save_best_alpha(table, n, m, args.threshold, args.out)
        print(f"Wrote {len(table)} rows to {args.out}")
    return 0

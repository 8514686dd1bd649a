import argparse

from gtcs.cli.options import int_list
from gtcs.core.config import settings
from gtcs.models.schemas import SolverParams
from gtcs.services.design import design_summary, generate_rrd
from gtcs.services.sim import select_best_design
from gtcs.store.design_store import design_store


def register(subparsers) -> None:
    """Add the `design` command group."""
    parser = subparsers.add_parser("design", help="Generate and select pooling designs")
    commands = parser.add_subparsers(dest="design_command", required=True)

    gen = commands.add_parser(
        "gen",
        help="Generate an alpha-RRD design and export it as CSV",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    gen.add_argument("--n", type=int, required=True, help="Number of samples (columns)")
    gen.add_argument("--m", type=int, required=True, help="Number of tests (rows)")
    gen.add_argument("--alpha", type=int, required=True, help="Pool size, 1 <= alpha < n")
    gen.add_argument("--seed", type=int, required=True, help="64-bit generation seed")
    gen.add_argument("--out", type=str, required=True, help="Destination CSV path")
    gen.set_defaults(func=cmd_design_gen)

    select = commands.add_parser(
        "select",
        help="Generate candidate designs, keep the one that decodes best",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    select.add_argument("--n", type=int, required=True, help="Number of samples (columns)")
    select.add_argument("--m", type=int, required=True, help="Number of tests (rows)")
    select.add_argument("--alpha", type=int, required=True, help="Pool size, 1 <= alpha < n")
    select.add_argument("--d", type=int_list, required=True, help="Numbers of positives to score on, e.g. 1-8")
    select.add_argument("--candidates", type=int, default=10, help="Candidate designs to generate")
    select.add_argument("--trials", type=int, default=settings.TRIALS_PER_DESIGN, help="Instances per d value")
    select.add_argument("--seed", type=int, default=settings.DEFAULT_MASTER_SEED, help="Master seed")
    select.add_argument("--normalize", action="store_true", help="Column-normalized OMP correlations")
    select.add_argument("--out", type=str, required=True, help="Destination CSV path for the winner")
    select.set_defaults(func=cmd_design_select)


def cmd_design_gen(args: argparse.Namespace) -> int:
    """Generate a design, write it, print its weight summary."""
    design = generate_rrd(args.n, args.m, args.alpha, args.seed)
    design_store.save(design, args.out)

    summary = design_summary(design)
    print(f"Wrote {summary['m']}x{summary['n']} design (alpha={summary['alpha']}, seed={summary['seed']}) to {args.out}")
    print(f"  row weights:    min={summary['row_weight_min']} max={summary['row_weight_max']}")
    print(
        f"  column weights: min={summary['column_weight_min']} max={summary['column_weight_max']} "
        f"mean={summary['column_weight_mean']:.2f}"
    )
    print(f"  duplicate rows: {summary['duplicate_rows']}  uncovered samples: {summary['uncovered_columns']}")
    return 0


def cmd_design_select(args: argparse.Namespace) -> int:
    """Score candidate designs on shared synthetic data and export the best one."""
    selection = select_best_design(
        n=args.n,
        m=args.m,
        alpha=args.alpha,
        d_list=args.d,
        candidates=args.candidates,
        trials=args.trials,
        master_seed=args.seed,
        params=SolverParams(normalize=args.normalize),
    )
    design_store.save(selection.design, args.out)

    for index, rate in enumerate(selection.rates):
        marker = "*" if index == selection.best_index else " "
        print(f"{marker} candidate {index:3d}  success rate {rate:.4f}")
    print(f"Wrote candidate {selection.best_index} (seed={selection.design.seed}) to {args.out}")
    return 0

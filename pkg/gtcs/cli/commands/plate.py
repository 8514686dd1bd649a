import argparse

from gtcs.store.design_store import design_store
from gtcs.store.results_store import results_store
from gtcs.utils.plate import PLATES, plate_for


def register(subparsers) -> None:
    """Add the `plate-map` command."""
    parser = subparsers.add_parser(
        "plate-map",
        help="Lay a design out on a PCR plate, one pool per well",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--design", type=str, required=True, help="Design CSV written by `design gen`")
    parser.add_argument("--plate", type=int, choices=sorted(PLATES), default=96, help="Plate size in wells")
    parser.add_argument("--out", type=str, required=True, help="Destination plate-map CSV")
    parser.set_defaults(func=cmd_plate_map)


def cmd_plate_map(args: argparse.Namespace) -> int:
    """Write one line per test: well, test id, pooled sample ids."""
    design = design_store.load(args.design)
    plate = plate_for(args.plate)
    results_store.save_plate_map(design, plate, args.out)
    last = plate.well_label(design.rows - 1)
    print(f"Wrote {design.rows} pools (wells A1..{last} of a {plate.wells}-well plate) to {args.out}")
    return 0

import argparse
from typing import List


def int_list(text: str) -> List[int]:
    """Parse "4,8,12", "1-20" or "10-48:2" (inclusive ranges) into integers."""
    values: List[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            span, _, step = part.partition(":")
            start, dash, stop = span.partition("-")
            if dash:
                values.extend(range(int(start), int(stop) + 1, int(step or 1)))
            else:
                values.append(int(span))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer list '{text}'")
    if not values:
        raise argparse.ArgumentTypeError(f"empty integer list '{text}'")
    return values


def float_list(text: str) -> List[float]:
    """Parse "1,2,3.5" into floats."""
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number list '{text}'")
    if not values:
        raise argparse.ArgumentTypeError(f"empty number list '{text}'")
    return values

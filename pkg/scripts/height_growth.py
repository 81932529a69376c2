"""Count sections by height on a fibration file and print the growth table.

    python scripts/height_growth.py data/f3_worked.json --to 3
"""
import argparse
from dataclasses import dataclass

from quadrifold.io import fibration_from_json, load_json
from quadrifold.sections import count_by_height, minimal_height


@dataclass
class GrowthConfig:
    path: str
    h_to: int = 3
    strategy: str = "auto"
    budget: int = 10 ** 7


def growth(cfg: GrowthConfig):
    fib = fibration_from_json(load_json(cfg.path))
    counts = count_by_height(fib, minimal_height(fib), cfg.h_to, cfg.budget, cfg.strategy)
    return {h: c for h, c in counts.items() if (h - minimal_height(fib)) % 2 == 0}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("path")
    ap.add_argument("--to", dest="h_to", type=int, default=3)
    ap.add_argument("--strategy", choices=["auto", "direct", "interpolate"], default="auto")
    args = ap.parse_args()
    counts = growth(GrowthConfig(args.path, args.h_to, args.strategy))
    prev = None
    for h, c in counts.items():
        ratio = "" if not prev else f"{c / prev:8.2f}"
        print(f"h={h:>3}  sections={c:>7} {ratio}")
        prev = c or prev


if __name__ == "__main__":
    main()

"""Apply elementary transforms at every rational line of a split smooth fiber.

Reports invariants before and after, and how the low sections move.

    python scripts/hecke_orbit.py data/f3_surgery.json --p 1:1
"""
import argparse
from collections import Counter
from dataclasses import dataclass

from quadrifold.fibration import invariants
from quadrifold.gfpoly import ProjPoint1
from quadrifold.hecke import elementary_transform, inverse_transform, transform_section
from quadrifold.io import fibration_from_json, load_json
from quadrifold.lines import all_lines
from quadrifold.sections import enumerate_sections, minimal_height


@dataclass
class OrbitConfig:
    path: str
    p: tuple = (1, 1)
    h_max: int = 1


def orbit(cfg: OrbitConfig):
    fib = fibration_from_json(load_json(cfg.path))
    p = ProjPoint1.make(fib.field, *cfg.p)
    secs = [s for h in range(minimal_height(fib), cfg.h_max + 1) for s in enumerate_sections(fib, h)]
    rows = []
    for line in all_lines(fib, p):
        rec = elementary_transform(fib, p, line)
        shifts = Counter(transform_section(rec, s).shift for s in secs)
        a, b = invariants(rec.input), invariants(rec.output)
        rows.append({"line": line.basis, "d": rec.output.d, "e": rec.output.e,
                     "delta": (a.delta, b.delta), "epsilon": (a.epsilon, b.epsilon),
                     "shifts": dict(shifts),
                     "restores": inverse_transform(rec).output.same_data(fib)})
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("path")
    ap.add_argument("--p", default="1:1")
    ap.add_argument("--h-max", type=int, default=1)
    args = ap.parse_args()
    u, v = (int(x) for x in args.p.split(":"))
    for r in orbit(OrbitConfig(args.path, (u, v), args.h_max)):
        print(r)


if __name__ == "__main__":
    main()

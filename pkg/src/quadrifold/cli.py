"""Command-line driver.

Every subcommand prints one JSON report with the keys tool, version, config,
invariants and result, in that order.  Exit codes: 0 success, 1 malformed
input, 2 budget exceeded or sampling exhausted, 3 internal invariant failure.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import __version__
from .errors import BudgetError, InputError, QuadrifoldError
from .fibration import (Case, census_row_ok, discriminant_fibers_have_rank3,
                        fiber_at, has_squarefree_discriminant, invariants,
                        sample_census)
from .gfpoly import gf
from .gfpoly.field import is_prime
from .io import (dumps, fibration_to_json, form_to_json, line_basis_from_json,
                 load_constraints, load_fibration, load_json,
                 scalar_to_json)

DEFAULT_BUDGET = 10 ** 7
BUDGET_ENV = "QUADRIFOLD_BUDGET"


@dataclass
class RunConfig:
    subcommand: str
    inputs: tuple = ()
    budget: int = DEFAULT_BUDGET
    budget_source: str = "default"
    max_ext: int = 2
    seed: int = 0
    output: Optional[str] = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.budget <= 0:
            raise InputError(f"budget must be positive, got {self.budget}")
        if self.max_ext < 1:
            raise InputError(f"max-ext must be at least 1, got {self.max_ext}")

    def echo(self):
        out = {"subcommand": self.subcommand,
               "inputs": list(self.inputs),
               "budget": self.budget,
               "budget_source": self.budget_source,
               "max_ext": self.max_ext,
               "seed": self.seed}
        out.update(self.params)
        return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors are malformed input, not budget failures
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_point(text: str, F):
    from .gfpoly import ProjPoint1
    try:
        u, v = (int(t) for t in text.split(":"))
    except ValueError:
        raise InputError(f"--p: expected U:V with integer coordinates, got {text!r}")
    u, v = u % F.p, v % F.p
    if u == 0 and v == 0:
        raise InputError("--p: [0:0] is not a point")
    return ProjPoint1.make(F, u, v)


# -- subcommands --------------------------------------------------------------

def _fib(cfg):
    return load_fibration(cfg.inputs[0])


def cmd_invariants(cfg, fib):
    out = invariants(fib).to_dict()
    out["squarefree"] = has_squarefree_discriminant(fib)
    return out


def cmd_discriminant(cfg, fib):
    disc = fib.discriminant
    roots = []
    for b, mult in disc.projective_roots(cfg.max_ext, cfg.budget):
        roots.append({"b": b.label(), "degree": b.degree_over(fib.field),
                      "multiplicity": mult, "fiber_rank": fiber_at(fib, b).rank})
    return {"form": form_to_json(disc), "text": repr(disc), "degree": disc.degree,
            "squarefree": disc.is_squarefree(),
            "rank3_at_all_roots": discriminant_fibers_have_rank3(fib),
            "roots": roots}


def cmd_sections(cfg, fib):
    from .sections import enumerate_sections
    h = cfg.params["height"]
    secs = enumerate_sections(fib, h, budget=cfg.budget, strategy=cfg.params["strategy"],
                              max_ext=cfg.max_ext)
    return {"height": h, "count": len(secs), "sections": [s.to_dict() for s in secs]}


def cmd_min_height(cfg, fib):
    from .sections import existence_bound, min_height_section
    res = min_height_section(fib, cfg.params["max"], budget=cfg.budget)
    if res is None:
        return {"found": False, "bound": existence_bound(fib)}
    return {"found": True, **res.to_dict()}


def cmd_weak_approx(cfg, fib):
    from .sections import weak_approx_search, weak_approximation_bound, constraint_weight
    cons = load_constraints(fib, cfg.inputs[1])
    res = weak_approx_search(fib, cons, cfg.params["max"], budget=cfg.budget)
    n = sum(constraint_weight(fib, c) for c in cons)
    head = {"constraints": [c.to_dict() for c in cons], "points": n}
    if res is None:
        return {**head, "found": False, "bound": weak_approximation_bound(fib, n)}
    return {**head, "found": True, **res.to_dict()}


def cmd_correspondence(cfg, fib):
    from .lines import correspondence_check
    from .sections import enumerate_sections
    h = cfg.params["height"]
    secs = enumerate_sections(fib, h, budget=cfg.budget, max_ext=cfg.max_ext)
    rep = correspondence_check(fib, secs, cfg.max_ext)
    if not rep.ok:
        from .errors import InternalInvariantError
        raise InternalInvariantError(f"correspondence failed: {rep.failures[:3]}")
    return {"height": h, **rep.to_dict()}


def cmd_stability(cfg, fib):
    from .sections import check_stability_hypothesis
    return check_stability_hypothesis(fib, budget=cfg.budget).to_dict()


def cmd_hecke(cfg, fib):
    from .hecke import elementary_transform
    p = _parse_point(cfg.params["p"], fib.field)
    rows = line_basis_from_json(fib.field, load_json(cfg.inputs[1]), cfg.inputs[1])
    rec = elementary_transform(fib, p, rows, swap_blocks=cfg.params["swap_blocks"])
    a, b = invariants(rec.input), invariants(rec.output)
    return {"receipt": rec.to_dict(),
            "output_invariants": b.to_dict(),
            "checks": {"delta_preserved": a.delta == b.delta,
                       "epsilon_flipped": a.epsilon != b.epsilon,
                       "discriminant_ratio": scalar_to_json(fib.field, rec.det_factor),
                       "output_discriminant": form_to_json(rec.output.discriminant)}}


def cmd_census(cfg, fib):
    p, k = cfg.params["p"], cfg.params["k"]
    if not is_prime(p) or p == 2:
        raise InputError(f"--p must be an odd prime, got {p}")
    F = gf(p, k)
    case = Case.parse(cfg.params["case"])
    n = cfg.params["n"]
    master = random.Random(cfg.seed)
    samples = []
    for _ in range(cfg.params["samples"]):
        sub = master.randrange(2 ** 31)
        smp = sample_census(F, case, n, tries=cfg.params["tries"], seed=sub)
        inv = invariants(smp.fib)
        samples.append({"seed": sub, "tries": smp.tries,
                        "invariants": inv.to_dict(),
                        "squarefree": has_squarefree_discriminant(smp.fib),
                        "rank3_oracle": discriminant_fibers_have_rank3(smp.fib),
                        "table_ok": census_row_ok(smp.fib, n),
                        "fibration": fibration_to_json(smp.fib)})
    return {"case": case.value, "n": n, "field": {"p": p, "k": k},
            "all_table_ok": all(s["table_ok"] for s in samples),
            "all_rank3": all(s["rank3_oracle"] for s in samples),
            "samples": samples}


def cmd_chow(cfg, fib):
    from .chow import verify_height_formula
    n = cfg.params["n"]
    if not 1 <= n <= 6:
        raise InputError(f"--n must lie in 1..6, got {n}")
    return verify_height_formula(n).to_dict()


def cmd_counts(cfg, fib):
    from .sections import count_by_height
    a, b = cfg.params["from"], cfg.params["to"]
    if a > b:
        raise InputError(f"--from {a} exceeds --to {b}")
    counts = count_by_height(fib, a, b, budget=cfg.budget)
    return {"counts": {str(h): c for h, c in counts.items()}}


# name -> (handler, needs a fibration file)
COMMANDS = {
    "invariants": (cmd_invariants, True),
    "discriminant": (cmd_discriminant, True),
    "sections": (cmd_sections, True),
    "min-height": (cmd_min_height, True),
    "weak-approx": (cmd_weak_approx, True),
    "correspondence": (cmd_correspondence, True),
    "stability": (cmd_stability, True),
    "hecke": (cmd_hecke, True),
    "census": (cmd_census, False),
    "chow": (cmd_chow, False),
    "counts": (cmd_counts, True),
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--budget", type=int, default=None,
                        help=f"candidate budget (default {DEFAULT_BUDGET}, or ${BUDGET_ENV})")
    common.add_argument("--max-ext", type=int, default=2, help="extension degree cap")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--output", default=None, help="write the report here instead of stdout")

    parser = _Parser(prog="quadrifold", description="Quadric surface fibrations over P^1 "
                     "over finite fields: invariants, sections, lines, transforms.")
    parser.add_argument("--version", action="version", version=f"quadrifold {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def add(name, help_text, file=True):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        if file:
            sp.add_argument("input", help="fibration JSON file")
        return sp

    add("invariants", "Delta, genus, epsilon, h(X), case")
    add("discriminant", "discriminant form, roots and fiber ranks")
    sp = add("sections", "all sections of a given height")
    sp.add_argument("--height", type=int, required=True)
    sp.add_argument("--strategy", choices=["auto", "direct", "interpolate"], default="auto")
    sp = add("min-height", "least height carrying a section")
    sp.add_argument("--max", type=int, default=None)
    sp = add("weak-approx", "least-height section through prescribed fiber points")
    sp.add_argument("--constraints", required=True)
    sp.add_argument("--max", type=int, default=None)
    sp = add("correspondence", "sections versus lines on the double cover")
    sp.add_argument("--height", type=int, required=True)
    add("stability", "check for sections below -Delta/2")
    sp = add("hecke", "elementary transformation along a line")
    sp.add_argument("--p", required=True, help="base point U:V")
    sp.add_argument("--line", required=True, help="JSON file with a 2x4 basis")
    sp.add_argument("--swap-blocks", action="store_true")
    sp = add("census", "sample balanced fibrations and check the table", file=False)
    sp.add_argument("--case", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--samples", type=int, default=20)
    sp.add_argument("--p", type=int, default=3)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--tries", type=int, default=1000)
    sp = add("chow", "symbolic check of h(X) = n^n Delta", file=False)
    sp.add_argument("--n", type=int, required=True)
    sp = add("counts", "section counts per height")
    sp.add_argument("--from", dest="h_from", type=int, required=True)
    sp.add_argument("--to", dest="h_to", type=int, required=True)
    return parser


_GLOBAL = {"budget", "max_ext", "seed", "output", "subcommand", "input"}


def config_from_args(ns, environ=None) -> RunConfig:
    environ = os.environ if environ is None else environ
    if ns.budget is not None:
        budget, source = ns.budget, "flag"
    elif environ.get(BUDGET_ENV):
        try:
            budget, source = int(environ[BUDGET_ENV]), "env"
        except ValueError:
            raise InputError(f"${BUDGET_ENV}: not an integer: {environ[BUDGET_ENV]!r}")
    else:
        budget, source = DEFAULT_BUDGET, "default"
    inputs = []
    if getattr(ns, "input", None):
        inputs.append(ns.input)
    params = {}
    for k, v in vars(ns).items():
        if k in _GLOBAL:
            continue
        if k == "constraints" or k == "line":
            inputs.append(v)
        key = {"h_from": "from", "h_to": "to"}.get(k, k)
        params[key] = v
    return RunConfig(ns.subcommand, tuple(inputs), budget, source, ns.max_ext,
                     ns.seed, ns.output, params)


def run(cfg: RunConfig) -> dict:
    handler, needs_file = COMMANDS[cfg.subcommand]
    fib = _fib(cfg) if needs_file else None
    inv = invariants(fib).to_dict() if fib is not None else None
    result = handler(cfg, fib)
    return {"tool": "quadrifold", "version": __version__, "config": cfg.echo(),
            "invariants": inv, "result": result}


def exit_code(exc: BaseException) -> int:
    if isinstance(exc, InputError):
        return 1
    if isinstance(exc, BudgetError):
        return 2
    return 3


def main(argv=None, environ=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns, environ)
        report = run(cfg)
    except QuadrifoldError as exc:
        code = exit_code(exc)
        kind = {1: "input error", 2: "budget exceeded", 3: "internal invariant violated"}[code]
        print(f"quadrifold: {kind}: {exc}", file=sys.stderr)
        return code
    text = dumps(report) + "\n"
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main_entry():  # pragma: no cover - console script shim
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_entry()

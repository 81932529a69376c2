"""JSON file formats: fibrations, constraints, lines, sections.

Forms are coefficient lists in descending powers of u; an empty list is the
ZERO form.  Scalars of prime fields are ints, of extension fields residue
lists (constant term first).
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import InputError, QuadrifoldError
from .fibration import UPPER, FibrationSpec
from .gfpoly import GF, BinaryForm, ProjPoint1, gf
from .gfpoly.field import is_prime


class MalformedFile(InputError):
    def __init__(self, path, field, message):
        super().__init__(f"{path}: {field}: {message}")
        self.path = path
        self.field = field


def scalar_to_json(F: GF, code: int):
    return code if F.k == 1 else list(F.residues(code))


def scalar_from_json(F: GF, x, where="scalar"):
    if isinstance(x, bool):
        raise InputError(f"{where}: expected a scalar, got {x!r}")
    if isinstance(x, int):
        if F.k > 1 and not 0 <= x < F.p:
            raise InputError(f"{where}: integer {x} is ambiguous over {F!r}")
        return x % F.p
    if isinstance(x, list) and all(isinstance(r, int) and not isinstance(r, bool) for r in x):
        if len(x) > F.k:
            raise InputError(f"{where}: {len(x)} residues for {F!r}")
        return F.from_residues(x)
    raise InputError(f"{where}: expected a scalar, got {x!r}")


def form_to_json(f: BinaryForm):
    return [scalar_to_json(f.field, c) for c in f.codes]


def form_from_json(F: GF, coeffs, degree=None, where="form"):
    if not isinstance(coeffs, list):
        raise InputError(f"{where}: expected a coefficient list")
    if not coeffs:
        return BinaryForm.zero(F)
    codes = [scalar_from_json(F, c, where) for c in coeffs]
    if degree is not None and len(codes) != degree + 1:
        raise InputError(f"{where}: {len(codes)} coefficients, degree pattern needs {degree + 1}")
    return BinaryForm.from_codes(F, codes)


def field_to_json(F: GF):
    out = {"p": F.p, "k": F.k}
    if F.k > 1:
        out["modulus"] = list(F.modulus)
    return out


def field_from_json(data, where="field"):
    try:
        p, k = data["p"], data.get("k", 1)
    except (KeyError, TypeError, AttributeError):
        raise InputError(f"{where}: missing 'p'")
    if not isinstance(p, int) or not is_prime(p) or p == 2:
        raise InputError(f"{where}.p: must be an odd prime, got {p!r}")
    if not isinstance(k, int) or k < 1:
        raise InputError(f"{where}.k: must be a positive integer, got {k!r}")
    modulus = data.get("modulus") if isinstance(data, dict) else None
    if modulus is None or k == 1:
        return gf(p, k)
    return GF(p, k, modulus)


def fibration_to_json(fib: FibrationSpec):
    out = field_to_json(fib.field)
    out["d"] = list(fib.d)
    out["e"] = fib.e
    out["gram"] = [form_to_json(fib.gram[i][j]) for i, j in UPPER]
    return out


def fibration_from_json(data, path="<input>") -> FibrationSpec:
    if not isinstance(data, dict):
        raise MalformedFile(path, "<root>", "expected a JSON object")
    try:
        F = field_from_json(data)
    except InputError as exc:
        raise MalformedFile(path, "p/k", str(exc))
    d = data.get("d")
    if not (isinstance(d, list) and len(d) == 4 and all(isinstance(x, int) for x in d)):
        raise MalformedFile(path, "d", "expected 4 integers")
    e = data.get("e")
    if e not in (0, 1):
        raise MalformedFile(path, "e", f"expected 0 or 1, got {e!r}")
    gram = data.get("gram")
    if not (isinstance(gram, list) and len(gram) == 10):
        raise MalformedFile(path, "gram", "expected 10 upper-triangular coefficient lists")
    upper = []
    for n, ((i, j), coeffs) in enumerate(zip(UPPER, gram)):
        where = f"gram[{n}] (entry {i + 1},{j + 1})"
        try:
            upper.append(form_from_json(F, coeffs, d[i] + d[j] + e, where))
        except InputError as exc:
            raise MalformedFile(path, where, str(exc))
    try:
        return FibrationSpec.from_upper(F, d, e, upper)
    except QuadrifoldError as exc:
        raise MalformedFile(path, "gram", str(exc))


def load_json(path):
    path = Path(path)
    try:
        return json.loads(path.read_text())
    except FileNotFoundError:
        raise MalformedFile(path, "<file>", "not found")
    except json.JSONDecodeError as exc:
        raise MalformedFile(path, f"line {exc.lineno}", exc.msg)


def load_fibration(path) -> FibrationSpec:
    return fibration_from_json(load_json(path), path)


def point_from_json(F: GF, data, where="b") -> ProjPoint1:
    """[u, v] over F or over an extension given as {"k": m, "coords": [u, v]}."""
    K = F
    coords = data
    if isinstance(data, dict):
        K = F.extension(int(data.get("ext", 1)))
        coords = data.get("coords")
    if not (isinstance(coords, list) and len(coords) == 2):
        raise InputError(f"{where}: expected [u, v]")
    u = scalar_from_json(K, coords[0], where)
    v = scalar_from_json(K, coords[1], where)
    if u == 0 and v == 0:
        raise InputError(f"{where}: [0:0] is not a point")
    return ProjPoint1.make(K, u, v)


def constraints_from_json(fib: FibrationSpec, data, path="<constraints>"):
    from .sections import PointConstraint

    if not isinstance(data, list):
        raise MalformedFile(path, "<root>", "expected a list of {b, x}")
    out = []
    for n, item in enumerate(data):
        if not isinstance(item, dict) or "b" not in item or "x" not in item:
            raise MalformedFile(path, f"[{n}]", "expected keys 'b' and 'x'")
        try:
            b = point_from_json(fib.field, item["b"], f"[{n}].b")
            x = item["x"]
            if not (isinstance(x, list) and len(x) == 4):
                raise InputError(f"[{n}].x: expected 4 coordinates")
            xs = [scalar_from_json(b.field, c, f"[{n}].x") for c in x]
            if not any(xs):
                raise InputError(f"[{n}].x: zero vector")
            out.append(PointConstraint.make(b, xs))
        except InputError as exc:
            raise MalformedFile(path, f"[{n}]", str(exc))
    return out


def load_constraints(fib, path):
    return constraints_from_json(fib, load_json(path), path)


def line_basis_from_json(F: GF, data, path="<line>"):
    rows = data.get("basis") if isinstance(data, dict) else data
    if not (isinstance(rows, list) and len(rows) == 2
            and all(isinstance(r, list) and len(r) == 4 for r in rows)):
        raise MalformedFile(path, "basis", "expected a 2x4 matrix")
    try:
        return [[scalar_from_json(F, c, "basis") for c in r] for r in rows]
    except InputError as exc:
        raise MalformedFile(path, "basis", str(exc))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)

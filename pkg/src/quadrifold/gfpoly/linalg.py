"""Dense linear algebra over F_q on lists of codes."""

from __future__ import annotations

from .field import GF


def rref(F: GF, rows):
    """Reduced row echelon form. Returns (rows, pivot_columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = F.inv(m[r][c])
        m[r] = [F.mul(inv, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(F: GF, rows) -> int:
    return len(rref(F, rows)[1])


def kernel(F: GF, rows, ncols=None):
    """Basis of {x : rows . x = 0}, itself in reduced echelon form."""
    if ncols is None:
        ncols = len(rows[0])
    red, pivots = rref(F, rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        x = [0] * ncols
        x[fc] = 1
        for row, pc in zip(red, pivots):
            x[pc] = F.neg(row[fc])
        basis.append(x)
    if not basis:
        return []
    return rref(F, basis)[0]


def normalize(F: GF, vec):
    """Scale so the first nonzero entry is 1."""
    lead = next((x for x in vec if x), None)
    if lead is None:
        raise ValueError("cannot normalize the zero vector")
    inv = F.inv(lead)
    return tuple(F.mul(inv, x) for x in vec)


def mat_vec(F: GF, M, x):
    out = []
    for row in M:
        acc = 0
        for a, b in zip(row, x):
            if a and b:
                acc = F.add(acc, F.mul(a, b))
        out.append(acc)
    return out


def bilinear(F: GF, M, x, y):
    return dot(F, x, mat_vec(F, M, y))


def dot(F: GF, x, y):
    acc = 0
    for a, b in zip(x, y):
        if a and b:
            acc = F.add(acc, F.mul(a, b))
    return acc


def det(F: GF, M):
    """Determinant by Gaussian elimination."""
    m = [list(r) for r in M]
    n = len(m)
    result = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = F.neg(result)
        result = F.mul(result, m[c][c])
        inv = F.inv(m[c][c])
        for i in range(c + 1, n):
            if m[i][c]:
                f = F.mul(m[i][c], inv)
                m[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(m[i], m[c])]
    return result


def inverse(F: GF, M):
    n = len(M)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(M)]
    red, piv = rref(F, aug)
    if piv[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def lift_matrix(K: GF, F: GF, M):
    table = K.embedding(F)
    if table is None:
        return [list(r) for r in M]
    return [[table[x] for x in row] for row in M]

"""Dense exact linear algebra over F = k(t).

Matrices are lists of rows of RationalScalar; vectors are lists.
"""

from __future__ import annotations

from .scalars import BaseField, RationalScalar


def zero(field: BaseField) -> RationalScalar:
    return RationalScalar.zero(field)


def one(field: BaseField) -> RationalScalar:
    return RationalScalar.from_int(field, 1)


def identity(field: BaseField, n: int) -> list[list[RationalScalar]]:
    z, o = zero(field), one(field)
    return [[o if i == j else z for j in range(n)] for i in range(n)]


def zeros(field: BaseField, n: int, m: int) -> list[list[RationalScalar]]:
    z = zero(field)
    return [[z] * m for _ in range(n)]


def diagonal(field: BaseField, entries) -> list[list[RationalScalar]]:
    n = len(entries)
    z = zero(field)
    return [[entries[i] if i == j else z for j in range(n)] for i in range(n)]


def transpose(A):
    return [list(r) for r in zip(*A)]


def dot(u, v):
    acc = None
    for a, b in zip(u, v):
        if a.is_zero() or b.is_zero():
            continue
        acc = a * b if acc is None else acc + a * b
    return acc if acc is not None else zero(u[0].field)


def matvec(A, v):
    return [dot(row, v) for row in A]


def matmul(A, B):
    Bt = transpose(B)
    return [[dot(row, col) for col in Bt] for row in A]


def columns(A):
    return transpose(A)


def from_columns(cols):
    return transpose(cols)


def rref(rows):
    """Row echelon form with unit pivots. Returns (reduced rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if not m[i][c].is_zero()), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [x - f * y if not y.is_zero() else x for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def nullspace(rows, ncols: int, field: BaseField):
    """Basis of {x : rows . x = 0}, as a list of vectors."""
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    z, o = zero(field), one(field)
    out = []
    for f in free:
        x = [z] * ncols
        x[f] = o
        for r, pc in enumerate(pivots):
            x[pc] = -red[r][f]
        out.append(x)
    return out


def solve(A, b):
    """Solve A x = b for square invertible A."""
    n = len(A)
    aug = [list(A[i]) + [b[i]] for i in range(n)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) > n:
        raise ZeroDivisionError("singular system")
    return [red[i][n] for i in range(n)]


def inverse(A):
    n = len(A)
    field = A[0][0].field
    I = identity(field, n)
    aug = [list(A[i]) + I[i] for i in range(n)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) > n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def det(A):
    n = len(A)
    field = A[0][0].field
    m = [list(r) for r in A]
    acc = one(field)
    for c in range(n):
        piv = next((i for i in range(c, n) if not m[i][c].is_zero()), None)
        if piv is None:
            return zero(field)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            acc = -acc
        acc = acc * m[c][c]
        inv = m[c][c].inverse()
        for i in range(c + 1, n):
            if not m[i][c].is_zero():
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return acc


def solve_upper(U, b):
    """Back substitution for an upper-triangular matrix with nonzero diagonal."""
    n = len(U)
    x = [None] * n
    for i in range(n - 1, -1, -1):
        acc = b[i]
        for j in range(i + 1, n):
            if not U[i][j].is_zero() and not x[j].is_zero():
                acc = acc - U[i][j] * x[j]
        x[i] = acc / U[i][i]
    return x


def scale_matrix(A, c):
    return [[c * x for x in row] for row in A]


def equal(A, B) -> bool:
    return all(x == y for ra, rb in zip(A, B) for x, y in zip(ra, rb))


def min_valuation(A):
    vals = [x.valuation for row in A for x in row if not x.is_zero()]
    return min(vals) if vals else None

"""Vectorised power-series arithmetic modulo t^N.

Arrays carry the series coefficients on their last axis.  Over F_p they are
int64 reduced mod p; over Q they are object arrays of flint.fmpq (converted to
and from Fractions at the boundary, since the two types do not mix).  Only
nonnegative exponents appear here: callers work in coordinates of an O-basis
so that every quantity is integral (or has a known t-power factored out).
"""

from __future__ import annotations

from fractions import Fraction

import flint
import numpy as np

from .scalars import BaseField, RationalScalar


class SeriesRing:
    def __init__(self, field: BaseField, N: int):
        self.field = field
        self.N = N
        p = field.p
        self.p = p
        # int64 is safe while a contraction over <= 8 terms of products < p^2 cannot overflow
        self.dtype = np.int64 if p is not None and 16 * p * p < 2**62 else object

    # -- construction
    def zeros(self, shape) -> np.ndarray:
        shape = tuple(shape) if isinstance(shape, (tuple, list)) else (shape,)
        if self.dtype is object:
            fill = flint.fmpq(0) if self.p is None else 0
            out = np.empty(shape + (self.N,), dtype=object)
            out.fill(fill)
            return out
        return np.zeros(shape + (self.N,), dtype=np.int64)

    def const(self, c) -> np.ndarray:
        out = self.zeros(())
        out[0] = self._elt(c)
        return out

    def t_power(self, k: int) -> np.ndarray:
        out = self.zeros(())
        if k < self.N:
            out[k] = 1
        return out

    def from_scalar(self, x: RationalScalar) -> np.ndarray:
        out = self.zeros(())
        if x.is_zero():
            return out
        if x.shift < 0:
            raise ValueError(f"scalar {x} is not integral")
        for i, c in enumerate(x.series(self.N)):
            out[x.shift + i] = self._elt(c)
        return out

    def from_matrix(self, rows) -> np.ndarray:
        rows = [list(r) for r in rows]
        out = self.zeros((len(rows), len(rows[0]) if rows else 0))
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                out[i, j] = self.from_scalar(x)
        return out

    def to_scalar(self, a: np.ndarray) -> RationalScalar:
        """Truncated polynomial representative."""
        return RationalScalar.from_laurent(self.field, 0, [self._py(c) for c in a])

    def _py(self, c):
        """Array entry -> field element of k (int or Fraction)."""
        if self.p is None:
            return Fraction(int(c.p), int(c.q)) if isinstance(c, flint.fmpq) else Fraction(c)
        return int(c)

    def _elt(self, c):
        """Field element of k -> array entry."""
        c = self.field.elt(c)
        return flint.fmpq(c.numerator, c.denominator) if self.p is None else c

    # -- arithmetic
    def reduce(self, a):
        if self.p is not None:
            return a % self.p
        return a

    def add(self, a, b):
        return self.reduce(a + b)

    def sub(self, a, b):
        return self.reduce(a - b)

    def neg(self, a):
        return self.reduce(-a)

    def scale(self, a, c):
        """Multiply by a constant of k."""
        return self.reduce(a * self._elt(c))

    def contract(self, spec: str, a, b):
        """einsum over the leading axes, Cauchy product over the series axis."""
        lhs, out = spec.split("->")
        sa, sb = lhs.split(",")
        z = "z"
        assert z not in spec
        inner = f"{sa},{sb}{z}->{out}{z}"
        res_shape = None
        N = self.N
        acc = None
        for s in range(N):
            col = a[..., s]
            if self.dtype is not object and not col.any():
                continue
            term = np.einsum(inner, col, b[..., : N - s])
            if acc is None:
                res_shape = term.shape[:-1]
                acc = self.zeros(res_shape)
            acc[..., s:] += term
            if self.p is not None:
                acc %= self.p
        if acc is None:
            probe = np.einsum(f"{sa},{sb}->{out}", a[..., 0], b[..., 0])
            return self.zeros(np.shape(probe))
        return acc

    def mul(self, a, b):
        """Elementwise series product with broadcasting."""
        a, b = np.broadcast_arrays(a, b)
        N = self.N
        acc = self.zeros(a.shape[:-1])
        for s in range(N):
            col = a[..., s : s + 1]
            if self.dtype is not object and not col.any():
                continue
            acc[..., s:] += col * b[..., : N - s]
            if self.p is not None:
                acc %= self.p
        return acc

    def inv(self, a):
        """Inverse of a unit series (nonzero constant term), elementwise."""
        if np.ndim(a) > 1:
            flat = a.reshape(-1, self.N)
            return np.stack([self.inv(r) for r in flat]).reshape(a.shape)
        c0 = a[0]
        if c0 == 0:
            raise ZeroDivisionError("series with zero constant term is not a unit")
        i0 = self._elt(self.field.inv(self._py(c0)))
        out = self.zeros(())
        out[0] = i0
        for n in range(1, self.N):
            acc = sum((a[i] * out[n - i] for i in range(1, n + 1)), self._elt(0))
            out[n] = self.field.elt(-acc * i0) if self.p is not None else -acc * i0
        return out

    def div(self, a, u):
        """a / u for a unit series u."""
        return self.mul(a, self.inv(u))

    def shift_down(self, a, k: int):
        """Divide by t^k; the top k coefficients become unknown and are zero-filled."""
        if k == 0:
            return a.copy()
        if self.dtype is not object:
            if a[..., :k].any():
                raise ArithmeticError(f"series not divisible by t^{k}")
        elif any(c != 0 for c in a[..., :k].ravel()):
            raise ArithmeticError(f"series not divisible by t^{k}")
        out = self.zeros(a.shape[:-1])
        out[..., : self.N - k] = a[..., k:]
        return out

    def shift_up(self, a, k: int):
        out = self.zeros(a.shape[:-1])
        if k < self.N:
            out[..., k:] = a[..., : self.N - k]
        return out

    def truncate(self, a, M: int):
        out = a.copy()
        out[..., M:] = 0
        return out

    def val(self, a) -> int:
        """Valuation of a single series (N when it vanishes to precision)."""
        nz = np.nonzero(a != 0)[0]
        return int(nz[0]) if len(nz) else self.N

    def vals(self, a) -> np.ndarray:
        nz = a != 0
        v = np.argmax(nz, axis=-1)
        return np.where(nz.any(axis=-1), v, self.N)

    def residue(self, a):
        return a[..., 0]

    def is_zero(self, a, M: int | None = None) -> bool:
        M = self.N if M is None else M
        return not np.any(a[..., :M] != 0)


# -- linear algebra over the residue field ------------------------------------


def field_rref(field: BaseField, rows: list[list]):
    """Reduced row echelon form over k; returns (rref rows, pivot columns)."""
    m = [[field.elt(c) for c in r] for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.elt(x * inv) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [field.elt(x - f * y) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def field_rank(field: BaseField, rows) -> int:
    return len(field_rref(field, rows)[1])


def field_nullspace(field: BaseField, rows: list[list], ncols: int) -> list[list]:
    """Basis of {x : rows . x = 0}."""
    red, pivots = field_rref(field, rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [field.elt(0)] * ncols
        x[f] = field.elt(1)
        for r, pc in enumerate(pivots):
            x[pc] = field.elt(-red[r][f])
        basis.append(x)
    return basis


def independent_subset(field: BaseField, vectors: list[list], want: int | None = None) -> list[int]:
    """Greedy indices of vectors that are linearly independent over k."""
    chosen, rows = [], []
    for i, v in enumerate(vectors):
        if field_rank(field, rows + [v]) > len(rows):
            rows.append(v)
            chosen.append(i)
            if want is not None and len(chosen) == want:
                break
    return chosen

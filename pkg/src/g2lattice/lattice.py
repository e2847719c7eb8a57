"""O-lattices in C_s (x) F for the valuation ring O = k[t]_(t).

A module is stored by its canonical basis: an echelon form obtained by column
operations over O.  Processing rows from the bottom, each pivot is normalised
to a power t^a and the entries above it are reduced to their Laurent principal
parts below t^a.  Two modules are equal exactly when their canonical bases are
identical, and every canonical entry is a Laurent polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .errors import PreconditionError
from .octonion import OctonionElement, bilinear, gram_matrix, para_mul
from .scalars import BaseField, RationalScalar, parse_scalar

Vector = list  # 8 RationalScalars


def _as_vector(v) -> list:
    if isinstance(v, OctonionElement):
        return list(v.coords)
    return list(v)


def _axpy(y, f, x):
    """y - f * x (f a scalar), skipping zero entries."""
    return [a - f * b if not b.is_zero() else a for a, b in zip(y, x)]


def canonical_columns(columns) -> tuple[list, list]:
    """Canonical echelon basis of the O-module spanned by ``columns``.

    Returns (basis columns ordered by pivot row, pivot rows).  Column k has
    entry t^a at its pivot row and zeros below it.
    """
    cols = [_as_vector(c) for c in columns]
    cols = [c for c in cols if not all(x.is_zero() for x in c)]
    if not cols:
        return [], []
    n = len(cols[0])
    field = cols[0][0].field
    pivots = {}
    for r in range(n - 1, -1, -1):
        live = [c for c in cols if not c[r].is_zero()]
        if not live:
            continue
        best = min(range(len(live)), key=lambda i: live[i][r].valuation)
        piv = live[best]
        a = piv[r].shift
        u_inv = piv[r].unit_part().inverse()
        piv = [u_inv * x for x in piv]
        tpow = RationalScalar.t_power(field, a)
        piv[r] = tpow
        rest = []
        for c in cols:
            if c is live[best]:
                continue
            if not c[r].is_zero():
                f = c[r] / tpow
                c = _axpy(c, f, piv)
                c[r] = RationalScalar.zero(field)
            if not all(x.is_zero() for x in c):
                rest.append(c)
        cols = rest
        pivots[r] = piv
    rows = sorted(pivots)
    basis = {r: pivots[r] for r in rows}
    for idx, r in enumerate(rows):
        col = basis[r]
        for r2 in reversed(rows[:idx]):
            x = col[r2]
            if x.is_zero():
                continue
            a = basis[r2][r2].shift
            pp = x.principal_part(a)
            if pp == x:
                continue
            f = (x - pp) / basis[r2][r2]
            col = _axpy(col, f, basis[r2])
            col[r2] = pp
        basis[r] = col
    return [basis[r] for r in rows], rows


class Module:
    """A finitely generated O-submodule of F^8 in canonical form."""

    def __init__(self, field: BaseField, columns, _canonical=False):
        self.field = field
        if _canonical:
            self.columns, self.pivot_rows = columns
        else:
            self.columns, self.pivot_rows = canonical_columns(columns)
        self.columns = [tuple(c) for c in self.columns]

    @property
    def rank(self) -> int:
        return len(self.columns)

    def vectors(self) -> list[OctonionElement]:
        return [OctonionElement(c, self.field) for c in self.columns]

    def matrix(self):
        """Rows of the basis matrix whose columns are the basis vectors."""
        return linalg.transpose([list(c) for c in self.columns])

    def __eq__(self, other):
        if not isinstance(other, Module):
            return NotImplemented
        return self.field == other.field and self.columns == other.columns

    def __hash__(self):
        return hash(tuple(self.columns))

    def coordinates(self, x):
        """Coordinates of x in the canonical basis, or None when x is not in the F-span."""
        res = _as_vector(x)
        coeffs = [None] * self.rank
        for k in range(self.rank - 1, -1, -1):
            r = self.pivot_rows[k]
            c = res[r] / self.columns[k][r]
            coeffs[k] = c
            if not c.is_zero():
                res = _axpy(res, c, self.columns[k])
        if not all(x.is_zero() for x in res):
            return None
        return coeffs

    def member(self, x) -> bool:
        c = self.coordinates(x)
        return c is not None and all(a.is_integral() for a in c)

    def contains(self, other: "Module") -> bool:
        return all(self.member(c) for c in other.columns)

    def to_json(self) -> dict:
        return {"field": self.field.to_json(), "basis": [[str(x) for x in c] for c in self.columns]}

    def __repr__(self):
        return f"{type(self).__name__}(rank={self.rank}, {self.to_json()['basis']})"


class Lattice(Module):
    """A full-rank O-lattice in C_s (x) F."""

    def __init__(self, field: BaseField, columns, _canonical=False):
        super().__init__(field, columns, _canonical)
        if self.rank != 8:
            raise PreconditionError(f"generators span a module of rank {self.rank} < 8")

    @classmethod
    def from_json(cls, data: dict) -> "Lattice":
        field = BaseField.from_json(data["field"])
        basis = data["basis"]
        if len(basis) != 8 or any(len(v) != 8 for v in basis):
            raise ValueError("a lattice file needs 8 basis vectors of 8 coordinates")
        cols = [[parse_scalar(s, field) for s in v] for v in basis]
        return cls(field, cols)

    @classmethod
    def monomial(cls, field: BaseField, exponents) -> "Lattice":
        """span(t^{a_i} b_i) for the standard basis b_i."""
        z = RationalScalar.zero(field)
        cols = []
        for i, a in enumerate(exponents):
            c = [z] * 8
            c[i] = RationalScalar.t_power(field, a)
            cols.append(c)
        return cls(field, cols)

    @classmethod
    def standard(cls, field: BaseField) -> "Lattice":
        return cls.monomial(field, [0] * 8)

    def diagonal_exponents(self) -> list[int]:
        return [self.columns[k][k].shift for k in range(8)]

    def det_valuation(self) -> int:
        return sum(self.diagonal_exponents())


def canonicalize(generators, field: BaseField | None = None) -> Lattice:
    """Canonical lattice spanned by a list of vectors or by the columns of an 8x8 matrix."""
    gens = list(generators)
    if gens and isinstance(gens[0], OctonionElement):
        field = field or gens[0].field
        cols = [list(g.coords) for g in gens]
    elif gens and isinstance(gens[0], (list, tuple)) and len(gens) == 8 and field is None and all(len(r) == 8 for r in gens):
        # an 8x8 matrix given as rows
        cols = linalg.transpose([list(r) for r in gens])
        field = cols[0][0].field
    else:
        cols = [list(g) for g in gens]
        field = field or cols[0][0].field
    return Lattice(field, cols)


def member(x, L: Module) -> bool:
    return L.member(x)


def dual(L: Lattice) -> Lattice:
    """{x : <x, L> in O}, via the dual basis Phi (B^-1)^T."""
    B = L.matrix()
    Binv = linalg.inverse(B)
    Phi = gram_matrix(L.field)
    D = linalg.matmul(Phi, linalg.transpose(Binv))
    return Lattice(L.field, linalg.transpose(D))


def lattice_sum(*mods: Module) -> Module:
    cols = [list(c) for m in mods for c in m.columns]
    m = Module(mods[0].field, cols)
    return Lattice(m.field, (m.columns, m.pivot_rows), _canonical=True) if m.rank == 8 else m


def scale(L: Module, f) -> Module:
    if not isinstance(f, RationalScalar):
        f = RationalScalar.from_int(L.field, f)
    if f.is_zero():
        raise PreconditionError("cannot scale a lattice by zero")
    cols = [[f * x for x in c] for c in L.columns]
    return type(L)(L.field, cols)


def intersect(L: Lattice, M: Lattice) -> Lattice:
    return dual(lattice_sum(dual(L), dual(M)))


def apply(g, L: Module) -> Module:
    """g . L for a matrix g (rows) acting on standard coordinates."""
    G = g.matrix if hasattr(g, "matrix") else g
    cols = [linalg.matvec(G, list(c)) for c in L.columns]
    return type(L)(L.field, cols)


def product_span(L: Module, M: Module) -> Module:
    """O-span of the products x * y over basis vectors x of L and y of M."""
    prods = [list(para_mul(x, y).coords) for x in L.vectors() for y in M.vectors()]
    m = Module(L.field, prods)
    if m.rank == 8:
        return Lattice(L.field, (m.columns, m.pivot_rows), _canonical=True)
    return m


def gram(L: Module):
    vs = L.vectors()
    return [[bilinear(x, y) for y in vs] for x in vs]


def smith_valuations(M) -> list[int]:
    """t-valuations of the elementary divisors of a square matrix over F (inf for zero)."""
    m = [list(r) for r in M]
    n = len(m)
    out = []
    for k in range(n):
        best = None
        for i in range(k, n):
            for j in range(k, n):
                x = m[i][j]
                if not x.is_zero() and (best is None or x.shift < best[0]):
                    best = (x.shift, i, j)
        if best is None:
            out.extend([float("inf")] * (n - k))
            break
        _, i, j = best
        m[k], m[i] = m[i], m[k]
        for row in m:
            row[k], row[j] = row[j], row[k]
        p_inv = m[k][k].inverse()
        for i in range(k + 1, n):
            if not m[i][k].is_zero():
                f = m[i][k] * p_inv
                m[i] = _axpy(m[i], f, m[k])
        for j in range(k + 1, n):
            m[k][j] = RationalScalar.zero(m[k][k].field)
        out.append(m[k][k].shift)
    return out


def elementary_divisors(L: Lattice, M: Lattice) -> list[int]:
    """Valuations a_i with M/L isomorphic to the sum of O/t^{a_i}, for L contained in M."""
    if not M.contains(L):
        raise PreconditionError("first lattice is not contained in the second")
    X = [M.coordinates(c) for c in L.columns]  # columns of the change-of-basis matrix
    return sorted(smith_valuations(linalg.transpose(X)))


def length(L: Lattice, M: Lattice) -> int:
    """O-length of M/L for L contained in M."""
    divs = elementary_divisors(L, M)
    total = sum(divs)
    assert total == L.det_valuation() - M.det_valuation()
    return total


def discriminant_class(L: Lattice) -> dict:
    """Gram determinant modulo squares of units.

    Reports the valuation, its parity and the square class of the leading
    coefficient (Legendre symbol over F_p, square-free part over Q).
    """
    d = linalg.det(gram(L))
    lead = d.unit_part().residue()
    return {
        "valuation": d.valuation,
        "parity": d.valuation % 2,
        "unit_square_class": L.field.square_class(lead),
    }


def is_order(L: Lattice) -> tuple[bool, dict | None]:
    """Whether L contains the para-unit and is closed under the product, with a witness."""
    e = OctonionElement.para_unit(L.field)
    if not L.member(e):
        return False, {"kind": "missing_para_unit", "element": e.to_json()}
    vs = L.vectors()
    for i, x in enumerate(vs):
        for j, y in enumerate(vs):
            z = para_mul(x, y)
            coords = L.coordinates(z)
            bad = [c.valuation for c in coords if not c.is_integral()]
            if bad:
                return False, {
                    "kind": "product_not_in_lattice",
                    "left": i,
                    "right": j,
                    "product": z.to_json(),
                    "valuation": min(bad),
                }
    return True, None


def is_selfdual(L: Lattice) -> bool:
    return dual(L) == L


def is_maximal_order(L: Lattice) -> bool:
    """Maximal orders are exactly the self-dual ones."""
    ok, _ = is_order(L)
    if not ok:
        raise PreconditionError("lattice is not an order")
    return is_selfdual(L)


@dataclass
class GramProfile:
    kind: str  # "split" or "quasi-split"
    r: int
    exponents: list[int]
    basis: list  # columns, truncated to ``precision`` unless exact
    precision: int | None  # None when the Gram identity holds exactly

    @property
    def l(self) -> int:
        return sum(self.exponents)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "r": self.r,
            "l": self.l,
            "exponents": self.exponents,
            "precision": self.precision,
            "basis": [[str(x) for x in c] for c in self.basis],
        }

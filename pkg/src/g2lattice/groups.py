"""Automorphisms of the para-octonions, related triples and the S3 action on them."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache

from . import linalg
from ._series import field_nullspace
from .errors import PreconditionError
from .octonion import PAIRING, PRODUCT_TABLE, OctonionElement, conj, gram_matrix, para_mul
from .scalars import BaseField, RationalScalar, parse_scalar


class AlgebraMap:
    """An F-linear map of C_s (x) F given by its matrix on standard coordinates.

    ``precision`` is None for exact maps; otherwise the matrix is a truncation
    of a map that is only known modulo t^precision (relative to the lattice it
    was built for).
    """

    def __init__(self, field: BaseField, matrix, precision: int | None = None):
        self.field = field
        self.matrix = [list(r) for r in matrix]
        self.precision = precision

    @classmethod
    def identity(cls, field: BaseField) -> "AlgebraMap":
        return cls(field, linalg.identity(field, 8))

    def __call__(self, x: OctonionElement) -> OctonionElement:
        return OctonionElement(tuple(linalg.matvec(self.matrix, list(x.coords))), self.field)

    def __matmul__(self, other: "AlgebraMap") -> "AlgebraMap":
        prec = _min_prec(self.precision, other.precision)
        return AlgebraMap(self.field, linalg.matmul(self.matrix, other.matrix), prec)

    def inverse(self) -> "AlgebraMap":
        return AlgebraMap(self.field, linalg.inverse(self.matrix), self.precision)

    def column(self, j) -> OctonionElement:
        return OctonionElement(tuple(r[j] for r in self.matrix), self.field)

    def det(self) -> RationalScalar:
        return linalg.det(self.matrix)

    def __eq__(self, other):
        if not isinstance(other, AlgebraMap):
            return NotImplemented
        return linalg.equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash(tuple(tuple(r) for r in self.matrix))

    def to_json(self) -> dict:
        out = {"field": self.field.to_json(), "matrix": [[str(x) for x in r] for r in self.matrix]}
        if self.precision is not None:
            out["precision"] = self.precision
        return out

    @classmethod
    def from_json(cls, data: dict) -> "AlgebraMap":
        field = BaseField.from_json(data["field"])
        rows = data["matrix"]
        if len(rows) != 8 or any(len(r) != 8 for r in rows):
            raise ValueError("an algebra map is an 8x8 matrix")
        return cls(field, [[parse_scalar(s, field) for s in r] for r in rows], data.get("precision"))

    def __repr__(self):
        return f"AlgebraMap({[[str(x) for x in r] for r in self.matrix]})"


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def is_isometry(g: AlgebraMap) -> bool:
    Phi = gram_matrix(g.field)
    return linalg.equal(linalg.matmul(linalg.matmul(linalg.transpose(g.matrix), Phi), g.matrix), Phi)


def is_special(g: AlgebraMap) -> bool:
    return g.det() == RationalScalar.from_int(g.field, 1)


def _basis_image(g, k, sign):
    col = g.column(k)
    return col if sign > 0 else -col


def is_automorphism(g: AlgebraMap) -> tuple[bool, dict | None]:
    """g(x * y) = g(x) * g(y) on all 64 basis pairs, and g preserves the form."""
    cols = [g.column(j) for j in range(8)]
    zero = OctonionElement.zero(g.field)
    for i in range(8):
        for j in range(8):
            entry = PRODUCT_TABLE[i][j]
            lhs = zero if entry is None else _basis_image(g, entry[1], entry[0])
            rhs = para_mul(cols[i], cols[j])
            if lhs != rhs:
                return False, {"pair": [i, j], "g(x*y)": lhs.to_json(), "g(x)*g(y)": rhs.to_json()}
    if not is_isometry(g):
        return False, {"form": "g does not preserve the bilinear form"}
    return True, None


@dataclass(frozen=True)
class RelatedTriple:
    g1: AlgebraMap
    g2: AlgebraMap
    g3: AlgebraMap

    def components(self):
        return (self.g1, self.g2, self.g3)

    def __eq__(self, other):
        return isinstance(other, RelatedTriple) and all(a == b for a, b in zip(self.components(), other.components()))

    def __hash__(self):
        return hash(self.components())


def is_related_triple(T: RelatedTriple) -> tuple[bool, dict | None]:
    """g_i(x * y) = g_{i+1}(x) * g_{i+2}(y) for i = 1, 2, 3 on basis pairs; each g_i in SO."""
    gs = T.components()
    field = gs[0].field
    for n, g in enumerate(gs):
        if not is_isometry(g):
            return False, {"component": n + 1, "failure": "not an isometry"}
        if not is_special(g):
            return False, {"component": n + 1, "failure": "determinant is not 1"}
    zero = OctonionElement.zero(field)
    for n in range(3):
        g, ga, gb = gs[n], gs[(n + 1) % 3], gs[(n + 2) % 3]
        ca = [ga.column(j) for j in range(8)]
        cb = [gb.column(j) for j in range(8)]
        for i in range(8):
            for j in range(8):
                entry = PRODUCT_TABLE[i][j]
                lhs = zero if entry is None else _basis_image(g, entry[1], entry[0])
                rhs = para_mul(ca[i], cb[j])
                if lhs != rhs:
                    return False, {"index": n + 1, "pair": [i, j], "lhs": lhs.to_json(), "rhs": rhs.to_json()}
    return True, None


def _conj_matrix(field):
    I = linalg.identity(field, 8)
    return [list(conj(OctonionElement(tuple(r[j] for r in I), field)).coords) for j in range(8)]


def hat(g: AlgebraMap) -> AlgebraMap:
    """x -> conj(g(conj(x)))."""
    C = linalg.transpose(_conj_matrix(g.field))
    return AlgebraMap(g.field, linalg.matmul(linalg.matmul(C, g.matrix), C), g.precision)


def _require_triple(T):
    ok, why = is_related_triple(T)
    if not ok:
        raise PreconditionError(f"not a related triple: {why}")


def rho(T: RelatedTriple, check: bool = True) -> RelatedTriple:
    if check:
        _require_triple(T)
    return RelatedTriple(T.g2, T.g3, T.g1)


def theta(T: RelatedTriple, check: bool = True) -> RelatedTriple:
    if check:
        _require_triple(T)
    return RelatedTriple(hat(T.g1), hat(T.g3), hat(T.g2))


# -- generators ----------------------------------------------------------------

# torus weights of the standard basis vectors
WEIGHTS = ((0, 0), (0, 0), (1, 0), (0, 1), (-1, -1), (-1, 0), (0, -1), (1, 1))


def torus_cochar(a: int, b: int, field: BaseField | None = None) -> AlgebraMap:
    field = field or BaseField(5)
    entries = [RationalScalar.t_power(field, a * wa + b * wb) for wa, wb in WEIGHTS]
    return AlgebraMap(field, linalg.diagonal(field, entries))


@lru_cache(maxsize=None)
def permutation_automorphisms(field: BaseField) -> tuple[tuple[tuple, int, AlgebraMap], ...]:
    """(permutation of {0,1,2}, sign on the u and v vectors, map) for each verified choice.

    The permutation acts simultaneously on u_i and v_i; for each permutation the
    sign is found by trying both and keeping the one passing is_automorphism.
    """
    out = []
    for perm in itertools.permutations(range(3)):
        for sign in (1, -1):
            M = linalg.zeros(field, 8, 8)
            one = RationalScalar.from_int(field, 1)
            s = RationalScalar.from_int(field, sign)
            M[0][0] = one
            M[1][1] = one
            for i in range(3):
                M[2 + perm[i]][2 + i] = s
                M[5 + perm[i]][5 + i] = s
            g = AlgebraMap(field, M)
            if is_automorphism(g)[0]:
                out.append((perm, sign, g))
                break
    return tuple(out)


@lru_cache(maxsize=None)
def swap_automorphism(field: BaseField) -> AlgebraMap:
    """e1 <-> e2, u_i <-> v_i, verified at construction."""
    M = linalg.zeros(field, 8, 8)
    one = RationalScalar.from_int(field, 1)
    for i in range(8):
        M[PAIRING[i]][i] = one
    g = AlgebraMap(field, M)
    ok, why = is_automorphism(g)
    if not ok:
        raise AssertionError(f"swap is not an automorphism: {why}")
    return g


@lru_cache(maxsize=None)
def root_derivations(field: BaseField) -> dict:
    """Derivations of the para-octonions spanning each torus root space.

    Returns {root: 8x8 matrix over k (list of rows of field elements)}.  A
    derivation D satisfies D(x * y) = D(x) * y + x * D(y); on basis pairs this is
    a linear system in the 64 entries of D.
    """
    el = field.elt
    # structure constants c[i][j][k]
    c = [[[0] * 8 for _ in range(8)] for _ in range(8)]
    for i in range(8):
        for j in range(8):
            e = PRODUCT_TABLE[i][j]
            if e is not None:
                c[i][j][e[1]] = e[0]
    rows = []
    # unknown D[k][l] at index 8*k + l (D maps b_l to sum_k D[k][l] b_k)
    for i in range(8):
        for j in range(8):
            for m in range(8):
                row = [0] * 64
                # D(b_i * b_j)_m = sum_k c[i][j][k] D[m][k]
                for k in range(8):
                    if c[i][j][k]:
                        row[8 * m + k] += c[i][j][k]
                # (D b_i) * b_j = sum_k D[k][i] c[k][j][m];  b_i * D b_j = sum_k D[k][j] c[i][k][m]
                for k in range(8):
                    if c[k][j][m]:
                        row[8 * k + i] -= c[k][j][m]
                    if c[i][k][m]:
                        row[8 * k + j] -= c[i][k][m]
                if any(row):
                    rows.append([el(x) for x in row])
    kernel = field_nullspace(field, rows, 64)
    roots = {}
    for vec in kernel:
        D = [[vec[8 * k + l] for l in range(8)] for k in range(8)]
        weights = {
            (WEIGHTS[k][0] - WEIGHTS[l][0], WEIGHTS[k][1] - WEIGHTS[l][1])
            for k in range(8)
            for l in range(8)
            if D[k][l] != 0
        }
        if len(weights) != 1:
            continue
        (w,) = weights
        if w != (0, 0):
            roots[w] = D
    if len(roots) != 12:
        # the kernel basis may mix root spaces; split it by weight instead
        roots = {}
        for vec in kernel:
            D = [[vec[8 * k + l] for l in range(8)] for k in range(8)]
            by_w = {}
            for k in range(8):
                for l in range(8):
                    if D[k][l] != 0:
                        w = (WEIGHTS[k][0] - WEIGHTS[l][0], WEIGHTS[k][1] - WEIGHTS[l][1])
                        by_w.setdefault(w, [[0] * 8 for _ in range(8)])[k][l] = D[k][l]
            for w, Dw in by_w.items():
                if w != (0, 0) and w not in roots:
                    roots[w] = Dw
    return roots


def root_element(field: BaseField, root, coeff: RationalScalar) -> AlgebraMap:
    """exp(coeff * D_root) = I + cD + c^2 D^2 / 2 (D^3 = 0 on the 8-dimensional space)."""
    D = root_derivations(field)[root]
    Dm = [[RationalScalar.from_int(field, x) for x in r] for r in D]
    D2 = linalg.matmul(Dm, Dm)
    D3 = linalg.matmul(D2, Dm)
    if any(not x.is_zero() for r in D3 for x in r):
        raise AssertionError("root derivation is not nilpotent of order 3")
    I = linalg.identity(field, 8)
    half = RationalScalar.from_int(field, 1) / RationalScalar.from_int(field, 2)
    c2 = coeff * coeff * half
    M = [[I[i][j] + coeff * Dm[i][j] + c2 * D2[i][j] for j in range(8)] for i in range(8)]
    return AlgebraMap(field, M)


def random_automorphism(seed: int, word_length: int, field: BaseField | None = None) -> AlgebraMap:
    """Product of ``word_length`` generators chosen with a seeded generator.

    Generators: torus cocharacters with exponents in {-1, 0, 1}, the verified
    permutation automorphisms, and root elements exp(c t^k D) with c in k^*,
    k in {-1, 0, 1}.
    """
    if word_length < 0:
        raise ValueError("word_length must be nonnegative")
    field = field or BaseField(5)
    rng = random.Random(seed)
    perms = permutation_automorphisms(field)
    roots = sorted(root_derivations(field))
    g = AlgebraMap.identity(field)
    for _ in range(word_length):
        kind = rng.choice(("torus", "perm", "root", "root"))
        if kind == "torus":
            a, b = rng.choice([(a, b) for a in (-1, 0, 1) for b in (-1, 0, 1) if (a, b) != (0, 0)])
            h = torus_cochar(a, b, field)
        elif kind == "perm":
            h = rng.choice(perms)[2]
        else:
            root = rng.choice(roots)
            if field.p is not None:
                c = rng.randrange(1, field.p)
            else:
                c = rng.choice([-3, -2, -1, 1, 2, 3])
            k = rng.choice((-1, 0, 1))
            h = root_element(field, root, RationalScalar.t_power(field, k, c))
        g = g @ h
    ok, why = is_automorphism(g)
    if not ok:
        raise AssertionError(f"generated map is not an automorphism: {why}")
    return g

"""The split octonions in Zorn vector-matrix form and the split para-octonions.

Coordinates are taken in the basis (e1, e2, u1, u2, u3, v1, v2, v3).  In Zorn
form an element is (a, w, phi, b) with e1 <-> a, e2 <-> b, u_i <-> w_i and
v_i <-> phi_i.  The para-octonion product is ``x * y = conj(x) . conj(y)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from . import linalg
from .errors import PreconditionError
from .scalars import BaseField, RationalScalar

BASIS_NAMES = ("e1", "e2", "u1", "u2", "u3", "v1", "v2", "v3")

# partner of each basis vector under the bilinear form: <e1,e2> = 1, <u_i,v_i> = 1
PAIRING = (1, 0, 5, 6, 7, 2, 3, 4)

# Para-octonion multiplication table on basis pairs: PRODUCT_TABLE[i][j] = (sign, k) for
# b_i * b_j = sign * b_k, or None when the product vanishes.
_T = {
    "e1": ["+e2", 0, 0, 0, 0, "-v1", "-v2", "-v3"],
    "e2": [0, "+e1", "-u1", "-u2", "-u3", 0, 0, 0],
    "u1": ["-u1", 0, 0, "+v3", "-v2", "-e1", 0, 0],
    "u2": ["-u2", 0, "-v3", 0, "+v1", 0, "-e1", 0],
    "u3": ["-u3", 0, "+v2", "-v1", 0, 0, 0, "-e1"],
    "v1": [0, "-v1", "-e2", 0, 0, 0, "+u3", "-u2"],
    "v2": [0, "-v2", 0, "-e2", 0, "-u3", 0, "+u1"],
    "v3": [0, "-v3", 0, 0, "-e2", "+u2", "-u1", 0],
}
PRODUCT_TABLE = tuple(
    tuple(None if c == 0 else (1 if c[0] == "+" else -1, BASIS_NAMES.index(c[1:])) for c in _T[name])
    for name in BASIS_NAMES
)


def product_table_text() -> str:
    """The multiplication table as fixed-width text (row x, column y, entry x * y)."""
    lines = ["x\\y " + " ".join(f"{n:>4}" for n in BASIS_NAMES)]
    for i, name in enumerate(BASIS_NAMES):
        cells = []
        for entry in PRODUCT_TABLE[i]:
            cells.append("   ." if entry is None else f"{('-' if entry[0] < 0 else '')}{BASIS_NAMES[entry[1]]}".rjust(4))
        lines.append(f"{name:>3} " + " ".join(cells))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class OctonionElement:
    """A vector of C_s (x) F in standard coordinates."""

    coords: tuple
    field: BaseField = dc_field(compare=False)

    def __post_init__(self):
        if len(self.coords) != 8:
            raise ValueError("an octonion has 8 coordinates")

    @classmethod
    def from_list(cls, field: BaseField, values) -> "OctonionElement":
        vals = []
        for v in values:
            if isinstance(v, RationalScalar):
                vals.append(v)
            else:
                vals.append(RationalScalar.from_int(field, v))
        return cls(tuple(vals), field)

    @classmethod
    def zero(cls, field: BaseField) -> "OctonionElement":
        return cls(tuple([RationalScalar.zero(field)] * 8), field)

    @classmethod
    def basis(cls, field: BaseField, i) -> "OctonionElement":
        if isinstance(i, str):
            i = BASIS_NAMES.index(i)
        z, o = RationalScalar.zero(field), RationalScalar.from_int(field, 1)
        return cls(tuple(o if j == i else z for j in range(8)), field)

    @classmethod
    def para_unit(cls, field: BaseField) -> "OctonionElement":
        return cls.basis(field, 0) + cls.basis(field, 1)

    @classmethod
    def from_zorn(cls, a, w, phi, b) -> "OctonionElement":
        return cls((a, b, *w, *phi), a.field)

    def zorn(self):
        c = self.coords
        return c[0], c[2:5], c[5:8], c[1]

    def __add__(self, other):
        return OctonionElement(tuple(x + y for x, y in zip(self.coords, other.coords)), self.field)

    def __sub__(self, other):
        return OctonionElement(tuple(x - y for x, y in zip(self.coords, other.coords)), self.field)

    def __neg__(self):
        return OctonionElement(tuple(-x for x in self.coords), self.field)

    def scale(self, c) -> "OctonionElement":
        if not isinstance(c, RationalScalar):
            c = RationalScalar.from_int(self.field, c)
        return OctonionElement(tuple(c * x for x in self.coords), self.field)

    def __rmul__(self, c):
        return self.scale(c)

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __str__(self):
        terms = []
        for name, c in zip(BASIS_NAMES, self.coords):
            if not c.is_zero():
                terms.append(f"({c})*{name}")
        return " + ".join(terms) if terms else "0"

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coords]


def _cross(x, y):
    return (x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0])


def _pair(x, y):
    return x[0] * y[0] + x[1] * y[1] + x[2] * y[2]


def oct_mul(x: OctonionElement, y: OctonionElement) -> OctonionElement:
    """The Zorn product x . y."""
    a1, w1, p1, b1 = x.zorn()
    a2, w2, p2, b2 = y.zorn()
    a = a1 * a2 - _pair(p2, w1)
    b = b1 * b2 - _pair(p1, w2)
    c1, c2 = _cross(p1, p2), _cross(w1, w2)
    w = tuple(a1 * w2[i] + b2 * w1[i] + c1[i] for i in range(3))
    phi = tuple(a2 * p1[i] + b1 * p2[i] + c2[i] for i in range(3))
    return OctonionElement((a, b, *w, *phi), x.field)


def bilinear(x: OctonionElement, y: OctonionElement) -> RationalScalar:
    """<x, y> = q(x + y) - q(x) - q(y)."""
    c, d = x.coords, y.coords
    return c[0] * d[1] + c[1] * d[0] + sum((c[2 + i] * d[5 + i] + c[5 + i] * d[2 + i] for i in range(3)), RationalScalar.zero(x.field))


def norm(x: OctonionElement) -> RationalScalar:
    """q(a, w, phi, b) = ab + phi(w)."""
    c = x.coords
    return c[0] * c[1] + c[2] * c[5] + c[3] * c[6] + c[4] * c[7]


def conj(x: OctonionElement) -> OctonionElement:
    """<x, e> e - x."""
    c = x.coords
    return OctonionElement((c[1], c[0], *(-v for v in c[2:])), x.field)


def para_mul(x: OctonionElement, y: OctonionElement) -> OctonionElement:
    """The para-octonion product conj(x) . conj(y)."""
    return oct_mul(conj(x), conj(y))


def table_mul(x: OctonionElement, y: OctonionElement, table=PRODUCT_TABLE) -> OctonionElement:
    """Para-octonion product evaluated straight from a multiplication table."""
    z = RationalScalar.zero(x.field)
    out = [z] * 8
    for i, a in enumerate(x.coords):
        if a.is_zero():
            continue
        row = table[i]
        for j, b in enumerate(y.coords):
            entry = row[j]
            if entry is None or b.is_zero():
                continue
            s, k = entry
            out[k] = out[k] + a * b if s > 0 else out[k] - a * b
    return OctonionElement(tuple(out), x.field)


def gram_matrix(field: BaseField):
    """Gram matrix of the bilinear form on the standard basis."""
    z, o = RationalScalar.zero(field), RationalScalar.from_int(field, 1)
    return [[o if PAIRING[i] == j else z for j in range(8)] for i in range(8)]


# -- isotropic subspaces -----------------------------------------------------


class IsotropicSubspace:
    """A totally isotropic subspace of C_s (x) F, stored as a reduced echelon basis."""

    def __init__(self, field: BaseField, vectors):
        rows = [list(v.coords) if isinstance(v, OctonionElement) else list(v) for v in vectors]
        red, _ = linalg.rref(rows) if rows else ([], [])
        self.field = field
        self.basis = tuple(OctonionElement(tuple(r), field) for r in red)
        if len(self.basis) > 4:
            raise ValueError(f"rank {len(self.basis)} exceeds the Witt index 4")
        for i, x in enumerate(self.basis):
            if not norm(x).is_zero():
                raise ValueError("subspace is not totally isotropic")
            for y in self.basis[i + 1 :]:
                if not bilinear(x, y).is_zero():
                    raise ValueError("subspace is not totally isotropic")

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __eq__(self, other):
        if not isinstance(other, IsotropicSubspace):
            return NotImplemented
        return self.basis == other.basis

    def __hash__(self):
        return hash(self.basis)

    def contains(self, x: OctonionElement) -> bool:
        rows = [list(b.coords) for b in self.basis]
        return linalg.rank(rows + [list(x.coords)]) == len(rows)

    def to_json(self):
        return [b.to_json() for b in self.basis]


def _check_isotropic(x: OctonionElement):
    if x.is_zero():
        raise PreconditionError("the zero vector does not define an isotropic subspace")
    if not norm(x).is_zero():
        raise PreconditionError(f"q(x) = {norm(x)} is not zero")


def _basis(field):
    return [OctonionElement.basis(field, i) for i in range(8)]


def left_ideal(x: OctonionElement) -> IsotropicSubspace:
    """x * C_s."""
    _check_isotropic(x)
    return IsotropicSubspace(x.field, [para_mul(x, b) for b in _basis(x.field)])


def right_ideal(x: OctonionElement) -> IsotropicSubspace:
    """C_s * x."""
    _check_isotropic(x)
    return IsotropicSubspace(x.field, [para_mul(b, x) for b in _basis(x.field)])


def _kernel_of_products(field, gens, side):
    """{z : g * z = 0 for all g} (side='left') or {z : z * g = 0 for all g} (side='right')."""
    rows = []
    basis = _basis(field)
    for g in gens:
        images = [para_mul(g, b) if side == "left" else para_mul(b, g) for b in basis]
        # matrix of z -> g * z has columns images[j]
        for k in range(8):
            rows.append([images[j].coords[k] for j in range(8)])
    return IsotropicSubspace(field, linalg.nullspace(rows, 8, field))


def triality_intersections(U: IsotropicSubspace) -> tuple[IsotropicSubspace, IsotropicSubspace]:
    """(L(U), R(U)) with L(U) the intersection of C_s * x and R(U) that of x * C_s over x in U.

    For isotropic x, C_s * x is the kernel of z -> x * z and x * C_s the kernel of
    z -> z * x, so both intersections are kernels of stacked linear maps and only
    a basis of U is needed.
    """
    if U.rank == 0:
        raise PreconditionError("U must be nonzero")
    return (
        _kernel_of_products(U.field, U.basis, "left"),
        _kernel_of_products(U.field, U.basis, "right"),
    )


def triality_diagram(x: OctonionElement) -> dict:
    """Incidence data of the triangle of isotropic subspaces attached to an isotropic x.

    Only reports ranks and which of the computed subspaces coincide; no relation
    between them is asserted.
    """
    U = IsotropicSubspace(x.field, [x])
    left, right = triality_intersections(U)
    spaces = {
        "span(x)": U,
        "L(span(x))": left,
        "R(span(x))": right,
        "x*C_s": left_ideal(x),
        "C_s*x": right_ideal(x),
        "R(R(span(x)))": triality_intersections(right)[1],
        "L(R(span(x)))": triality_intersections(right)[0],
    }
    names = list(spaces)
    return {
        "ranks": {n: spaces[n].rank for n in names},
        "equal_pairs": [[a, b] for i, a in enumerate(names) for b in names[i + 1 :] if spaces[a] == spaces[b]],
        "contained_pairs": [
            [a, b]
            for a in names
            for b in names
            if a != b and spaces[a].rank < spaces[b].rank and all(spaces[b].contains(v) for v in spaces[a].basis)
        ],
    }


# -- identity suite ----------------------------------------------------------


def random_element(rng: random.Random, field: BaseField, degree_bound: int) -> OctonionElement:
    """Coordinates are polynomials of degree <= degree_bound with uniform coefficients.

    Over F_p the coefficients are uniform in F_p; over Q they are uniform integers in [-5, 5].
    """
    coords = []
    for _ in range(8):
        if field.p is not None:
            cs = [rng.randrange(field.p) for _ in range(degree_bound + 1)]
        else:
            cs = [rng.randint(-5, 5) for _ in range(degree_bound + 1)]
        coords.append(RationalScalar.from_laurent(field, 0, cs))
    return OctonionElement(tuple(coords), field)


def corrupted_table():
    """The product table with the sign of u1 * u2 flipped (negative control)."""
    rows = [list(r) for r in PRODUCT_TABLE]
    s, k = rows[2][3]
    rows[2][3] = (-s, k)
    return tuple(tuple(r) for r in rows)


IDENTITY_NAMES = (
    "quadratic_equation",
    "quadratic_equation_linearized",
    "right_norm_scaling",
    "left_inverse",
    "cyclic_symmetry",
    "star_right_norm_scaling",
    "star_left_norm_scaling",
    "star_linearized_norm",
    "star_flexible_left",
    "star_flexible_right",
    "star_flexible_linearized",
    "composition_dot",
    "composition_star",
    "para_unit",
    "conjugation_star",
    "conjugation_antiautomorphism",
)


def _identity_values(x, y, z, w, star, e):
    """Pairs (lhs, rhs) for each named identity on one sample."""
    F = x.field
    xe = bilinear(x, e)
    qx, qz = norm(x), norm(z)
    x0 = x - e.scale(xe / RationalScalar.from_int(F, 2))
    xz, yz = star(x, z), star(y, z)
    return {
        "quadratic_equation": (oct_mul(x, x) - x.scale(xe) + e.scale(qx), OctonionElement.zero(F)),
        "quadratic_equation_linearized": (
            oct_mul(x, y) + oct_mul(y, x) - y.scale(xe) - x.scale(bilinear(y, e)) + e.scale(bilinear(x, y)),
            OctonionElement.zero(F),
        ),
        "right_norm_scaling": (bilinear(oct_mul(x, z), oct_mul(y, z)), bilinear(x, y) * qz),
        "left_inverse": (oct_mul(x, oct_mul(conj(x), y)), y.scale(qx)),
        "cyclic_symmetry": (bilinear(star(x, y), z), bilinear(star(y, z), x)),
        "star_right_norm_scaling": (bilinear(xz, yz), bilinear(x, y) * qz),
        "star_left_norm_scaling": (bilinear(star(z, x), star(z, y)), qz * bilinear(x, y)),
        "star_linearized_norm": (
            bilinear(xz, star(y, w)) + bilinear(star(x, w), yz),
            bilinear(x, y) * bilinear(z, w),
        ),
        "star_flexible_left": (star(star(x, y), x), y.scale(qx)),
        "star_flexible_right": (star(x, star(y, x)), y.scale(qx)),
        "star_flexible_linearized": (star(star(x, y), z) + star(star(z, y), x), y.scale(bilinear(x, z))),
        "composition_dot": (norm(oct_mul(x, y)), qx * norm(y)),
        "composition_star": (norm(star(x, y)), qx * norm(y)),
        "para_unit": (
            (star(e, x0), star(x0, e), star(e, e)),
            (-x0, -x0, e),
        ),
        "conjugation_star": (star(x, y), oct_mul(conj(x), conj(y))),
        "conjugation_antiautomorphism": (conj(oct_mul(x, y)), oct_mul(conj(y), conj(x))),
    }


def check_identities(seed: int = 0, count: int = 500, degree_bound: int = 3, field: BaseField | None = None, corrupt: bool = False) -> dict:
    """Evaluate the composition-algebra identities on pseudorandom samples.

    With ``corrupt=True`` the para-octonion product is evaluated from a table
    with one flipped sign, which must produce failures.  The report maps each
    identity name to pass/fail counts and the first counterexample.
    """
    field = field or BaseField(5)
    rng = random.Random(seed)
    star = (lambda a, b: table_mul(a, b, corrupted_table())) if corrupt else para_mul
    e = OctonionElement.para_unit(field)
    report = {name: {"passed": 0, "failed": 0, "counterexample": None} for name in IDENTITY_NAMES}
    for n in range(count):
        x, y, z, w = (random_element(rng, field, degree_bound) for _ in range(4))
        if n == 0:
            x = e  # the unit itself is always exercised
        for name, (lhs, rhs) in _identity_values(x, y, z, w, star, e).items():
            entry = report[name]
            if lhs == rhs:
                entry["passed"] += 1
            else:
                entry["failed"] += 1
                if entry["counterexample"] is None:
                    entry["counterexample"] = {
                        "sample": n,
                        "x": x.to_json(),
                        "y": y.to_json(),
                        "z": z.to_json(),
                        "w": w.to_json(),
                    }
    return {
        "field": field.name,
        "seed": seed,
        "count": count,
        "degree_bound": degree_bound,
        "identities": report,
        "all_passed": all(r["failed"] == 0 for r in report.values()),
    }

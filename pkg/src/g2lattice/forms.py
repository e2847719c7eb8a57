"""Jordan splitting of the bilinear form on a lattice L with L in L^dual in t^-1 L.

Vectors are jets of O-coordinates relative to a fixed basis of L (numpy arrays
of shape (8, N)).  Isotropic vectors are found over the residue field and lifted
by the Newton step x <- x - q(x)/<x,y> y, which needs no square roots: the error
q(x) squares at each step.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from . import linalg
from ._series import SeriesRing, independent_subset
from .errors import InconsistencyError, NeedsEtaleExtension, PreconditionError
from .lattice import GramProfile, Lattice, gram
from .scalars import BaseField, RationalScalar

# -- residue field quadratic forms ------------------------------------------


def _diagonalize(field: BaseField, g: list[list]):
    """Orthogonal basis of the nondegenerate part: [(vector, g(v, v))] with g(v, v) != 0."""
    d = len(g)
    el = field.elt

    def form(x, y):
        return el(sum(x[i] * g[i][j] * y[j] for i in range(d) for j in range(d) if x[i] != 0 and y[j] != 0))

    basis = [[el(1) if i == j else el(0) for i in range(d)] for j in range(d)]
    out = []
    while basis:
        pick = next((v for v in basis if form(v, v) != 0), None)
        if pick is None:
            pair = next(
                ((a, b) for a, b in itertools.combinations(basis, 2) if form(a, b) != 0),
                None,
            )
            if pair is None:
                break
            pick = [el(x + y) for x, y in zip(*pair)]
        n = form(pick, pick)
        inv = field.inv(n)
        out.append((pick, n))
        rest = []
        for v in basis:
            c = el(form(v, pick) * inv)
            rest.append([el(a - c * b) for a, b in zip(v, pick)])
        basis = [rest[i] for i in independent_subset(field, rest)]
    return out


def _combine(field, terms):
    d = len(terms[0][1])
    out = [field.elt(0)] * d
    for c, v in terms:
        out = [field.elt(a + c * b) for a, b in zip(out, v)]
    return out


def find_isotropic(field: BaseField, g: list[list], box: int = 6):
    """A vector c over k with c^T g c = 0 and g c != 0, for a symmetric matrix g."""
    diag = _diagonalize(field, g)
    r = len(diag)
    if r == 0:
        return None
    # hyperbolic pair of diagonal entries
    for (fi, di), (fj, dj) in itertools.combinations(diag, 2):
        s = field.sqrt(field.elt(-dj * field.inv(di)))
        if s is not None:
            return _combine(field, [(s, fi), (1, fj)])
    if r == 1:
        raise InconsistencyError("residue form has a one-dimensional anisotropic part (quasi-split)")
    if r == 2:
        raise NeedsEtaleExtension("the residue form contains an anisotropic plane", 2)
    if field.p is not None:
        (f1, d1), (f2, d2), (f3, d3) = diag[:3]
        inv2 = field.inv(d2)
        for a in range(field.p):
            rhs = field.elt((-d3 - d1 * a * a) * inv2)
            b = field.sqrt(rhs)
            if b is not None:
                return _combine(field, [(a, f1), (b, f2), (1, f3)])
        raise InconsistencyError("ternary form over a finite field without isotropic vector")
    # over Q: bounded search on the first entries, solving for the last one
    vs, ds = [f for f, _ in diag], [d for _, d in diag]
    for m in range(3, min(r, 5) + 1):
        for xs in itertools.product(range(-box, box + 1), repeat=m - 1):
            if not any(xs):
                continue
            s = sum(ds[i] * xs[i] * xs[i] for i in range(m - 1))
            c = field.sqrt(Fraction(-s) / ds[m - 1])
            if c is not None and c != 0:
                return _combine(field, [(xs[i], vs[i]) for i in range(m - 1)] + [(c, vs[m - 1])])
    raise NeedsEtaleExtension("no isotropic residue vector found over Q within the search box", 2)


# -- jet forms ------------------------------------------------------------------


class JetForm:
    """The bilinear form G (jets, shape (8, 8, N)) on O-coordinates, possibly divided by t^level."""

    def __init__(self, ring: SeriesRing, G: np.ndarray):
        self.ring = ring
        self.G = G
        self.half = ring.field.inv(2)

    def bil(self, x, y, level=0):
        v = self.ring.contract("j,j->", self.ring.contract("ij,i->j", self.G, x), y)
        return self.ring.shift_down(v, level) if level else v

    def gram_of(self, vecs, level=0):
        """Matrix of pairings, shape (m, m, N)."""
        V = np.stack(vecs)
        GV = self.ring.contract("ij,mj->mi", self.G, V)
        out = self.ring.contract("ai,bi->ab", V, GV)
        return self.ring.shift_down(out, level) if level else out

    def q(self, x, level=0):
        return self.ring.scale(self.bil(x, x, level), self.half)


def _residue_rows(ring, vecs):
    return [[ring._py(c) for c in v[:, 0]] for v in vecs]


def _select_independent(ring, vecs, want):
    idx = independent_subset(ring.field, _residue_rows(ring, vecs), want)
    if len(idx) != want:
        raise InconsistencyError(f"expected {want} residue-independent vectors, found {len(idx)}")
    return [vecs[i] for i in idx]


def _split_level(form: JetForm, W: list, level: int):
    ring = form.ring
    field = ring.field
    pairs = []
    while W:
        g = form.gram_of(W, level)
        gbar = [[ring._py(c) for c in row] for row in g[..., 0]]
        if not any(x != 0 for row in gbar for x in row):
            break
        c = find_isotropic(field, gbar)
        if c is None:
            break
        x = ring.zeros(8)
        for ci, w in zip(c, W):
            if ci != 0:
                x = ring.add(x, ring.scale(w, ci))
        gc = [field.elt(sum(gbar[j][i] * c[i] for i in range(len(W)))) for j in range(len(W))]
        j = next(j for j, v in enumerate(gc) if v != 0)
        y = W[j]
        for _ in range(2 * ring.N.bit_length() + 4):
            qx = form.q(x, level)
            if ring.is_zero(qx):
                break
            coef = ring.div(qx, form.bil(x, y, level))
            x = ring.sub(x, ring.mul(coef[None, :], y))
        else:
            raise InconsistencyError("Newton lifting of an isotropic vector did not converge")
        y = ring.mul(ring.inv(form.bil(x, y, level))[None, :], y)
        y = ring.sub(y, ring.mul(form.q(y, level)[None, :], x))
        pairs.append((x, y))
        proj = []
        for z in W:
            zy = form.bil(z, y, level)
            zx = form.bil(z, x, level)
            proj.append(ring.sub(ring.sub(z, ring.mul(zy[None, :], x)), ring.mul(zx[None, :], y)))
        W = _select_independent(ring, proj, len(W) - 2)
    return pairs, W


def jordan_split(ring: SeriesRing, G: np.ndarray):
    """Hyperbolic basis X (list of 8 coordinate jets) and exponents a_i with <X_i, X_{9-i}> = t^{a_i}.

    G must be the (integral) Gram matrix of L with L^dual contained in t^-1 L.
    """
    form = JetForm(ring, G)
    W = []
    for i in range(8):
        v = ring.zeros(8)
        v[i, 0] = 1
        W.append(v)
    pairs0, W = _split_level(form, W, 0)
    pairs1, W = _split_level(form, W, 1)
    if W:
        if len(W) % 2 == 0 and not ring.is_zero(form.gram_of(W, 1)[..., 0]):
            raise InconsistencyError("residual block with a nonsplit form")
        raise PreconditionError("the dual lattice is not contained in t^-1 L")
    xs = [p[0] for p in pairs0] + [p[0] for p in pairs1]
    ys = [p[1] for p in pairs0] + [p[1] for p in pairs1]
    X = xs + ys[::-1]
    p0, p1 = len(pairs0), len(pairs1)
    exps = [0] * p0 + [1] * p1 + [1] * p1 + [0] * p0
    return X, exps


# -- exact fast path -----------------------------------------------------------


def _exact_profile(L: Lattice):
    """Adapted basis read off the canonical basis when its Gram matrix is already a
    monomial antidiagonal pattern (as for the standard lattices)."""
    Gm = gram(L)
    partner, expo = {}, {}
    for i in range(8):
        nz = [j for j in range(8) if not Gm[i][j].is_zero()]
        if len(nz) != 1:
            return None
        j = nz[0]
        x = Gm[i][j]
        if j == i or x.shift not in (0, 1) or x != RationalScalar.t_power(L.field, x.shift):
            return None
        partner[i], expo[i] = j, x.shift
    firsts = sorted((i for i in range(8) if i < partner[i]), key=lambda i: (expo[i], i))
    order = firsts + [partner[i] for i in reversed(firsts)]
    cols = [list(L.columns[i]) for i in order]
    return [expo[i] for i in order], cols


def gram_standard_form(L: Lattice, precision: int = 32) -> GramProfile:
    """Adapted basis of L with antidiagonal Gram matrix of pattern t^{a_i}, a_i in {0, 1}."""
    Gm = gram(L)
    if any(not x.is_integral() for row in Gm for x in row):
        raise PreconditionError("L is not contained in its dual")
    exact = _exact_profile(L)
    if exact is not None:
        exps, cols = exact
        prec = None
    else:
        ring = SeriesRing(L.field, precision)
        X, exps = jordan_split(ring, ring.from_matrix(Gm))
        B = L.matrix()
        cols = []
        for x in X:
            coeffs = [ring.to_scalar(x[i]) for i in range(8)]
            cols.append(linalg.matvec(B, coeffs))
        prec = precision - 1
    l = sum(exps)
    if l % 2:
        raise InconsistencyError("odd length: quasi-split profile")
    return GramProfile("split", l // 2, exps, cols, prec)

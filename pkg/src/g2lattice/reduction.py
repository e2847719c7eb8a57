"""Standard bases for vertex lattices and the certificates g with g . L_std = L.

All computations run on jets of coordinates relative to the canonical basis B of
the input lattice L, so every vector is an O-combination of B and is known
modulo t^N.  The steps are:

1. a hyperbolic basis X of L from the Jordan splitting;
2. the split e = e1 + e2 read off from the first half of X;
3. L0 = {x in L : <x, e1> = <x, e2> = 0} and its two halves
   L1 = -(L0 * e1), L2 = -(L0 * e2);
4. bases U of L1 and V of L2 with <U_i, V_j> = delta_ij t^{a_i};
5. the scalar lambda in U1 * U2 = lambda V3, absorbed into (U3, V3).

The resulting basis is checked against the product table of the standard lattice
of the detected type; the certificate is g = B P S^-1 where P holds the
(truncated) coordinates of the new basis and S is the standard basis.  When the
length l of L^dual / L is 2 the algorithm instead returns a Refutation: a
product of two elements of L that is not in L.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import linalg
from ._series import SeriesRing
from .building import STANDARD_EXPONENTS, VertexType, standard_lattice
from .errors import InconsistencyError, PreconditionError, PrecisionExhausted
from .forms import _exact_profile, _select_independent, jordan_split
from .groups import AlgebraMap, is_automorphism, random_automorphism
from .lattice import Lattice, apply, dual, gram, is_order, scale
from .octonion import PAIRING, PRODUCT_TABLE, OctonionElement, bilinear, para_mul, table_mul
from .scalars import BaseField, RationalScalar

DEFAULT_PRECISION = 32
MAX_PRECISION = 256
PRECISION_MARGIN = 8


@dataclass
class ReductionTrace:
    steps: list = dc_field(default_factory=list)

    def add(self, name: str, **data):
        self.steps.append({"step": name, **data})

    def to_json(self) -> list:
        return self.steps


@dataclass
class Refutation:
    """A product x * y of elements of L that does not lie in L."""

    kind: str
    left: OctonionElement
    right: OctonionElement
    product: OctonionElement
    valuation: int
    stage: str
    trace: ReductionTrace | None = None

    def recheck(self, L: Lattice) -> bool:
        if not (L.member(self.left) and L.member(self.right)):
            return False
        z = para_mul(self.left, self.right)
        coords = L.coordinates(z)
        v = min(c.valuation for c in coords if not c.is_zero())
        return z == self.product and v == self.valuation and v < 0

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "stage": self.stage,
            "left": self.left.to_json(),
            "right": self.right.to_json(),
            "product": self.product.to_json(),
            "valuation": self.valuation,
        }


@dataclass
class ReductionResult:
    basis: list  # 8 OctonionElements (truncated)
    transformer: AlgebraMap
    vertex_type: VertexType
    trace: ReductionTrace

    def to_json(self) -> dict:
        return {
            "type": self.vertex_type.name,
            "basis": [b.to_json() for b in self.basis],
            "transformer": self.transformer.to_json(),
            "trace": self.trace.to_json(),
        }


class _Refuted(Exception):
    def __init__(self, refutation):
        self.refutation = refutation


class _Frame:
    """Jets of the form, the para-unit and the product in coordinates of L's basis."""

    def __init__(self, L: Lattice, N: int):
        self.L = L
        self.field = L.field
        self.ring = ring = SeriesRing(L.field, N)
        self.N = N
        self.B = L.matrix()
        G = gram(L)
        if any(not x.is_integral() for r in G for x in r):
            raise PreconditionError("L is not contained in its dual")
        self.G = ring.from_matrix(G)
        e = OctonionElement.para_unit(L.field)
        ec = L.coordinates(e)
        if not all(c.is_integral() for c in ec):
            raise PreconditionError("the para-unit is not in L")
        self.e = np.stack([ring.from_scalar(c) for c in ec])
        vs = L.vectors()
        coords = [[L.coordinates(para_mul(x, y)) for y in vs] for x in vs]
        lo = min(c.valuation for r in coords for cs in r for c in cs if not c.is_zero())
        # products are stored multiplied by t^s so that they are integral
        self.s = max(0, -lo)
        ts = RationalScalar.t_power(L.field, self.s)
        C = ring.zeros((8, 8, 8))
        for i in range(8):
            for j in range(8):
                for k in range(8):
                    C[i, j, k] = ring.from_scalar(coords[i][j][k] * ts)
        self.C = C
        self.half = L.field.inv(2)

    # -- jet operations
    def bil(self, x, y):
        r = self.ring
        return r.contract("j,j->", r.contract("ij,i->j", self.G, x), y)

    def q(self, x):
        return self.ring.scale(self.bil(x, x), self.half)

    def star_scaled(self, x, y):
        """t^s (x * y)."""
        r = self.ring
        return r.contract("j,jk->k", y, r.contract("i,ijk->jk", x, self.C))

    def smul(self, c, x):
        return self.ring.mul(c[None, :], x)

    def lin(self, terms):
        out = self.ring.zeros(8)
        for c, x in terms:
            out = self.ring.add(out, self.smul(c, x))
        return out

    def exact(self, x) -> OctonionElement:
        """The truncated jet as an exact element of C_s (x) F."""
        coeffs = [self.ring.to_scalar(x[i]) for i in range(8)]
        return OctonionElement(tuple(linalg.matvec(self.B, coeffs)), self.field)

    def refute_if_nonintegral(self, x, y, stage, trace):
        """Return t^-s t^s(x * y) as an integral jet, or raise with a refutation."""
        z = self.star_scaled(x, y)
        if self.s:
            v = min(self.ring.val(z[k]) for k in range(8))
            if v < self.s:
                left, right = self.exact(x), self.exact(y)
                prod = para_mul(left, right)
                coords = self.L.coordinates(prod)
                val = min(c.valuation for c in coords if not c.is_zero())
                raise _Refuted(Refutation("NonIntegralStructureConstant", left, right, prod, val, stage, trace))
            z = self.ring.shift_down(z, self.s)
        return z


# -- steps -----------------------------------------------------------------------


def hyperbolic_basis(L: Lattice, precision: int = DEFAULT_PRECISION, frame: _Frame | None = None):
    """Jets X_1..X_8 (coordinates in L's canonical basis) with <X_i, X_{9-j}> = delta_ij t^{a_i}.

    Uses the canonical basis directly when its Gram matrix already has the
    antidiagonal pattern; otherwise runs the Jordan splitting.
    """
    frame = frame or _Frame(L, precision)
    ring = frame.ring
    exact = _exact_profile(L)
    if exact is not None:
        exps, cols = exact
        X = []
        for col in cols:
            c = L.coordinates(col)
            X.append(np.stack([ring.from_scalar(x) for x in c]))
        return X, exps
    return jordan_split(ring, frame.G)


def _split(frame: _Frame, X, exps):
    ring = frame.ring
    terms = []
    for i in range(4):
        c = frame.bil(frame.e, X[7 - i])
        terms.append((ring.shift_down(c, exps[i]), X[i]))
    e1 = frame.lin(terms)
    e2 = ring.sub(frame.e, e1)
    return e1, e2


def split_para_unit(L: Lattice, precision: int = DEFAULT_PRECISION):
    """(e1', e2') with e1' + e2' = e, both isotropic, <e1', e2'> = 1; truncated to exact elements."""
    frame = _Frame(L, precision)
    X, exps = hyperbolic_basis(L, precision, frame)
    e1, e2 = _split(frame, X, exps)
    _check_split(frame, e1, e2, precision - PRECISION_MARGIN)
    return frame.exact(e1), frame.exact(e2)


def _check_split(frame, e1, e2, M):
    ring = frame.ring
    one = ring.const(1)
    checks = {
        "q(e1)": frame.q(e1),
        "q(e2)": frame.q(e2),
        "<e1,e2>-1": ring.sub(frame.bil(e1, e2), one),
    }
    if frame.s == 0:
        checks.update(
            {
                "e1*e1-e2": ring.sub(frame.star_scaled(e1, e1), e2),
                "e2*e2-e1": ring.sub(frame.star_scaled(e2, e2), e1),
                "e1*e2": frame.star_scaled(e1, e2),
                "e2*e1": frame.star_scaled(e2, e1),
            }
        )
    bad = [k for k, v in checks.items() if not ring.is_zero(v, M)]
    if bad:
        raise _PrecisionFailure(f"para-unit split fails {bad}")


class _PrecisionFailure(Exception):
    pass


def _pairing_normal_form(frame, U, V):
    """Bases of span(U), span(V) with <U_i, V_j> = delta_ij t^{a_i}; returns (U, V, a)."""
    ring = frame.ring
    U, V = list(U), list(V)
    n = len(U)
    exps = []
    for k in range(n):
        P = [[frame.bil(U[i], V[j]) for j in range(n)] for i in range(n)]
        best = min(((ring.val(P[i][j]), i, j) for i in range(k, n) for j in range(k, n)))
        a, i, j = best
        if a > 1:
            raise PreconditionError(f"pairing between the halves has an elementary divisor t^{a}")
        U[k], U[i] = U[i], U[k]
        V[k], V[j] = V[j], V[k]
        p = frame.bil(U[k], V[k])
        unit = ring.shift_down(p, a)
        V[k] = frame.smul(ring.inv(unit), V[k])
        for i2 in range(k + 1, n):
            c = ring.shift_down(frame.bil(U[i2], V[k]), a)
            U[i2] = ring.sub(U[i2], frame.smul(c, U[k]))
        for j2 in range(k + 1, n):
            c = ring.shift_down(frame.bil(U[k], V[j2]), a)
            V[j2] = ring.sub(V[j2], frame.smul(c, V[k]))
        exps.append(a)
    order = sorted(range(n), key=lambda i: -exps[i])
    return [U[i] for i in order], [V[i] for i in order], [exps[i] for i in order]


def _target_table(field, T: VertexType):
    """Structure constants of the standard lattice of type T on its own basis.

    s_i * s_j = sign t^{m_i + m_j - m_k} s_k; returns {(i, j): (k, sign, exponent)}.
    """
    m = STANDARD_EXPONENTS[T]
    out = {}
    for i in range(8):
        for j in range(8):
            e = PRODUCT_TABLE[i][j]
            if e is not None:
                s, k = e
                out[(i, j)] = (k, s, m[i] + m[j] - m[k])
    return out, m


def _verify_table(frame, Y, T, M):
    """Check the multiplication table and Gram matrix of Y against the standard lattice of type T."""
    ring = frame.ring
    table, m = _target_table(frame.field, T)
    failures = []
    for i in range(8):
        for j in range(8):
            got = frame.star_scaled(Y[i], Y[j])
            want = ring.zeros(8)
            if (i, j) in table:
                k, s, ex = table[(i, j)]
                want = ring.scale(ring.shift_up(Y[k], ex + frame.s), s)
            if not ring.is_zero(ring.sub(got, want), M):
                failures.append(("product", i, j))
            g = frame.bil(Y[i], Y[j])
            wantg = ring.t_power(m[i] + m[j]) if PAIRING[i] == j else ring.zeros(())
            if not ring.is_zero(ring.sub(g, wantg), M):
                failures.append(("pairing", i, j))
    return failures


def _reduce_once(L: Lattice, N: int, trace: ReductionTrace):
    frame = _Frame(L, N)
    ring = frame.ring
    M = N - PRECISION_MARGIN
    X, exps = hyperbolic_basis(L, N, frame)
    trace.add("hyperbolic_basis", exponents=exps, basis=[frame.exact(x).to_json() for x in X], precision=M)
    e1, e2 = _split(frame, X, exps)
    _check_split(frame, e1, e2, M)
    for attempt in range(2):
        if attempt:
            e1, e2 = e2, e1
        trace.add("split_para_unit", e1=frame.exact(e1).to_json(), e2=frame.exact(e2).to_json())
        units = []
        for i in range(8):
            v = ring.zeros(8)
            v[i, 0] = 1
            units.append(v)
        proj = [
            ring.sub(ring.sub(z, frame.smul(frame.bil(z, e2), e1)), frame.smul(frame.bil(z, e1), e2))
            for z in units
        ]
        L0 = _select_independent(ring, proj, 6)
        trace.add("L0", basis=[frame.exact(x).to_json() for x in L0])
        halves = []
        for name, ei in (("L1", e1), ("L2", e2)):
            imgs = [ring.neg(frame.refute_if_nonintegral(y, ei, f"{name} = -(L0 * e)", trace)) for y in L0]
            H = _select_independent(ring, imgs, 3)
            trace.add(name, basis=[frame.exact(x).to_json() for x in H])
            halves.append(H)
        U, V, a = _pairing_normal_form(frame, *halves)
        trace.add("pairing_normal_form", exponents=a)
        ones = sum(a)
        T = {0: VertexType.Type1, 2: VertexType.Type2, 3: VertexType.Type3}.get(ones)
        # U1 * U2 = lambda V3; lambda = <U1 * U2, U3> / t^{a_3}
        uu = frame.refute_if_nonintegral(U[0], U[1], "U1 * U2", trace)
        tau = frame.bil(uu, U[2])
        vv = frame.refute_if_nonintegral(V[0], V[1], "V1 * V2", trace)
        sigma = frame.bil(vv, V[2])
        vt, vs = ring.val(tau), ring.val(sigma)
        trace.add("structure_constants", tau_valuation=vt, sigma_valuation=vs, pairing_exponents=a)
        if ones == 1:
            # pairings (t, 1, 1): tau * sigma = t forces one of U2*U3, V2*V3 to carry t^-1
            if vt == 0:
                x, y, stage = U[1], U[2], "U2 * U3 = (lambda / t) V1"
            else:
                x, y, stage = V[1], V[2], "V2 * V3 = (sigma / t) U1"
            left, right = frame.exact(x), frame.exact(y)
            prod = para_mul(left, right)
            coords = L.coordinates(prod)
            val = min(c.valuation for c in coords if not c.is_zero())
            if val >= 0:
                raise InconsistencyError("l = 2 lattice without a non-integral structure constant")
            raise _Refuted(Refutation("NonIntegralStructureConstant", left, right, prod, val, stage, trace))
        if T is None:
            raise InconsistencyError(f"unexpected pairing exponents {a}")
        target = {VertexType.Type1: 0, VertexType.Type2: 1, VertexType.Type3: 2}[T]
        if vt == target:
            break
        if T == VertexType.Type3 and attempt == 0 and vt == 1:
            trace.add("swap_para_unit_halves")
            continue
        raise InconsistencyError(f"lambda has valuation {vt - a[2]} for {T.name}")
    # lambda = tau / t^{a_3}; target lambda_T = t^{target - a_3}; rescale by the unit ratio
    unit = ring.shift_down(tau, target)
    U[2] = frame.smul(ring.inv(unit), U[2])
    V[2] = frame.smul(unit, V[2])
    trace.add("lambda_normalization", lambda_valuation=vt - a[2], unit=str(ring.to_scalar(unit[: 4])) + " + ...")
    Y = [e1, e2, *U, *V]
    failures = _verify_table(frame, Y, T, M)
    trace.add("table_verification", type=T.name, precision=M, failures=len(failures))
    if failures:
        raise _PrecisionFailure(f"table verification failed: {failures[:4]}")
    basis = [frame.exact(y) for y in Y]
    P = [list(linalg.transpose([[ring.to_scalar(y[i]) for i in range(8)] for y in Y])[r]) for r in range(8)]
    S = standard_lattice(T, L.field).matrix()
    S_inv = linalg.inverse(S)
    g = linalg.matmul(linalg.matmul(frame.B, P), S_inv)
    # the truncation must dominate the pole order of g's entries, else retry with more terms
    spread = max(max(-x.valuation, 0) for r in g for x in r if not x.is_zero())
    if N <= 2 * spread + PRECISION_MARGIN:
        raise _PrecisionFailure(f"precision {N} does not exceed 2 * {spread} + {PRECISION_MARGIN}")
    return ReductionResult(basis, AlgebraMap(L.field, g, M), T, trace)


def _run(L: Lattice, precision: int):
    N = precision
    last = None
    while N <= MAX_PRECISION:
        trace = ReductionTrace()
        trace.add("start", precision=N)
        try:
            return _reduce_once(L, N, trace)
        except _Refuted as r:
            return r.refutation
        except _PrecisionFailure as err:
            last = err
            N *= 2
    raise PrecisionExhausted(f"verification inconclusive up to precision {MAX_PRECISION}: {last}")


def standard_basis_type1(L: Lattice, precision: int = DEFAULT_PRECISION) -> ReductionResult:
    """Basis of a self-dual order L whose product table is the standard table, and g with g . L1 = L."""
    if dual(L) != L:
        raise PreconditionError("L is not self-dual")
    ok, why = is_order(L)
    if not ok:
        raise PreconditionError(f"L is not an order: {why}")
    res = _run(L, precision)
    if isinstance(res, Refutation) or res.vertex_type != VertexType.Type1:
        raise InconsistencyError("self-dual order did not reduce to type 1")
    return res


def standard_basis_type23(L: Lattice, precision: int = DEFAULT_PRECISION):
    """Reduction for L with e in L and L strictly between t L^dual ... ; returns a result or a Refutation.

    Closure under the product is not assumed: when the pairing profile has
    length 2 the returned Refutation exhibits a product that leaves L.
    """
    e = OctonionElement.para_unit(L.field)
    if not L.member(e):
        raise PreconditionError("the para-unit is not in L")
    D = dual(L)
    tinv = scale(L, RationalScalar.t_power(L.field, -1))
    if D == L or not D.contains(L) or not tinv.contains(D) or D == tinv:
        raise PreconditionError("need L strictly inside L^dual strictly inside t^-1 L")
    return _run(L, precision)


def reduce_lattice(L: Lattice, precision: int = DEFAULT_PRECISION):
    """Dispatch on self-duality: type 1 reduction or the type 2/3 reduction."""
    if dual(L) == L:
        return standard_basis_type1(L, precision)
    return standard_basis_type23(L, precision)


def certificate_verify(g: AlgebraMap, L: Lattice, T, precision: int | None = None) -> tuple[bool, str | None]:
    """Check that g is an automorphism (to ``precision`` when g is truncated), det g = 1 and g . L_T = L."""
    T = VertexType.parse(T)
    field = L.field
    S = standard_lattice(T, field)
    if apply(g, S) != L:
        return False, "g . L_std != L"
    prec = precision if precision is not None else g.precision
    if prec is None:
        ok, why = is_automorphism(g)
        if not ok:
            return False, f"not an automorphism: {why}"
        if g.det() != RationalScalar.from_int(field, 1):
            return False, "det g != 1"
        return True, None
    # truncated g: errors measured in coordinates of L must vanish modulo t^prec
    svec = S.vectors()
    images = [g(s) for s in svec]
    for i in range(8):
        for j in range(8):
            lhs = g(table_mul(svec[i], svec[j]))
            rhs = table_mul(images[i], images[j])
            err = lhs - rhs
            if not err.is_zero():
                coords = L.coordinates(err)
                if min(c.valuation for c in coords if not c.is_zero()) < prec:
                    return False, f"multiplicativity fails on basis pair ({i}, {j})"
            d = bilinear(images[i], images[j]) - bilinear(svec[i], svec[j])
            ref = bilinear(svec[i], svec[PAIRING[i]]).valuation
            if not d.is_zero() and d.valuation < prec + min(ref, 0):
                return False, f"form not preserved on pair ({i}, {j})"
    dg = g.det() - RationalScalar.from_int(field, 1)
    if not dg.is_zero() and dg.valuation < prec:
        return False, "det g != 1 to precision"
    return True, None


def random_lattice(T, seed: int, word_length: int, field: BaseField | None = None) -> Lattice:
    """g . L_T for g = random_automorphism(seed, word_length)."""
    field = field or BaseField(5)
    g = random_automorphism(seed, word_length, field)
    return apply(g, standard_lattice(T, field))


def l2_lattice(seed: int, word_length: int, field: BaseField | None = None) -> Lattice:
    """A lattice containing e with L in L^dual in t^-1 L and length 2 (never an order)."""
    field = field or BaseField(5)
    rng = random.Random(seed)
    base = [0, 0, 0, 0, 0, 0, 0, 0]
    base[rng.choice((2, 3, 4, 5, 6, 7))] = 1
    L = Lattice.monomial(field, base)
    if word_length == 0:
        return L
    g = random_automorphism(rng.randrange(2**31), word_length, field)
    return apply(g, L)

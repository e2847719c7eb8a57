"""Vertex types, standard lattices, graded chains and stabilizer checks."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import PreconditionError
from .groups import AlgebraMap, is_automorphism
from .lattice import (
    Lattice,
    apply,
    dual,
    is_order,
    length,
    lattice_sum,
    product_span,
    scale,
)
from .scalars import BaseField, RationalScalar


class VertexType(enum.Enum):
    Type1 = 1
    Type2 = 2
    Type3 = 3

    @classmethod
    def parse(cls, value) -> "VertexType":
        if isinstance(value, VertexType):
            return value
        s = str(value).strip()
        if s.lower().startswith("type"):
            s = s[4:]
        return cls(int(s))


# exponents of the standard lattices on the basis (e1, e2, u1, u2, u3, v1, v2, v3)
STANDARD_EXPONENTS = {
    VertexType.Type1: (0, 0, 0, 0, 0, 0, 0, 0),
    VertexType.Type2: (0, 0, 1, 0, 0, 0, 1, 0),
    VertexType.Type3: (0, 0, 1, 1, 0, 0, 0, 1),
}


def standard_lattice(T, field: BaseField | None = None) -> Lattice:
    return Lattice.monomial(field or BaseField(5), STANDARD_EXPONENTS[VertexType.parse(T)])


def _t(field, k):
    return RationalScalar.t_power(field, k)


def type3_middle(L: Lattice) -> Lattice:
    """M = t L^dual * L^dual + L."""
    D = dual(L)
    return lattice_sum(scale(product_span(D, D), _t(L.field, 1)), L)


@dataclass
class VertexCertificate:
    verdict: VertexType | None
    reason: str | None = None
    witness: dict | None = None
    transformer: AlgebraMap | None = None
    chain: "GradedChain | None" = None
    diagnostics: dict = dc_field(default_factory=dict)

    @property
    def tag(self) -> str:
        return self.verdict.name if self.verdict else "NotVertex"

    def to_json(self) -> dict:
        out = {"verdict": self.tag}
        if self.reason:
            out["reason"] = self.reason
        if self.witness is not None:
            out["witness"] = self.witness
        if self.diagnostics:
            out["diagnostics"] = self.diagnostics
        if self.transformer is not None:
            out["transformer"] = self.transformer.to_json()
        if self.chain is not None:
            out["chain"] = self.chain.to_json()
        return out


def classify_vertex(L: Lattice) -> VertexCertificate:
    """Decide which vertex type (if any) the lattice L represents."""
    ok, witness = is_order(L)
    D = dual(L)
    tinv = _t(L.field, -1)
    sandwiched = D != L and D.contains(L) and scale(L, tinv).contains(D) and D != scale(L, tinv)
    diagnostics = {}
    if sandwiched:
        l = length(L, D)
        diagnostics["l"] = l
        if l == 2:
            diagnostics["impossible_split_profile"] = "l = 2: a lattice with this Gram profile is never an order"
    if not ok:
        return VertexCertificate(None, "not an order", witness, diagnostics=diagnostics)
    if D == L:
        return VertexCertificate(VertexType.Type1, diagnostics=diagnostics)
    if not sandwiched:
        return VertexCertificate(None, "L is not strictly between itself and t^-1 L under duality", None, diagnostics=diagnostics)
    P = product_span(D, D)
    if scale(L, tinv).contains(P):
        return VertexCertificate(VertexType.Type2, diagnostics=diagnostics)
    M = lattice_sum(scale(P, _t(L.field, 1)), L)
    if M.rank == 8 and dual(M) == M:
        return VertexCertificate(VertexType.Type3, diagnostics=diagnostics)
    return VertexCertificate(None, "neither L^dual * L^dual in t^-1 L nor t L^dual * L^dual + L self-dual", None, diagnostics=diagnostics)


@dataclass
class GradedChain:
    lattices: list
    gradings: list  # Fractions, aligned with ``lattices``

    def to_json(self) -> list:
        return [
            {"grading": str(c), "lattice": L.to_json()} for L, c in zip(self.lattices, self.gradings)
        ]


def graded_chain(L: Lattice, T) -> GradedChain:
    """One period of the graded chain of L, from t L^(...) up to t^-1 L."""
    T = VertexType.parse(T)
    verdict = classify_vertex(L).verdict
    if verdict != T:
        raise PreconditionError(f"lattice classifies as {verdict.name if verdict else 'NotVertex'}, not {T.name}")
    t, tinv = _t(L.field, 1), _t(L.field, -1)
    if T == VertexType.Type1:
        lats = [scale(L, t), L, scale(L, tinv)]
        grades = [Fraction(1), Fraction(0), Fraction(-1)]
    elif T == VertexType.Type2:
        D = dual(L)
        lats = [scale(D, t), L, D, scale(L, tinv)]
        grades = [Fraction(1, 2), Fraction(0), Fraction(-1, 2), Fraction(-1)]
    else:
        D = dual(L)
        M = type3_middle(L)
        lats = [scale(D, t), L, M, D, scale(L, tinv)]
        grades = [Fraction(1, 3), Fraction(0), Fraction(-1, 3), Fraction(-2, 3), Fraction(-1)]
    for a, b in zip(lats, lats[1:]):
        if not (b.contains(a) and a != b):
            raise AssertionError("chain is not strictly increasing")
    return GradedChain(lats, grades)


def stabilizes(g: AlgebraMap, L: Lattice) -> bool:
    """g . L = L for an automorphism g; also checks the dual and, for type 3, M."""
    ok, why = is_automorphism(g)
    if not ok:
        raise PreconditionError(f"g is not an automorphism: {why}")
    if apply(g, L) != L:
        return False
    D = dual(L)
    if apply(g, D) != D:
        return False
    if classify_vertex(L).verdict == VertexType.Type3:
        M = type3_middle(L)
        if apply(g, M) != M:
            return False
    return True

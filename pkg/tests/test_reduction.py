import pytest
from hypothesis import given, settings, strategies as st

from g2lattice.building import VertexType, standard_lattice
from g2lattice.errors import PreconditionError
from g2lattice.groups import AlgebraMap, random_automorphism
from g2lattice.lattice import Lattice, apply
from g2lattice.octonion import OctonionElement, bilinear, norm, para_mul
from g2lattice.reduction import (
    Refutation,
    ReductionResult,
    certificate_verify,
    l2_lattice,
    random_lattice,
    reduce_lattice,
    split_para_unit,
    standard_basis_type1,
    standard_basis_type23,
)
from g2lattice.scalars import RationalScalar

from conftest import F5, Q

E = OctonionElement.para_unit(F5)


def small_in(L, x, precision):
    """x vanishes modulo t^precision L."""
    if x.is_zero():
        return True
    return min(c.valuation for c in L.coordinates(x) if not c.is_zero()) >= precision


@pytest.mark.parametrize("typ", [1, 2, 3])
def test_standard_lattices_reduce_to_themselves(typ):
    L = standard_lattice(typ)
    res = reduce_lattice(L)
    assert res.vertex_type == VertexType(typ)
    assert apply(res.transformer, L) == L
    assert certificate_verify(res.transformer, L, typ) == (True, None)


@settings(max_examples=12)
@given(st.integers(0, 100_000), st.integers(1, 5), st.sampled_from([1, 2, 3]))
def test_round_trip(seed, w, typ):
    L = random_lattice(typ, seed, w, F5)
    res = reduce_lattice(L)
    assert isinstance(res, ReductionResult)
    assert res.vertex_type == VertexType(typ)
    assert certificate_verify(res.transformer, L, typ) == (True, None)


@pytest.mark.parametrize("typ", [1, 2, 3])
def test_round_trip_over_rationals(typ):
    L = random_lattice(typ, 3, 3, Q)
    res = reduce_lattice(L, 16)
    assert res.vertex_type == VertexType(typ)
    assert certificate_verify(res.transformer, L, typ)[0]


@pytest.mark.parametrize("typ, seed", [(2, 4), (3, 5), (3, 9)])
def test_forced_relations_on_the_output_basis(typ, seed):
    L = random_lattice(typ, seed, 5, F5)
    res = reduce_lattice(L)
    P = res.transformer.precision
    e1, e2, *rest = res.basis
    U, V = rest[:3], rest[3:]
    assert small_in(L, e1 + e2 - E, P)
    for i in range(3):
        # e_i * L_i = 0 and L_i * e_(i+1) = 0
        assert small_in(L, para_mul(e1, U[i]), P) and small_in(L, para_mul(U[i], e2), P)
        assert small_in(L, para_mul(e2, V[i]), P) and small_in(L, para_mul(V[i], e1), P)
        for j in range(3):
            c = bilinear(U[i], V[j])
            assert small_in(L, para_mul(U[i], V[j]) + e1.scale(c), P)
            assert small_in(L, para_mul(V[j], U[i]) + e2.scale(c), P)
            assert small_in(L, para_mul(U[i], U[j]) + para_mul(U[j], U[i]), P)


def test_type1_lambda_is_a_unit_and_trace_is_complete():
    L = random_lattice(1, 12, 5, F5)
    res = standard_basis_type1(L)
    steps = [s["step"] for s in res.trace.steps]
    for name in ("hyperbolic_basis", "split_para_unit", "L0", "L1", "L2", "pairing_normal_form", "lambda_normalization", "table_verification"):
        assert name in steps
    lam = next(s for s in res.trace.steps if s["step"] == "lambda_normalization")
    assert lam["lambda_valuation"] == 0


def test_reduction_is_deterministic():
    L = random_lattice(3, 21, 5, F5)
    a, b = reduce_lattice(L), reduce_lattice(L)
    assert a.to_json() == b.to_json()


def test_split_para_unit():
    L = random_lattice(2, 2, 4, F5)
    e1, e2 = split_para_unit(L)
    assert e1 + e2 == E
    assert small_in(L, OctonionElement.from_list(F5, [norm(e1)] + [0] * 7), 24)
    assert small_in(L, para_mul(e1, e1) - e2, 24)
    assert L.member(e1) and L.member(e2)


@pytest.mark.parametrize("seed", range(6))
def test_length_two_lattices_are_refuted(seed):
    L = l2_lattice(seed, 3 * (seed % 2), F5)
    res = standard_basis_type23(L)
    assert isinstance(res, Refutation)
    assert res.valuation == -1
    assert res.recheck(L)
    assert not L.member(res.product)


def test_preconditions():
    with pytest.raises(PreconditionError):
        standard_basis_type1(standard_lattice(2))
    with pytest.raises(PreconditionError):
        standard_basis_type23(standard_lattice(1))
    with pytest.raises(PreconditionError):
        standard_basis_type23(Lattice.monomial(F5, [1, 0, 0, 0, 0, 0, 0, 0]))


def test_certificate_rejects_wrong_type_and_wrong_map():
    L = random_lattice(2, 1, 4, F5)
    res = reduce_lattice(L)
    assert not certificate_verify(res.transformer, L, 3)[0]
    bad = [list(r) for r in res.transformer.matrix]
    bad[2][2] = bad[2][2] + RationalScalar.t_power(F5, 1)
    ok, why = certificate_verify(AlgebraMap(F5, bad, res.transformer.precision), L, 2)
    assert not ok and why


def test_exact_certificates_use_the_exact_checks():
    g = random_automorphism(6, 5, F5)
    L = apply(g, standard_lattice(3))
    assert certificate_verify(AlgebraMap(F5, g.matrix), L, 3) == (True, None)
    M = [list(r) for r in g.matrix]
    M = [[x * RationalScalar.from_int(F5, 2) for x in r] for r in M]
    assert not certificate_verify(AlgebraMap(F5, M), apply(AlgebraMap(F5, M), standard_lattice(3)), 3)[0]


def test_low_precision_escalates_until_the_margin_holds():
    L = random_lattice(3, 5, 5, F5)
    res = reduce_lattice(L, 9)
    start = res.trace.steps[0]["precision"]
    assert start == 18 and res.transformer.precision == start - 8
    assert certificate_verify(res.transformer, L, 3) == (True, None)

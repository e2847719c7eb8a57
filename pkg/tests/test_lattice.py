import pytest
from hypothesis import given, settings, strategies as st

from g2lattice import linalg
from g2lattice.building import standard_lattice
from g2lattice.errors import PreconditionError
from g2lattice.forms import find_isotropic, gram_standard_form
from g2lattice.groups import random_automorphism
from g2lattice.lattice import (
    Lattice,
    apply,
    canonicalize,
    discriminant_class,
    dual,
    elementary_divisors,
    gram,
    intersect,
    is_maximal_order,
    is_order,
    lattice_sum,
    length,
    product_span,
    scale,
)
from g2lattice.octonion import PAIRING, OctonionElement, bilinear, gram_matrix
from g2lattice.scalars import BaseField, RationalScalar, parse_scalar

from conftest import F5, Q

T = RationalScalar.t_power(F5, 1)
TINV = RationalScalar.t_power(F5, -1)
exponent_vectors = st.lists(st.integers(-2, 2), min_size=8, max_size=8)


def mono(exps, field=F5):
    return Lattice.monomial(field, exps)


def test_canonical_form_is_independent_of_generators():
    L = standard_lattice(2, F5)
    g = random_automorphism(5, 4, F5)
    M = apply(g, L)
    shuffled = canonicalize([list(c) for c in reversed(M.columns)], F5)
    assert shuffled == M
    doubled = canonicalize([[x * parse_scalar("2 + t", F5) for x in c] for c in M.columns], F5)
    assert doubled == M


def test_membership_examples():
    L2 = standard_lattice(2, F5)
    assert L2.member(OctonionElement.para_unit(F5))
    assert not L2.member(OctonionElement.basis(F5, "u1"))
    assert L2.member(OctonionElement.basis(F5, "u1").scale(T))


def test_rank_deficient_input_is_rejected():
    cols = [list(OctonionElement.basis(F5, i).coords) for i in range(7)]
    with pytest.raises(PreconditionError):
        Lattice(F5, cols)


@given(exponent_vectors)
def test_dual_of_monomial_lattice(exps):
    expected = [-exps[PAIRING[i]] for i in range(8)]
    assert dual(mono(exps)) == mono(expected)


@given(exponent_vectors)
def test_length_of_monomial_lattice_in_its_dual(exps):
    if all(exps[i] + exps[PAIRING[i]] >= 0 for i in range(8)):
        L = mono(exps)
        assert length(L, dual(L)) == sum(exps[i] + exps[PAIRING[i]] for i in range(8))


@given(exponent_vectors, exponent_vectors)
def test_dual_is_an_inclusion_reversing_involution(a, b):
    L = mono(a)
    M = lattice_sum(L, mono(b))
    assert dual(dual(L)) == L
    assert M.contains(L) and dual(L).contains(dual(M))


@settings(max_examples=25)
@given(st.integers(0, 10_000), st.integers(0, 4), st.sampled_from([1, 2, 3]))
def test_automorphisms_commute_with_dual_and_preserve_invariants(seed, w, typ):
    g = random_automorphism(seed, w, F5)
    L = standard_lattice(typ, F5)
    gL = apply(g, L)
    assert dual(gL) == apply(g, dual(L))
    assert is_order(gL)[0] == is_order(L)[0]
    assert length(gL, dual(gL)) == length(L, dual(L))


@given(exponent_vectors, st.integers(0, 2), st.integers(0, 2))
def test_length_is_additive_on_towers(exps, i, j):
    L = mono(exps)
    M = scale(L, RationalScalar.t_power(F5, -i))
    N = scale(M, RationalScalar.t_power(F5, -j))
    assert length(L, N) == length(L, M) + length(M, N) == 8 * (i + j)


def test_elementary_divisors_of_standard_duals():
    assert elementary_divisors(standard_lattice(2), dual(standard_lattice(2))) == [0, 0, 0, 0, 1, 1, 1, 1]
    assert elementary_divisors(standard_lattice(3), dual(standard_lattice(3))) == [0, 0, 1, 1, 1, 1, 1, 1]


def test_intersection_and_sum():
    a = mono([0, 0, 1, 0, 0, 0, 0, 0])
    b = mono([0, 0, 0, 1, 0, 0, 0, 0])
    assert intersect(a, b) == mono([0, 0, 1, 1, 0, 0, 0, 0])
    assert lattice_sum(a, b) == mono([0] * 8)


def test_order_witness_and_maximality():
    L1 = standard_lattice(1)
    assert is_order(L1) == (True, None) and is_maximal_order(L1)
    ok, witness = is_order(mono([0, 0, 0, 0, 0, 1, 0, 0]))
    assert not ok and witness["kind"] == "product_not_in_lattice" and witness["valuation"] == -1
    ok, witness = is_order(mono([1, 0, 0, 0, 0, 0, 0, 0]))
    assert not ok and witness["kind"] == "missing_para_unit"
    with pytest.raises(PreconditionError):
        is_maximal_order(mono([1, 0, 0, 0, 0, 0, 0, 0]))


def test_product_span_of_standard_lattices():
    L1, L2 = standard_lattice(1), standard_lattice(2)
    assert product_span(L1, L1) == L1
    D = dual(L2)
    assert product_span(D, D) == scale(L2, TINV)


@pytest.mark.parametrize("typ, val", [(1, 0), (2, 4), (3, 6)])
def test_discriminant_valuation_is_even(typ, val):
    d = discriminant_class(standard_lattice(typ))
    assert d["valuation"] == val and d["parity"] == 0


def test_gram_matches_form_on_basis():
    L = apply(random_automorphism(2, 3, F5), standard_lattice(3))
    vs = L.vectors()
    G = gram(L)
    assert all(G[i][j] == bilinear(vs[i], vs[j]) for i in range(8) for j in range(8))


# -- Jordan splitting ---------------------------------------------------------


def check_profile(L, prof, precision):
    cols = prof.basis
    assert canonicalize(cols, L.field) == L
    Phi = gram_matrix(L.field)
    G = linalg.matmul(linalg.matmul(cols, Phi), linalg.transpose(cols))  # rows of cols are the vectors
    for i in range(8):
        for j in range(8):
            want = RationalScalar.t_power(L.field, prof.exponents[i]) if i + j == 7 else RationalScalar.zero(L.field)
            err = G[i][j] - want
            assert err.is_zero() or err.valuation >= precision - 1


@pytest.mark.parametrize("typ, l", [(1, 0), (2, 4), (3, 6)])
@pytest.mark.parametrize("seed", range(4))
def test_gram_standard_form_on_twisted_lattices(typ, l, seed):
    L = apply(random_automorphism(seed, 4, F5), standard_lattice(typ))
    prof = gram_standard_form(L, 24)
    assert prof.l == l and prof.kind == "split"
    check_profile(L, prof, 24)


def test_gram_standard_form_exact_for_standard_lattices():
    prof = gram_standard_form(standard_lattice(3))
    assert prof.precision is None and sorted(prof.exponents) == [0, 0, 1, 1, 1, 1, 1, 1]


def test_gram_standard_form_requires_integral_gram():
    with pytest.raises(PreconditionError):
        gram_standard_form(mono([-1, 0, 0, 0, 0, 0, 0, 0]))


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_residue_isotropic_vectors(p):
    f = BaseField(p)
    for diag in ([1, 1, 1], [1, 2, 3, 4], [1, p - 1]):
        g = [[f.elt(diag[i]) if i == j else 0 for j in range(len(diag))] for i in range(len(diag))]
        c = find_isotropic(f, g)
        assert sum(diag[i] * c[i] * c[i] for i in range(len(diag))) % p == 0
        assert any(c)


def test_rational_isotropic_search():
    g = [[1, 0, 0], [0, 1, 0], [0, 0, -2]]
    from fractions import Fraction

    c = find_isotropic(Q, [[Fraction(x) for x in r] for r in g])
    assert c[0] ** 2 + c[1] ** 2 - 2 * c[2] ** 2 == 0 and any(c)

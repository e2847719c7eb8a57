from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from g2lattice.building import (
    VertexType,
    classify_vertex,
    graded_chain,
    stabilizes,
    standard_lattice,
    type3_middle,
)
from g2lattice.errors import PreconditionError
from g2lattice.groups import AlgebraMap, permutation_automorphisms, random_automorphism, torus_cochar
from g2lattice.lattice import Lattice, apply, dual, length, scale
from g2lattice.scalars import RationalScalar

from conftest import F5, Q


def mono(exps):
    return Lattice.monomial(F5, exps)


@pytest.mark.parametrize("typ", [1, 2, 3])
def test_standard_lattices_classify(typ):
    cert = classify_vertex(standard_lattice(typ))
    assert cert.verdict == VertexType(typ)
    assert cert.to_json()["verdict"] == f"Type{typ}"


def test_standard_lattice_over_rationals():
    assert classify_vertex(standard_lattice(3, Q)).verdict == VertexType.Type3


def test_displayed_duals_and_middle_lattice():
    assert dual(standard_lattice(2)) == mono([0, 0, 0, -1, 0, -1, 0, 0])
    assert type3_middle(standard_lattice(3)) == mono([0, 0, 0, 0, -1, 0, 0, 1])


@settings(max_examples=20)
@given(st.integers(0, 100_000), st.integers(0, 5), st.sampled_from([1, 2, 3]))
def test_classification_is_automorphism_invariant(seed, w, typ):
    g = random_automorphism(seed, w, F5)
    L = apply(g, standard_lattice(typ))
    cert = classify_vertex(L)
    assert cert.verdict == VertexType(typ)
    expected_l = {1: None, 2: 4, 3: 6}[typ]
    assert cert.diagnostics.get("l") == expected_l
    if typ == 3:
        M = type3_middle(L)
        assert M.contains(L) and dual(L).contains(M) and M != L and M != dual(L)


def test_length_two_lattice_is_flagged_not_classified():
    L = mono([0, 0, 0, 0, 0, 0, 1, 0])
    cert = classify_vertex(L)
    assert cert.verdict is None
    assert cert.witness["valuation"] == -1
    assert cert.diagnostics["l"] == 2 and "impossible_split_profile" in cert.diagnostics


def test_non_order_and_non_sandwiched_lattices():
    assert classify_vertex(mono([1] + [0] * 7)).reason == "not an order"
    L = scale(standard_lattice(1), RationalScalar.t_power(F5, 1))
    assert classify_vertex(L).verdict is None


@pytest.mark.parametrize(
    "typ, grades",
    [
        (1, ["1", "0", "-1"]),
        (2, ["1/2", "0", "-1/2", "-1"]),
        (3, ["1/3", "0", "-1/3", "-2/3", "-1"]),
    ],
)
def test_graded_chains(typ, grades):
    L = apply(random_automorphism(typ, 3, F5), standard_lattice(typ))
    chain = graded_chain(L, typ)
    assert [str(c) for c in chain.gradings] == grades
    assert chain.lattices[1] == L
    assert chain.lattices[-1] == scale(L, RationalScalar.t_power(F5, -1))
    # periodicity of the grading: c(t^-1 L) = c(L) - 1
    assert chain.gradings[1] - chain.gradings[-1] == Fraction(1)


def test_graded_chain_rejects_wrong_type():
    with pytest.raises(PreconditionError):
        graded_chain(standard_lattice(2), 3)


def test_stabilizers():
    L1 = standard_lattice(1)
    assert stabilizes(AlgebraMap.identity(F5), L1)
    assert not stabilizes(torus_cochar(1, 0, F5), L1)
    # swapping the indices 1 and 2 preserves the exponents of the type 3 lattice
    h = next(m for perm, _, m in permutation_automorphisms(F5) if perm == (1, 0, 2))
    assert stabilizes(h, standard_lattice(3))
    g = random_automorphism(8, 4, F5)
    L3 = apply(g, standard_lattice(3))
    assert stabilizes(g @ h @ g.inverse(), L3)


def test_stabilizes_requires_automorphism():
    from g2lattice import linalg

    M = linalg.identity(F5, 8)
    M[0][0] = RationalScalar.from_int(F5, 2)
    with pytest.raises(PreconditionError):
        stabilizes(AlgebraMap(F5, M), standard_lattice(1))


def test_vertex_types_are_mutually_exclusive():
    for typ in (1, 2, 3):
        L = standard_lattice(typ)
        D = dual(L)
        flags = [D == L, length(L, D) == 4, length(L, D) == 6]
        assert sum(flags) == 1

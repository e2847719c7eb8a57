import pytest
from hypothesis import given, settings, strategies as st

from g2lattice import linalg
from g2lattice.errors import PreconditionError
from g2lattice.groups import (
    AlgebraMap,
    RelatedTriple,
    hat,
    is_automorphism,
    is_isometry,
    is_related_triple,
    is_special,
    permutation_automorphisms,
    random_automorphism,
    rho,
    root_derivations,
    root_element,
    swap_automorphism,
    theta,
    torus_cochar,
)
from g2lattice.octonion import OctonionElement, para_mul
from g2lattice.scalars import RationalScalar

from conftest import F5, Q, elements

E = OctonionElement.para_unit(F5)
seeds = st.integers(0, 100_000)


def test_identity_and_swap_are_automorphisms():
    assert is_automorphism(AlgebraMap.identity(F5)) == (True, None)
    assert is_automorphism(swap_automorphism(F5))[0]


def test_permutation_signs():
    by_perm = {perm: sign for perm, sign, _ in permutation_automorphisms(F5)}
    assert len(by_perm) == 6
    for perm, sign in by_perm.items():
        inversions = sum(1 for i in range(3) for j in range(i + 1, 3) if perm[i] > perm[j])
        assert sign == (1 if inversions % 2 == 0 else -1)


def test_twelve_root_spaces():
    roots = root_derivations(F5)
    assert len(roots) == 12
    for r in roots:
        g = root_element(F5, r, RationalScalar.t_power(F5, -1, 2))
        assert is_automorphism(g)[0] and is_special(g)


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))
def test_torus_composes_additively(a, b, c, d):
    assert torus_cochar(a, b, F5) @ torus_cochar(c, d, F5) == torus_cochar(a + c, b + d, F5)
    assert is_automorphism(torus_cochar(a, b, F5))[0]


@settings(max_examples=30)
@given(seeds, st.integers(0, 6))
def test_random_automorphisms_fix_the_para_unit_and_are_isometries(seed, w):
    g = random_automorphism(seed, w, F5)
    ok, _ = is_automorphism(g)
    assert ok
    assert is_isometry(g) and is_special(g)
    assert g(E) == E


@settings(max_examples=15)
@given(seeds, elements(), elements())
def test_automorphisms_respect_products_of_arbitrary_elements(seed, x, y):
    g = random_automorphism(seed, 3, F5)
    assert g(para_mul(x, y)) == para_mul(g(x), g(y))


def test_non_automorphism_counterexample():
    M = linalg.identity(F5, 8)
    M[2][2] = RationalScalar.from_int(F5, 2)
    ok, cex = is_automorphism(AlgebraMap(F5, M))
    assert not ok and "pair" in cex


def test_inverse_and_serialization_round_trip():
    g = random_automorphism(11, 5, F5)
    assert g @ g.inverse() == AlgebraMap.identity(F5)
    assert AlgebraMap.from_json(g.to_json()) == g


def test_random_automorphism_is_deterministic():
    assert random_automorphism(4, 5, F5) == random_automorphism(4, 5, F5)
    assert is_automorphism(random_automorphism(4, 4, Q))[0]


@settings(max_examples=10)
@given(seeds)
def test_s3_action_on_diagonal_triples(seed):
    g = random_automorphism(seed, 3, F5)
    T = RelatedTriple(g, g, g)
    assert is_related_triple(T)[0]
    r, t = rho(T), theta(T)
    assert is_related_triple(r)[0] and is_related_triple(t)[0]
    assert rho(rho(r)) == T
    assert theta(t) == T


def test_hat_is_an_involution():
    g = random_automorphism(7, 4, F5)
    assert hat(hat(g)) == g


def test_mismatched_triple_is_rejected():
    g = random_automorphism(1, 3, F5)
    h = random_automorphism(2, 3, F5)
    T = RelatedTriple(g, g, h)
    ok, why = is_related_triple(T)
    assert not ok and why is not None
    with pytest.raises(PreconditionError):
        rho(T)

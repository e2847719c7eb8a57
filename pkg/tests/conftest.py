from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from g2lattice.octonion import OctonionElement
from g2lattice.scalars import BaseField, RationalScalar

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

F5 = BaseField(5)
Q = BaseField(None)


@pytest.fixture
def f5():
    return F5


def evaluate(x: RationalScalar, a):
    """Value of x at t = a (oracle used against field arithmetic), or None at a pole/zero of t."""
    f = x.field
    if x.is_zero():
        return f.elt(0)
    num = sum((c * a**i for i, c in enumerate(f.coeffs(x.num))), f.elt(0))
    den = sum((c * a**i for i, c in enumerate(f.coeffs(x.den))), f.elt(0))
    if f.p is not None:
        num, den = num % f.p, den % f.p
    if den == 0 or a == 0:
        return None
    tk = Fraction(a) ** x.shift if f.p is None else pow(a, x.shift, f.p)
    val = num * tk / den if f.p is None else num * tk * pow(den, -1, f.p) % f.p
    return val


@st.composite
def polys(draw, field=F5, max_degree=3):
    if field.p is None:
        return draw(st.lists(st.integers(-4, 4), min_size=1, max_size=max_degree + 1))
    return draw(st.lists(st.integers(0, field.p - 1), min_size=1, max_size=max_degree + 1))


@st.composite
def scalars(draw, field=F5, max_degree=3, allow_zero=True, fractions=True):
    num = draw(polys(field, max_degree))
    shift = draw(st.integers(-3, 3))
    x = RationalScalar.from_laurent(field, shift, num)
    if fractions and draw(st.booleans()):
        den = draw(polys(field, 2))
        d = RationalScalar.from_laurent(field, 0, den)
        if not d.is_zero():
            x = x / d
    if not allow_zero:
        if x.is_zero():
            x = RationalScalar.from_int(field, 1)
    return x


@st.composite
def elements(draw, field=F5, max_degree=2):
    return OctonionElement(tuple(draw(scalars(field, max_degree, fractions=False)) for _ in range(8)), field)

"""Exact scalars: the base field k, the rational function field k(t) and Laurent jets.

Elements of k(t) are stored as ``t^shift * num / den`` where ``num`` and ``den``
are coprime polynomials with nonzero constant terms and ``den(0) == 1``.  That
rule makes equality representational and puts the t-adic valuation in
``shift``.  Polynomial arithmetic is delegated to python-flint.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import flint

from .errors import NeedsEtaleExtension, ScalarSyntaxError


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


@dataclass(frozen=True)
class BaseField:
    """The residue field k: ``F_p`` for an odd prime ``p``, or ``Q`` when ``p is None``."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and (self.p == 2 or not _is_prime(self.p)):
            raise ValueError(f"characteristic must be an odd prime or 0, got {self.p}")

    @classmethod
    def parse(cls, name: str) -> "BaseField":
        name = name.strip()
        if name in ("Q", "QQ"):
            return cls(None)
        m = re.fullmatch(r"(?:F|GF)\(?(\d+)\)?", name)
        if not m:
            raise ValueError(f"unknown field {name!r}; expected Fp (e.g. F5) or Q")
        return cls(int(m.group(1)))

    @property
    def name(self) -> str:
        return "Q" if self.p is None else f"F{self.p}"

    def __repr__(self) -> str:
        return f"BaseField({self.name})"

    def to_json(self) -> dict:
        if self.p is None:
            return {"kind": "rational"}
        return {"kind": "prime", "p": self.p}

    @classmethod
    def from_json(cls, data: dict) -> "BaseField":
        if data.get("kind") == "rational":
            return cls(None)
        if data.get("kind") == "prime":
            return cls(int(data["p"]))
        raise ValueError(f"bad field description {data!r}")

    # -- elements of k: ints in [0, p) or Fractions
    def elt(self, c) -> int | Fraction:
        if self.p is None:
            return Fraction(c)
        if isinstance(c, Fraction):
            if c.denominator % self.p == 0:
                raise ZeroDivisionError(f"{c} is not defined in {self.name}")
            return c.numerator * pow(c.denominator, -1, self.p) % self.p
        return int(c) % self.p

    def inv(self, c):
        if c == 0:
            raise ZeroDivisionError("inverse of 0 in the residue field")
        if self.p is None:
            return 1 / Fraction(c)
        return pow(int(c), -1, self.p)

    def is_square(self, c) -> bool:
        c = self.elt(c)
        if c == 0:
            return True
        if self.p is None:
            return c > 0 and _rational_sqrt(c) is not None
        return pow(c, (self.p - 1) // 2, self.p) == 1

    def sqrt(self, c):
        """A square root of ``c`` in k, or None when ``c`` is not a square."""
        c = self.elt(c)
        if self.p is None:
            return _rational_sqrt(c)
        if c == 0:
            return 0
        if not self.is_square(c):
            return None
        return _tonelli_shanks(c, self.p)

    def square_class(self, c):
        """Representative of c modulo squares: +-1 for F_p, the square-free part for Q."""
        c = self.elt(c)
        if c == 0:
            raise ValueError("0 has no square class")
        if self.p is not None:
            return 1 if self.is_square(c) else -1
        num, den = c.numerator * c.denominator, 1
        return _squarefree(num) * den

    # -- polynomials
    def poly(self, coeffs) -> "flint.nmod_poly | flint.fmpq_poly":
        if self.p is None:
            return flint.fmpq_poly([flint.fmpq(Fraction(c).numerator, Fraction(c).denominator) for c in coeffs])
        return flint.nmod_poly([int(c) % self.p for c in coeffs], self.p)

    def coeffs(self, poly) -> list:
        if self.p is None:
            return [Fraction(int(c.p), int(c.q)) for c in poly.coeffs()]
        return [int(c) for c in poly.coeffs()]


def _rational_sqrt(c: Fraction) -> Fraction | None:
    if c < 0:
        return None
    n, d = math.isqrt(c.numerator), math.isqrt(c.denominator)
    if n * n == c.numerator and d * d == c.denominator:
        return Fraction(n, d)
    return None


def _squarefree(n: int) -> int:
    sign = -1 if n < 0 else 1
    n = abs(n)
    out, d = 1, 2
    while d * d <= n:
        while n % (d * d) == 0:
            n //= d * d
        if n % d == 0:
            out *= d
            n //= d
        d += 1
    return sign * out * n


def _tonelli_shanks(a: int, p: int) -> int:
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return min(r, p - r)


def _low_order(poly) -> int:
    k = 0
    while poly[k] == 0:
        k += 1
    return k


class RationalScalar:
    """An element of F = k(t), immutable, in canonical form."""

    __slots__ = ("field", "shift", "num", "den", "__dict__")

    def __init__(self, field: BaseField, shift: int, num, den):
        # trusted constructor; use RationalScalar.make for unnormalized input
        self.field = field
        self.shift = shift
        self.num = num
        self.den = den

    @classmethod
    def make(cls, field: BaseField, num, den=None, shift: int = 0) -> "RationalScalar":
        if den is None:
            den = field.poly([1])
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            return cls.zero(field)
        k = _low_order(num)
        if k:
            num = num.right_shift(k)
            shift += k
        j = _low_order(den)
        if j:
            den = den.right_shift(j)
            shift -= j
        if den.degree() > 0:
            g = num.gcd(den)
            if g.degree() > 0:
                num = divmod(num, g)[0]
                den = divmod(den, g)[0]
        c0 = den[0]
        if c0 != 1:
            inv = 1 / c0
            num = num * inv
            den = den * inv
        return cls(field, shift, num, den)

    @classmethod
    def zero(cls, field: BaseField) -> "RationalScalar":
        return cls(field, 0, field.poly([]), field.poly([1]))

    @classmethod
    def from_int(cls, field: BaseField, c) -> "RationalScalar":
        c = field.elt(c)
        if c == 0:
            return cls.zero(field)
        return cls(field, 0, field.poly([c]), field.poly([1]))

    @classmethod
    def t_power(cls, field: BaseField, k: int, coeff=1) -> "RationalScalar":
        c = field.elt(coeff)
        if c == 0:
            return cls.zero(field)
        return cls(field, k, field.poly([c]), field.poly([1]))

    @classmethod
    def from_laurent(cls, field: BaseField, start: int, coeffs) -> "RationalScalar":
        """sum(coeffs[i] * t^(start + i))."""
        return cls.make(field, field.poly(coeffs), None, start)

    # -- basic predicates
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    @property
    def valuation(self) -> int | float:
        return math.inf if self.num.is_zero() else self.shift

    def is_integral(self) -> bool:
        return self.num.is_zero() or self.shift >= 0

    def is_unit(self) -> bool:
        """Unit of the valuation ring O = k[t]_(t)."""
        return not self.num.is_zero() and self.shift == 0

    @cached_property
    def _key(self):
        f = self.field
        return (f.p, self.shift, tuple(f.coeffs(self.num)), tuple(f.coeffs(self.den)))

    def __eq__(self, other):
        if isinstance(other, int):
            other = RationalScalar.from_int(self.field, other)
        if not isinstance(other, RationalScalar):
            return NotImplemented
        return (
            self.field == other.field
            and self.shift == other.shift
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash(self._key)

    # -- arithmetic
    def _coerce(self, other) -> "RationalScalar":
        if isinstance(other, RationalScalar):
            if other.field != self.field:
                raise ValueError(f"mixing scalars over {self.field.name} and {other.field.name}")
            return other
        if isinstance(other, (int, Fraction)):
            return RationalScalar.from_int(self.field, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        m = min(self.shift, other.shift)
        a = self.num.left_shift(self.shift - m) if self.shift > m else self.num
        b = other.num.left_shift(other.shift - m) if other.shift > m else other.num
        if self.den.is_one() and other.den.is_one():
            return RationalScalar.make(self.field, a + b, None, m)
        if self.den == other.den:
            return RationalScalar.make(self.field, a + b, self.den, m)
        return RationalScalar.make(self.field, a * other.den + b * self.den, self.den * other.den, m)

    __radd__ = __add__

    def __neg__(self):
        return RationalScalar(self.field, self.shift, -self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero() or other.num.is_zero():
            return RationalScalar.zero(self.field)
        shift = self.shift + other.shift
        if self.den.is_one() and other.den.is_one():
            return RationalScalar(self.field, shift, self.num * other.num, self.den)
        return RationalScalar.make(self.field, self.num * other.num, self.den * other.den, shift)

    __rmul__ = __mul__

    def inverse(self) -> "RationalScalar":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero scalar")
        return RationalScalar.make(self.field, self.den, self.num, -self.shift)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = RationalScalar.from_int(self.field, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- t-adic data
    def unit_part(self) -> "RationalScalar":
        """self / t^valuation."""
        if self.num.is_zero():
            raise ValueError("zero has no unit part")
        return RationalScalar(self.field, 0, self.num, self.den)

    def residue(self):
        """Value at t = 0 as an element of k (requires integrality)."""
        if self.num.is_zero() or self.shift > 0:
            return self.field.elt(0)
        if self.shift < 0:
            raise ValueError("residue of a non-integral scalar")
        return self.field.coeffs(self.num)[0]

    def series(self, stop: int) -> list:
        """Laurent coefficients for exponents valuation .. stop-1 (empty if stop <= valuation)."""
        if self.num.is_zero():
            return []
        m = stop - self.shift
        if m <= 0:
            return []
        f = self.field
        if self.den.is_one():
            c = f.coeffs(self.num)[:m]
            return c + [f.elt(0)] * (m - len(c))
        if f.p is not None:
            s = self.num.mul_low(self.den.inverse_series_trunc(m), m)
            c = f.coeffs(s)
            return c + [0] * (m - len(c))
        return _series_div(f, f.coeffs(self.num), f.coeffs(self.den), m)

    def principal_part(self, a: int) -> "RationalScalar":
        """The terms of the Laurent expansion with exponent < a."""
        return RationalScalar.from_laurent(self.field, self.shift, self.series(a)) if a > self.shift else RationalScalar.zero(self.field)

    # -- printing
    def __str__(self) -> str:
        f = self.field
        if self.num.is_zero():
            return "0"
        num = _format_laurent(f, self.shift, f.coeffs(self.num))
        if self.den.is_one():
            return num
        den = _format_laurent(f, 0, f.coeffs(self.den))
        return f"{_group(num)}/{_group(den)}"

    def __repr__(self) -> str:
        return f"RationalScalar({self.field.name}, {self})"


def _series_div(field: BaseField, num: list, den: list, m: int) -> list:
    """First m coefficients of num/den with den[0] != 0."""
    inv0 = field.inv(den[0])
    out = []
    for n in range(m):
        acc = num[n] if n < len(num) else 0
        for i in range(1, min(n, len(den) - 1) + 1):
            acc -= den[i] * out[n - i]
        out.append(field.elt(acc * inv0))
    return out


def _group(text: str) -> str:
    """Parenthesize a formatted polynomial unless it is a single monomial."""
    return f"({text})" if " " in text or text.startswith("-") else text


def _format_coeff(c) -> str:
    if isinstance(c, Fraction) and c.denominator != 1:
        return f"{c.numerator}/{c.denominator}"
    return str(int(c))


def _format_laurent(field: BaseField, start: int, coeffs: list) -> str:
    parts = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        e = start + i
        neg = field.p is None and c < 0
        mag = -c if neg else c
        mono = "" if e == 0 else ("t" if e == 1 else f"t^{e}")
        if not mono:
            body = _format_coeff(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_format_coeff(mag)}*{mono}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f" - {body}" if neg else f" + {body}")
    return "".join(parts) if parts else "0"


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(t)|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    pos, out = 0, []
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ScalarSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        kind = ("int", "t", "op")[m.lastindex - 1]
        tok = m.group(m.lastindex)
        out.append((kind, "^" if tok == "**" else tok, start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, field: BaseField):
        self.toks = _tokenize(text)
        self.i = 0
        self.field = field

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        tok = self.take()
        if tok[1] != op:
            raise ScalarSyntaxError(f"expected {op!r}", tok[2])

    def parse(self) -> RationalScalar:
        if self.peek()[0] == "end":
            raise ScalarSyntaxError("empty expression", 0)
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ScalarSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return value

    def expr(self):
        value = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            _, op, pos = self.take()
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise ScalarSyntaxError("division by zero", pos)
                value = value / rhs
        return value

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            value = self.unary()
            return -value if tok[1] == "-" else value
        return self.power()

    def power(self):
        tok = self.peek()
        base = self.atom()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            self.take()
            sign = 1
            if self.peek()[1] == "-":
                self.take()
                sign = -1
            etok = self.take()
            if etok[0] != "int":
                raise ScalarSyntaxError("exponent must be an integer", etok[2])
            e = sign * int(etok[1])
            if e < 0 and tok[0] != "t":
                raise ScalarSyntaxError("negative exponents are only allowed on t", etok[2])
            if e < 0:
                return RationalScalar.t_power(self.field, e)
            return base ** e
        return base

    def atom(self):
        kind, tok, pos = self.take()
        if kind == "int":
            return RationalScalar.from_int(self.field, int(tok))
        if kind == "t":
            return RationalScalar.t_power(self.field, 1)
        if tok == "(":
            value = self.expr()
            self.expect(")")
            return value
        raise ScalarSyntaxError(f"unexpected {tok!r}" if tok else "unexpected end of input", pos)


def parse_scalar(text: str, field: BaseField) -> RationalScalar:
    """Parse the scalar grammar (integers, t, + - * / ^, parentheses) into canonical form."""
    return _Parser(text, field).parse()


def valuation(x: RationalScalar) -> int | float:
    """t-adic valuation; ``math.inf`` for zero."""
    return x.valuation


# -- Laurent jets -----------------------------------------------------------


class LaurentJet:
    """A Laurent series known modulo t^precision.

    ``coeffs[i]`` is the coefficient of t^(start + i); leading zeros are stripped,
    so ``start`` is the valuation unless the jet is zero to its precision, in
    which case ``coeffs`` is empty and ``start == precision``.
    """

    __slots__ = ("field", "start", "coeffs", "precision")

    def __init__(self, field: BaseField, start: int, coeffs, precision: int):
        coeffs = [field.elt(c) for c in coeffs][: max(precision - start, 0)]
        k = 0
        while k < len(coeffs) and coeffs[k] == 0:
            k += 1
        coeffs = coeffs[k:]
        if not coeffs:
            start = precision
        else:
            start += k
            coeffs += [field.elt(0)] * (precision - start - len(coeffs))
        self.field = field
        self.start = start
        self.coeffs = tuple(coeffs)
        self.precision = precision

    @classmethod
    def from_scalar(cls, x: RationalScalar, precision: int) -> "LaurentJet":
        if x.is_zero() or x.shift >= precision:
            return cls(x.field, precision, (), precision)
        return cls(x.field, x.shift, x.series(precision), precision)

    @property
    def valuation(self) -> int | None:
        """Valuation, or None when the jet vanishes to its precision."""
        return self.start if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, e: int):
        if e >= self.precision:
            raise ValueError(f"coefficient of t^{e} is beyond precision {self.precision}")
        i = e - self.start
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.elt(0)

    def _lower(self) -> int:
        return self.start if self.coeffs else self.precision

    def __add__(self, other):
        if isinstance(other, RationalScalar):
            other = LaurentJet.from_scalar(other, self.precision)
        prec = min(self.precision, other.precision)
        lo = min(self._lower(), other._lower(), prec)
        coeffs = [self._c(e) + other._c(e) for e in range(lo, prec)]
        return LaurentJet(self.field, lo, coeffs, prec)

    def _c(self, e):
        i = e - self.start
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.elt(0)

    def __neg__(self):
        return LaurentJet(self.field, self.start, [-c for c in self.coeffs], self.precision)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = self.field.elt(other)
            return LaurentJet(self.field, self.start, [c * a for a in self.coeffs], self.precision)
        if isinstance(other, RationalScalar):
            other = LaurentJet.from_scalar(other, self.precision - self._lower() + max(other.valuation, 0) + 1 if not other.is_zero() else self.precision)
        va, vb = self._lower(), other._lower()
        prec = min(self.precision + vb, other.precision + va)
        start = va + vb
        m = prec - start
        out = [self.field.elt(0)] * max(m, 0)
        for i, a in enumerate(self.coeffs[:m]):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs[: m - i]):
                out[i + j] += a * b
        return LaurentJet(self.field, start, out, prec)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentJet":
        if not self.coeffs:
            raise ZeroDivisionError("jet is zero to its precision")
        v = self.start
        m = self.precision - v
        inv = _series_div(self.field, [self.field.elt(1)], list(self.coeffs), m)
        return LaurentJet(self.field, -v, inv, -v + m)

    def __truediv__(self, other):
        return self * other.inverse()

    def truncate(self) -> RationalScalar:
        """The Laurent polynomial representative (terms below the precision)."""
        if not self.coeffs:
            return RationalScalar.zero(self.field)
        return RationalScalar.from_laurent(self.field, self.start, self.coeffs)

    def agrees_with(self, x: RationalScalar) -> bool:
        return (self - LaurentJet.from_scalar(x, self.precision)).is_zero()

    def __eq__(self, other):
        if not isinstance(other, LaurentJet):
            return NotImplemented
        return (self.field, self.start, self.coeffs, self.precision) == (
            other.field, other.start, other.coeffs, other.precision)

    def __hash__(self):
        return hash((self.field, self.start, self.coeffs, self.precision))

    def __str__(self) -> str:
        body = _format_laurent(self.field, self.start, list(self.coeffs)) if self.coeffs else "0"
        return f"{body} + O(t^{self.precision})"

    def __repr__(self) -> str:
        return f"LaurentJet({self.field.name}, {self})"


def jet_sqrt(x: LaurentJet, residue_root=None) -> LaurentJet:
    """Square root of a jet of even valuation.

    The sign is fixed by ``residue_root`` (a square root in k of the leading
    coefficient) when given; otherwise a root is computed in k, and a residue
    that is not a square there raises :class:`NeedsEtaleExtension`.
    """
    f = x.field
    if x.is_zero():
        raise ValueError("square root of a jet that vanishes to its precision")
    v = x.start
    if v % 2:
        raise ValueError(f"odd valuation {v} has no square root")
    lead = x.coeffs[0]
    if residue_root is None:
        residue_root = f.sqrt(lead)
        if residue_root is None:
            raise NeedsEtaleExtension(f"leading coefficient {lead} is not a square in {f.name}", 2)
    residue_root = f.elt(residue_root)
    if residue_root * residue_root != lead and (f.p is None or (residue_root * residue_root - lead) % f.p):
        raise ValueError(f"{residue_root} is not a square root of {lead}")
    m = x.precision - v
    u = list(x.coeffs)
    inv2s0 = f.inv(2 * residue_root)
    s = [residue_root]
    for n in range(1, m):
        acc = u[n] - sum((s[i] * s[n - i] for i in range(1, n)), f.elt(0))
        c = acc * inv2s0
        s.append(c % f.p if f.p is not None else c)
    return LaurentJet(f, v // 2, s, v // 2 + m)

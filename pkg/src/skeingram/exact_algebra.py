"""Exact coefficient arithmetic for skein computations.

Laurent polynomials in ``A`` with big-integer coefficients, their field of
fractions, polynomials in the loop value ``delta``, and the quantum integers
``Delta_n`` together with the theta values ``theta(a, b, 1)``.

Polynomials are stored as ``A**low * p(A)`` where ``p`` is a
:class:`flint.fmpz_poly` whose constant term is nonzero.  That keeps every
value in a unique canonical form, so equality and hashing are structural.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Union

from flint import fmpq, fmpz_poly

__all__ = [
    "LaurentPoly",
    "DeltaPoly",
    "RationalFunc",
    "A",
    "DELTA",
    "laurent_arithmetic",
    "rational_reduce",
    "delta",
    "delta_in_delta_var",
    "theta_edge",
    "step_ratio",
    "delta_closed_form",
    "product",
    "laurent_to_delta",
    "as_rational",
]

_ZERO = fmpz_poly(0)
_ONE = fmpz_poly(1)


def _valuation(p: fmpz_poly) -> int:
    for i, c in enumerate(p.coeffs()):
        if c:
            return i
    raise ValueError("valuation of the zero polynomial")


def _to_fraction(x) -> Fraction:
    if isinstance(x, fmpq):
        return Fraction(int(x.p), int(x.q))
    return Fraction(x)


class _Laurent:
    """Shared implementation of Laurent polynomials in one named variable."""

    __slots__ = ("_low", "_poly", "_hash")
    var = "?"

    def __init__(self, terms: Mapping[int, int] | int | None = None):
        if terms is None:
            terms = {}
        elif isinstance(terms, int):
            terms = {0: terms} if terms else {}
        terms = {int(e): int(c) for e, c in terms.items() if c}
        if not terms:
            self._low, self._poly = 0, _ZERO
        else:
            low = min(terms)
            coeffs = [0] * (max(terms) - low + 1)
            for e, c in terms.items():
                coeffs[e - low] = c
            self._low, self._poly = low, fmpz_poly(coeffs)
        self._hash = None

    @classmethod
    def _raw(cls, low: int, poly: fmpz_poly):
        """Build from ``A**low * poly`` and restore the canonical shift."""
        obj = object.__new__(cls)
        if poly.is_zero():
            obj._low, obj._poly = 0, _ZERO
        else:
            if poly[0] == 0:
                v = _valuation(poly)
                poly = poly.right_shift(v)
                low += v
            obj._low, obj._poly = low, poly
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1):
        return cls._raw(exponent, fmpz_poly([coeff]))

    @classmethod
    def _coerce(cls, other):
        if isinstance(other, cls):
            return other
        if isinstance(other, int):
            return cls._raw(0, fmpz_poly([other]))
        return NotImplemented

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> dict[int, int]:
        """Exponent -> coefficient, ascending by exponent, no zero entries."""
        return {self._low + i: int(c) for i, c in enumerate(self._poly.coeffs()) if c}

    @property
    def low(self) -> int:
        """Smallest exponent with nonzero coefficient (0 for the zero polynomial)."""
        return self._low

    @property
    def high(self) -> int:
        return self._low + max(self._poly.degree(), 0)

    def is_zero(self) -> bool:
        return self._poly.is_zero()

    def is_one(self) -> bool:
        return self._low == 0 and self._poly.is_one()

    def is_monomial(self) -> bool:
        return self._poly.degree() == 0

    def __bool__(self) -> bool:
        return not self._poly.is_zero()

    def shifted_poly(self) -> tuple[int, fmpz_poly]:
        """Return ``(low, p)`` with ``self == var**low * p`` and ``p(0) != 0``."""
        return self._low, self._poly

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        a, b = (self, other) if self._low <= other._low else (other, self)
        d = b._low - a._low
        poly = a._poly + (b._poly.left_shift(d) if d else b._poly)
        return type(self)._raw(a._low, poly)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw(self._low, -self._poly)

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
        if self.is_zero() or other.is_zero():
            return type(self)._raw(0, _ZERO)
        return type(self)._raw(self._low + other._low, self._poly * other._poly)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-monomial")
            c = int(self._poly[0])
            if abs(c) != 1:
                raise ValueError("negative power of a non-unit monomial")
            return type(self)._raw(self._low * k, fmpz_poly([c ** (-k)]))
        return type(self)._raw(self._low * k, self._poly**k)

    def exact_div(self, other):
        """Exact quotient; raises ``ArithmeticError`` if ``other`` does not divide."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        q, r = divmod(self._poly, other._poly)
        if not r.is_zero() or (q * other._poly) != self._poly:
            raise ArithmeticError("inexact Laurent polynomial division")
        return type(self)._raw(self._low - other._low, q)

    def bar(self):
        """Substitute ``var -> var**-1``."""
        if self.is_zero():
            return self
        deg = self._poly.degree()
        rev = fmpz_poly(list(reversed(self._poly.coeffs())))
        return type(self)._raw(-self._low - deg, rev)

    def evaluate(self, value) -> Fraction:
        """Exact value at a nonzero rational point."""
        x = fmpq(*_as_pq(value))
        v = self._poly(x)
        v = v * x**self._low if self._low >= 0 else v / x ** (-self._low)
        return _to_fraction(v)

    # -- comparison / hashing --------------------------------------------------

    def _key(self):
        return (self._low, tuple(int(c) for c in self._poly.coeffs()))

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._low == other._low and self._poly == other._poly

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.var, self._key()))
        return self._hash

    # -- rendering ------------------------------------------------------------

    def __str__(self) -> str:
        terms = self.terms
        if not terms:
            return "0"
        out = []
        for i, (e, c) in enumerate(terms.items()):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            elif mag == 1:
                body = f"{self.var}^{e}"
            else:
                body = f"{mag}*{self.var}^{e}"
            if i == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self})"

    def to_json(self) -> dict:
        return {"var": self.var, "terms": [[e, str(c)] for e, c in self.terms.items()]}

    @classmethod
    def from_json(cls, data: dict):
        if data.get("var", cls.var) != cls.var:
            raise ValueError(f"expected variable {cls.var!r}, got {data['var']!r}")
        return cls({int(e): int(c) for e, c in data["terms"]})


def _as_pq(value) -> tuple[int, int]:
    f = Fraction(value)
    if f == 0:
        raise ZeroDivisionError("cannot evaluate a Laurent polynomial at 0")
    return f.numerator, f.denominator


class LaurentPoly(_Laurent):
    """Laurent polynomial in ``A`` with integer coefficients."""

    __slots__ = ()
    var = "A"

    def substitute_power(self, k: int) -> "LaurentPoly":
        """Return ``p(A**k)``."""
        if k <= 0:
            raise ValueError("power must be positive")
        if self.is_zero() or k == 1:
            return self
        return LaurentPoly._raw(self._low * k, self._poly.inflate(k))


class DeltaPoly(_Laurent):
    """Polynomial in the abstract loop value ``delta``."""

    __slots__ = ()
    var = "delta"

    def to_laurent(self) -> LaurentPoly:
        """Substitute ``delta = -A**2 - A**-2``."""
        if self._low < 0:
            raise ValueError("negative powers of delta have no Laurent image")
        result = LaurentPoly(0)
        for c in reversed(self._poly.coeffs()):
            result = result * DELTA + int(c)
        return result * DELTA**self._low


def laurent_to_delta(x: LaurentPoly) -> "DeltaPoly | None":
    """Write ``x`` as a polynomial in ``delta``, or return ``None`` if that is impossible.

    Possible exactly when ``x`` has even exponents only and is invariant under ``A -> A^-1``.
    """
    terms = x.terms
    if any(e % 2 or terms.get(-e) != c for e, c in terms.items()):
        return None
    rest = {e // 2: c for e, c in terms.items()}
    out: dict[int, int] = {}
    top = max(rest, default=0)
    # peel off (y + 1/y)^d from the top, where y = A^2 and delta = -(y + 1/y)
    for d in range(top, -1, -1):
        c = rest.get(d, 0)
        if not c:
            continue
        out[d] = c if d % 2 == 0 else -c
        for i in range(d + 1):
            e = d - 2 * i
            rest[e] = rest.get(e, 0) - c * comb(d, i)
    if any(rest.values()):
        return None
    return DeltaPoly(out)


A = LaurentPoly({1: 1})
DELTA = LaurentPoly({-2: -1, 2: -1})
D_VAR = DeltaPoly({1: 1})


class RationalFunc:
    """Reduced fraction of Laurent polynomials in ``A``.

    The numerator and denominator share no nonunit factor, the denominator is
    an honest polynomial with a nonzero constant term, and that constant term
    is positive.  Equal fractions therefore have identical representations.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: LaurentPoly | int, den: LaurentPoly | int = 1):
        num = LaurentPoly._coerce(num)
        den = LaurentPoly._coerce(den)
        if num is NotImplemented or den is NotImplemented:
            raise TypeError("RationalFunc needs LaurentPoly or int arguments")
        self.num, self.den = _reduce(num, den)
        self._hash = None

    @classmethod
    def _raw(cls, num: LaurentPoly, den: LaurentPoly) -> "RationalFunc":
        obj = object.__new__(cls)
        obj.num, obj.den, obj._hash = num, den, None
        return obj

    @classmethod
    def _coerce(cls, other):
        if isinstance(other, RationalFunc):
            return other
        if isinstance(other, (int, LaurentPoly)):
            return cls._raw(LaurentPoly._coerce(other), _ONE_LP)
        return NotImplemented

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        if self.den.is_one() and other.den.is_one():
            return RationalFunc._raw(self.num + other.num, _ONE_LP)
        if self.den == other.den:
            return RationalFunc(self.num + other.num, self.den)
        g = _poly_gcd(self.den, other.den)
        if g.is_one():
            return RationalFunc(self.num * other.den + other.num * self.den, self.den * other.den)
        d1 = self.den.exact_div(g)
        d2 = other.den.exact_div(g)
        return RationalFunc(self.num * d2 + other.num * d1, d1 * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunc._raw(-self.num, self.den)

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
            return _ZERO_RF
        if self.den.is_one() and other.den.is_one():
            return RationalFunc._raw(self.num * other.num, _ONE_LP)
        # cross-cancel so the product is already reduced
        g1 = _poly_gcd(self.num, other.den)
        g2 = _poly_gcd(other.num, self.den)
        n1, d2 = (self.num, other.den) if g1.is_one() else (self.num.exact_div(g1), other.den.exact_div(g1))
        n2, d1 = (other.num, self.den) if g2.is_one() else (other.num.exact_div(g2), self.den.exact_div(g2))
        return RationalFunc(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        return RationalFunc(self.den, self.num)

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
        return RationalFunc._raw(self.num**k, self.den**k)

    def bar(self) -> "RationalFunc":
        """Substitute ``A -> A**-1``."""
        return RationalFunc(self.num.bar(), self.den.bar())

    def evaluate(self, value) -> Fraction:
        d = self.den.evaluate(value)
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at A = {value}")
        return self.num.evaluate(value) / d

    def cross_equal(self, other) -> bool:
        """Equality by cross-multiplication, independent of normal forms."""
        other = self._coerce(other)
        return self.num * other.den == other.num * self.den

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __str__(self) -> str:
        if self.den.is_one():
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __repr__(self) -> str:
        return f"RationalFunc({self})"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "RationalFunc":
        return cls(LaurentPoly.from_json(data["num"]), LaurentPoly.from_json(data["den"]))


_ONE_LP = LaurentPoly(1)
_ZERO_RF = RationalFunc._raw(LaurentPoly(0), _ONE_LP)


def _poly_gcd(x: LaurentPoly, y: LaurentPoly) -> LaurentPoly:
    # gcd of the shifted polynomials; units A**k are ignored
    return LaurentPoly._raw(0, x._poly.gcd(y._poly))


def _reduce(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    if den.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if num.is_zero():
        return LaurentPoly(0), _ONE_LP
    ln, pn = num.shifted_poly()
    ld, pd = den.shifted_poly()
    if not pd.is_one():
        g = pn.gcd(pd)
        if not g.is_one():
            pn = divmod(pn, g)[0]
            pd = divmod(pd, g)[0]
        if pd[0] < 0:
            pn, pd = -pn, -pd
    return LaurentPoly._raw(ln - ld, pn), LaurentPoly._raw(0, pd)


Scalar = Union[int, LaurentPoly, RationalFunc]


def as_rational(x: Scalar) -> RationalFunc:
    r = RationalFunc._coerce(x)
    if r is NotImplemented:
        raise TypeError(f"cannot use {type(x).__name__} as a coefficient")
    return r


# -- operations ---------------------------------------------------------------


def laurent_arithmetic(x: LaurentPoly, y: LaurentPoly, op: str) -> LaurentPoly:
    """Apply ``op`` in ``{"add", "sub", "mul"}`` to two Laurent polynomials."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown operation {op!r}")


def rational_reduce(num: LaurentPoly | int, den: LaurentPoly | int) -> RationalFunc:
    return RationalFunc(num, den)


@lru_cache(maxsize=None)
def delta(n: int) -> LaurentPoly:
    """Quantum integer ``Delta_n`` via ``Delta_{m+1} = delta*Delta_m - Delta_{m-1}``."""
    if n < -1:
        raise ValueError(f"Delta_n is defined for n >= -1, got {n}")
    if n == -1:
        return LaurentPoly(0)
    if n == 0:
        return LaurentPoly(1)
    return DELTA * delta(n - 1) - delta(n - 2)


@lru_cache(maxsize=None)
def delta_in_delta_var(n: int) -> DeltaPoly:
    """``Delta_n`` as a polynomial in the loop value ``delta``."""
    if n < -1:
        raise ValueError(f"Delta_n is defined for n >= -1, got {n}")
    if n == -1:
        return DeltaPoly(0)
    if n == 0:
        return DeltaPoly(1)
    return D_VAR * delta_in_delta_var(n - 1) - delta_in_delta_var(n - 2)


def _check_adjacent(a: int, b: int) -> None:
    if a < 0 or b < 0 or abs(a - b) != 1:
        raise ValueError(f"colors {a}, {b} are not adjacent non-negative integers")


def theta_edge(a_from: int, a_to: int) -> LaurentPoly:
    """``theta(a_to, a_from, 1)``: the larger of the two colors' ``Delta``."""
    _check_adjacent(a_from, a_to)
    return delta(max(a_from, a_to))


def step_ratio(a_i: int, a_next: int) -> RationalFunc:
    """``theta(a_next, a_i, 1) / Delta_{a_next}``: 1 going up, ``Delta_a/Delta_{a-1}`` going down."""
    _check_adjacent(a_i, a_next)
    if a_next == a_i + 1:
        return RationalFunc(1)
    return RationalFunc(delta(a_i), delta(a_next))


def delta_closed_form(n: int) -> RationalFunc:
    """``(-1)^n (A^{2(n+1)} - A^{-2(n+1)}) / (A^2 - A^{-2})`` by exact division."""
    top = LaurentPoly({2 * (n + 1): 1, -2 * (n + 1): -1})
    bottom = LaurentPoly({2: 1, -2: -1})
    return RationalFunc(top * (-1) ** n, bottom)


def product(values: Iterable[Scalar]) -> RationalFunc:
    out = RationalFunc(1)
    for v in values:
        out = out * v
    return out

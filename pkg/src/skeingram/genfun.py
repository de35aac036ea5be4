"""Truncated generating functions for k-down step statistics.

Series are power series in ``x`` truncated above a fixed order, with
coefficients in ``Z[q]`` (flint ``fmpz_poly`` in ``q``).  ``C`` is the Catalan
series, ``C_k`` marks k-down steps of Dyck paths with ``q``, and ``C_{k,h}``
does the same for paths ending at height ``h``.

Convention: ``C_0`` stands for ``q * C``.  This makes ``C_k = 1/(1 - x^2 C_{k-1})``
hold for every ``k >= 1`` (the first-return step of a path is a 1-down step).
"""

from __future__ import annotations

from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

from flint import fmpz_poly

__all__ = [
    "QPoly",
    "IntPoly",
    "TruncSeries",
    "chebyshev_u",
    "catalan_series",
    "ck_series",
    "ck_closed_series",
    "ckh_series",
    "ckh_recurrence_series",
    "derivative_identity_series",
    "down_step_count_gf",
    "histogram",
    "corollary_count",
]

QPoly = fmpz_poly
IntPoly = fmpz_poly

_ZERO = fmpz_poly(0)
_ONE = fmpz_poly(1)
_Q = fmpz_poly([0, 1])


class TruncSeries:
    """Power series in ``x`` with ``Z[q]`` coefficients, kept up to ``x^order``."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable = ()):
        if order < 0:
            raise ValueError("order must be non-negative")
        cs = [fmpz_poly(c) if not isinstance(c, fmpz_poly) else c for c in coeffs][: order + 1]
        cs += [_ZERO] * (order + 1 - len(cs))
        self.order = order
        self.coeffs = tuple(cs)

    @classmethod
    def constant(cls, order: int, c=1) -> "TruncSeries":
        return cls(order, [c])

    @classmethod
    def monomial(cls, order: int, power: int, c=1) -> "TruncSeries":
        return cls(order, [_ZERO] * power + [c]) if power <= order else cls(order)

    def _check(self, other: "TruncSeries") -> None:
        if self.order != other.order:
            raise ValueError("series have different truncation orders")

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        return TruncSeries(self.order, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        return TruncSeries(self.order, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "TruncSeries":
        return TruncSeries(self.order, [-a for a in self.coeffs])

    def __mul__(self, other) -> "TruncSeries":
        if not isinstance(other, TruncSeries):
            c = fmpz_poly(other) if not isinstance(other, fmpz_poly) else other
            return TruncSeries(self.order, [a * c for a in self.coeffs])
        self._check(other)
        n = self.order
        out = [_ZERO] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j in range(n + 1 - i):
                b = other.coeffs[j]
                if b != 0:
                    out[i + j] += a * b
        return TruncSeries(n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "TruncSeries":
        out = TruncSeries.constant(self.order)
        for _ in range(k):
            out = out * self
        return out

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by ``x^k``."""
        return TruncSeries(self.order, [_ZERO] * k + list(self.coeffs))

    def inverse(self) -> "TruncSeries":
        c0 = self.coeffs[0]
        if c0 not in (_ONE, -_ONE):
            raise ZeroDivisionError("constant term is not a unit")
        n = self.order
        inv = [_ZERO] * (n + 1)
        inv[0] = c0
        for m in range(1, n + 1):
            acc = _ZERO
            for i in range(1, m + 1):
                if self.coeffs[i] != 0:
                    acc += self.coeffs[i] * inv[m - i]
            inv[m] = -acc * c0
        return TruncSeries(n, inv)

    def __truediv__(self, other: "TruncSeries") -> "TruncSeries":
        return self * other.inverse()

    def coefficient(self, n: int) -> fmpz_poly:
        return self.coeffs[n] if 0 <= n <= self.order else _ZERO

    def at_q(self, q: int) -> list[int]:
        """Coefficient list with ``q`` specialised to an integer."""
        return [int(c(q)) for c in self.coeffs]

    def d_dq_at_1(self) -> list[int]:
        """Coefficients of ``d/dq`` evaluated at ``q = 1``."""
        return [int(c.derivative()(1)) if c != 0 else 0 for c in self.coeffs]

    def q_free(self) -> "TruncSeries":
        return TruncSeries(self.order, [fmpz_poly(int(c(1))) for c in self.coeffs])

    def __eq__(self, other) -> bool:
        return isinstance(other, TruncSeries) and self.order == other.order and self.coeffs == other.coeffs

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"TruncSeries(order={self.order}, coeffs={[str(c) for c in self.coeffs]})"

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "coeffs": [{"q_terms": [[m, str(int(c))] for m, c in enumerate(p) if c != 0]} for p in self.coeffs],
        }


def _fixed_point(order: int, step) -> TruncSeries:
    """Iterate ``x -> step(x)`` from 1 until stable; each pass fixes at least one more x-degree."""
    cur = TruncSeries.constant(order)
    for _ in range(order + 2):
        nxt = step(cur)
        if nxt == cur:
            return cur
        cur = nxt
    raise RuntimeError("fixed-point iteration did not stabilise")


# -- Chebyshev -------------------------------------------------------------------------


@lru_cache(maxsize=None)
def chebyshev_u(m: int) -> IntPoly:
    """Chebyshev polynomial of the second kind, ``U_m = 2t U_{m-1} - U_{m-2}``."""
    if m < -1:
        raise ValueError("U_m is defined here for m >= -1")
    if m == -1:
        return fmpz_poly(0)
    if m == 0:
        return fmpz_poly(1)
    return fmpz_poly([0, 2]) * chebyshev_u(m - 1) - chebyshev_u(m - 2)


def _reciprocal_chebyshev(m: int) -> fmpz_poly:
    """``x^m U_m(1/(2x))`` as an integer polynomial in ``x`` with constant term 1."""
    if m == -1:
        return fmpz_poly(0)
    u = chebyshev_u(m)
    coeffs = [0] * (m + 1)
    for i, c in enumerate(u):
        if c:
            q, r = divmod(int(c), 2**i)
            if r:
                raise ArithmeticError("Chebyshev coefficient not divisible by the expected power of 2")
            coeffs[m - i] = q
    return fmpz_poly(coeffs)


def _from_poly(order: int, p: fmpz_poly) -> TruncSeries:
    return TruncSeries(order, [int(c) for c in p])


# -- the series ----------------------------------------------------------------------------


@lru_cache(maxsize=None)
def catalan_series(order: int) -> TruncSeries:
    """``C = 1 + x^2 C^2``, the Catalan numbers on even powers of ``x``."""
    one = TruncSeries.constant(order)
    return _fixed_point(order, lambda c: one + (c * c).shift(2))


@lru_cache(maxsize=None)
def _c0(order: int) -> TruncSeries:
    return catalan_series(order) * _Q


@lru_cache(maxsize=None)
def ck_series(k: int, order: int) -> TruncSeries:
    """``C_k`` from its fixed-point equation ``C_k = 1 + x^2 C_{k-1} C_k``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    prev = _c0(order) if k == 1 else ck_series(k - 1, order)
    one = TruncSeries.constant(order)
    return _fixed_point(order, lambda c: one + (prev * c).shift(2))


def _c_sub(j: int, order: int) -> TruncSeries:
    return _c0(order) if j == 0 else ck_series(j, order)


def ck_closed_series(k: int, order: int) -> TruncSeries:
    """Chebyshev closed form of ``C_k`` after clearing powers of ``x``.

    ``(P_{k-1} - q x^2 P_{k-2} C) / (P_k - q x^2 P_{k-1} C)`` with ``P_m = x^m U_m(1/(2x))``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    c = catalan_series(order)
    p = {m: _from_poly(order, _reciprocal_chebyshev(m)) for m in (k - 2, k - 1, k)}
    num = p[k - 1] - (p[k - 2] * c * _Q).shift(2)
    den = p[k] - (p[k - 1] * c * _Q).shift(2)
    if den.coefficient(0) != _ONE:
        raise ArithmeticError("cleared denominator does not start with 1")
    return num / den


@lru_cache(maxsize=None)
def ckh_series(k: int, h: int, order: int) -> TruncSeries:
    """``C_{k,h}`` from the product forms.

    For ``k > h``: ``x^h / prod_{j=k-1-h}^{k-1} (1 - x^2 C_j)``.
    For ``k <= h``: ``x^h C^{h-k+1} / prod_{j=0}^{k-1} (1 - x^2 C_j)``.
    """
    if k < 0 or h < 0:
        raise ValueError("k and h must be non-negative")
    one = TruncSeries.constant(order)
    out = TruncSeries.monomial(order, h)
    if k > h:
        js = range(k - 1 - h, k)
    else:
        js = range(0, k)
        out = out * catalan_series(order) ** (h - k + 1)
    for j in js:
        out = out / (one - _c_sub(j, order).shift(2))
    return out


@lru_cache(maxsize=None)
def ckh_recurrence_series(k: int, h: int, order: int) -> TruncSeries:
    """``C_{k,h}`` from the first-return recurrence ``C_{k,h} = x C_{k-1,h-1} + x^2 C_{k-1} C_{k,h}``.

    ``C_{0,h}`` is the q-free series of paths ending at ``h``; in the ``x^2`` term
    ``C_{k-1}`` for ``k = 1`` is ``q C``.
    """
    if k < 0 or h < 0:
        raise ValueError("k and h must be non-negative")
    if k == 0:
        first = ckh_recurrence_series(0, h - 1, order).shift(1) if h else TruncSeries.constant(order)
        inner = catalan_series(order)
    else:
        if h == 0:
            return ck_series(k, order)
        first = ckh_recurrence_series(k - 1, h - 1, order).shift(1)
        inner = _c_sub(k - 1, order)
    return _fixed_point(order, lambda c: first + (inner * c).shift(2))


def derivative_identity_series(k: int, order: int) -> TruncSeries:
    """``x^{2k} C^{2k+1}``, the q-derivative of ``C_k`` at ``q = 1``."""
    return (catalan_series(order) ** (2 * k + 1)).shift(2 * k)


def histogram(n: int, h: int, k: int) -> dict[int, int]:
    """Number of paths of ``(n, h)`` with exactly ``m`` k-down steps, read off the series."""
    c = ckh_series(k, h, n).coefficient(n)
    return {m: int(v) for m, v in enumerate(c) if v != 0}


def down_step_count_gf(n: int, h: int, k: int) -> int:
    """Total k-down steps over ``(n, h)`` paths: ``[x^n] d/dq C_{k,h}`` at ``q = 1``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if n < 0 or h < 0:
        return 0
    return ckh_series(k, h, n).d_dq_at_1()[n]


def corollary_count(n: int, k: int) -> int:
    """``(2k+1)/(2n+1) * C(2n+1, n+k+1)``: k-down steps over all Dyck paths of length ``2n``."""
    if n < 0 or k < 1:
        raise ValueError("need n >= 0 and k >= 1")
    num = (2 * k + 1) * comb(2 * n + 1, n + k + 1)
    q, r = divmod(num, 2 * n + 1)
    if r:
        raise ArithmeticError("count is not an integer")
    return q

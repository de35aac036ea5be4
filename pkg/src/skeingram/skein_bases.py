"""Step tuples and the two bases of the relative skein module of the square.

A step tuple ``(a_1, ..., a_n)`` starts at 1, moves by one at each step, stays
non-negative and ends at ``h``.  It labels a crossing-free diagram ``B`` (with a
single ``f_h`` on the top boundary) and a trivalent chain ``D`` (with ``f_{a_i}``
on every edge).  Both are expanded as :class:`TLElement` objects from ``n``
bottom points to ``h`` top points.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Callable, Iterator, Mapping, Sequence

from .exact_algebra import RationalFunc
from .tl_core import (
    PlanarMatching,
    TLElement,
    compose,
    cup,
    identity,
    jones_wenzl_or_empty,
    tensor,
)

__all__ = [
    "StepTuple",
    "Comparison",
    "enumerate_tuples",
    "compare_tuples",
    "tuple_to_matching",
    "matching_to_tuple",
    "b_element",
    "b_prime_element",
    "d_element",
    "d_coordinates",
    "cup_coefficients",
    "dimension",
]


@dataclass(frozen=True, order=True)
class StepTuple:
    n: int
    h: int
    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != self.n or self.n < 1:
            raise ValueError(f"expected {self.n} values, got {len(vals)}")
        if vals[0] != 1:
            raise ValueError("a step tuple starts at 1")
        if vals[-1] != self.h:
            raise ValueError(f"a step tuple for h={self.h} must end at {self.h}")
        if any(v < 0 for v in vals):
            raise ValueError("step tuple values are non-negative")
        if any(abs(x - y) != 1 for x, y in zip(vals, vals[1:])):
            raise ValueError("consecutive values must differ by one")

    @classmethod
    def of(cls, values: Sequence[int]) -> "StepTuple":
        vals = tuple(values)
        if not vals:
            raise ValueError("empty step tuple")
        return cls(len(vals), vals[-1], vals)

    @classmethod
    def from_text(cls, text: str) -> "StepTuple":
        return cls.of(int(v) for v in text.split(","))

    def to_text(self) -> str:
        return ",".join(map(str, self.values))

    def to_json(self) -> dict:
        return {"n": self.n, "h": self.h, "a": list(self.values)}

    @classmethod
    def from_json(cls, data: Mapping) -> "StepTuple":
        return cls(data["n"], data["h"], tuple(data["a"]))

    def heights(self) -> tuple[int, ...]:
        """Height sequence of the corresponding Dyck path, starting at 0."""
        return (0,) + self.values

    def __str__(self) -> str:
        return f"({self.to_text()})"


class Comparison(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def dimension(n: int, h: int) -> int:
    """Number of step tuples of length ``n`` ending at ``h``."""
    if h < 0 or h > n or (n - h) % 2:
        return 0
    top = (n + h) // 2
    return comb(n, top) - (comb(n, top + 1) if top + 1 <= n else 0)


def _tuples(n: int, h: int) -> Iterator[tuple[int, ...]]:
    vals = [0] * n

    def rec(i: int, a: int) -> Iterator[tuple[int, ...]]:
        vals[i] = a
        if i == n - 1:
            if a == h:
                yield tuple(vals)
            return
        remaining = n - 1 - i
        for b in (a + 1, a - 1):
            if b >= 0 and abs(b - h) <= remaining - 1:
                yield from rec(i + 1, b)

    if n >= 1 and abs(1 - h) <= n - 1:
        yield from rec(0, 1)


def enumerate_tuples(n: int, h: int) -> list[StepTuple]:
    """All step tuples for ``(n, h)``, lexicographically largest first."""
    if n < 1 or h < 0 or h > n or (n - h) % 2:
        return []
    # trying the up step first yields descending lexicographic order directly
    return [StepTuple(n, h, v) for v in _tuples(n, h)]


def compare_tuples(s: StepTuple, t: StepTuple) -> Comparison:
    if (s.n, s.h) != (t.n, t.h):
        raise ValueError("tuples belong to different (n, h)")
    for x, y in zip(s.values, t.values):
        if x != y:
            return Comparison.GREATER if x > y else Comparison.LESS
    return Comparison.EQUAL


@lru_cache(maxsize=None)
def tuple_to_matching(t: StepTuple) -> PlanarMatching:
    """Crossing-free diagram of ``t``: each down step closes the nearest open point."""
    n, h = t.n, t.h
    partners = [-1] * (n + h)
    open_points: list[int] = []
    prev = 0
    for i, a in enumerate(t.values):
        if a > prev:
            open_points.append(i)
        else:
            j = open_points.pop()
            partners[i], partners[j] = j, i
        prev = a
    for top, i in enumerate(open_points):
        partners[i], partners[n + top] = n + top, i
    return PlanarMatching(n, h, partners, check=False)


def matching_to_tuple(m: PlanarMatching) -> StepTuple:
    """Inverse of :func:`tuple_to_matching` on diagrams without top-top arcs."""
    n = m.n_bottom
    a, vals = 0, []
    for i in range(n):
        p = m.partners[i]
        if p < i:
            a -= 1
        else:
            a += 1
        vals.append(a)
    if m.top_arcs():
        raise ValueError("diagram has an arc between top points")
    return StepTuple(n, m.n_top, tuple(vals))


def b_prime_element(t: StepTuple) -> TLElement:
    return TLElement.from_matching(tuple_to_matching(t))


def b_element(t: StepTuple) -> TLElement:
    return compose(b_prime_element(t), jones_wenzl_or_empty(t.h))


def d_element(t: StepTuple) -> TLElement:
    """Literal expansion of the trivalent chain, built left to right."""
    x = identity(1)
    prev = 1
    for a in t.values[1:]:
        x = tensor(x, identity(1))
        if a < prev:
            x = compose(x, tensor(identity(prev - 1), cup()))
        x = compose(x, jones_wenzl_or_empty(a))
        prev = a
    return x


# -- fast coordinates of D in the B basis ---------------------------------------------


@lru_cache(maxsize=None)
def cup_coefficients(a: int) -> tuple[RationalFunc, ...]:
    """Weights ``w_j`` with ``(f_a x 1)(1^{a-1} x cup) f_{a-1} = sum_j w_j u_j f_{a-1}``.

    ``u_j`` caps bottom points ``j, j+1`` of ``a+1`` strands and runs the rest straight up.
    Diagrams with an arc between top points vanish against ``f_{a-1}``.
    """
    if a < 1:
        raise ValueError("need a >= 1")
    v = compose(tensor(jones_wenzl_or_empty(a), identity(1)), tensor(identity(a - 1), cup()))
    out = []
    for j in range(1, a + 1):
        out.append(v.coefficient(_cap_pair_matching(a + 1, j)))
    for m in v.combo:
        if not m.top_arcs() and m not in {_cap_pair_matching(a + 1, j) for j in range(1, a + 1)}:
            raise AssertionError("unexpected diagram in cup expansion")
    return tuple(out)


def _cap_pair_matching(strands: int, j: int) -> PlanarMatching:
    """``strands -> strands - 2`` diagram joining bottom ``j, j+1`` (1-based)."""
    nb, nt = strands, strands - 2
    partners = [-1] * (nb + nt)
    partners[j - 1], partners[j] = j, j - 1
    top = nb
    for i in range(nb):
        if partners[i] < 0:
            partners[i], partners[top] = top, i
            top += 1
    return PlanarMatching(nb, nt, partners, check=False)


def _step_up(bottoms: tuple[int, ...], i: int) -> tuple[int, ...]:
    return bottoms + (i,)


def _step_down(bottoms: tuple[int, ...], i: int, j: int) -> tuple[tuple[int, int], tuple[int, ...]]:
    """Join top ``j, j+1`` after adding strand ``i``; return the new arc and remaining tops."""
    ext = bottoms + (i,)
    return (ext[j - 1], ext[j]), ext[: j - 1] + ext[j + 1 :]


def d_coordinates(
    n: int,
    h: int,
    scalar: Callable[[RationalFunc], object] | None = None,
) -> dict[StepTuple, dict[StepTuple, object]]:
    """Coordinates of every ``D_t`` in the basis ``B_s``.

    Uses ``f_{a+1}`` absorbing ``f_a x 1`` on up steps and :func:`cup_coefficients`
    on down steps, sharing work across common prefixes.  ``scalar`` maps the
    rational-function weights into another ring (for exact evaluation at a point).
    """
    conv = scalar or (lambda c: c)
    tuples = enumerate_tuples(n, h)
    if not tuples:
        return {}
    weights: dict[int, list] = {}

    def w(a: int) -> list:
        if a not in weights:
            weights[a] = [conv(c) for c in cup_coefficients(a)]
        return weights[a]

    # a state is a map from (bottom arcs, tops) to coefficient; tops lists bottom
    # points wired to the top in order, so the state determines a matching
    results: dict[tuple[int, ...], dict] = {}

    def to_tuple(arcs: frozenset, tops: tuple[int, ...], length: int) -> StepTuple:
        partners = [-1] * (length + len(tops))
        for p, q in arcs:
            partners[p], partners[q] = q, p
        for k, b in enumerate(tops):
            partners[b], partners[length + k] = length + k, b
        return matching_to_tuple(PlanarMatching(length, len(tops), partners, check=False))

    one = conv(RationalFunc(1))
    stack = [((1,), {(frozenset(), (0,)): one})]
    targets = {t.values for t in tuples}
    prefixes = {t.values[:k] for t in tuples for k in range(1, n + 1)}
    while stack:
        prefix, state = stack.pop()
        i = len(prefix)
        if i == n:
            if prefix in targets:
                results[prefix] = state
            continue
        a = prefix[-1]
        for b in (a + 1, a - 1):
            nxt = prefix + (b,)
            if nxt not in prefixes:
                continue
            new: dict = {}
            if b > a:
                for (arcs, tops), c in state.items():
                    new[(arcs, _step_up(tops, i))] = c
            else:
                ws = w(a)
                for (arcs, tops), c in state.items():
                    for j in range(1, a + 1):
                        wj = ws[j - 1]
                        if not wj:
                            continue
                        arc, rest = _step_down(tops, i, j)
                        key = (arcs | {arc}, rest)
                        val = c * wj
                        prev = new.get(key)
                        new[key] = val if prev is None else prev + val
                new = {k: v for k, v in new.items() if v}
            stack.append((nxt, new))

    out: dict[StepTuple, dict[StepTuple, object]] = {}
    for t in tuples:
        state = results[t.values]
        out[t] = {to_tuple(arcs, tops, n): c for (arcs, tops), c in state.items()}
    return out

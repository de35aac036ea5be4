"""Temperley-Lieb diagram algebra.

A :class:`PlanarMatching` with ``n_bottom`` bottom points and ``n_top`` top
points is stored as a partner tuple over ``0 .. n_bottom + n_top - 1``: bottom
points come first, left to right, then top points, left to right.  Elements of
the algebra (:class:`TLElement`) are finite linear combinations of matchings
with :class:`RationalFunc` coefficients.  Composition ``compose(x, y)`` puts
``y`` on top of ``x``, every closed loop contributing a factor ``delta``.
"""

from __future__ import annotations

from collections import deque
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from .exact_algebra import (
    A,
    DELTA,
    LaurentPoly,
    RationalFunc,
    _poly_gcd,
    as_rational,
    delta,
)

__all__ = [
    "PlanarMatching",
    "TLElement",
    "TangleWord",
    "identity",
    "generator_e",
    "cup",
    "cap",
    "compose",
    "compose_via_generators",
    "tensor",
    "mirror",
    "trace_closure",
    "jones_wenzl",
    "bracket_evaluate",
    "all_matchings",
]


class PlanarMatching:
    """Non-crossing perfect matching of ``n_bottom`` + ``n_top`` boundary points."""

    __slots__ = ("n_bottom", "n_top", "partners", "_hash")

    def __init__(self, n_bottom: int, n_top: int, partners: Sequence[int], *, check: bool = True):
        self.n_bottom = n_bottom
        self.n_top = n_top
        self.partners = tuple(partners)
        self._hash = hash((n_bottom, n_top, self.partners))
        if check:
            self._validate()

    def _validate(self) -> None:
        nb, nt, p = self.n_bottom, self.n_top, self.partners
        size = nb + nt
        if nb < 0 or nt < 0 or size % 2:
            raise ValueError(f"cannot match {nb} bottom and {nt} top points")
        if len(p) != size:
            raise ValueError("partner list has the wrong length")
        for i, j in enumerate(p):
            if not 0 <= j < size or j == i or p[j] != i:
                raise ValueError(f"not a perfect matching: {p}")
        # stack scan around the boundary: bottom left-to-right, then top right-to-left
        order = list(range(nb)) + list(range(size - 1, nb - 1, -1))
        pos = {pt: k for k, pt in enumerate(order)}
        stack: list[int] = []
        for pt in order:
            mate = p[pt]
            if pos[mate] > pos[pt]:
                stack.append(pt)
            elif not stack or stack.pop() != mate:
                raise ValueError(f"matching {self.to_text()} has crossing arcs")

    @classmethod
    def from_pairs(cls, n_bottom: int, n_top: int, pairs: Iterable[tuple[int, int]]) -> "PlanarMatching":
        """Build from 1-based point pairs (bottom ``1..n_bottom``, top after them)."""
        size = n_bottom + n_top
        partners = [-1] * size
        for a, b in pairs:
            partners[a - 1] = b - 1
            partners[b - 1] = a - 1
        if -1 in partners:
            raise ValueError("some points are unmatched")
        return cls(n_bottom, n_top, partners)

    def pairs(self) -> list[tuple[int, int]]:
        return [(i + 1, j + 1) for i, j in enumerate(self.partners) if i < j]

    def through_strands(self) -> int:
        nb = self.n_bottom
        return sum(1 for i in range(nb) if self.partners[i] >= nb)

    def top_arcs(self) -> int:
        nb = self.n_bottom
        return sum(1 for i in range(nb, nb + self.n_top) if self.partners[i] >= nb) // 2

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PlanarMatching)
            and self.n_bottom == other.n_bottom
            and self.n_top == other.n_top
            and self.partners == other.partners
        )

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "PlanarMatching") -> bool:
        return (self.n_bottom, self.n_top, self.partners) < (other.n_bottom, other.n_top, other.partners)

    def to_text(self) -> str:
        """Partner lists ``[bottom|top]``, 1-based; the far side is tagged ``b``/``t``."""
        nb = self.n_bottom

        def render(i: int, own_bottom: bool) -> str:
            j = self.partners[i]
            if (j < nb) == own_bottom:
                return str(j + 1 if j < nb else j - nb + 1)
            return f"b{j + 1}" if j < nb else f"t{j - nb + 1}"

        bottom = ",".join(render(i, True) for i in range(nb))
        top = ",".join(render(i, False) for i in range(nb, nb + self.n_top))
        return f"[{bottom}|{top}]"

    @classmethod
    def from_text(cls, text: str) -> "PlanarMatching":
        body = text.strip()
        if not (body.startswith("[") and body.endswith("]")) or "|" not in body:
            raise ValueError(f"bad matching text {text!r}")
        bottom_s, top_s = body[1:-1].split("|")
        bottom = [t for t in bottom_s.split(",") if t]
        top = [t for t in top_s.split(",") if t]
        nb = len(bottom)

        def parse(tok: str, own_bottom: bool) -> int:
            if tok[0] == "b":
                return int(tok[1:]) - 1
            if tok[0] == "t":
                return nb + int(tok[1:]) - 1
            k = int(tok) - 1
            return k if own_bottom else nb + k

        partners = [parse(t, True) for t in bottom] + [parse(t, False) for t in top]
        return cls(nb, len(top), partners)

    def to_json(self) -> dict:
        return {"n_bottom": self.n_bottom, "n_top": self.n_top, "pairs": [list(p) for p in self.pairs()]}

    @classmethod
    def from_json(cls, data: Mapping) -> "PlanarMatching":
        return cls.from_pairs(data["n_bottom"], data["n_top"], [tuple(p) for p in data["pairs"]])

    def __repr__(self) -> str:
        return f"PlanarMatching({self.to_text()})"


# -- raw matching operations ------------------------------------------------------


def _compose_matchings(x: PlanarMatching, y: PlanarMatching) -> tuple[PlanarMatching, int]:
    """Stack ``y`` on ``x``; return the resulting matching and the number of closed loops."""
    n, m, p = x.n_bottom, x.n_top, y.n_top
    xp, yp = x.partners, y.partners
    res = [-1] * (n + p)
    seen = bytearray(m)
    for start in range(n + p):
        if res[start] >= 0:
            continue
        if start < n:
            q = xp[start]
            while True:
                if q < n:
                    end = q
                    break
                j = q - n
                seen[j] = 1
                r = yp[j]
                if r >= m:
                    end = n + r - m
                    break
                seen[r] = 1
                q = xp[n + r]
        else:
            r = yp[m + start - n]
            while True:
                if r >= m:
                    end = n + r - m
                    break
                seen[r] = 1
                q = xp[n + r]
                if q < n:
                    end = q
                    break
                j = q - n
                seen[j] = 1
                r = yp[j]
        res[start] = end
        res[end] = start
    loops = 0
    for j in range(m):
        if seen[j]:
            continue
        loops += 1
        k = j
        while not seen[k]:
            seen[k] = 1
            a = xp[n + k] - n
            seen[a] = 1
            k = yp[a]
    return PlanarMatching(n, p, res, check=False), loops


def _tensor_matchings(x: PlanarMatching, y: PlanarMatching) -> PlanarMatching:
    n1, m1, n2, m2 = x.n_bottom, x.n_top, y.n_bottom, y.n_top
    nb = n1 + n2

    def mx(i: int) -> int:
        return i if i < n1 else nb + i - n1

    def my(i: int) -> int:
        return n1 + i if i < n2 else nb + m1 + i - n2

    res = [0] * (nb + m1 + m2)
    for i, j in enumerate(x.partners):
        res[mx(i)] = mx(j)
    for i, j in enumerate(y.partners):
        res[my(i)] = my(j)
    return PlanarMatching(nb, m1 + m2, res, check=False)


def _mirror_matching(x: PlanarMatching) -> PlanarMatching:
    n, m = x.n_bottom, x.n_top

    def f(i: int) -> int:
        return m + i if i < n else i - n

    res = [0] * (n + m)
    for i, j in enumerate(x.partners):
        res[f(i)] = f(j)
    return PlanarMatching(m, n, res, check=False)


def _closure_loops(x: PlanarMatching) -> int:
    """Loops formed by joining top ``i`` to bottom ``i`` around the side."""
    n = x.n_bottom
    p = x.partners
    seen = bytearray(2 * n)
    loops = 0
    for s in range(2 * n):
        if seen[s]:
            continue
        loops += 1
        k = s
        while not seen[k]:
            seen[k] = 1
            j = p[k]
            seen[j] = 1
            k = j + n if j < n else j - n
    return loops


def all_matchings(n_bottom: int, n_top: int) -> list[PlanarMatching]:
    """Every non-crossing matching of the given boundary, in a fixed order."""
    size = n_bottom + n_top
    if size % 2:
        return []
    # enumerate balanced bracketings of the boundary cycle, then map back to point labels
    order = list(range(n_bottom)) + list(range(size - 1, n_bottom - 1, -1))
    out = []
    cur = [-1] * size

    def rec(i: int, stack: list[int]) -> Iterator[None]:
        if i == size:
            if not stack:
                yield
            return
        if len(stack) < size - i:
            stack.append(i)
            yield from rec(i + 1, stack)
            stack.pop()
        if stack:
            j = stack.pop()
            cur[order[i]], cur[order[j]] = order[j], order[i]
            yield from rec(i + 1, stack)
            stack.append(j)

    for _ in rec(0, []):
        out.append(PlanarMatching(n_bottom, n_top, cur, check=False))
    return sorted(out)


# -- elements of the algebra -------------------------------------------------------


class TLElement:
    """Linear combination of planar matchings sharing one boundary shape."""

    __slots__ = ("n_bottom", "n_top", "combo")

    def __init__(self, n_bottom: int, n_top: int, combo: Mapping[PlanarMatching, object] | None = None):
        self.n_bottom = n_bottom
        self.n_top = n_top
        clean: dict[PlanarMatching, RationalFunc] = {}
        for m, c in (combo or {}).items():
            if (m.n_bottom, m.n_top) != (n_bottom, n_top):
                raise ValueError("matching does not fit the element's boundary")
            c = as_rational(c)
            if c:
                clean[m] = c
        self.combo = clean

    @classmethod
    def _raw(cls, n_bottom: int, n_top: int, combo: dict) -> "TLElement":
        obj = object.__new__(cls)
        obj.n_bottom, obj.n_top, obj.combo = n_bottom, n_top, combo
        return obj

    @classmethod
    def from_matching(cls, m: PlanarMatching, coeff=1) -> "TLElement":
        return cls(m.n_bottom, m.n_top, {m: coeff})

    def coefficient(self, m: PlanarMatching) -> RationalFunc:
        return self.combo.get(m, RationalFunc(0))

    def is_zero(self) -> bool:
        return not self.combo

    def __len__(self) -> int:
        return len(self.combo)

    def _check_shape(self, other: "TLElement") -> None:
        if (self.n_bottom, self.n_top) != (other.n_bottom, other.n_top):
            raise ValueError("elements have different boundaries")

    def __add__(self, other: "TLElement") -> "TLElement":
        self._check_shape(other)
        combo = dict(self.combo)
        for m, c in other.combo.items():
            s = combo.get(m)
            s = c if s is None else s + c
            if s:
                combo[m] = s
            else:
                combo.pop(m, None)
        return TLElement._raw(self.n_bottom, self.n_top, combo)

    def __neg__(self) -> "TLElement":
        return TLElement._raw(self.n_bottom, self.n_top, {m: -c for m, c in self.combo.items()})

    def __sub__(self, other: "TLElement") -> "TLElement":
        return self + (-other)

    def scale(self, c) -> "TLElement":
        c = as_rational(c)
        if not c:
            return TLElement._raw(self.n_bottom, self.n_top, {})
        return TLElement._raw(self.n_bottom, self.n_top, {m: v * c for m, v in self.combo.items()})

    def __rmul__(self, c) -> "TLElement":
        return self.scale(c)

    def __matmul__(self, other: "TLElement") -> "TLElement":
        return compose(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TLElement):
            return NotImplemented
        return (self.n_bottom, self.n_top) == (other.n_bottom, other.n_top) and self.combo == other.combo

    __hash__ = None  # type: ignore[assignment]

    def terms(self) -> list[tuple[PlanarMatching, RationalFunc]]:
        return sorted(self.combo.items(), key=lambda kv: kv[0])

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*{m.to_text()}" for m, c in self.terms()) or "0"
        return f"TLElement({self.n_bottom}->{self.n_top}: {body})"

    def to_json(self) -> dict:
        return {
            "n_bottom": self.n_bottom,
            "n_top": self.n_top,
            "terms": [{"matching": m.to_json(), "coeff": c.to_json()} for m, c in self.terms()],
        }


# -- constructors -------------------------------------------------------------------


def _identity_matching(n: int) -> PlanarMatching:
    return PlanarMatching(n, n, [i + n for i in range(n)] + list(range(n)), check=False)


def identity(n: int) -> TLElement:
    if n < 0:
        raise ValueError("strand count must be non-negative")
    return TLElement._raw(n, n, {_identity_matching(n): RationalFunc(1)})


def _e_matching(n: int, i: int) -> PlanarMatching:
    p = [k + n for k in range(n)] + list(range(n))
    a, b = i - 1, i
    p[a], p[b] = b, a
    p[n + a], p[n + b] = n + b, n + a
    return PlanarMatching(n, n, p, check=False)


def generator_e(n: int, i: int) -> TLElement:
    """Cup-cap generator ``e_i`` of ``TL_n`` (1-based position ``i``)."""
    if not 1 <= i <= n - 1:
        raise ValueError(f"e_{i} is not a generator of TL_{n}")
    return TLElement._raw(n, n, {_e_matching(n, i): RationalFunc(1)})


def cup() -> TLElement:
    """The 2 -> 0 diagram joining two bottom points."""
    return TLElement._raw(2, 0, {PlanarMatching(2, 0, (1, 0)): RationalFunc(1)})


def cap() -> TLElement:
    """The 0 -> 2 diagram joining two top points."""
    return TLElement._raw(0, 2, {PlanarMatching(0, 2, (1, 0)): RationalFunc(1)})


# -- products -------------------------------------------------------------------------


@lru_cache(maxsize=64)
def _delta_power(k: int) -> LaurentPoly:
    return DELTA**k


def _lcm(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    if a == b or b.is_one():
        return a
    if a.is_one():
        return b
    return (a * b).exact_div(_poly_gcd(a, b))


def _common_numerators(x: TLElement) -> tuple[list[tuple[PlanarMatching, LaurentPoly]], LaurentPoly]:
    den = LaurentPoly(1)
    for c in x.combo.values():
        den = _lcm(den, c.den)
    nums = [(m, c.num * den.exact_div(c.den) if not c.den.is_one() else c.num * den) for m, c in x.combo.items()]
    return nums, den


def _collect(n_bottom: int, n_top: int, sums: dict, den: LaurentPoly) -> TLElement:
    combo = {}
    for m, s in sums.items():
        if s:
            combo[m] = RationalFunc(s, den)
    return TLElement._raw(n_bottom, n_top, combo)


def compose(x: TLElement, y: TLElement) -> TLElement:
    """Bilinear stacking of ``y`` on top of ``x``."""
    if x.n_top != y.n_bottom:
        raise ValueError(f"cannot stack a {y.n_bottom}-point bottom on a {x.n_top}-point top")
    xs, dx = _common_numerators(x)
    ys, dy = _common_numerators(y)
    sums: dict[PlanarMatching, LaurentPoly] = {}
    for mx, cx in xs:
        for my, cy in ys:
            m, loops = _compose_matchings(mx, my)
            term = cx * cy
            if loops:
                term = term * _delta_power(loops)
            prev = sums.get(m)
            sums[m] = term if prev is None else prev + term
    return _collect(x.n_bottom, y.n_top, sums, dx * dy)


@lru_cache(maxsize=None)
def _word_tree(n: int) -> dict[PlanarMatching, tuple[PlanarMatching | None, int]]:
    """Spanning tree of ``TL_n`` diagrams: each diagram is its parent times ``e_i`` with no loop."""
    root = _identity_matching(n)
    tree: dict[PlanarMatching, tuple[PlanarMatching | None, int]] = {root: (None, 0)}
    queue = deque([root])
    gens = [_e_matching(n, i) for i in range(1, n)]
    while queue:
        d = queue.popleft()
        for i, g in enumerate(gens, start=1):
            prod, loops = _compose_matchings(d, g)
            if loops == 0 and prod not in tree:
                tree[prod] = (d, i)
                queue.append(prod)
    return tree


def compose_via_generators(x: TLElement, y: TLElement) -> TLElement:
    """Same product as :func:`compose` for square ``y``, computed by right action of generators.

    Each diagram ``w`` in ``y`` is reached from the identity by loop-free
    multiplications with ``e_i``; ``x @ w`` is then built from ``x @ parent``.
    Intermediate products that vanish prune whole subtrees, which makes
    products with Jones-Wenzl idempotents cheap.
    """
    if y.n_bottom != y.n_top:
        return compose(x, y)
    if x.n_top != y.n_bottom:
        raise ValueError("boundary mismatch")
    n = y.n_bottom
    tree = _word_tree(n)
    memo: dict[PlanarMatching, TLElement] = {_identity_matching(n): x}

    def times(w: PlanarMatching) -> TLElement:
        path = []
        while w not in memo:
            parent, i = tree[w]
            path.append((w, i))
            w = parent
        cur = memo[w]
        for node, i in reversed(path):
            cur = cur if cur.is_zero() else compose(cur, generator_e(n, i))
            memo[node] = cur
        return cur

    out = TLElement._raw(x.n_bottom, n, {})
    for w, c in y.terms():
        part = times(w)
        if not part.is_zero():
            out = out + part.scale(c)
    return out


def tensor(x: TLElement, y: TLElement) -> TLElement:
    """Side-by-side juxtaposition, ``x`` on the left."""
    combo: dict[PlanarMatching, RationalFunc] = {}
    for mx, cx in x.combo.items():
        for my, cy in y.combo.items():
            m = _tensor_matchings(mx, my)
            c = cx * cy
            prev = combo.get(m)
            combo[m] = c if prev is None else prev + c
    return TLElement._raw(
        x.n_bottom + y.n_bottom, x.n_top + y.n_top, {m: c for m, c in combo.items() if c}
    )


def mirror(x: TLElement) -> TLElement:
    """Reflect across a horizontal line; coefficients are unchanged."""
    return TLElement._raw(x.n_top, x.n_bottom, {_mirror_matching(m): c for m, c in x.combo.items()})


def trace_closure(x: TLElement) -> RationalFunc:
    """Close every strand around the side and evaluate loops as ``delta``."""
    if x.n_bottom != x.n_top:
        raise ValueError("trace closure needs a square element")
    xs, den = _common_numerators(x)
    total = LaurentPoly(0)
    for m, c in xs:
        total = total + c * _delta_power(_closure_loops(m))
    return RationalFunc(total, den)


@lru_cache(maxsize=None)
def jones_wenzl(n: int) -> TLElement:
    """Jones-Wenzl idempotent ``f_n`` by Wenzl's recursion.

    ``f_n = f' - (Delta_{n-2}/Delta_{n-1}) f' e_{n-1} f'`` with ``f' = f_{n-1}`` beside a strand.
    """
    if n < 1:
        raise ValueError("f_n needs n >= 1")
    if n == 1:
        return identity(1)
    f_prev = tensor(jones_wenzl(n - 1), identity(1))
    middle = compose_via_generators(compose(f_prev, generator_e(n, n - 1)), f_prev)
    return f_prev - middle.scale(RationalFunc(delta(n - 2), delta(n - 1)))


def jones_wenzl_or_empty(n: int) -> TLElement:
    """``f_n`` with the convention that ``f_0`` is the empty diagram."""
    return identity(0) if n == 0 else jones_wenzl(n)


# -- crossings --------------------------------------------------------------------------


class TangleWord:
    """Word in ``E(i)``, ``S+(i)``, ``S-(i)`` on ``n`` strands, read bottom to top."""

    KINDS = ("E", "S+", "S-")

    def __init__(self, n: int, letters: Sequence[tuple[str, int]] = ()):
        for kind, i in letters:
            if kind not in self.KINDS:
                raise ValueError(f"unknown letter {kind!r}")
            if not 1 <= i <= n - 1:
                raise ValueError(f"letter position {i} out of range for {n} strands")
        self.n = n
        self.letters = tuple(letters)

    def mirror_word(self) -> "TangleWord":
        """Reversed word with every crossing switched."""
        swap = {"E": "E", "S+": "S-", "S-": "S+"}
        return TangleWord(self.n, [(swap[k], i) for k, i in reversed(self.letters)])


def bracket_evaluate(w: TangleWord) -> TLElement:
    """Smooth all crossings: ``S+ = A 1 + A^-1 e_i`` and ``S- = A^-1 1 + A e_i``."""
    a = RationalFunc(A)
    a_inv = RationalFunc(1, A)
    out = identity(w.n)
    for kind, i in w.letters:
        e = generator_e(w.n, i)
        if kind == "E":
            letter = e
        elif kind == "S+":
            letter = identity(w.n).scale(a) + e.scale(a_inv)
        else:
            letter = identity(w.n).scale(a_inv) + e.scale(a)
        out = compose(out, letter)
    return out

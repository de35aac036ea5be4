"""Gram matrices of the bilinear form, closed determinants and semi-meander matrices.

The form pairs two elements ``x, y`` from ``n`` bottom points to ``h`` top points
by gluing the mirror of ``y`` on top of ``x`` through ``f_h`` and closing up.
Every matrix is indexed by step tuples in descending order.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Callable, Literal, Sequence

from flint import fmpq, fmpq_mat, fmpz_mat, fmpz_poly

from .dyck_paths import alpha_closed
from .exact_algebra import (
    DELTA,
    DeltaPoly,
    LaurentPoly,
    RationalFunc,
    _poly_gcd,
    as_rational,
    delta,
    laurent_to_delta,
    step_ratio,
)
from .skein_bases import StepTuple, d_coordinates, dimension, enumerate_tuples, tuple_to_matching
from .tl_core import PlanarMatching, TLElement, compose, jones_wenzl_or_empty, mirror, trace_closure

__all__ = [
    "GramMatrix",
    "Convention",
    "gram_pair",
    "gram_matrix",
    "d_diagonal_closed",
    "transform_matrix",
    "det_fraction_free",
    "det_cofactor",
    "det_closed",
    "det_closed_factored",
    "det_S_closed",
    "meander_pair",
    "meander_matrix",
    "mat_mul",
    "transpose",
    "worker_count",
]

Convention = Literal["all_loops", "exclude_through"]
Basis = Literal["B", "D", "S", "T", "A"]


def worker_count() -> int:
    """Worker processes allowed for entry computation (``SKEINGRAM_WORKERS``, default 1)."""
    try:
        return max(1, int(os.environ.get("SKEINGRAM_WORKERS", "1")))
    except ValueError:
        return 1


@dataclass
class GramMatrix:
    n: int
    h: int
    basis: str
    labels: list[StepTuple]
    entries: list[list]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        k = len(self.labels)
        if len(self.entries) != k or any(len(r) != k for r in self.entries):
            raise ValueError("matrix shape does not match its labels")

    @property
    def size(self) -> int:
        return len(self.labels)

    def is_diagonal(self) -> bool:
        return all(not self.entries[i][j] for i in range(self.size) for j in range(self.size) if i != j)

    def is_symmetric(self) -> bool:
        e = self.entries
        return all(e[i][j] == e[j][i] for i in range(self.size) for j in range(i))

    def to_json(self) -> dict:
        def enc(x):
            if isinstance(x, (RationalFunc, LaurentPoly, DeltaPoly)):
                return x.to_json()
            if isinstance(x, Fraction):
                return {"num": str(x.numerator), "den": str(x.denominator)}
            return str(x)

        out = {
            "n": self.n,
            "h": self.h,
            "basis": self.basis,
            "labels": [list(t.values) for t in self.labels],
            "entries": [[enc(x) for x in row] for row in self.entries],
        }
        if self.meta:
            out["meta"] = self.meta
        return out


# -- the form ---------------------------------------------------------------------------


def gram_pair(x: TLElement, y: TLElement) -> RationalFunc:
    """Glue the mirror of ``y`` onto ``x`` through ``f_h`` and evaluate the closure."""
    if (x.n_bottom, x.n_top) != (y.n_bottom, y.n_top):
        raise ValueError("elements have different boundaries")
    f = jones_wenzl_or_empty(x.n_top)
    return trace_closure(compose(compose(x, f), mirror(y)))


def _loops(x: Sequence[int], y: Sequence[int], p: Sequence[int] | None, n: int, h: int) -> int:
    """Loops when two ``n -> h`` matchings share their bottoms and their tops are joined by ``p``.

    ``p`` is an ``h -> h`` partner list whose bottom row meets the tops of ``x``;
    ``None`` joins top ``j`` of ``x`` straight to top ``j`` of ``y``.  Vertices are the
    bottoms ``0..n-1``, the tops of ``x`` at ``n..n+h-1`` and the tops of ``y`` after them.
    """
    size = n + 2 * h
    # adjacency pairs (edge kind, neighbour); kinds: 0 = x arc, 1 = y arc, 2 = top joiner
    nb: list[list[tuple[int, int]]] = [[] for _ in range(size)]

    def xv(i: int) -> int:
        return i  # bottoms keep their index, tops of x sit at n + j already

    def yv(i: int) -> int:
        return i if i < n else i + h

    for i in range(n + h):
        nb[xv(i)].append((0, xv(x[i])))
        nb[yv(i)].append((1, yv(y[i])))
    for j in range(h):
        if p is None:
            nb[n + j].append((2, n + h + j))
            nb[n + h + j].append((2, n + j))
        else:
            q = p[j]
            nb[n + j].append((2, n + q if q < h else n + h + q - h))
            q = p[h + j]
            nb[n + h + j].append((2, n + q if q < h else n + h + q - h))
    seen = bytearray(size)
    loops = 0
    for start in range(size):
        if seen[start]:
            continue
        loops += 1
        kind, v = nb[start][0]
        seen[start] = 1
        while v != start:
            seen[v] = 1
            a, b = nb[v]
            kind, v = b if a[0] == kind else a
    return loops


@lru_cache(maxsize=None)
def _jw_terms(h: int) -> tuple[tuple[tuple[int, ...], RationalFunc], ...]:
    f = jones_wenzl_or_empty(h)
    return tuple((m.partners, c) for m, c in f.terms())


def _matching_form(ms: PlanarMatching, mt: PlanarMatching, h: int, cache: dict, value: Callable) -> object:
    """Form value of two bare matchings through ``f_h``, memoized on the loop signature."""
    n = ms.n_bottom
    sig = tuple(_loops(ms.partners, mt.partners, p, n, h) for p, _ in _jw_terms(h))
    out = cache.get(sig)
    if out is None:
        out = value(sig)
        cache[sig] = out
    return out


def _symbolic_value(h: int) -> Callable[[tuple[int, ...]], RationalFunc]:
    coeffs = [c for _, c in _jw_terms(h)]

    def value(sig: tuple[int, ...]) -> RationalFunc:
        total = RationalFunc(0)
        for c, loops in zip(coeffs, sig):
            total = total + c * RationalFunc(DELTA**loops)
        return total

    return value


def _numeric_value(h: int, at: Fraction) -> Callable[[tuple[int, ...]], Fraction]:
    coeffs = [c.evaluate(at) for _, c in _jw_terms(h)]
    d = DELTA.evaluate(at)

    def value(sig: tuple[int, ...]) -> Fraction:
        return sum((c * d**loops for c, loops in zip(coeffs, sig)), Fraction(0))

    return value


def _gram_rows(args) -> list:
    n, h, at, rows = args
    labels = enumerate_tuples(n, h)
    mats = [tuple_to_matching(t) for t in labels]
    value = _symbolic_value(h) if at is None else _numeric_value(h, at)
    cache: dict = {}
    return [[_matching_form(mats[i], mats[j], h, cache, value) for j in range(i, len(mats))] for i in rows]


def _gram_b_entries(n: int, h: int, at: Fraction | None) -> list[list]:
    k = dimension(n, h)
    workers = worker_count()
    if workers > 1 and k > 64:
        chunks = [list(range(i, k, workers)) for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_gram_rows, [(n, h, at, c) for c in chunks]))
        upper: dict[int, list] = {}
        for chunk, rows in zip(chunks, parts):
            upper.update(zip(chunk, rows))
    else:
        upper = dict(zip(range(k), _gram_rows((n, h, at, range(k)))))
    out = [[None] * k for _ in range(k)]
    for i in range(k):
        for off, v in enumerate(upper[i]):
            out[i][i + off] = v
            out[i + off][i] = v
    return out


def _d_coordinate_matrix(n: int, h: int, at: Fraction | None) -> list[list]:
    labels = enumerate_tuples(n, h)
    index = {t: i for i, t in enumerate(labels)}
    zero = RationalFunc(0) if at is None else Fraction(0)
    scalar = None if at is None else (lambda c: c.evaluate(at))
    coords = d_coordinates(n, h, scalar)
    rows = []
    for t in labels:
        row = [zero] * len(labels)
        for s, c in coords[t].items():
            row[index[s]] = c
        rows.append(row)
    return rows


def gram_matrix(n: int, h: int, basis: Basis = "B", *, at: Fraction | int | None = None) -> GramMatrix:
    """Gram matrix of the form in basis ``B`` or ``D``.

    With ``at`` set, every entry is evaluated exactly at ``A = at`` (a rational).
    """
    labels = enumerate_tuples(n, h)
    if not labels:
        raise ValueError("module is zero")
    point = None if at is None else Fraction(at)
    g = _gram_b_entries(n, h, point)
    meta = {} if point is None else {"A": str(point)}
    if basis == "B":
        return GramMatrix(n, h, "B", labels, g, meta)
    if basis == "D":
        c = _d_coordinate_matrix(n, h, point)
        return GramMatrix(n, h, "D", labels, mat_mul(mat_mul(c, g), transpose(c)), meta)
    if basis in ("S", "T"):
        return meander_matrix(n, h, basis)
    raise ValueError(f"unknown basis {basis!r}")


def d_diagonal_closed(t: StepTuple) -> RationalFunc:
    """Norm of ``D_t``: ``Delta_h`` times the step ratios along the tuple."""
    out = RationalFunc(delta(t.h))
    for a, b in zip(t.values, t.values[1:]):
        out = out * step_ratio(a, b)
    return out


def transform_matrix(n: int, h: int) -> GramMatrix:
    """Coordinates of each ``B_s`` in the orthogonal basis: ``G(B_s, D_t) / G(D_t, D_t)``."""
    labels = enumerate_tuples(n, h)
    if not labels:
        raise ValueError("module is zero")
    g = _gram_b_entries(n, h, None)
    c = _d_coordinate_matrix(n, h, None)
    gd = mat_mul(g, transpose(c))
    norms = [d_diagonal_closed(t) for t in labels]
    entries = [[gd[s][t] / norms[t] for t in range(len(labels))] for s in range(len(labels))]
    return GramMatrix(n, h, "A", labels, entries)


# -- matrix helpers ---------------------------------------------------------------------


def transpose(m: list[list]) -> list[list]:
    return [list(r) for r in zip(*m)]


def mat_mul(x: list[list], y: list[list]) -> list[list]:
    """Dense product skipping zero entries of ``x``.

    Rational-function matrices are multiplied over per-row common denominators;
    rational-number matrices go through flint.
    """
    if not x or not y:
        return []
    sample = next((v for row in x for v in row if v), None) or next((v for row in y for v in row if v), None)
    if isinstance(sample, (Fraction, int)) or sample is None:
        if sample is None:
            return [[Fraction(0)] * len(y[0]) for _ in x]
        prod = _fmpq_matrix(x) * _fmpq_matrix(y)
        return [[Fraction(int(prod[i, j].p), int(prod[i, j].q)) for j in range(prod.ncols())] for i in range(prod.nrows())]
    xr = [_row_common(r) for r in x]
    ycols = [_row_common(cl) for cl in zip(*y)]
    out = []
    for xnum, xden in xr:
        nz = [(k, v) for k, v in enumerate(xnum) if v]
        row = []
        for ynum, yden in ycols:
            acc = LaurentPoly(0)
            for k, v in nz:
                w = ynum[k]
                if w:
                    acc = acc + v * w
            row.append(RationalFunc(acc, xden * yden) if acc else RationalFunc(0))
        out.append(row)
    return out


def _fmpq_matrix(rows: Sequence[Sequence]) -> fmpq_mat:
    def conv(v) -> fmpq:
        v = Fraction(v)
        return fmpq(v.numerator, v.denominator)

    return fmpq_mat([[conv(v) for v in r] for r in rows])


def _lcm(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    if b.is_one() or a == b:
        return a
    if a.is_one():
        return b
    return (a * b).exact_div(_poly_gcd(a, b))


def _row_common(row: Sequence) -> tuple[list[LaurentPoly], LaurentPoly]:
    vals = [as_rational(v) for v in row]
    den = LaurentPoly(1)
    for v in vals:
        if v:
            den = _lcm(den, v.den)
    return [v.num * den.exact_div(v.den) if v else LaurentPoly(0) for v in vals], den


# -- determinants -----------------------------------------------------------------------


def det_cofactor(m: Sequence[Sequence]):
    """Laplace expansion along the first row; a slow oracle for small matrices."""
    k = len(m)
    if k == 0:
        return 1
    if k == 1:
        return m[0][0]
    total = None
    for j in range(k):
        if not m[0][j]:
            continue
        minor = [list(r[:j]) + list(r[j + 1 :]) for r in m[1:]]
        term = m[0][j] * det_cofactor(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return m[0][0] * 0
    return total


def _bareiss(rows: list[list], zero, one):
    """Fraction-free elimination over an exact integral domain with ``//`` as exact division."""
    m = [list(r) for r in rows]
    k = len(m)
    sign = 1
    prev = one
    for p in range(k - 1):
        if not m[p][p]:
            swap = next((r for r in range(p + 1, k) if m[r][p]), None)
            if swap is None:
                return zero
            m[p], m[swap] = m[swap], m[p]
            sign = -sign
        piv = m[p][p]
        rp = m[p]
        for i in range(p + 1, k):
            ri = m[i]
            lead = ri[p]
            for j in range(p + 1, k):
                v = piv * ri[j]
                if lead:
                    v -= lead * rp[j]
                ri[j] = v // prev if prev != one else v
            ri[p] = zero
        prev = piv
    d = m[k - 1][k - 1]
    return d if sign > 0 else -d


def _content_split(rows: list[list[fmpz_poly]]) -> tuple[list[list[fmpz_poly]], fmpz_poly]:
    """Divide every row by the gcd of its entries; return the rows and the product of gcds."""
    scale = fmpz_poly(1)
    out = []
    for r in rows:
        g = fmpz_poly(0)
        for v in r:
            if v:
                g = v if g == 0 else g.gcd(v)
                if g == 1:
                    break
        if g == 0:
            return [], fmpz_poly(0)
        if g != 1:
            r = [v // g for v in r]
            scale *= g
        out.append(r)
    return out, scale


def _delta_rows(rows: list[list[LaurentPoly]]) -> tuple[list[list[fmpz_poly]], int] | None:
    """Rewrite each row as ``A^c`` times polynomials in ``delta`` when the entries allow it."""
    shift = 0
    out = []
    for r in rows:
        nz = [v for v in r if v]
        if not nz:
            return [[fmpz_poly(0)] * len(r)], 0
        centre = nz[0].low + nz[0].high
        if centre % 2 or any(v.low + v.high != centre for v in nz):
            return None
        half = centre // 2
        shift += half
        conv = []
        for v in r:
            if not v:
                conv.append(fmpz_poly(0))
                continue
            d = laurent_to_delta(v * LaurentPoly.monomial(-half))
            if d is None:
                return None
            conv.append(fmpz_poly([d.terms.get(e, 0) for e in range(d.high + 1)]))
        out.append(conv)
    return out, shift


def _laurent_det(rows: list[list[LaurentPoly]]) -> LaurentPoly:
    """Determinant of a Laurent polynomial matrix.

    Symmetric rows are eliminated as polynomials in ``delta``; otherwise rows are
    shifted to ordinary polynomials in ``A`` (or ``A^2`` when possible).
    """
    as_delta = _delta_rows(rows)
    if as_delta is not None:
        polys, shift = as_delta
        polys, scale = _content_split(polys)
        if not polys:
            return LaurentPoly(0)
        det = _bareiss(polys, fmpz_poly(0), fmpz_poly(1)) * scale
        if det == 0:
            return LaurentPoly(0)
        return DeltaPoly({e: int(c) for e, c in enumerate(det) if c}).to_laurent() * LaurentPoly.monomial(shift)
    shift = 0
    polys = []
    for r in rows:
        nz = [v for v in r if v]
        if not nz:
            return LaurentPoly(0)
        low = min(v.low for v in nz)
        shift += low
        polys.append([v.shifted_poly()[1].left_shift(v.low - low) if v else fmpz_poly(0) for v in r])
    polys, scale = _content_split(polys)
    # entries in A^2 only: halve degrees before elimination
    step = 1
    if all(not any(list(v)[1::2]) for r in polys for v in r if v):
        step = 2
        polys = [[_deflate2(v) for v in r] for r in polys]
    det = _bareiss(polys, fmpz_poly(0), fmpz_poly(1))
    if step == 2:
        det = _inflate2(det)
    det = det * scale
    return LaurentPoly._raw(shift, det) if det != 0 else LaurentPoly(0)


def _deflate2(p: fmpz_poly) -> fmpz_poly:
    return fmpz_poly(list(p)[::2]) if p else p


def _inflate2(p: fmpz_poly) -> fmpz_poly:
    if not p:
        return p
    coeffs = [0] * (2 * p.degree() + 1)
    coeffs[::2] = list(p)
    return fmpz_poly(coeffs)


def det_fraction_free(m: GramMatrix | Sequence[Sequence]):
    """Exact determinant.

    Rational-function and Laurent entries give a :class:`RationalFunc`; rows are
    cleared of denominators, shifted to ordinary polynomials and stripped of
    content before Bareiss elimination.  :class:`DeltaPoly` entries give a
    :class:`DeltaPoly`.  Rational numbers give a :class:`Fraction`.
    """
    rows = m.entries if isinstance(m, GramMatrix) else [list(r) for r in m]
    k = len(rows)
    if k == 0:
        return RationalFunc(1)
    sample = next((v for r in rows for v in r if v), None)
    if sample is None:
        first = rows[0][0] if rows[0] else None
        if isinstance(first, DeltaPoly):
            return DeltaPoly(0)
        if isinstance(first, (Fraction, int)):
            return Fraction(0)
        return RationalFunc(0)
    tri = _triangular_det(rows)
    if tri is not None:
        if isinstance(tri, (Fraction, int)):
            return Fraction(tri)
        return tri if isinstance(tri, DeltaPoly) else as_rational(tri)
    if isinstance(sample, DeltaPoly):
        if any(v and v.low < 0 for r in rows for v in r):
            raise ValueError("negative powers of delta are not supported")
        polys = [[fmpz_poly([v.terms.get(e, 0) for e in range(v.high + 1)]) if v else fmpz_poly(0) for v in r] for r in rows]
        det = _bareiss(polys, fmpz_poly(0), fmpz_poly(1))
        return DeltaPoly({e: int(c) for e, c in enumerate(det) if c})
    if isinstance(sample, (Fraction, int)):
        return _numeric_det(rows)
    dens = LaurentPoly(1)
    nums = []
    for r in rows:
        num_row, den = _row_common(r)
        nums.append(num_row)
        dens = dens * den
    return RationalFunc(_laurent_det(nums), dens)


def _numeric_det(rows: list[list]) -> Fraction:
    """Clear row denominators and row content, then take an integer determinant."""
    scale = Fraction(1)
    ints = []
    for r in rows:
        fr = [Fraction(v) for v in r]
        den = lcm(*(v.denominator for v in fr))
        row = [int(v * den) for v in fr]
        content = gcd(*row)
        if content == 0:
            return Fraction(0)
        ints.append([v // content for v in row])
        scale *= Fraction(content, den)
    if len(ints) <= 12:
        return _bareiss(ints, 0, 1) * scale
    return int(fmpz_mat(ints).det()) * scale


def _triangular_det(rows: Sequence[Sequence]):
    """Product of the diagonal if the matrix is triangular, else ``None``."""
    k = len(rows)
    upper = all(not rows[i][j] for i in range(k) for j in range(i))
    if not upper and not all(not rows[i][j] for i in range(k) for j in range(i + 1, k)):
        return None
    out = rows[0][0]
    for i in range(1, k):
        out = out * rows[i][i]
    return out


# -- closed forms -------------------------------------------------------------------------


def det_closed_factored(n: int, h: int) -> dict:
    """Exponents in ``Delta_h^dim * prod_k (Delta_k / Delta_{k-1})^alpha_k``."""
    dim = dimension(n, h)
    if dim == 0:
        raise ValueError("module is zero")
    ratios = [[k, alpha_closed(n, h, k)] for k in range(1, (n + h) // 2 + 1)]
    return {"delta_h_power": dim, "ratio_powers": [r for r in ratios if r[1]]}


def _delta_power_product(powers: dict[int, int]) -> RationalFunc:
    num, den = LaurentPoly(1), LaurentPoly(1)
    for k, e in sorted(powers.items()):
        if e > 0:
            num = num * delta(k) ** e
        elif e < 0:
            den = den * delta(k) ** (-e)
    return RationalFunc(num, den)


def _ratio_exponents(n: int, h: int) -> dict[int, int]:
    powers: dict[int, int] = {}
    for k, a in det_closed_factored(n, h)["ratio_powers"]:
        powers[k] = powers.get(k, 0) + a
        powers[k - 1] = powers.get(k - 1, 0) - a
    return powers


def det_closed(n: int, h: int) -> RationalFunc:
    powers = _ratio_exponents(n, h)
    powers[h] = powers.get(h, 0) + dimension(n, h)
    return _delta_power_product(powers)


def det_S_closed(n: int, h: int) -> RationalFunc:
    """Closed determinant of the restricted meander matrix (all loops counted)."""
    powers = _ratio_exponents(n, h)
    powers[1] = powers.get(1, 0) + h * dimension(n, h)
    return _delta_power_product(powers)


# -- semi-meanders --------------------------------------------------------------------------


def _meander_loops(a: PlanarMatching, b: PlanarMatching) -> tuple[int, bool]:
    """Loop count of ``a`` glued to the mirror of ``b`` and whether tops sit on distinct loops."""
    n, h = a.n_bottom, a.n_top
    pa, pb = a.partners, b.partners
    size = n + h
    comp = [-1] * size
    loops = 0
    for start in range(size):
        if comp[start] >= 0:
            continue
        v, use_a = start, True
        while True:
            comp[v] = loops
            v = pa[v] if use_a else pb[v]
            comp[v] = loops
            use_a = not use_a
            if v == start:
                break
        loops += 1
    tops = [comp[n + j] for j in range(h)]
    return loops, len(set(tops)) == h


def meander_pair(
    a: PlanarMatching, b: PlanarMatching, restricted: bool, convention: Convention = "all_loops"
) -> DeltaPoly:
    """``delta^c`` for the closed gluing of ``a`` and ``b``; optionally zero unless tops are separated."""
    if (a.n_bottom, a.n_top) != (b.n_bottom, b.n_top):
        raise ValueError("matchings have different boundaries")
    loops, separated = _meander_loops(a, b)
    if restricted and not separated:
        return DeltaPoly(0)
    if restricted and convention == "exclude_through":
        loops -= a.n_top
    elif convention not in ("all_loops", "exclude_through"):
        raise ValueError(f"unknown convention {convention!r}")
    return DeltaPoly.monomial(loops)


def meander_matrix(n: int, h: int, kind: Literal["S", "T"] = "S", convention: Convention = "all_loops") -> GramMatrix:
    labels = enumerate_tuples(n, h)
    if not labels:
        raise ValueError("module is zero")
    mats = [tuple_to_matching(t) for t in labels]
    restricted = kind == "S"
    entries = [[meander_pair(x, y, restricted, convention) for y in mats] for x in mats]
    meta = {"convention": convention} if restricted else {}
    return GramMatrix(n, h, kind, labels, entries, meta)

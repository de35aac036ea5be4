"""Cross-verification checks shared by the ``verify`` command and the acceptance tests.

Each check returns a :class:`CheckResult`; a failing check carries the first
witness that broke it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .dyck_paths import (
    DyckPath,
    MarkedPath,
    alpha_closed,
    alpha_enumerate,
    count_paths_closed,
    down_steps,
    image_heights,
    iter_paths,
    phi_map,
    theta_map,
)
from .exact_algebra import DELTA, RationalFunc, delta
from .genfun import (
    catalan_series,
    ck_closed_series,
    ck_series,
    corollary_count,
    derivative_identity_series,
    histogram,
)
from .gram_forms import (
    d_diagonal_closed,
    det_closed,
    det_fraction_free,
    gram_matrix,
    mat_mul,
    meander_matrix,
    transform_matrix,
    transpose,
)
from .skein_bases import dimension
from .tl_core import compose, compose_via_generators, generator_e, identity, jones_wenzl, trace_closure

__all__ = [
    "CheckResult",
    "VerifyReport",
    "valid_pairs",
    "check_determinants",
    "check_numeric_tier",
    "check_jones_wenzl",
    "check_orthogonality",
    "check_unitriangular",
    "check_alpha",
    "bijection_witness",
    "check_bijection",
    "check_generating_functions",
    "check_conservation",
    "check_meander",
    "run_all",
]


@dataclass
class CheckResult:
    name: str
    scope: str
    passed: bool
    witness: str | None = None
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" witness: {self.witness}" if self.witness else ""
        notes = "".join(f" {k}={v}" for k, v in self.detail.items())
        return f"[{status}] {self.name} ({self.scope}){notes}{extra}"

    def to_json(self) -> dict:
        return {"check": self.name, "range": self.scope, "passed": self.passed, "witness": self.witness, **self.detail}


@dataclass
class VerifyReport:
    results: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> dict:
        return {"status": "pass" if self.passed else "fail", "checks": [r.to_json() for r in self.results]}


def valid_pairs(ns: Iterable[int], hs: Iterable[int]) -> list[tuple[int, int]]:
    hs = list(hs)
    return [(n, h) for n in ns for h in hs if h <= n and (n - h) % 2 == 0 and dimension(n, h)]


def check_determinants(max_n: int = 10, max_h: int = 4) -> CheckResult:
    """Eliminated determinants in both bases agree with the closed form."""
    scope = f"n<={max_n}, h<=min(n,{max_h})"
    for n, h in valid_pairs(range(1, max_n + 1), range(max_h + 1)):
        closed = det_closed(n, h)
        if det_fraction_free(gram_matrix(n, h, "B")) != closed:
            return CheckResult("determinant theorem", scope, False, f"basis B, (n,h)=({n},{h})")
        if det_fraction_free(gram_matrix(n, h, "D")) != closed:
            return CheckResult("determinant theorem", scope, False, f"basis D, (n,h)=({n},{h})")
    return CheckResult("determinant theorem", scope, True)


def check_numeric_tier(ns: Iterable[int] = range(11, 15), hs: Iterable[int] = (0, 1, 2), at=Fraction(3, 2)) -> CheckResult:
    """Same equality with every entry evaluated exactly at ``A = at``."""
    ns, hs = list(ns), list(hs)
    scope = f"n in {ns[0]}..{ns[-1]}, h in {hs}, A={at}"
    for n, h in valid_pairs(ns, hs):
        closed = det_closed(n, h).evaluate(at)
        gd = gram_matrix(n, h, "D", at=at)
        if not gd.is_diagonal() or det_fraction_free(gd) != closed:
            return CheckResult("numeric determinant tier", scope, False, f"basis D, (n,h)=({n},{h})")
        if det_fraction_free(gram_matrix(n, h, "B", at=at)) != closed:
            return CheckResult("numeric determinant tier", scope, False, f"basis B, (n,h)=({n},{h})")
    return CheckResult("numeric determinant tier", scope, True)


def check_jones_wenzl(max_n: int = 9) -> CheckResult:
    scope = f"n<={max_n}"
    for n in range(1, max_n + 1):
        f = jones_wenzl(n)
        if f.coefficient(identity(n).terms()[0][0]) != RationalFunc(1):
            return CheckResult("Jones-Wenzl properties", scope, False, f"identity coefficient, n={n}")
        if trace_closure(f) != RationalFunc(delta(n)):
            return CheckResult("Jones-Wenzl properties", scope, False, f"trace, n={n}")
        for i in range(1, n):
            e = generator_e(n, i)
            if not compose(f, e).is_zero() or not compose(e, f).is_zero():
                return CheckResult("Jones-Wenzl properties", scope, False, f"e_{i} not killed, n={n}")
        if compose_via_generators(f, f) != f:
            return CheckResult("Jones-Wenzl properties", scope, False, f"not idempotent, n={n}")
    return CheckResult("Jones-Wenzl properties", scope, True)


def check_orthogonality(max_n: int = 8) -> CheckResult:
    scope = f"n<={max_n}, all h"
    for n, h in valid_pairs(range(1, max_n + 1), range(max_n + 1)):
        gd = gram_matrix(n, h, "D")
        if not gd.is_diagonal():
            return CheckResult("orthogonality and norms", scope, False, f"off-diagonal entry, (n,h)=({n},{h})")
        for i, t in enumerate(gd.labels):
            if gd.entries[i][i] != d_diagonal_closed(t):
                return CheckResult("orthogonality and norms", scope, False, f"norm of D{t}")
    return CheckResult("orthogonality and norms", scope, True)


def check_unitriangular(max_n: int = 8) -> CheckResult:
    scope = f"n<={max_n}, all h"
    for n, h in valid_pairs(range(1, max_n + 1), range(max_n + 1)):
        a = transform_matrix(n, h).entries
        k = len(a)
        for i in range(k):
            if a[i][i] != RationalFunc(1) or any(a[i][j] for j in range(i)):
                return CheckResult("unitriangular transform", scope, False, f"row {i}, (n,h)=({n},{h})")
        gb = gram_matrix(n, h, "B").entries
        gd = gram_matrix(n, h, "D").entries
        if mat_mul(mat_mul(a, gd), transpose(a)) != gb:
            return CheckResult("unitriangular transform", scope, False, f"B != A D A^T, (n,h)=({n},{h})")
    return CheckResult("unitriangular transform", scope, True)


def _alpha_cases(max_n: int):
    # every h and k up to n + 1, so empty and out-of-range cases are covered too
    for n in range(0, max_n + 1):
        for h in range(0, n + 2):
            for k in range(1, n + 2):
                yield n, h, k


def check_alpha(max_n: int = 14) -> CheckResult:
    scope = f"n<={max_n}, all h, k"
    count = 0
    for n, h, k in _alpha_cases(max_n):
        count += 1
        if alpha_closed(n, h, k) != alpha_enumerate(n, h, k):
            return CheckResult("step-count theorem", scope, False, f"(n,h,k)=({n},{h},{k})")
    return CheckResult("step-count theorem", scope, True, detail={"cases": count})


def bijection_witness(max_n: int, rule: str) -> str | None:
    """``None`` if both round trips and the image partition hold, else a witness."""
    for n in range(1, max_n + 1):
        for h in range(n % 2, n + 1, 2):
            for k in range(1, (n + h) // 2 + 1):
                images = set()
                for s in iter_paths(n, h):
                    p = DyckPath(s)
                    for i in down_steps(p, k):
                        m = MarkedPath(p, i)
                        try:
                            img, j = theta_map(m, k, rule)
                            back = phi_map(img, k, h, rule)
                        except ValueError:
                            return f"theta/phi undefined at ({s}, i={i}, k={k})"
                        if back != m or img.h != 2 * k - 2 * j + h:
                            return f"phi(theta) != id at ({s}, i={i}, k={k})"
                        images.add(img.steps)
                heights = image_heights(n, h, k)
                if len(images) != sum(count_paths_closed(n, e) for e in heights):
                    return f"image size, (n,h,k)=({n},{h},{k})"
                for e in heights:
                    for s in iter_paths(n, e):
                        try:
                            m = phi_map(DyckPath(s), k, h, rule)
                            if theta_map(m, k, rule)[0].steps != s:
                                return f"theta(phi) != id at ({s}, k={k}, h={h})"
                        except ValueError:
                            return f"phi undefined at ({s}, k={k}, h={h})"
    return None


def check_bijection(max_n: int = 12) -> CheckResult:
    """Both lowest-point conventions are tried; the check passes if the leftmost one does."""
    scope = f"n<={max_n}, all h, k"
    outcome = {rule: bijection_witness(max_n, rule) for rule in ("leftmost", "rightmost")}
    passing = [r for r, w in outcome.items() if w is None]
    detail = {"passing_convention": ",".join(passing) or "none"}
    if "leftmost" in passing:
        return CheckResult("bijection", scope, True, detail=detail)
    witness = "; ".join(f"{r}: {w}" for r, w in outcome.items() if w)
    return CheckResult("bijection", scope, False, witness, detail)


def check_generating_functions(max_k: int = 6, order: int = 20, hist_n: int = 14, cor_n: int = 7) -> CheckResult:
    scope = f"k<={max_k}, order {order}, histograms n<={hist_n}, corollary n<={cor_n}"
    name = "generating functions"
    cat = catalan_series(order).at_q(1)
    for k in range(1, max_k + 1):
        s = ck_series(k, order)
        if s != ck_closed_series(k, order):
            return CheckResult(name, scope, False, f"closed form, k={k}")
        if s.at_q(1) != cat:
            return CheckResult(name, scope, False, f"q=1 collapse, k={k}")
        if s.d_dq_at_1() != derivative_identity_series(k, order).at_q(1):
            return CheckResult(name, scope, False, f"derivative identity, k={k}")
    for n in range(hist_n + 1):
        for h in range(n % 2, n + 1, 2):
            for k in range(1, (n + h) // 2 + 2):
                want: dict[int, int] = {}
                for p in iter_paths(n, h):
                    m = len(down_steps(DyckPath(p), k))
                    want[m] = want.get(m, 0) + 1
                if histogram(n, h, k) != want:
                    return CheckResult(name, scope, False, f"histogram, (n,h,k)=({n},{h},{k})")
    for n in range(cor_n + 1):
        for k in range(1, n + 2):
            if corollary_count(n, k) != alpha_enumerate(2 * n, 0, k):
                return CheckResult(name, scope, False, f"corollary, (n,k)=({n},{k})")
    return CheckResult(name, scope, True)


def check_conservation(max_n: int = 14) -> CheckResult:
    scope = f"n<={max_n}"
    for n in range(max_n + 1):
        for h in range(n % 2, n + 1, 2):
            total = sum(alpha_closed(n, h, k) for k in range(1, (n + h) // 2 + 2))
            if total * 2 != (n - h) * count_paths_closed(n, h):
                return CheckResult("conservation law", scope, False, f"(n,h)=({n},{h})")
    return CheckResult("conservation law", scope, True)


def _meander_ok(max_n: int, max_h: int, convention: str) -> str | None:
    for n, h in valid_pairs(range(1, max_n + 1), range(max_h + 1)):
        dim = dimension(n, h)
        det_s = det_fraction_free(meander_matrix(n, h, "S", convention))
        lhs = RationalFunc(det_s.to_laurent())
        rhs = RationalFunc(DELTA**h, delta(h)) ** dim * det_closed(n, h)
        if lhs != rhs:
            return f"(n,h)=({n},{h})"
    return None


def check_meander(max_n: int = 8, max_h: int = 3) -> CheckResult:
    """Selects one global loop-counting convention under which the semi-meander identity holds."""
    scope = f"n<={max_n}, h<={max_h}"
    outcome = {c: _meander_ok(max_n, max_h, c) for c in ("all_loops", "exclude_through")}
    passing = [c for c, w in outcome.items() if w is None]
    detail = {"convention": passing[0] if passing else "none"}
    if passing:
        return CheckResult("semi-meander determinant", scope, True, detail=detail)
    witness = "; ".join(f"{c}: {w}" for c, w in outcome.items())
    return CheckResult("semi-meander determinant", scope, False, witness, detail)


def run_all(max_n: int = 14, numeric: bool = True) -> VerifyReport:
    """Run every check with ranges capped at ``max_n``."""
    cap = lambda default: min(default, max_n)  # noqa: E731
    results = [
        check_determinants(cap(10)),
        check_jones_wenzl(cap(9)),
        check_orthogonality(cap(8)),
        check_unitriangular(cap(8)),
        check_alpha(cap(14)),
        check_bijection(cap(12)),
        check_generating_functions(hist_n=cap(14), cor_n=cap(7)),
        check_conservation(cap(14)),
        check_meander(cap(8)),
    ]
    if numeric and max_n > 10:
        results.insert(1, check_numeric_tier(range(11, cap(14) + 1)))
    return VerifyReport(results)

"""Generalized Dyck paths, k-down steps and the cut-reflect-glue bijection.

A path is a string over ``U``/``D`` starting at height 0 and never going below
the axis.  Heights are indexed so that ``heights[i]`` is the height after ``i``
steps; a k-down step at index ``i`` means ``heights[i] == k`` and
``heights[i+1] == k - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterator, Literal, Sequence

__all__ = [
    "DyckPath",
    "MarkedPath",
    "LowestPoint",
    "enumerate_paths",
    "iter_paths",
    "count_paths_closed",
    "down_steps",
    "alpha_enumerate",
    "alpha_closed",
    "theta_map",
    "phi_map",
    "image_heights",
]

LowestPoint = Literal["leftmost", "rightmost"]


def _heights(steps: str) -> tuple[int, ...]:
    out = [0]
    for s in steps:
        out.append(out[-1] + (1 if s == "U" else -1))
    return tuple(out)


@dataclass(frozen=True)
class DyckPath:
    steps: str

    def __post_init__(self):
        if set(self.steps) - {"U", "D"}:
            raise ValueError(f"path {self.steps!r} has steps other than U and D")
        if min(_heights(self.steps)) < 0:
            raise ValueError(f"path {self.steps} goes below the axis")

    @property
    def n(self) -> int:
        return len(self.steps)

    @property
    def heights(self) -> tuple[int, ...]:
        return _heights(self.steps)

    @property
    def h(self) -> int:
        return self.heights[-1]

    def to_json(self) -> dict:
        return {"n": self.n, "h": self.h, "steps": self.steps}

    def __str__(self) -> str:
        return self.steps


@dataclass(frozen=True)
class MarkedPath:
    """A path together with one of its k-down steps (``index`` is the start height index)."""

    path: DyckPath
    index: int

    def __post_init__(self):
        a = self.path.heights
        i = self.index
        if not 0 <= i < self.path.n or a[i + 1] != a[i] - 1:
            raise ValueError(f"index {i} is not a down step of {self.path.steps}")

    @property
    def k(self) -> int:
        return self.path.heights[self.index]

    def to_json(self) -> dict:
        return {**self.path.to_json(), "mark": self.index}


def iter_paths(n: int, h: int) -> Iterator[str]:
    """Step strings of all paths from height 0 to ``h`` in ``n`` steps, ``U`` before ``D``."""
    if h < 0 or h > n or (n - h) % 2:
        return
    buf: list[str] = []

    def rec(i: int, a: int) -> Iterator[str]:
        if i == n:
            yield "".join(buf)
            return
        left = n - i - 1
        for step, b in (("U", a + 1), ("D", a - 1)):
            if b >= 0 and abs(b - h) <= left:
                buf.append(step)
                yield from rec(i + 1, b)
                buf.pop()

    yield from rec(0, 0)


def enumerate_paths(n: int, h: int) -> list[DyckPath]:
    return [DyckPath(s) for s in iter_paths(n, h)]


def count_paths_closed(n: int, h: int) -> int:
    """Reflection-principle count of paths ending at height ``h``."""
    if n < 0 or h < 0 or h > n or (n - h) % 2:
        return 0
    top = (n + h) // 2
    return comb(n, top) - comb(n, top + 1)


def _down_steps(heights: tuple[int, ...], k: int) -> list[int]:
    return [i for i in range(len(heights) - 1) if heights[i] == k and heights[i + 1] == k - 1]


def down_steps(p: DyckPath, k: int) -> list[int]:
    if k < 1:
        raise ValueError("k must be at least 1")
    return _down_steps(p.heights, k)


def alpha_enumerate(n: int, h: int, k: int) -> int:
    """Total number of k-down steps over all paths of ``(n, h)``, by brute force."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return sum(len(_down_steps(_heights(s), k)) for s in iter_paths(n, h))


def alpha_closed(n: int, h: int, k: int) -> int:
    """Closed binomial count of k-down steps with ``s = min(k - 1, h)``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if h < 0 or h > n or (n - h) % 2:
        return 0
    s = min(k - 1, h)

    def c(top2: int) -> int:
        # top2 is twice the lower binomial index
        r = top2 // 2
        return comb(n, r) if 0 <= r <= n else 0

    return c(n + h + 2 * k - 2 * s) - c(n + h + 2 * k + 2)


# -- the bijection --------------------------------------------------------------------


def _negrev(steps: str) -> str:
    """Reflect a segment: reverse the order and swap U with D."""
    return steps[::-1].translate(str.maketrans("UD", "DU"))


def _lowest(heights: Sequence[int], lo: int, hi: int, rule: LowestPoint) -> int:
    """Index in ``[lo, hi]`` of the leftmost (or rightmost) minimum height."""
    best = lo
    for idx in range(lo, hi + 1):
        if heights[idx] < heights[best] or (rule == "rightmost" and heights[idx] == heights[best]):
            best = idx
    return best


def image_heights(n: int, h: int, k: int) -> list[int]:
    """End heights ``2k - 2j + h`` of the paths Θ can produce, for ``j = 0..min(k-1, h)``."""
    return [2 * k - 2 * j + h for j in range(min(k - 1, h) + 1) if 2 * k - 2 * j + h <= n]


def theta_map(m: MarkedPath, k: int, lowest: LowestPoint = "leftmost") -> tuple[DyckPath, int]:
    """Cut at the last ``k-1 -> k`` up step before the mark, reflect the tail, and glue.

    Returns the image path and the depth ``j`` of the lowest point of the tail.
    """
    a = m.path.heights
    i = m.index
    if a[i] != k or a[i + 1] != k - 1:
        raise ValueError(f"step {i} of {m.path.steps} is not a {k}-down step")
    steps = m.path.steps
    n = len(steps)
    cut = max(t for t in range(1, i + 1) if a[t - 1] == k - 1 and a[t] == k)
    low = _lowest(a, cut, n, lowest)
    j = a[low]
    left, middle, right = steps[:cut], steps[cut:low], steps[low:]
    # reflecting M followed by reflected R gives R followed by reflected M
    image = left + right + _negrev(middle)
    return DyckPath(image), j


def phi_map(p: DyckPath, k: int, h: int, lowest: LowestPoint = "leftmost") -> MarkedPath:
    """Inverse of :func:`theta_map`: recover the marked path from its image."""
    a = p.heights
    n = p.n
    end = a[-1]
    if (2 * k + h - end) % 2:
        raise ValueError(f"end height {end} has the wrong parity for k={k}, h={h}")
    j = (2 * k + h - end) // 2
    if not 0 <= j <= min(k - 1, h):
        raise ValueError(f"end height {end} is not 2k-2j+h for an admissible j")
    cands = [t for t in range(1, n) if a[t - 1] == k - 1 and a[t] == k and a[t + 1] == k + 1]
    if not cands:
        raise ValueError(f"{p.steps} has no up-up crossing of height {k}")
    cut = cands[-1]
    steps = p.steps
    left = steps[:cut]
    # tail = R + negrev(M); undo to P = M + negrev(R), a walk from k down to j then on to h
    walk = _negrev(steps[cut:])
    wh = [k]
    for s in walk:
        wh.append(wh[-1] + (1 if s == "U" else -1))
    hits = [t for t, y in enumerate(wh) if y == j]
    if not hits:
        raise ValueError(f"{p.steps} never reaches depth {j} after the cut")
    split = hits[0] if lowest == "leftmost" else hits[-1]
    middle = walk[:split]
    right = _negrev(walk[split:])
    orig = DyckPath(left + middle + right)
    oh = orig.heights
    marks = [t for t in range(cut, n) if oh[t] == k and oh[t + 1] == k - 1]
    if not marks:
        raise ValueError(f"no {k}-down step after the cut in {orig.steps}")
    return MarkedPath(orig, marks[0])

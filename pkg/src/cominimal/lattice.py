"""Exact arithmetic on Z^d under the lexicographic order.

Points are plain tuples of Python ints, so arithmetic never overflows and
Python's built-in tuple comparison already *is* the lexicographic order.
Every order relation in this package means lex order; the componentwise
partial order is available only through :func:`cw_ge` / :func:`cw_le`.
"""

from __future__ import annotations

import enum
import itertools
import operator
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import DimensionError

Point = tuple  # tuple[int, ...]


class Ordering(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1


def point(*coords) -> Point:
    """Build a point from integers, or from a single iterable of integers."""
    if len(coords) == 1 and not isinstance(coords[0], int):
        coords = tuple(coords[0])
    return tuple(operator.index(c) for c in coords)


def zero(d: int) -> Point:
    return (0,) * d


def ones(d: int) -> Point:
    return (1,) * d


def last_unit(d: int) -> Point:
    """The lex-smallest positive point (0, ..., 0, 1)."""
    return (0,) * (d - 1) + (1,)


def _check(a: Point, b: Point) -> None:
    if len(a) != len(b):
        raise DimensionError(f"dimension mismatch: {len(a)} vs {len(b)}")


def add(a: Point, b: Point) -> Point:
    _check(a, b)
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Point, b: Point) -> Point:
    _check(a, b)
    return tuple(x - y for x, y in zip(a, b))


def neg(a: Point) -> Point:
    return tuple(-x for x in a)


def scale(k: int, a: Point) -> Point:
    return tuple(k * x for x in a)


def lex_cmp(a: Point, b: Point) -> Ordering:
    _check(a, b)
    if a < b:
        return Ordering.LT
    if a > b:
        return Ordering.GT
    return Ordering.EQ


def lex_abs(a: Point) -> Point:
    """max(a, -a) in lex order; the ordered-group absolute value."""
    m = neg(a)
    return a if a >= m else m


def lex_max(a: Point, b: Point) -> Point:
    _check(a, b)
    return a if a >= b else b


def lex_min(a: Point, b: Point) -> Point:
    _check(a, b)
    return a if a <= b else b


def succ(a: Point) -> Point:
    """Immediate lex successor: x > a  iff  x >= succ(a)."""
    return a[:-1] + (a[-1] + 1,)


def pred(a: Point) -> Point:
    return a[:-1] + (a[-1] - 1,)


def cw_ge(a: Point, b: Point) -> bool:
    """Componentwise a >= b (never the default order)."""
    _check(a, b)
    return all(x >= y for x, y in zip(a, b))


def cw_le(a: Point, b: Point) -> bool:
    return cw_ge(b, a)


def format_point(p: Point) -> str:
    """Serialize as ``(-4,0)``; one-dimensional points print bare (``-4``)."""
    if len(p) == 1:
        return str(p[0])
    return "(" + ",".join(str(c) for c in p) + ")"


def parse_point(text: str) -> Point:
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    return tuple(int(c) for c in text.split(","))


_RELATIONS = {
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
}


@dataclass(frozen=True)
class HalfSpace:
    """``{x : x <relation> bound}`` under lex order."""

    bound: Point
    relation: str = ">="

    def __post_init__(self):
        if self.relation not in _RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")

    @property
    def dim(self) -> int:
        return len(self.bound)

    def contains(self, x: Point) -> bool:
        _check(x, self.bound)
        return _RELATIONS[self.relation](x, self.bound)

    def complement(self) -> "HalfSpace":
        flip = {"<": ">=", ">=": "<", ">": "<=", "<=": ">"}
        return HalfSpace(self.bound, flip[self.relation])


def half_space_contains(h: HalfSpace, x: Point) -> bool:
    return h.contains(x)


@dataclass(frozen=True)
class Slab:
    """The lex interval ``Z^d_{>=lower} \\ Z^d_{>=upper}``, i.e. ``[lower, upper)``."""

    lower: Point
    upper: Point

    def __post_init__(self):
        _check(self.lower, self.upper)
        if self.lower > self.upper:
            raise ValueError(
                f"malformed slab: lower {self.lower} > upper {self.upper}"
            )

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def empty(self) -> bool:
        return self.lower == self.upper

    def contains(self, x: Point) -> bool:
        _check(x, self.lower)
        return self.lower <= x < self.upper

    def hull(self):
        """Closed lex interval ``(lo, hi)`` or None when empty."""
        if self.empty:
            return None
        return self.lower, pred(self.upper)

    def shift(self, c: Point) -> "Slab":
        return Slab(add(self.lower, c), add(self.upper, c))

    def negate(self) -> "Slab":
        # -[P, Q) = (-Q, -P] = [succ(-Q), succ(-P))
        return Slab(succ(neg(self.upper)), succ(neg(self.lower)))

    def clip_below(self, bound: Point) -> "Slab":
        """Intersection with ``Z^d_{>=bound}``."""
        lo = lex_max(self.lower, bound)
        return Slab(lex_min(lo, self.upper), self.upper)


def slab_contains(s: Slab, x: Point) -> bool:
    return s.contains(x)


@dataclass(frozen=True)
class Box:
    """Componentwise box ``lo <= x <= hi``; the finite verification window."""

    lo: Point
    hi: Point

    def __post_init__(self):
        _check(self.lo, self.hi)
        if not cw_le(self.lo, self.hi):
            raise ValueError(f"box bounds not ordered: {self.lo} > {self.hi}")

    @classmethod
    def cube(cls, lo: int, hi: int, d: int) -> "Box":
        return cls((lo,) * d, (hi,) * d)

    @property
    def dim(self) -> int:
        return len(self.lo)

    def __len__(self) -> int:
        n = 1
        for a, b in zip(self.lo, self.hi):
            n *= b - a + 1
        return n

    def contains(self, x: Point) -> bool:
        _check(x, self.lo)
        return all(a <= c <= b for a, c, b in zip(self.lo, x, self.hi))

    def __iter__(self) -> Iterator[Point]:
        # itertools.product yields in lex order
        return itertools.product(*(range(a, b + 1) for a, b in zip(self.lo, self.hi)))

    def shift(self, c: Point) -> "Box":
        return Box(add(self.lo, c), add(self.hi, c))

    def negate(self) -> "Box":
        return Box(neg(self.hi), neg(self.lo))

    def lex_radius(self) -> Point:
        """Largest lex absolute value attained on the box."""
        return lex_max(self.hi, neg(self.lo))


def _interval_in_box(lo: Point, hi: Point, blo: Sequence[int], bhi: Sequence[int]):
    """Lex-sorted points x of the box with lo <= x <= hi (lex, both closed)."""
    if not lo:
        yield ()
        return
    first_lo = max(blo[0], lo[0])
    first_hi = min(bhi[0], hi[0])
    rest_lo, rest_hi = blo[1:], bhi[1:]
    for c in range(first_lo, first_hi + 1):
        sub_lo = lo[1:] if c == lo[0] else tuple(rest_lo)
        sub_hi = hi[1:] if c == hi[0] else tuple(rest_hi)
        for tail in _interval_in_box(sub_lo, sub_hi, rest_lo, rest_hi):
            yield (c,) + tail


def interval_enumerate(lo: Point, hi: Point, w: Box) -> Iterator[Point]:
    """Points of ``w`` in the closed lex interval ``[lo, hi]``, lex-sorted."""
    _check(lo, w.lo)
    if lo > hi:
        return iter(())
    return _interval_in_box(lo, hi, w.lo, w.hi)


def slab_enumerate(s: Slab, w: Box) -> list:
    h = s.hull()
    if h is None:
        return []
    return list(interval_enumerate(h[0], h[1], w))

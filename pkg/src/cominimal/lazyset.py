"""Infinite subsets of Z^d with decidable membership and layer certificates.

A :class:`LazySet` is a (possibly infinite) sequence of layers.  Every layer
carries

* a *hull*: finitely many closed lex intervals that contain all its members,
* a *radius*: a lower bound on the lex absolute value of its members.

Radii are required to be non-decreasing and unbounded.  That single property
is the divergence witness: once a layer's radius exceeds the lex radius of a
query region, no later layer can meet the region.  Exact membership inside a
hull is answered either by explicit points/slabs or by a membership oracle
supplied by the builder (used for recursively defined layers).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional

from . import lattice as lt
from .errors import DimensionError, DivergenceError
from .lattice import Box, Point, Slab

#: Safety valve for layer scans; sets built here diverge long before this.
MAX_LAYERS = 100_000


def _interval_radius(lo: Point, hi: Point) -> Point:
    """Smallest lex absolute value over the closed lex interval [lo, hi]."""
    z = lt.zero(len(lo))
    if lo <= z <= hi:
        return z
    if hi < z:
        return lt.neg(hi)
    return lo


@dataclass(frozen=True)
class Layer:
    index: int
    hull: tuple  # closed lex intervals (lo, hi), sorted
    radius: Point
    points: frozenset = frozenset()
    slabs: tuple = ()
    member: Optional[Callable[[Point], bool]] = field(default=None, compare=False)

    def in_hull(self, x: Point) -> bool:
        return any(lo <= x <= hi for lo, hi in self.hull)

    def contains(self, x: Point) -> bool:
        if not self.in_hull(x):
            return False
        if self.member is not None:
            return self.member(x)
        return x in self.points or any(s.contains(x) for s in self.slabs)

    def enumerate(self, w: Box) -> list:
        if self.member is None and not self.slabs:
            return sorted(p for p in self.points if w.contains(p))
        out = set()
        for lo, hi in self.hull:
            for x in lt.interval_enumerate(lo, hi, w):
                if self.contains(x):
                    out.add(x)
        return sorted(out)

    @property
    def is_points(self) -> bool:
        return self.member is None and not self.slabs


def point_layer(index: int, points: Iterable[Point]) -> Layer:
    pts = frozenset(points)
    if not pts:
        raise ValueError("point_layer needs at least one point")
    hull = tuple(sorted((p, p) for p in pts))
    radius = min(lt.lex_abs(p) for p in pts)
    return Layer(index, hull, radius, points=pts)


def slab_layer(index: int, slabs: Iterable[Slab], points: Iterable[Point] = ()) -> Layer:
    slabs = tuple(s for s in slabs if not s.empty)
    pts = frozenset(points)
    hull = sorted([s.hull() for s in slabs] + [(p, p) for p in pts])
    if not hull:
        raise ValueError("slab_layer needs a nonempty slab or point")
    radius = min(_interval_radius(lo, hi) for lo, hi in hull)
    return Layer(index, tuple(hull), radius, points=pts, slabs=slabs)


def oracle_layer(index: int, hull: Iterable[tuple], member: Callable[[Point], bool]) -> Layer:
    """A layer known only through a membership oracle inside its hull."""
    hull = tuple(sorted(hull))
    radius = min(_interval_radius(lo, hi) for lo, hi in hull)
    return Layer(index, hull, radius, member=member)


@dataclass(frozen=True)
class Certificate:
    status: str  # "complete" | "truncated"
    explored_layer_max: int
    reason: str

    @property
    def complete(self) -> bool:
        return self.status == "complete"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "explored_layer_max": self.explored_layer_max,
            "reason": self.reason,
        }


@dataclass(frozen=True, order=True)
class Representation:
    b: Point
    a: Point
    target: Point


class LazySet:
    """An infinite (or finite) subset of Z^d given layer by layer.

    ``layer_fn(n)`` returns the n-th :class:`Layer` or ``None`` once a finite
    set is exhausted.  Layers are cached; construction is cheap.
    """

    def __init__(
        self,
        dim: int,
        layer_fn: Callable[[int], Optional[Layer]],
        *,
        symmetric: bool = False,
        name: str = "",
    ):
        self.dim = dim
        self.symmetric = symmetric
        self.name = name
        self._layer_fn = layer_fn
        self._cache: dict = {}
        self._end: Optional[int] = None
        self._lock = threading.RLock()

    def __repr__(self):
        return f"LazySet({self.name or '?'}, d={self.dim})"

    def layer(self, n: int) -> Optional[Layer]:
        if self._end is not None and n >= self._end:
            return None
        try:
            return self._cache[n]
        except KeyError:
            pass
        lay = self._layer_fn(n)
        with self._lock:
            if lay is None:
                self._end = n if self._end is None else min(self._end, n)
            else:
                if n > 0:
                    prev = self.layer(n - 1)
                    if prev is not None and lay.radius < prev.radius:
                        raise DivergenceError(
                            f"{self!r}: layer radii not monotone at layer {n}"
                        )
                self._cache[n] = lay
        return lay

    def layers(self) -> Iterator[Layer]:
        n = 0
        while True:
            lay = self.layer(n)
            if lay is None:
                return
            yield lay
            n += 1
            if n > MAX_LAYERS:
                raise DivergenceError(f"{self!r}: no divergence within {MAX_LAYERS} layers")

    def layers_within(self, radius: Point) -> Iterator[Layer]:
        """Layers that may contain a point of lex absolute value <= radius."""
        for lay in self.layers():
            if lay.radius is None:
                raise DivergenceError(f"{self!r}: layer {lay.index} has no divergence witness")
            if lay.radius > radius:
                return
            yield lay

    def is_finite(self, probe: int = 64) -> bool:
        """True when the layer list is known to end within ``probe`` layers."""
        for n in range(probe + 1):
            if self.layer(n) is None:
                return True
        return False

    def contains(self, x: Point) -> bool:
        if len(x) != self.dim:
            raise DimensionError(f"point {x} not in Z^{self.dim}")
        r = lt.lex_abs(x)
        return any(lay.contains(x) for lay in self.layers_within(r))

    __contains__ = contains

    def cutoff(self, w: Box) -> tuple:
        """(layers meeting ``w`` possibly, first excluded index or None)."""
        r = w.lex_radius()
        kept = []
        for lay in self.layers():
            if lay.radius > r:
                return kept, lay.index
            kept.append(lay)
        return kept, None

    def free_interval(self, p: Point):
        """Open lex interval (lower, upper) around ``p`` containing no member.

        ``None`` endpoints mean unbounded.  Returns ``None`` when ``p`` lies
        inside some hull interval (the hull alone cannot certify a gap).
        """
        lower = upper = None
        r = lt.lex_abs(p)
        for lay in self.layers():
            if lay.radius > r:
                # every member of this and later layers has |x| >= radius > |p|
                far_lo, far_hi = lt.neg(lay.radius), lay.radius
                lower = far_lo if lower is None else max(lower, far_lo)
                upper = far_hi if upper is None else min(upper, far_hi)
                # the layer's own hull is sharper than its radius
                for lo, hi in lay.hull:
                    if hi < p:
                        lower = max(lower, hi)
                    elif lo > p:
                        upper = min(upper, lo)
                break
            for lo, hi in lay.hull:
                if lo <= p <= hi:
                    return None
                if hi < p:
                    lower = hi if lower is None else max(lower, hi)
                else:
                    upper = lo if upper is None else min(upper, lo)
        return lower, upper


def set_contains(S: LazySet, x: Point) -> bool:
    return S.contains(x)


def enumerate_window(S: LazySet, w: Box):
    """``(S ∩ w lex-sorted, Certificate)``; refuses without divergence witnesses."""
    if w.dim != S.dim:
        raise DimensionError(f"window dimension {w.dim} != set dimension {S.dim}")
    kept, stop = S.cutoff(w)
    out = set()
    for lay in kept:
        if lay.radius is None:
            raise DivergenceError(f"{S!r}: layer {lay.index} has no divergence witness")
        out.update(lay.enumerate(w))
    last = kept[-1].index if kept else -1
    if stop is None:
        reason = "finite set: all layers explored"
    else:
        reason = f"layer {stop} radius exceeds window radius {lt.format_point(w.lex_radius())}"
    return sorted(out), Certificate("complete", last, reason)


# -- combinators ---------------------------------------------------------


def _same_dim(*sets):
    dims = {s.dim for s in sets}
    if len(dims) != 1:
        raise DimensionError(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


def from_finite(points: Iterable[Point], dim: Optional[int] = None, name: str = "") -> LazySet:
    pts = sorted({lt.point(p) for p in points})
    if dim is None:
        if not pts:
            raise ValueError("dim is required for an empty finite set")
        dim = len(pts[0])
    for p in pts:
        if len(p) != dim:
            raise DimensionError(f"point {p} not in Z^{dim}")
    sym = all(lt.neg(p) in set(pts) for p in pts)
    lay = point_layer(0, pts) if pts else None

    def layer_fn(n):
        return lay if n == 0 else None

    return LazySet(dim, layer_fn, symmetric=sym, name=name or "finite")


def from_slab(s: Slab, name: str = "") -> LazySet:
    lay = None if s.empty else slab_layer(0, [s])
    return LazySet(s.dim, lambda n: lay if n == 0 else None, name=name or "slab")


def _merge(n, a: Optional[Layer], b: Optional[Layer]) -> Optional[Layer]:
    if a is None and b is None:
        return None
    if a is None or b is None:
        one = a or b
        return Layer(n, one.hull, one.radius, one.points, one.slabs, one.member)
    hull = tuple(sorted(a.hull + b.hull))
    radius = min(a.radius, b.radius)
    if a.member is None and b.member is None:
        return Layer(n, hull, radius, a.points | b.points, a.slabs + b.slabs)
    return Layer(n, hull, radius, member=lambda x: a.contains(x) or b.contains(x))


def union(S1: LazySet, S2: LazySet, name: str = "") -> LazySet:
    d = _same_dim(S1, S2)
    return LazySet(
        d,
        lambda n: _merge(n, S1.layer(n), S2.layer(n)),
        symmetric=S1.symmetric and S2.symmetric,
        name=name or f"({S1.name} | {S2.name})",
    )


def negate(S: LazySet, name: str = "") -> LazySet:
    def layer_fn(n):
        lay = S.layer(n)
        if lay is None:
            return None
        hull = tuple(sorted((lt.neg(hi), lt.neg(lo)) for lo, hi in lay.hull))
        if lay.member is None:
            return Layer(
                n,
                hull,
                lay.radius,
                frozenset(lt.neg(p) for p in lay.points),
                tuple(s.negate() for s in lay.slabs),
            )
        return Layer(n, hull, lay.radius, member=lambda x: lay.contains(lt.neg(x)))

    return LazySet(S.dim, layer_fn, symmetric=S.symmetric, name=name or f"-{S.name}")


def translate(S: LazySet, c: Point, name: str = "") -> LazySet:
    c = lt.point(c)
    if len(c) != S.dim:
        raise DimensionError(f"shift {c} not in Z^{S.dim}")
    shrink = lt.lex_abs(c)

    def layer_fn(n):
        lay = S.layer(n)
        if lay is None:
            return None
        hull = tuple((lt.add(lo, c), lt.add(hi, c)) for lo, hi in lay.hull)
        # |x + c| >= |x| - |c| in any ordered group
        radius = lt.sub(lay.radius, shrink)
        if lay.member is None:
            return Layer(
                n,
                hull,
                radius,
                frozenset(lt.add(p, c) for p in lay.points),
                tuple(s.shift(c) for s in lay.slabs),
            )
        return Layer(n, hull, radius, member=lambda x: lay.contains(lt.sub(x, c)))

    sym = S.symmetric and not any(c)
    return LazySet(S.dim, layer_fn, symmetric=sym, name=name or f"({S.name} + {lt.format_point(c)})")


def difference(S: LazySet, X: LazySet, name: str = "") -> LazySet:
    """``S \\ X`` with the layer certificates of ``S``."""
    _same_dim(S, X)

    def layer_fn(n):
        lay = S.layer(n)
        if lay is None:
            return None
        return Layer(n, lay.hull, lay.radius, member=lambda x: lay.contains(x) and not X.contains(x))

    return LazySet(S.dim, layer_fn, name=name or f"({S.name} \\ {X.name})")


def layered(
    dim: int,
    layer_fn: Callable[[int], Optional[Layer]],
    *,
    symmetric: bool = False,
    name: str = "",
) -> LazySet:
    return LazySet(dim, layer_fn, symmetric=symmetric, name=name)


# -- representations -------------------------------------------------------

#: Consecutive expanding gap intervals required to close an infinite tail.
GAP_HORIZON = 3
#: Layer budget for a single representation query.
REP_LAYER_BUDGET = 2048


def _outer_radius(S: LazySet) -> Optional[Point]:
    """Largest lex absolute value over all hulls of a finite set."""
    if not S.is_finite():
        return None
    best = None
    for lay in S.layers():
        for lo, hi in lay.hull:
            r = lt.lex_max(lt.lex_abs(lo), lt.lex_abs(hi))
            best = r if best is None else max(best, r)
    return best if best is not None else lt.zero(S.dim)


def _contains_interval(outer, inner) -> bool:
    (olo, ohi), (ilo, ihi) = outer, inner
    lo_ok = olo is None or (ilo is not None and olo <= ilo)
    hi_ok = ohi is None or (ihi is not None and ohi >= ihi)
    return lo_ok and hi_ok


def representations(A: LazySet, B: LazySet, z: Point, *, budget: int = REP_LAYER_BUDGET):
    """All ``(a, b)`` with ``a + b = z``, ``a ∈ A``, ``b ∈ B``, sorted by ``b``.

    The scan runs over the layers of ``B``, which must consist of explicit
    points.  It stops with a ``complete`` certificate when

    * ``B`` is exhausted, or
    * ``A`` is finite and ``B``'s radius exceeds ``|z| + outer(A)``, or
    * for ``GAP_HORIZON`` consecutive layers every ``z - b`` sits in a
      hull gap of ``A`` and, per sign of ``b``, the gaps translated back to
      the target side expand monotonically around ``z``.

    Otherwise the certificate is ``truncated`` at the layer budget.
    """
    z = lt.point(z)
    _same_dim(A, B)
    if len(z) != A.dim:
        raise DimensionError(f"target {z} not in Z^{A.dim}")
    reps = []
    rz = lt.lex_abs(z)
    outer = _outer_radius(A)
    bound = lt.add(rz, outer) if outer is not None else None
    prev = {}
    run = 0
    last = -1
    for lay in B.layers():
        n = lay.index
        if n >= budget:
            return sorted(reps), Certificate(
                "truncated", last, f"layer budget {budget} exhausted before tail closed"
            )
        if not lay.is_points:
            raise ValueError("representations needs a right operand with point layers")
        if bound is not None and lay.radius > bound:
            return sorted(reps), Certificate(
                "complete", last, "right radius exceeds |z| + outer radius of finite left set"
            )
        last = n
        clean = True
        cur = {}
        for b in sorted(lay.points):
            a = lt.sub(z, b)
            if A.contains(a):
                reps.append(Representation(b, a, z))
                clean = False
                continue
            if bound is not None:
                # the radius cut closes the scan; gaps are not needed
                continue
            gap = A.free_interval(a)
            if gap is None:
                clean = False
                continue
            lo, hi = gap
            zi = (None if lo is None else lt.add(lo, b), None if hi is None else lt.add(hi, b))
            sign = (b > lt.zero(A.dim)) - (b < lt.zero(A.dim))
            if sign in cur:
                # two points of one sign in a layer: keep the tighter interval
                olo, ohi = cur[sign]
                zi = (
                    zi[0] if olo is None else olo if zi[0] is None else max(olo, zi[0]),
                    zi[1] if ohi is None else ohi if zi[1] is None else min(ohi, zi[1]),
                )
            cur[sign] = zi
        if clean and prev and all(s in cur and _contains_interval(cur[s], prev[s]) for s in prev):
            run += 1
        else:
            run = 0
        prev = cur if clean else {}
        if run >= GAP_HORIZON:
            return sorted(reps), Certificate(
                "complete",
                last,
                f"target in expanding hull gaps of left set for {GAP_HORIZON} layers up to {n}",
            )
    return sorted(reps), Certificate("complete", last, "right set exhausted")

"""Partner-set constructions: interval systems, recursive layers, G, pruning.

All sets here are exact.  Recursively defined layers (E, F, P, Q) are
decided point by point through a memoized oracle, so membership of any
point is finite work no matter how far out it lies; ``n_max`` only controls
how many layers are *materialized* for dumps and cross-checks.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import kernels
from . import lattice as lt
from .errors import DivergenceError, HypothesisError, InconclusiveError, SequenceError
from .lacunary import SequenceSpec, build_T, build_V, build_W, classify_growth
from .lattice import Box, Point, Slab
from .lazyset import (
    Layer,
    LazySet,
    difference,
    oracle_layer,
    point_layer,
    representations,
    slab_layer,
)


def _require_infinite(seq: SequenceSpec) -> None:
    if not seq.infinite:
        raise SequenceError("constructions need an infinite (closed-form) sequence")


def _hypothesis(seq: SequenceSpec, flag: str, n_max: int, label: str):
    report = classify_growth(seq, max(n_max, 8))
    if not getattr(report, flag):
        raise HypothesisError(
            f"{label} requires {flag.replace('holds_', 't_n ')} componentwise; "
            f"fails at n={report.witnesses.get(flag[6:], ('?',))[0]}",
            report,
        )
    return report


# -- I_n and J_n ----------------------------------------------------------------


class IntervalSystem:
    """``I_n = X_{-t_n, -t_{n-1}}`` and ``J_n = X_{-t_n, -t_{n-1}-t_{n-2}}``."""

    def __init__(self, seq: SequenceSpec):
        self.seq = seq

    def I(self, n: int) -> Slab:
        t = self.seq.term
        return Slab(lt.neg(t(n)), lt.neg(t(n - 1)))

    def J(self, n: int) -> Slab:
        t = self.seq.term
        return Slab(lt.neg(t(n)), lt.neg(lt.add(t(n - 1), t(n - 2))))

    def J_clipped(self, n: int) -> Slab:
        """``J_n ∩ Z^d_{>= -2 t_{n-1}}``."""
        return self.J(n).clip_below(lt.neg(lt.scale(2, self.seq.term(n - 1))))

    def index_of(self, x: Point) -> Optional[int]:
        """The n with x ∈ I_n, or None for x >= 0."""
        if x >= lt.zero(self.seq.dim):
            return None
        n = 0
        while not self.I(n).contains(x):
            n += 1
        return n


def intervals(seq: SequenceSpec) -> IntervalSystem:
    return IntervalSystem(seq)


# -- recursive symmetric layers E / F / P / Q ---------------------------------------

VARIANTS = {
    # base set, seeded layers (index -> generator of points), first index
    "E": ("W", {-1: lambda t: [lt.zero(len(t(0)))], 0: lambda t: []}, -1),
    "F": ("W", {0: lambda t: [lt.neg(t(0))]}, 0),
    "P": ("V", {-1: lambda t: [lt.zero(len(t(0)))], 0: lambda t: [lt.neg(t(0))]}, -1),
    "Q": ("V", {0: lambda t: [lt.neg(t(0))]}, 0),
}


class LayeredConstruction:
    """One of the symmetric partner sets E, F, P, Q.

    ``layer_n = {-t_{n-1}} + (I_{n-1} \\ (U_{n-1} + base))`` for n >= 1, where
    ``U_{n-1}`` is the union of all earlier layers and their negatives.
    ``result`` is the union of all layers and their negatives.
    """

    def __init__(self, variant: str, seq: SequenceSpec, n_max: int, box: Optional[Box] = None):
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}")
        _require_infinite(seq)
        self.variant = variant
        self.seq = seq
        self.n_max = n_max
        self.box = box
        base_name, seeds, first = VARIANTS[variant]
        self.base_name = base_name
        self.base = build_W(seq) if base_name == "W" else build_V(seq)
        self.first = first
        self.seeds = {n: frozenset(fn(seq.term)) for n, fn in seeds.items()}
        self.iv = IntervalSystem(seq)
        self._memo: dict = {}
        self._lock = threading.Lock()
        self.result = LazySet(seq.dim, self._set_layer, symmetric=True, name=variant)
        self.layers: dict = {}
        self.truncated: dict = {}

    # hulls ---------------------------------------------------------------

    def hull(self, n: int) -> Optional[tuple]:
        """Closed lex interval containing layer n (n >= 1), by construction."""
        t = self.seq.term
        s = Slab(lt.neg(lt.scale(2, t(n - 1))), lt.neg(lt.add(t(n - 1), t(n - 2))))
        return s.hull()

    def _layer_outer(self, k: int) -> Point:
        """Lex bound on |x| for x in layers first..k."""
        r = lt.zero(self.seq.dim)
        for n in range(self.first, k + 1):
            if n in self.seeds:
                for p in self.seeds[n]:
                    r = max(r, lt.lex_abs(p))
            else:
                r = max(r, lt.scale(2, self.seq.term(n - 1)))
        return r

    # point oracle --------------------------------------------------------

    def in_layer(self, n: int, e: Point) -> bool:
        if n in self.seeds:
            return e in self.seeds[n]
        if n < self.first:
            return False
        key = (n, e)
        try:
            return self._memo[key]
        except KeyError:
            pass
        x = lt.add(e, self.seq.term(n - 1))
        val = self.iv.I(n - 1).contains(x) and not self.in_sumset(n - 1, x)
        with self._lock:
            self._memo[key] = val
        return val

    def in_union(self, k: int, y: Point) -> bool:
        """y ∈ ∪_{first <= m <= k} (L_m ∪ -L_m)."""
        for m in range(self.first, k + 1):
            if m in self.seeds:
                if y in self.seeds[m] or lt.neg(y) in self.seeds[m]:
                    return True
                continue
            lo, hi = self.hull(m)
            if lo <= y <= hi and self.in_layer(m, y):
                return True
            ny = lt.neg(y)
            if lo <= ny <= hi and self.in_layer(m, ny):
                return True
        return False

    def in_sumset(self, k: int, x: Point) -> bool:
        """x ∈ (∪_{first <= m <= k} ±L_m) + base."""
        reach = lt.add(lt.lex_abs(x), self._layer_outer(k))
        for lay in self.base.layers_within(reach):
            for b in lay.points:
                if self.in_union(k, lt.sub(x, b)):
                    return True
        return False

    def contains(self, x: Point) -> bool:
        return self.result.contains(x)

    # LazySet view --------------------------------------------------------

    def _set_layer(self, j: int) -> Layer:
        n = j + self.first
        if n in self.seeds:
            pts = self.seeds[n] | {lt.neg(p) for p in self.seeds[n]}
            if pts:
                return point_layer(j, pts)
            return Layer(j, (), lt.zero(self.seq.dim))
        lo, hi = self.hull(n)
        hull = [(lo, hi), (lt.neg(hi), lt.neg(lo))]
        return oracle_layer(j, hull, lambda x, n=n: self.in_layer(n, x) or self.in_layer(n, lt.neg(x)))

    # materialization -----------------------------------------------------

    def layer_points(self, n: int) -> list:
        """Sorted points of layer n (restricted to ``box`` when d >= 2)."""
        if n in self.layers:
            return self.layers[n]
        if n in self.seeds:
            pts = sorted(self.seeds[n])
        elif self.seq.dim == 1:
            pts = self._materialize_1d(n)
        else:
            if self.box is None:
                raise DivergenceError(
                    f"layer {self.variant}_{n} is infinite in d={self.seq.dim}; a bounding box is required"
                )
            lo, hi = self.hull(n)
            pts = [x for x in lt.interval_enumerate(lo, hi, self.box) if self.in_layer(n, x)]
            self.truncated[n] = True
        self.layers[n] = pts
        return pts

    def _materialize_1d(self, n: int) -> list:
        t = self.seq.term
        slab = self.iv.I(n - 1)
        x_lo, x_hi = slab.lower[0], slab.upper[0] - 1
        shift = t(n - 1)[0]
        prev = set()
        for m in range(self.first, n):
            for p in self.layer_points(m):
                prev.add(p[0])
                prev.add(-p[0])
        reach = max(abs(x_lo), abs(x_hi)) + self._layer_outer(n - 1)[0]
        shifts = sorted(b[0] for lay in self.base.layers_within((reach,)) for b in lay.points)
        members = sorted(prev)
        if kernels.fits_int64(x_lo, x_hi, reach, *(members[:1] + members[-1:])):
            xs = np.arange(x_lo, x_hi + 1, dtype=np.int64)
            covered = kernels.shifted_membership(
                xs, np.array(shifts, dtype=np.int64), np.array(members, dtype=np.int64)
            )
            keep = xs[~covered] - shift
            return [(int(v),) for v in keep]
        prevset = set(members)
        return [
            (x - shift,)
            for x in range(x_lo, x_hi + 1)
            if not any((x - s) in prevset for s in shifts)
        ]

    def materialize(self) -> dict:
        for n in range(self.first, self.n_max + 1):
            self.layer_points(n)
        return {n: self.layers[n] for n in range(self.first, self.n_max + 1)}


def build_layers(variant: str, seq: SequenceSpec, n_max: int, box: Optional[Box] = None) -> LayeredConstruction:
    """Build E/F/P/Q (lazily) and materialize layers up to ``n_max``."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    _require_infinite(seq)
    _hypothesis(seq, "holds_gt3", n_max, f"variant {variant}")
    if seq.dim >= 2 and box is None:
        raise DivergenceError(f"variant {variant} in d={seq.dim} needs a bounding box")
    c = LayeredConstruction(variant, seq, n_max, box)
    c.materialize()
    return c


# -- m_k and G --------------------------------------------------------------


class MkSequence:
    """Increasing m_0 < m_1 < ... with m_0 >= 2 and t_{m_k - 2} >= (k+1)·1.

    An explicit prefix is validated and then continued with the minimal
    admissible choice.
    """

    def __init__(self, seq: SequenceSpec, prefix=()):
        self.seq = seq
        self._vals: list = []
        for m in prefix:
            self._push(int(m), check=True)

    def _admissible(self, k: int, m: int) -> bool:
        t = self.seq.term(m - 2)
        return all(c >= k + 1 for c in t)

    def _push(self, m: int, check: bool = False) -> None:
        k = len(self._vals)
        lo = 2 if k == 0 else self._vals[-1] + 1
        if check and (m < lo or not self._admissible(k, m)):
            raise ValueError(f"m_{k} = {m} is not admissible")
        self._vals.append(m)

    def _extend(self) -> None:
        k = len(self._vals)
        m = 2 if k == 0 else self._vals[-1] + 1
        while not self._admissible(k, m):
            m += 1
        self._vals.append(m)

    def __getitem__(self, k: int) -> int:
        while len(self._vals) <= k:
            self._extend()
        return self._vals[k]

    def prefix(self, k_max: int) -> list:
        return [self[k] for k in range(k_max + 1)]

    def index_of(self, n: int) -> Optional[int]:
        """k with m_k = n, or None."""
        k = 0
        while self[k] < n:
            k += 1
        return k if self[k] == n else None


def choose_mk(seq: SequenceSpec, k_max: int) -> list:
    _require_infinite(seq)
    return MkSequence(seq).prefix(k_max)


@dataclass
class GConstruction:
    seq: SequenceSpec
    m: MkSequence
    n_max: int
    result: LazySet
    excluded_thm3: LazySet
    excluded_thm6: LazySet
    minus_thm3: LazySet  # G \ ({-2t_0} ∪ {-t_n - 3t_{n-1}})
    minus_thm6: LazySet  # G \ {-t_n - 3t_{n-1}}
    layers: dict = field(default_factory=dict)

    def slabs(self, n: int) -> tuple:
        return g_slabs(self.seq, self.m, n)

    def layer_points(self, n: int, box: Optional[Box] = None) -> list:
        """Sorted points of G_n (within ``box`` in d >= 2)."""
        if box is None:
            if self.seq.dim >= 2:
                raise DivergenceError("G_n is infinite in d >= 2; pass a box")
            out = []
            for s in self.slabs(n):
                out.extend((x,) for x in range(s.lower[0], s.upper[0]))
            return sorted(out)
        out = set()
        for s in self.slabs(n):
            out.update(lt.slab_enumerate(s, box))
        return sorted(out)


def g_slabs(seq: SequenceSpec, m: MkSequence, n: int) -> tuple:
    t = seq.term
    d = seq.dim
    if n == 0:
        return (IntervalSystem(seq).I(0),)
    core = Slab(lt.neg(lt.scale(2, t(n - 1))), lt.neg(lt.add(t(n - 1), t(n - 2))))
    k = m.index_of(n)
    if k is None:
        return (core,)
    base = lt.neg(t(n))
    extra = Slab(lt.add(base, (k,) * d), lt.add(base, (k + 1,) * d))
    return (extra, core)


def _excluded_set(seq: SequenceSpec, with_2t0: bool, name: str) -> LazySet:
    t = seq.term

    def layer_fn(j):
        n = j + 1
        pts = [lt.neg(lt.add(t(n), lt.scale(3, t(n - 1))))]
        if with_2t0 and j == 0:
            pts.append(lt.neg(lt.scale(2, t(0))))
        return point_layer(j, pts)

    return LazySet(seq.dim, layer_fn, name=name)


def build_G(seq: SequenceSpec, m=None, n_max: int = 4, require: str = "ge6") -> GConstruction:
    """G and its two deletion variants.

    ``require`` names the growth hypothesis checked first: ``ge6`` for the
    W/V pairings, ``ge2`` when G is only paired with T.
    """
    if require not in ("ge2", "ge6"):
        raise ValueError("require must be 'ge2' or 'ge6'")
    _require_infinite(seq)
    _hypothesis(seq, "holds_" + require, n_max, "G construction")
    mk = m if isinstance(m, MkSequence) else MkSequence(seq, m or ())
    G = LazySet(seq.dim, lambda n: slab_layer(n, g_slabs(seq, mk, n)), name="G")
    x3 = _excluded_set(seq, True, "X3")
    x6 = _excluded_set(seq, False, "X6")
    g = GConstruction(
        seq,
        mk,
        n_max,
        G,
        x3,
        x6,
        difference(G, x3, name="G3"),
        difference(G, x6, name="G6"),
    )
    if seq.dim == 1:
        g.layers = {n: g.layer_points(n) for n in range(n_max + 1)}
    return g


# -- greedy pruning ---------------------------------------------------------------


@dataclass
class PruneResult:
    retained: list
    removed: list
    witnesses: dict  # retained element -> target covered only through it
    order: list


def prune_order(points) -> list:
    """Lex distance from the origin, ties broken lex."""
    return sorted(points, key=lambda p: (lt.lex_abs(p), p))


def greedy_prune(S: LazySet, T: LazySet, w: Box, order: Optional[Callable] = None) -> PruneResult:
    """Greedily drop elements of S while S + T still covers the window.

    Only elements taking part in some representation of a window point are
    considered (the relevance region).  Elements are visited in ``order``
    (default :func:`prune_order`); each is removed iff every window target
    it helps cover keeps another representation.
    """
    uses: dict = {}
    count: dict = {}
    for z in w:
        reps, cert = representations(S, T, z)
        if not cert.complete:
            raise InconclusiveError(
                f"representations of {lt.format_point(z)} not certified: {cert.reason}"
            )
        count[z] = len(reps)
        for r in reps:
            uses.setdefault(r.a, []).append(z)
    seq = (order or prune_order)(list(uses))
    alive = set(uses)
    removed = []
    for s in seq:
        if all(count[z] >= 2 for z in uses[s]):
            alive.discard(s)
            removed.append(s)
            for z in uses[s]:
                count[z] -= 1
    witnesses = {}
    for s in sorted(alive):
        for z in uses[s]:
            if count[z] == 1:
                witnesses[s] = z
                break
    return PruneResult(sorted(alive), sorted(removed), witnesses, seq)

"""Windowed verification of complements, minimality and co-minimal pairs.

Every check works from a table of representations ``z -> [(a, b), ...]``
over the targets of a window.  The same summarizing code runs on tables
computed in Z^d (through :func:`representations`) and on tables computed
in a finite group, which is what lets the finite-group oracle validate it.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from . import kernels
from . import lattice as lt
from .constructions import IntervalSystem
from .errors import CapExceededError, HypothesisError, InconclusiveError
from .lacunary import SequenceSpec, build_W, classify_growth
from .lattice import Box, Point, Slab
from .lazyset import (
    REP_LAYER_BUDGET,
    Certificate,
    LazySet,
    Layer,
    from_finite,
    point_layer,
    representations,
    slab_layer,
)

WITNESSED = "witnessed"
NOT_LOCALLY_WITNESSED = "not locally witnessed"


# -- representation tables ----------------------------------------------------


@dataclass
class RepTable:
    """Representations of every window target, with their certificates.

    ``reps[z]`` lists ``(a, b)`` pairs with ``a ∈ A``, ``b ∈ B``.
    ``complete[z]`` is False when the scan could not be closed.
    """

    targets: list
    reps: dict
    complete: dict
    reasons: dict = field(default_factory=dict)
    explored: dict = field(default_factory=dict)

    def certificate_summary(self) -> dict:
        n_complete = sum(1 for z in self.targets if self.complete[z])
        return {
            "targets": len(self.targets),
            "complete": n_complete,
            "truncated": len(self.targets) - n_complete,
            "explored_layer_max": max(self.explored.values(), default=-1),
            "reasons": sorted(set(self.reasons.values())),
        }


def _point_layered(S: LazySet) -> bool:
    lay = S.layer(0)
    return lay is None or lay.is_points


def rep_table(A: LazySet, B: LazySet, w: Box, *, budget: int = REP_LAYER_BUDGET) -> RepTable:
    """Representations of each z ∈ w as a + b, scanning whichever side has point layers."""
    if _point_layered(B):
        swap = False
    elif _point_layered(A):
        swap = True
    else:
        raise ValueError("one side of the pair must consist of point layers")
    targets = list(w)
    reps, complete, reasons, explored = {}, {}, {}, {}
    for z in targets:
        if swap:
            rs, cert = representations(B, A, z, budget=budget)
            pairs = sorted((r.b, r.a) for r in rs)
        else:
            rs, cert = representations(A, B, z, budget=budget)
            pairs = sorted((r.a, r.b) for r in rs)
        reps[z] = pairs
        complete[z] = cert.complete
        reasons[z] = cert.status if cert.complete else cert.reason
        explored[z] = cert.explored_layer_max
    return RepTable(targets, reps, complete, reasons, explored)


def finite_rep_table(A: Iterable, B: Iterable, targets: Iterable, add: Callable) -> RepTable:
    """Representation table for finite sets under an arbitrary addition."""
    targets = list(targets)
    reps = {z: [] for z in targets}
    for a in A:
        for b in B:
            s = add(a, b)
            if s in reps:
                reps[s].append((a, b))
    for z in targets:
        reps[z].sort()
    return RepTable(targets, reps, {z: True for z in targets}, {z: "complete" for z in targets})


def rep_counts_1d(a_vals: Iterable[int], b_vals: Iterable[int], lo: int, hi: int) -> np.ndarray:
    """Counts of a + b = z for z in [lo, hi], from explicit finite integer lists.

    An independent cross-check for d = 1 tables; runs on the compiled kernel
    when the values fit comfortably in int64, else in plain Python.
    """
    a_vals, b_vals = sorted(set(a_vals)), sorted(set(b_vals))
    ends = [lo, hi] + a_vals[:1] + a_vals[-1:] + b_vals[:1] + b_vals[-1:]
    if kernels.fits_int64(*ends):
        return kernels.representation_counts(
            np.array(a_vals, dtype=np.int64), np.array(b_vals, dtype=np.int64), lo, hi
        )
    counts = np.zeros(hi - lo + 1, dtype=np.int64)
    for a in a_vals:
        for b in b_vals:
            if lo <= a + b <= hi:
                counts[a + b - lo] += 1
    return counts


# -- summaries shared by every route ------------------------------------------------


@dataclass
class CoverResult:
    uncovered: list
    inconclusive: list

    @property
    def ok(self) -> bool:
        return not self.uncovered and not self.inconclusive

    @property
    def status(self) -> str:
        if self.uncovered:
            return "fail"
        return "inconclusive" if self.inconclusive else "pass"


def summarize_cover(table: RepTable) -> CoverResult:
    uncovered, inconclusive = [], []
    for z in table.targets:
        if table.reps[z]:
            continue
        (uncovered if table.complete[z] else inconclusive).append(z)
    return CoverResult(uncovered, inconclusive)


@dataclass
class MinimalityResult:
    side: str
    witnesses: dict  # element -> target whose only representation uses it
    unwitnessed: list  # relevant elements with no witness inside the window

    @property
    def all_witnessed(self) -> bool:
        return not self.unwitnessed

    def status(self, element) -> str:
        return WITNESSED if element in self.witnesses else NOT_LOCALLY_WITNESSED


def summarize_minimality(table: RepTable, side: str) -> MinimalityResult:
    """Witness every element that takes part in a certified representation."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    pos = 0 if side == "left" else 1
    relevant = set()
    witnesses = {}
    for z in table.targets:
        if not table.complete[z]:
            continue
        rs = table.reps[z]
        for r in rs:
            relevant.add(r[pos])
        if len(rs) == 1 and rs[0][pos] not in witnesses:
            witnesses[rs[0][pos]] = z
    unwitnessed = sorted(relevant - set(witnesses))
    return MinimalityResult(side, dict(sorted(witnesses.items())), unwitnessed)


# -- public checks ----------------------------------------------------------------


def check_cover(A: LazySet, B: LazySet, w: Box, *, table: Optional[RepTable] = None) -> CoverResult:
    """Decide z ∈ A + B for each z in the window."""
    table = table or rep_table(A, B, w)
    return summarize_cover(table)


def check_minimality(
    A: LazySet, B: LazySet, w: Box, side: str = "left", *, table: Optional[RepTable] = None
) -> MinimalityResult:
    """Look for a uniquely represented window target through each relevant element.

    A witness proves the element cannot be dropped.  An element without one
    is only *not locally witnessed*; its witness may lie outside ``w``.
    """
    table = table or rep_table(A, B, w)
    return summarize_minimality(table, side)


def _fmt_map(m: dict) -> dict:
    return {lt.format_point(k): lt.format_point(v) for k, v in m.items()}


@dataclass
class PairReport:
    pair_id: str
    window: Box
    cover: CoverResult
    left: MinimalityResult
    right: MinimalityResult
    certificates: dict
    runtime_s: float = 0.0

    @property
    def cover_ok(self) -> bool:
        return not self.cover.uncovered

    @property
    def minimal_left(self) -> bool:
        return self.cover_ok and self.left.all_witnessed

    @property
    def minimal_right(self) -> bool:
        return self.cover_ok and self.right.all_witnessed

    @property
    def status(self) -> str:
        if self.cover.uncovered:
            return "fail"
        if self.cover.inconclusive or self.left.unwitnessed or self.right.unwitnessed:
            return "inconclusive"
        return "pass"

    def to_dict(self) -> dict:
        """Deterministic report body; runtime lives in the sidecar only."""
        return {
            "pair_id": self.pair_id,
            "window": {"lo": lt.format_point(self.window.lo), "hi": lt.format_point(self.window.hi)},
            "status": self.status,
            "cover_ok": self.cover_ok,
            "uncovered": [lt.format_point(z) for z in self.cover.uncovered],
            "inconclusive": [lt.format_point(z) for z in self.cover.inconclusive],
            "minimal_left": self.minimal_left,
            "left_witnesses": _fmt_map(self.left.witnesses),
            "left_not_locally_witnessed": [lt.format_point(e) for e in self.left.unwitnessed],
            "minimal_right": self.minimal_right,
            "right_witnesses": _fmt_map(self.right.witnesses),
            "right_not_locally_witnessed": [lt.format_point(e) for e in self.right.unwitnessed],
            "certificates": self.certificates,
        }


def check_cominimal(A: LazySet, B: LazySet, w: Box, pair_id: str = "") -> PairReport:
    start = time.perf_counter()
    table = rep_table(A, B, w)
    return PairReport(
        pair_id or f"{A.name}+{B.name}",
        w,
        summarize_cover(table),
        summarize_minimality(table, "left"),
        summarize_minimality(table, "right"),
        table.certificate_summary(),
        time.perf_counter() - start,
    )


# -- lemma and proposition checks -------------------------------------------------


def check_sum_bound(P: Point, Q: Point, A: Iterable, v: Point, w: Box) -> bool:
    """``(X_{P,Q} + A_{<=v}) ∩ w`` lies strictly below ``Q + v``."""
    if P > Q:
        raise ValueError("need P <= Q")
    slab = Slab(P, Q)
    limit = lt.add(Q, v)
    for a in A:
        a = lt.point(a)
        if a > v:
            continue
        for x in lt.slab_enumerate(slab, w.shift(lt.neg(a))):
            if lt.add(x, a) >= limit:
                return False
    return True


_PROP_M_HYPOTHESIS = {1: "holds_ge2", 2: "holds_ge2", 3: "holds_gt3", 4: "holds_ge3"}


def _drop_point(S: LazySet, p: Point) -> LazySet:
    def layer_fn(n):
        lay = S.layer(n)
        if lay is None:
            return None
        pts = lay.points - {p}
        if not pts:
            return Layer(n, (), lay.radius)
        return point_layer(n, pts)

    return LazySet(S.dim, layer_fn, symmetric=False, name=f"{S.name}-{{{lt.format_point(p)}}}")


def _slab_family(dim: int, slab_of: Callable[[int], Slab], name: str) -> LazySet:
    def layer_fn(j):
        s = slab_of(j)
        if s.empty:
            return Layer(j, (), lt.zero(dim))
        return slab_layer(j, [s])

    return LazySet(dim, layer_fn, name=name)


def _single_layer(dim: int, slabs, name: str) -> LazySet:
    slabs = [s for s in slabs if not s.empty]
    lay = slab_layer(0, slabs) if slabs else None
    return LazySet(dim, lambda n: lay if n == 0 else None, name=name)


def _nothing_in(A: LazySet, B: LazySet, region: Iterable) -> bool:
    for z in region:
        reps, cert = representations(A, B, z)
        if reps:
            return False
        if not cert.complete:
            raise InconclusiveError(f"cannot certify {lt.format_point(z)}: {cert.reason}")
    return True


def prop_m_regions(seq: SequenceSpec, part: int, n: int, w: Box) -> list:
    """The pieces ``(left set, right set, forbidden targets)`` checked for one part."""
    iv = IntervalSystem(seq)
    t = seq.term
    d = seq.dim
    W = build_W(seq)
    if part == 1:
        far = _slab_family(d, lambda j: iv.J(n + 2 + j), f"J>={n + 2}")
        near = _single_layer(d, [iv.J(n + 1)], f"J{n + 1}")
        region = lt.slab_enumerate(iv.I(n), w)
        return [(far, W, region), (near, _drop_point(W, t(n)), region)]
    if part == 2:
        slabs = [iv.J(m) for m in range(n)] + [iv.J_clipped(n)]
        region = [z for z in w if lt.neg(t(n)) <= z < lt.neg(lt.scale(3, t(n - 1)))]
        return [(_single_layer(d, slabs, f"J<={n}"), W, region)]
    if part == 3:
        fam = _slab_family(d, lambda j: iv.J_clipped(n + 1 + j).negate(), f"-J>={n + 1}")
        return [(fam, W, lt.slab_enumerate(iv.I(n), w))]
    if part == 4:
        slabs = [iv.J(m).negate() for m in range(1, n + 1)]
        region = [z for z in w if lt.neg(lt.scale(2, t(n))) < z <= lt.neg(t(n - 1))]
        return [(_single_layer(d, slabs, f"-J1..{n}"), _drop_point(W, lt.neg(t(n))), region)]
    raise ValueError("part must be 1, 2, 3 or 4")


def check_prop_M(seq: SequenceSpec, part: int, n: int, w: Box) -> bool:
    """Disjointness/inclusion statements about J-slab sumsets on a window.

    Each part is checked under its own growth hypothesis; parts 2 and 4
    need ``n >= 1``.
    """
    if part not in _PROP_M_HYPOTHESIS:
        raise ValueError("part must be 1, 2, 3 or 4")
    if part in (2, 4) and n < 1:
        raise ValueError(f"part {part} needs n >= 1")
    if n < 0:
        raise ValueError("n must be >= 0")
    flag = _PROP_M_HYPOTHESIS[part]
    report = classify_growth(seq, max(n + 8, 8))
    if not getattr(report, flag):
        raise HypothesisError(f"part {part} requires {flag[6:]} growth", report)
    return all(_nothing_in(A, B, region) for A, B, region in prop_m_regions(seq, part, n, w))


# -- finite abelian groups ---------------------------------------------------------

ORACLE_CAP = 24


class FiniteGroup:
    """``Z_{m1} × ... × Z_{mk}`` with elements as tuples, listed in lex order."""

    def __init__(self, moduli):
        moduli = tuple(int(m) for m in moduli)
        if not moduli or any(m < 1 for m in moduli):
            raise ValueError("moduli must be positive integers")
        self.moduli = moduli
        self.elements = list(itertools.product(*(range(m) for m in moduli)))
        self.index = {e: i for i, e in enumerate(self.elements)}

    def __repr__(self):
        return "FiniteGroup(" + " x ".join(f"Z_{m}" for m in self.moduli) + ")"

    @property
    def order(self) -> int:
        return len(self.elements)

    def add(self, a, b):
        return tuple((x + y) % m for x, y, m in zip(a, b, self.moduli))

    def mask(self, subset) -> int:
        out = 0
        for e in subset:
            out |= 1 << self.index[e]
        return out

    def subset(self, mask: int) -> list:
        return [e for i, e in enumerate(self.elements) if mask >> i & 1]


def _check_cap(g: FiniteGroup, cap: int) -> None:
    if cap > ORACLE_CAP:
        raise CapExceededError(f"cap {cap} exceeds the maximum {ORACLE_CAP}")
    if g.order > cap:
        raise CapExceededError(f"group order {g.order} exceeds cap {cap}")


def complement_table(g: FiniteGroup, A, cap: int = ORACLE_CAP):
    """Boolean arrays over all subsets B (bitmasks): complement, minimal complement."""
    _check_cap(g, cap)
    A = list(A)
    if not A:
        raise ValueError("complements are defined for nonempty sets only")
    shifted = np.array([g.mask(g.add(a, b) for a in A) for b in g.elements], dtype=np.int64)
    sums = kernels.sumset_table(shifted)
    full = (1 << g.order) - 1
    is_comp = sums == full
    return is_comp, kernels.minimal_flags(is_comp, g.order)


def oracle_minimal_complements(g: FiniteGroup, A, cap: int = ORACLE_CAP) -> list:
    """All minimal complements of A, each a lex-sorted list, in mask order."""
    _, minimal = complement_table(g, A, cap)
    return [g.subset(int(m)) for m in np.flatnonzero(minimal)]


def group_pair_verdict(g: FiniteGroup, A, B) -> dict:
    """Checker verdicts on the whole group, through the shared summaries."""
    if not A or not B:
        raise ValueError("complements are defined for nonempty sets only")
    table = finite_rep_table(A, B, g.elements, g.add)
    cover = summarize_cover(table)
    left = summarize_minimality(table, "left")
    right = summarize_minimality(table, "right")
    return _verdict(cover.ok, left.witnesses, right.witnesses, A, B)


def _verdict(cover_ok, left_w, right_w, A, B) -> dict:
    left_min = cover_ok and all(a in left_w for a in A)
    right_min = cover_ok and all(b in right_w for b in B)
    return {
        "complement": cover_ok,
        "left_minimal": left_min,
        "right_minimal": right_min,
        "cominimal": left_min and right_min,
    }


def embedded_pair_verdict(m: int, A, B) -> dict:
    """Checker verdicts for a pair in Z_m computed in Z.

    A sits in [0, m); B is lifted to B ∪ (B - m) so that reps of z ∈ [0, m)
    in Z correspond one-to-one with reps in Z_m.  A group element of B is
    witnessed when either lift is.
    """
    if not A or not B:
        raise ValueError("complements are defined for nonempty sets only")
    a_pts = [(a,) for a in A]
    b_pts = [(b,) for b in B] + [(b - m,) for b in B]
    report = check_cominimal(from_finite(a_pts), from_finite(b_pts), Box((0,), (m - 1,)))
    right_w = {}
    for (b,), z in report.right.witnesses.items():
        right_w.setdefault(b % m, z)
    left_w = {a: z for (a,), z in report.left.witnesses.items()}
    return _verdict(report.cover.ok, left_w, right_w, list(A), list(B))


def brute_pair_verdict(comp_tables: dict, g: FiniteGroup, A, B) -> dict:
    """Brute-force verdicts from precomputed subset tables, keyed by mask of the left set."""
    ma, mb = g.mask(A), g.mask(B)
    ca, na = comp_tables[ma]
    cb, nb = comp_tables[mb]
    return {
        "complement": bool(ca[mb]),
        "left_minimal": bool(nb[ma]),
        "right_minimal": bool(na[mb]),
        "cominimal": bool(na[mb] and nb[ma]),
    }


@dataclass
class OracleReport:
    moduli: list
    pairs_checked: int = 0
    embedded_checked: int = 0
    disagreements: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def to_dict(self) -> dict:
        return {
            "moduli": self.moduli,
            "pairs_checked": self.pairs_checked,
            "embedded_checked": self.embedded_checked,
            "agreement": self.ok,
            "disagreements": self.disagreements,
        }


def _subsets(n: int):
    for mask in range(1, 1 << n):
        yield [i for i in range(n) if mask >> i & 1]


def oracle_agreement(
    moduli: Iterable[int],
    *,
    random_modulus: Optional[int] = 12,
    random_count: int = 50,
    seed: int = 0,
    embed_max: int = 8,
) -> OracleReport:
    """Compare checker verdicts with brute force on cyclic groups.

    Every pair of nonempty subsets of Z_m is checked directly in the group
    for each listed m.  Pairs with m <= ``embed_max`` are also pushed
    through the Z-embedding.  Then ``random_count`` random left sets in
    Z_{random_modulus} are checked against every right set.
    """
    moduli = sorted(set(int(m) for m in moduli))
    report = OracleReport(moduli + ([random_modulus] if random_modulus else []))

    def run(m, lefts):
        g = FiniteGroup([m])
        tables = {}
        for B in _subsets(m):
            tables[g.mask((b,) for b in B)] = complement_table(g, [(b,) for b in B])
        for A in lefts:
            for B in _subsets(m):
                ga, gb = [(a,) for a in A], [(b,) for b in B]
                truth = brute_pair_verdict(tables, g, ga, gb)
                got = group_pair_verdict(g, ga, gb)
                report.pairs_checked += 1
                if got != truth:
                    report.disagreements.append(
                        {"route": "group", "m": m, "A": A, "B": B, "checker": got, "brute": truth}
                    )
                if m <= embed_max:
                    emb = embedded_pair_verdict(m, A, B)
                    report.embedded_checked += 1
                    if emb != truth:
                        report.disagreements.append(
                            {"route": "embedded", "m": m, "A": A, "B": B, "checker": emb, "brute": truth}
                        )

    for m in moduli:
        run(m, list(_subsets(m)))
    if random_modulus:
        rng = random.Random(seed)
        lefts = []
        while len(lefts) < random_count:
            A = sorted(rng.sample(range(random_modulus), rng.randint(1, random_modulus)))
            lefts.append(A)
        run(random_modulus, lefts)
    return report

"""Base sequences t_0 < t_1 < ... in Z^d and the sets T, V, W built on them."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import lattice as lt
from .errors import SequenceError
from .lattice import Point
from .lazyset import LazySet, point_layer

KINDS = ("geometric", "power", "custom", "pow2_plus_k")

#: Prefix length validated for closed-form kinds.
VALIDATE_PREFIX = 64

POW2_PLUS_K_NOTE = (
    "2^k + k violates t_n >= 2 t_(n-1) from n = 3 onward (11 < 2*6); the "
    "sequence is reported as ineligible for every growth class rather than "
    "replaced by a subsequence"
)


class SequenceSpec:
    """A strictly lex-increasing sequence of points with ``t_0 > 0``.

    ``term(n)`` is defined for ``n >= -2`` with ``t_{-1} = t_{-2} = 0``.
    Closed-form kinds are infinite; ``custom`` holds a finite prefix and
    ``term`` raises ``IndexError`` past its end.
    """

    def __init__(self, kind: str, dim: int, base: Optional[int] = None, values: Sequence = ()):
        if kind not in KINDS:
            raise ValueError(f"unknown sequence kind {kind!r}")
        self.kind = kind
        self.dim = dim
        self.base = base
        self.values = tuple(values)
        self._memo: dict = {}
        self._lock = threading.Lock()

    def __repr__(self):
        if self.kind == "custom":
            return f"SequenceSpec(custom, d={self.dim}, n={len(self.values)})"
        return f"SequenceSpec({self.kind}, base={self.base}, d={self.dim})"

    @property
    def length(self) -> Optional[int]:
        return len(self.values) if self.kind == "custom" else None

    @property
    def infinite(self) -> bool:
        return self.kind != "custom"

    def _compute(self, n: int) -> Point:
        if self.kind in ("geometric", "power"):
            return (self.base**n,) * self.dim
        if self.kind == "pow2_plus_k":
            return (2**n + n,) * self.dim
        return self.values[n]

    def term(self, n: int) -> Point:
        if n < -2:
            raise IndexError(f"t_{n} undefined")
        if n < 0:
            return lt.zero(self.dim)
        if self.kind == "custom" and n >= len(self.values):
            raise IndexError(f"custom sequence has only {len(self.values)} terms")
        try:
            return self._memo[n]
        except KeyError:
            t = self._compute(n)
            with self._lock:
                self._memo[n] = t
            return t

    __getitem__ = term

    def prefix(self, n: int) -> list:
        """t_0 .. t_{n-1} (clipped to the available terms)."""
        if self.length is not None:
            n = min(n, self.length)
        return [self.term(k) for k in range(n)]

    @property
    def positivity_index(self) -> Optional[int]:
        """Least n with all coordinates of t_n positive, within the checked prefix."""
        for k, t in enumerate(self.prefix(VALIDATE_PREFIX)):
            if all(c > 0 for c in t):
                return k
        return None

    def describe(self) -> dict:
        out = {"kind": self.kind, "dim": self.dim}
        if self.kind == "custom":
            out["values"] = [lt.format_point(v) for v in self.values]
        elif self.kind != "pow2_plus_k":
            out["base"] = self.base
        return out


def make_sequence(kind: str, params=None, d: int = 1) -> SequenceSpec:
    """Build and validate a sequence.

    ``params`` is the base for ``geometric``/``power`` and the list of
    values for ``custom``; ``pow2_plus_k`` takes none.
    """
    if kind == "geometric":
        seq = SequenceSpec(kind, d, base=int(params))
    elif kind == "power":
        if d != 1:
            raise ValueError("power sequences live in Z^1")
        seq = SequenceSpec(kind, 1, base=int(params))
    elif kind == "pow2_plus_k":
        seq = SequenceSpec(kind, d)
    elif kind == "custom":
        vals = [(v,) if isinstance(v, int) else lt.point(v) for v in params]
        if not vals:
            raise SequenceError("custom sequence is empty", 0)
        dims = {len(v) for v in vals}
        if len(dims) != 1:
            raise SequenceError("custom values have mixed dimensions", 0)
        seq = SequenceSpec(kind, dims.pop())
        seq.values = tuple(vals)
    else:
        raise ValueError(f"unknown sequence kind {kind!r}")
    _validate(seq)
    return seq


def _validate(seq: SequenceSpec) -> None:
    terms = seq.prefix(VALIDATE_PREFIX)
    zero = lt.zero(seq.dim)
    if terms[0] <= zero:
        raise SequenceError(f"t_0 = {lt.format_point(terms[0])} is not > 0", 0)
    for k in range(1, len(terms)):
        if not terms[k] > terms[k - 1]:
            raise SequenceError(
                f"sequence not strictly increasing at index {k}: "
                f"{lt.format_point(terms[k])} <= {lt.format_point(terms[k - 1])}",
                k,
            )
    if seq.infinite and seq.positivity_index is None:
        raise SequenceError("no term with all coordinates positive", None)


# -- growth classification ---------------------------------------------------


@dataclass
class GrowthReport:
    holds_ge2: bool
    holds_ge3: bool
    holds_gt3: bool
    holds_ge6: bool
    divergence_t_minus_2t: bool
    checked_up_to: int
    failure_witness: Optional[tuple] = None
    witnesses: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def eligible(self) -> dict:
        """Which theorem variants have their growth hypothesis satisfied."""
        return {
            "thm1": self.holds_gt3,
            "thm2": self.holds_gt3,
            "thm3": self.holds_ge6,
            "thm4": self.holds_gt3,
            "thm5": self.holds_gt3,
            "thm6": self.holds_ge6,
            "thm7": self.holds_ge2 and self.divergence_t_minus_2t,
            "thm7_minimal": self.holds_ge2,
        }

    def to_dict(self) -> dict:
        def wit(w):
            if w is None:
                return None
            n, tn, tp = w
            return [n, lt.format_point(tn), lt.format_point(tp)]

        return {
            "holds_ge2": self.holds_ge2,
            "holds_ge3": self.holds_ge3,
            "holds_gt3": self.holds_gt3,
            "holds_ge6": self.holds_ge6,
            "divergence_t_minus_2t": self.divergence_t_minus_2t,
            "checked_up_to": self.checked_up_to,
            "failure_witness": wit(self.failure_witness),
            "witnesses": {k: wit(v) for k, v in sorted(self.witnesses.items())},
            "eligible": self.eligible(),
            "notes": list(self.notes),
        }


def classify_growth(seq: SequenceSpec, n_max: int) -> GrowthReport:
    """Check the ratio hypotheses componentwise for 1 <= n <= n_max."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if seq.length is not None:
        n_max = min(n_max, seq.length - 1)
    tests = {
        "ge2": lambda a, b: a >= 2 * b,
        "ge3": lambda a, b: a >= 3 * b,
        "gt3": lambda a, b: a > 3 * b,
        "ge6": lambda a, b: a >= 6 * b,
    }
    witnesses = {}
    for n in range(1, n_max + 1):
        tn, tp = seq.term(n), seq.term(n - 1)
        for key, test in tests.items():
            if key not in witnesses and not all(test(a, b) for a, b in zip(tn, tp)):
                witnesses[key] = (n, tn, tp)
    # some coordinate of t_n - 2 t_{n-1} strictly increasing over the horizon
    diffs = [lt.sub(seq.term(n), lt.scale(2, seq.term(n - 1))) for n in range(1, n_max + 1)]
    divergent = len(diffs) >= 2 and any(
        all(diffs[k][i] < diffs[k + 1][i] for k in range(len(diffs) - 1)) for i in range(seq.dim)
    )
    notes = [f"finite horizon: hypotheses checked for 1 <= n <= {n_max}"]
    if seq.kind == "pow2_plus_k":
        notes.append(POW2_PLUS_K_NOTE)
    return GrowthReport(
        holds_ge2="ge2" not in witnesses,
        holds_ge3="ge3" not in witnesses,
        holds_gt3="gt3" not in witnesses,
        holds_ge6="ge6" not in witnesses,
        divergence_t_minus_2t=divergent,
        checked_up_to=n_max,
        failure_witness=witnesses.get("ge2"),
        witnesses=witnesses,
        notes=notes,
    )


# -- T, V, W -----------------------------------------------------------------


def _term_layer(seq: SequenceSpec, n: int, signs: tuple, with_zero: bool = False):
    if seq.length is not None and n >= seq.length:
        return None
    t = seq.term(n)
    pts = [lt.scale(s, t) for s in signs]
    if with_zero and n == 0:
        pts.append(lt.zero(seq.dim))
    return point_layer(n, pts)


def build_T(seq: SequenceSpec) -> LazySet:
    return LazySet(seq.dim, lambda n: _term_layer(seq, n, (1,)), name="T")


def build_V(seq: SequenceSpec) -> LazySet:
    return LazySet(seq.dim, lambda n: _term_layer(seq, n, (1, -1)), symmetric=True, name="V")


def build_W(seq: SequenceSpec) -> LazySet:
    return LazySet(
        seq.dim, lambda n: _term_layer(seq, n, (1, -1), with_zero=True), symmetric=True, name="W"
    )

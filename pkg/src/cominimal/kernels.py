"""Hot integer kernels, compiled with numba when available.

Each kernel has a numba implementation (``*_numba``) and a pure-numpy one
(``*_numpy``) with identical results.  The public names dispatch to numba
unless ``COMINIMAL_PURE_NUMPY=1`` is set in the environment or numba fails
to import.  All kernels work on int64 data; callers are responsible for
checking magnitudes with :func:`fits_int64` first.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


USE_NUMBA = NUMBA_AVAILABLE and os.environ.get("COMINIMAL_PURE_NUMPY", "") not in ("1", "true", "yes")

# headroom so that sums of two in-range values stay representable
_INT64_SAFE = 2**61


def fits_int64(*values) -> bool:
    return all(-_INT64_SAFE < int(v) < _INT64_SAFE for v in values)


# -- shifted membership: mask[i] = any_j (xs[i] - shifts[j]) in members -------


@njit(cache=True)
def shifted_membership_numba(xs, shifts, members):
    n = xs.shape[0]
    m = members.shape[0]
    out = np.zeros(n, dtype=np.bool_)
    if m == 0:
        return out
    for i in range(n):
        x = xs[i]
        for j in range(shifts.shape[0]):
            y = x - shifts[j]
            lo = 0
            hi = m
            while lo < hi:
                mid = (lo + hi) >> 1
                if members[mid] < y:
                    lo = mid + 1
                else:
                    hi = mid
            if lo < m and members[lo] == y:
                out[i] = True
                break
    return out


def shifted_membership_numpy(xs, shifts, members):
    out = np.zeros(xs.shape[0], dtype=bool)
    if members.shape[0] == 0:
        return out
    for s in shifts:
        y = xs - s
        idx = np.searchsorted(members, y)
        idx[idx == members.shape[0]] = 0
        out |= members[idx] == y
    return out


# -- representation counts over an integer window ----------------------------


@njit(cache=True)
def representation_counts_numba(a_vals, b_vals, lo, hi):
    counts = np.zeros(hi - lo + 1, dtype=np.int64)
    for i in range(a_vals.shape[0]):
        a = a_vals[i]
        for j in range(b_vals.shape[0]):
            s = a + b_vals[j]
            if lo <= s <= hi:
                counts[s - lo] += 1
    return counts


def representation_counts_numpy(a_vals, b_vals, lo, hi):
    counts = np.zeros(hi - lo + 1, dtype=np.int64)
    step = max(1, 4_000_000 // max(1, b_vals.shape[0]))
    for start in range(0, a_vals.shape[0], step):
        s = np.add.outer(a_vals[start : start + step], b_vals).ravel()
        s = s[(s >= lo) & (s <= hi)]
        counts += np.bincount(s - lo, minlength=hi - lo + 1)
    return counts


# -- finite-group subset tables (bitmask encoding, group order <= 24) ----------


@njit(cache=True)
def sumset_table_numba(shifted):
    """sums[mask] = OR of shifted[b] over the bits b of mask."""
    n = shifted.shape[0]
    size = 1 << n
    sums = np.zeros(size, dtype=np.int64)
    for mask in range(1, size):
        low = mask & -mask
        b = 0
        while (low >> b) != 1:
            b += 1
        sums[mask] = sums[mask ^ low] | shifted[b]
    return sums


def sumset_table_numpy(shifted):
    n = shifted.shape[0]
    sums = np.zeros(1 << n, dtype=np.int64)
    for b in range(n):
        half = 1 << b
        sums[half : 2 * half] = sums[:half] | shifted[b]
    return sums


@njit(cache=True)
def minimal_flags_numba(is_comp, n):
    size = is_comp.shape[0]
    out = np.zeros(size, dtype=np.bool_)
    for mask in range(size):
        if not is_comp[mask]:
            continue
        ok = True
        for b in range(n):
            bit = 1 << b
            if mask & bit and is_comp[mask ^ bit]:
                ok = False
                break
        out[mask] = ok
    return out


def minimal_flags_numpy(is_comp, n):
    masks = np.arange(is_comp.shape[0], dtype=np.int64)
    out = is_comp.copy()
    for b in range(n):
        bit = np.int64(1 << b)
        has = (masks & bit) != 0
        out &= ~(has & is_comp[masks ^ bit])
    return out


if USE_NUMBA:
    shifted_membership = shifted_membership_numba
    representation_counts = representation_counts_numba
    sumset_table = sumset_table_numba
    minimal_flags = minimal_flags_numba
else:
    shifted_membership = shifted_membership_numpy
    representation_counts = representation_counts_numpy
    sumset_table = sumset_table_numpy
    minimal_flags = minimal_flags_numpy

BACKEND = "numba" if USE_NUMBA else "numpy"

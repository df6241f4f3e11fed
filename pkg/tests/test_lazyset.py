import pytest

from cominimal import lattice as lt
from cominimal.errors import DimensionError, DivergenceError
from cominimal.lattice import Box, Slab
from cominimal.lazyset import (
    LazySet,
    difference,
    enumerate_window,
    from_finite,
    from_slab,
    negate,
    oracle_layer,
    point_layer,
    representations,
    translate,
    union,
)
from cominimal.lacunary import build_W


def evens():
    """2Z as a layered set: layer n holds ±2n."""
    return LazySet(1, lambda n: point_layer(n, [(2 * n,), (-2 * n,)]), symmetric=True, name="2Z")


def test_enumerate_window_and_certificate():
    pts, cert = enumerate_window(evens(), Box((-5,), (5,)))
    assert pts == [(-4,), (-2,), (0,), (2,), (4,)]
    assert cert.complete
    assert "radius" in cert.reason


def test_contains_uses_divergence_witness():
    E = evens()
    assert (10,) in E and (-12,) in E
    assert (7,) not in E
    with pytest.raises(DimensionError):
        E.contains((1, 1))


def test_non_monotone_radius_is_rejected():
    S = LazySet(1, lambda n: point_layer(n, [(10 - n,)]))
    S.layer(0)
    with pytest.raises(DivergenceError):
        S.layer(1)


def test_finite_sets_and_combinators():
    A = from_finite([(1,), (3,)])
    B = from_slab(Slab((-2,), (0,)))
    w = Box((-5,), (5,))
    assert A.is_finite()
    assert enumerate_window(union(A, B), w)[0] == [(-2,), (-1,), (1,), (3,)]
    assert enumerate_window(negate(A), w)[0] == [(-3,), (-1,)]
    assert enumerate_window(translate(A, (2,)), w)[0] == [(3,), (5,)]
    assert enumerate_window(difference(union(A, B), A), w)[0] == [(-2,), (-1,)]


def test_oracle_layer_membership():
    lay = oracle_layer(0, [((-5,), (5,))], lambda x: x[0] % 3 == 0)
    S = LazySet(1, lambda n: lay if n == 0 else None)
    assert enumerate_window(S, Box((-9,), (9,)))[0] == [(-3,), (0,), (3,)]


def test_free_interval_brackets_point():
    E = evens()
    lo, hi = E.free_interval((7,))
    assert lo == (6,) and hi == (8,)
    assert E.free_interval((6,)) is None


def test_representations_against_W(seq4):
    W = build_W(seq4)
    reps, cert = representations(from_finite([(0,)]), W, (-16,))
    assert [(r.a, r.b) for r in reps] == [((0,), (-16,))]
    assert cert.complete


def test_representations_infinite_left_closes_by_gap(seq4):
    W = build_W(seq4)
    reps, cert = representations(evens(), W, (3,))
    # 3 = a + b with a even, b ∈ W odd: b = ±1 only
    assert sorted((r.a, r.b) for r in reps) == [((2,), (1,)), ((4,), (-1,))]
    assert cert.complete


def test_representations_truncates_when_tail_cannot_close():
    everything = LazySet(1, lambda n: point_layer(n, [(n,), (-n,)]), symmetric=True)
    reps, cert = representations(everything, everything, (0,), budget=20)
    assert not cert.complete
    assert len(reps) == 39  # n + (-n) for |n| < 20


def test_representations_needs_point_layers_on_the_right():
    with pytest.raises(ValueError):
        representations(from_finite([(0,)]), from_slab(Slab((0,), (3,))), (1,))

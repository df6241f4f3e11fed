import itertools

import pytest

from cominimal import lattice as lt
from cominimal.constructions import (
    IntervalSystem,
    MkSequence,
    build_G,
    build_layers,
    choose_mk,
    greedy_prune,
    intervals,
    prune_order,
)
from cominimal.errors import DivergenceError, HypothesisError, InconclusiveError
from cominimal.lacunary import build_T, build_V, build_W, make_sequence
from cominimal.lattice import Box
from cominimal.lazyset import LazySet, enumerate_window, from_finite, point_layer, representations

from brute import brute_layers, brute_prune


def ints(points):
    return [p[0] for p in points]


def test_interval_examples(seq4):
    iv = intervals(seq4)
    w = Box((-100,), (100,))
    assert ints(lt.slab_enumerate(iv.I(1), w)) == [-4, -3, -2]
    assert ints(lt.slab_enumerate(iv.J(1), w)) == [-4, -3, -2]
    assert ints(lt.slab_enumerate(iv.I(2), w)) == list(range(-16, -4))
    assert ints(lt.slab_enumerate(iv.J(2), w)) == list(range(-16, -5))
    assert ints(lt.slab_enumerate(iv.I(0), w)) == [-1]


def test_interval_index(seq4):
    iv = IntervalSystem(seq4)
    assert iv.index_of((-1,)) == 0
    assert iv.index_of((-5,)) == 2
    assert iv.index_of((0,)) is None


@pytest.mark.parametrize("variant", "EFPQ")
@pytest.mark.parametrize("base", [4, 5])
def test_layers_match_brute_force(variant, base):
    seq = make_sequence("geometric", base, 1)
    c = build_layers(variant, seq, 5)
    got = {n: ints(pts) for n, pts in c.layers.items()}
    assert got == brute_layers(variant, base, 5)


def test_E_layer_examples(seq4):
    c = build_layers("E", seq4, 3)
    assert c.layers[-1] == [(0,)] and c.layers[0] == []
    assert c.layers[1] == []
    assert ints(c.layers[2]) == [-7, -6]
    # -21 would come from -5 ∈ I_2, but -5 = -6 + 1 is already covered
    assert ints(c.layers[3]) == [-31, -30, -29, -28]


def test_F_seed(seq4):
    assert ints(build_layers("F", seq4, 2).layers[0]) == [-1]


def test_point_oracle_agrees_with_materialization(seq4):
    c = build_layers("Q", seq4, 5)
    for n in range(1, 6):
        lo, hi = c.hull(n)
        oracle = [(x,) for x in range(lo[0], hi[0] + 1) if c.in_layer(n, (x,))]
        assert oracle == c.layers[n]


def test_result_is_symmetric_union_of_layers(seq4):
    c = build_layers("P", seq4, 4)
    w = Box((-100,), (100,))
    pts = set(enumerate_window(c.result, w)[0])
    expect = set()
    for layer in c.layers.values():
        expect |= {p for p in layer if w.contains(p)} | {lt.neg(p) for p in layer if w.contains(lt.neg(p))}
    assert pts == expect
    assert all(lt.neg(p) in pts for p in pts)


def test_layers_lie_in_shifted_intervals(seq4):
    c = build_layers("E", seq4, 6)
    iv = intervals(seq4)
    for n in range(1, 7):
        shifted = iv.I(n - 1).shift(lt.neg(seq4.term(n - 1)))
        assert all(shifted.contains(p) for p in c.layers[n])


def test_recursion_soundness(seq4):
    """No layer point is hit by an earlier layer plus the base."""
    for variant, base in [("E", build_W), ("P", build_V)]:
        c = build_layers(variant, seq4, 5)
        B = [p[0] for p in enumerate_window(base(seq4), Box((-5000,), (5000,)))[0]]
        for n in range(1, 6):
            prev = set()
            for m in range(c.first, n):
                prev |= {p[0] for p in c.layers[m]} | {-p[0] for p in c.layers[m]}
            sub = {u + b for u in prev for b in B}
            assert not {p[0] + seq4.term(n - 1)[0] for p in c.layers[n]} & sub


def test_hypothesis_refusal():
    with pytest.raises(HypothesisError) as info:
        build_layers("E", make_sequence("geometric", 3, 1), 3)
    assert info.value.report is not None and not info.value.report.holds_gt3
    with pytest.raises(HypothesisError):
        build_G(make_sequence("geometric", 4, 1), n_max=3)
    with pytest.raises(ValueError):
        build_layers("E", make_sequence("geometric", 4, 1), 0)


def test_2d_needs_box(seq6_2d):
    with pytest.raises(DivergenceError):
        build_layers("E", seq6_2d, 3)
    c = build_layers("E", seq6_2d, 3, box=Box.cube(-20, 20, 2))
    assert c.truncated and all(Box.cube(-20, 20, 2).contains(p) for p in c.layers[2])


def test_2d_layers_match_oracle_inside_box(seq6_2d):
    box = Box.cube(-12, 12, 2)
    c = build_layers("F", seq6_2d, 2, box=box)
    lo, hi = c.hull(2)
    assert c.layers[2] == [x for x in box if lo <= x <= hi and c.in_layer(2, x)]


def test_mk_minimal_choice(seq6):
    assert choose_mk(seq6, 10) == [k + 2 for k in range(11)]
    assert choose_mk(make_sequence("geometric", 2, 2), 0) == [2]
    # a zero coordinate in the early terms pushes m_0 out
    s = make_sequence("custom", [[0, 1], [1, 0], [2, 2], [5, 5], [11, 11]])
    assert MkSequence(s)[0] == 4  # t_2 = (2,2) is the first term >= (1,1)


def test_mk_prefix_validation(seq6):
    assert MkSequence(seq6, [2, 5])[2] == 6
    with pytest.raises(ValueError):
        MkSequence(seq6, [1])


def test_G_examples(seq6):
    g = build_G(seq6, n_max=4)
    assert ints(g.layers[0]) == [-1]
    assert ints(g.layers[1]) == [-2]
    assert ints(g.layers[2]) == [-36, -12, -11, -10, -9, -8]


def test_G_inside_J(seq6):
    g = build_G(seq6, n_max=6)
    iv = intervals(seq6)
    for n in range(7):
        assert all(iv.J(n).contains(p) for p in g.layer_points(n))


def test_G_deletion_variants(seq6):
    g = build_G(seq6, n_max=3)
    assert (-2,) in g.result and (-2,) not in g.minus_thm3 and (-2,) in g.minus_thm6
    for n in (1, 2, 3):
        p = (-(6**n) - 3 * 6 ** (n - 1),)
        assert p in g.result and p not in g.minus_thm3 and p not in g.minus_thm6


def test_G_under_weaker_hypothesis():
    seq = make_sequence("power", 3)
    with pytest.raises(HypothesisError):
        build_G(seq)
    g = build_G(seq, n_max=3, require="ge2")
    assert g.m.prefix(2) == [2, 3, 4]


def test_prune_toy_example():
    S = from_finite([(i,) for i in range(6)])
    T = from_finite([(0,), (1,)])
    res = greedy_prune(S, T, Box((0,), (6,)))
    assert ints(res.retained) == [0, 2, 4, 5]
    assert ints(res.removed) == [1, 3]
    assert res.witnesses == {(0,): (0,), (2,): (2,), (4,): (4,), (5,): (6,)}


def test_prune_matches_sequential_brute_force():
    for S, T, lo, hi in [
        (range(-3, 8), [0, 1, 3], -3, 8),
        (range(0, 10), [0, 2, 3], 2, 11),
        ([0, 1, 2, 5, 6, 9], [0, 1, -1], 0, 9),
    ]:
        res = greedy_prune(from_finite([(s,) for s in S]), from_finite([(t,) for t in T]), Box((lo,), (hi,)))
        relevant = [s for s in S if any(lo <= s + t <= hi for t in T)]
        order = sorted(relevant, key=lambda s: (abs(s), s))
        assert ints(res.retained) == brute_prune(relevant, T, range(lo, hi + 1), order)


def test_prune_identity_on_minimal_set():
    S = from_finite([(0,), (2,)])
    T = from_finite([(0,), (1,)])
    res = greedy_prune(S, T, Box((0,), (3,)))
    assert res.removed == [] and ints(res.retained) == [0, 2]


def test_prune_refuses_truncated_certificates():
    everything = LazySet(1, lambda n: point_layer(n, [(n,), (-n,)]), symmetric=True)
    with pytest.raises(InconclusiveError):
        greedy_prune(everything, everything, Box((0,), (0,)))


def test_prune_order_is_lex_distance():
    pts = [(3,), (-1,), (1,), (-3,), (0,)]
    assert prune_order(pts) == [(0,), (-1,), (1,), (-3,), (3,)]


def test_prune_G_against_T_keeps_deleted_points(seq6):
    g = build_G(seq6, n_max=4, require="ge2")
    res = greedy_prune(g.result, build_T(seq6), Box((-216,), (216,)))
    for n in (1, 2, 3):
        p = (-(6**n) - 3 * 6 ** (n - 1),)
        assert p in res.retained and p in res.witnesses

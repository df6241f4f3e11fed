import pytest

from cominimal import lattice as lt
from cominimal.constructions import build_G, build_layers
from cominimal.errors import HypothesisError
from cominimal.lacunary import build_T, build_V, build_W, make_sequence
from cominimal.lattice import Box
from cominimal.lazyset import enumerate_window, from_finite, representations
from cominimal.verify import (
    NOT_LOCALLY_WITNESSED,
    WITNESSED,
    check_cominimal,
    check_cover,
    check_minimality,
    check_prop_M,
    check_sum_bound,
    rep_counts_1d,
    rep_table,
)


def ints(points):
    return [p[0] for p in points]


def test_cover_examples(seq4):
    W = build_W(seq4)
    res = check_cover(from_finite([(0,)]), W, Box((-3,), (3,)))
    assert ints(res.uncovered) == [-3, -2, 2, 3]
    assert res.status == "fail"
    zero = from_finite([(0,)])
    assert check_cover(zero, zero, Box((0,), (0,))).ok


def test_E_W_cover_and_unique_representations(seq4):
    E = build_layers("E", seq4, 6).result
    W = build_W(seq4)
    assert check_cover(E, W, Box((-16,), (16,))).ok
    for k in range(5):
        for t in (4**k, -(4**k)):
            reps, cert = representations(E, W, (t,))
            assert cert.complete
            assert [(r.a, r.b) for r in reps] == [((0,), (t,))]


def test_known_single_representations(seq4):
    E = build_layers("E", seq4, 4).result
    W = build_W(seq4)
    assert [(r.a, r.b) for r in representations(E, W, (4,))[0]] == [((0,), (4,))]
    assert [(r.a, r.b) for r in representations(E, W, (-3,))[0]] == [((-7,), (4,))]


def test_F_witness_at_minus_two(seq4):
    F = build_layers("F", seq4, 4).result
    reps, cert = representations(F, build_W(seq4), (-2,))
    assert cert.complete and [(r.a, r.b) for r in reps] == [((-1,), (-1,))]
    res = check_minimality(F, build_W(seq4), Box((-64,), (64,)), "left")
    assert res.status((-1,)) == WITNESSED
    reps, _ = representations(F, build_W(seq4), res.witnesses[(-1,)])
    assert [r.a for r in reps] == [(-1,)]


@pytest.mark.parametrize("variant,base", [("E", "W"), ("F", "W"), ("P", "V"), ("Q", "V")])
def test_layered_pairs_pass(seq4, variant, base):
    S = build_layers(variant, seq4, 5).result
    B = build_W(seq4) if base == "W" else build_V(seq4)
    rep = check_cominimal(S, B, Box((-64,), (64,)))
    assert rep.status == "pass"
    assert rep.left.witnesses and rep.right.witnesses
    assert rep.cover_ok and rep.minimal_left and rep.minimal_right


def test_witness_soundness(seq4):
    S = build_layers("P", seq4, 5).result
    V = build_V(seq4)
    rep = check_cominimal(S, V, Box((-64,), (64,)))
    for side, pos in (("left", 0), ("right", 1)):
        for e, z in getattr(rep, side).witnesses.items():
            reps, cert = representations(S, V, z)
            assert cert.complete and len(reps) == 1
            assert (reps[0].a, reps[0].b)[pos] == e


def test_singleton_against_window_has_unique_reps():
    w = Box((-5,), (5,))
    rep = check_cominimal(from_finite([(0,)]), from_finite(list(w)), w)
    assert rep.status == "pass"
    assert len(rep.right.witnesses) == 11 and list(rep.left.witnesses) == [(0,)]


def test_not_locally_witnessed_vocabulary():
    # both 0 and 1 cover every target twice over; no witness is available
    A = from_finite([(0,), (1,)])
    B = from_finite([(i,) for i in range(-3, 4)])
    res = check_minimality(A, B, Box((-2,), (3,)), "left")
    assert res.unwitnessed == [(0,), (1,)]
    assert res.status((0,)) == NOT_LOCALLY_WITNESSED
    rep = check_cominimal(A, B, Box((-2,), (3,)))
    assert rep.status == "inconclusive"
    assert "not_minimal" not in rep.to_dict()


def test_report_is_deterministic(seq4):
    E = build_layers("E", seq4, 4).result
    a = check_cominimal(E, build_W(seq4), Box((-20,), (20,))).to_dict()
    b = check_cominimal(E, build_W(seq4), Box((-20,), (20,))).to_dict()
    assert a == b
    assert set(a) >= {"pair_id", "window", "cover_ok", "left_witnesses", "right_witnesses", "certificates"}


def test_table_counts_match_kernel(seq4):
    E = build_layers("E", seq4, 6)
    w = Box((-200,), (200,))
    table = rep_table(E.result, build_W(seq4), w)
    a_vals = [p[0] for p in enumerate_window(E.result, Box((-3000,), (3000,)))[0]]
    b_vals = [p[0] for p in enumerate_window(build_W(seq4), Box((-3000,), (3000,)))[0]]
    counts = rep_counts_1d(a_vals, b_vals, -200, 200)
    assert [len(table.reps[(z,)]) for z in range(-200, 201)] == counts.tolist()


def test_rep_counts_python_fallback_for_huge_values():
    big = 2**70
    counts = rep_counts_1d([big, 0], [-big, 1], -1, 2)
    assert counts.tolist() == [0, 1, 1, 0]


def test_sum_bound_examples():
    w = Box((-20,), (20,))
    assert check_sum_bound((-4,), (-1,), [(-2,), (0,), (3,)], (0,), w)
    assert check_sum_bound((-4,), (-1,), [(5,)], (0,), w)  # A_{<=v} empty
    with pytest.raises(ValueError):
        check_sum_bound((1,), (0,), [(0,)], (0,), w)


@pytest.mark.parametrize("part", [1, 2, 3, 4])
def test_prop_M_parts(seq4, part):
    w = Box((-64,), (64,))
    first = 1 if part in (2, 4) else 0
    assert all(check_prop_M(seq4, part, n, w) for n in range(first, 4))


def test_prop_M_part_1_example(seq4):
    assert check_prop_M(seq4, 1, 1, Box((-64,), (64,)))


def test_prop_M_hypotheses():
    s2 = make_sequence("geometric", 2, 1)
    with pytest.raises(HypothesisError):
        check_prop_M(s2, 3, 1, Box((-16,), (16,)))
    with pytest.raises(HypothesisError):
        check_prop_M(s2, 4, 1, Box((-16,), (16,)))
    # parts 1 and 2 only need doubling; part 4 accepts ratio exactly 3
    assert check_prop_M(s2, 1, 1, Box((-16,), (16,)))
    s3 = make_sequence("geometric", 3, 1)
    assert check_prop_M(s3, 4, 2, Box((-30,), (30,)))
    with pytest.raises(HypothesisError):
        check_prop_M(s3, 3, 1, Box((-30,), (30,)))


def test_prop_M_detects_forbidden_representation(seq4):
    # without the deleted point, part 1's second statement fails: J_{n+1} + t_n hits I_n
    from cominimal.verify import prop_m_regions

    (_, _, region), (near, _, _) = prop_m_regions(seq4, 1, 1, Box((-64,), (64,)))
    reps, _ = representations(near, build_W(seq4), region[0])
    assert reps and all(r.b == seq4.term(1) for r in reps)


def test_prop_M_in_2d(seq6_2d):
    w = Box.cube(-8, 8, 2)
    for part in (1, 2, 3, 4):
        first = 1 if part in (2, 4) else 0
        assert all(check_prop_M(seq6_2d, part, n, w) for n in range(first, 3))


def test_G_representation_sets(seq6):
    g = build_G(seq6, n_max=4)
    W = build_W(seq6)
    t = lambda n: 6**n  # noqa: E731
    for n in (1, 2, 3):
        r3 = [(r.a[0], r.b[0]) for r in representations(g.result, W, (-3 * t(n - 1),))[0]]
        assert sorted(r3) == sorted([(-2 * t(n - 1), -t(n - 1)), (-t(n) - 3 * t(n - 1), t(n))])
        r4 = [(r.a[0], r.b[0]) for r in representations(g.result, W, (-4 * t(n - 1),))[0]]
        assert r4 == [(-t(n) - 4 * t(n - 1), t(n))]
    r1 = [(r.a[0], r.b[0]) for r in representations(g.result, W, (-1,))[0]]
    assert sorted(r1) == [(-2, 1), (-1, 0)]


def test_thm3_deletion_leaves_minus_three_t0_uncovered(seq6):
    """Deleting both -2t_0 and -t_1 - 3t_0 removes every representation of -3t_0."""
    g = build_G(seq6, n_max=3)
    W = build_W(seq6)
    assert check_cover(g.minus_thm3, W, Box((-3,), (-3,))).uncovered == [(-3,)]
    assert check_cover(g.minus_thm6, W, Box((-216,), (216,))).ok


def test_G_plus_T_covers(seq6):
    g = build_G(seq6, n_max=4, require="ge2")
    assert check_cover(g.result, build_T(seq6), Box((-216,), (216,))).ok

import pytest
from hypothesis import given, settings, strategies as st

from resync import corpus
from resync.analysis import (cross_width, cross_width_naive, decide_one_way_resynchronizable_bounded_visit,
                             find_inversion, has_inversion_symbolic, is_cross, is_order_preserving,
                             max_traversal, pump_witness, traversals)
from resync.core import Interval, SynchronizedPair, origin_graph
from resync.errors import MismatchedPair
from resync.flows import compose_all, flow_of, is_accepting, is_idempotent, edge_run_order

from conftest import corpus_runs, runs_of

FIG1_LEFT = SynchronizedPair("baca", "abac", (4, 1, 2, 3))
FIG1_RIGHT = SynchronizedPair("baca", "abac", (1, 1, 2, 3))


def test_identity_runs_have_no_inversion():
    assert all(find_inversion(r) is None for r in corpus_runs("identity", 4))


def test_swap_run_inversion():
    (r,) = runs_of("t2", "a#b")
    inv = find_inversion(r)
    assert inv is not None
    assert (inv.loop1, inv.loop2) == (Interval(1, 2), Interval(3, 4))
    assert inv.loop1.precedes(inv.loop2)
    for iv, e in ((inv.loop1, inv.edge1), (inv.loop2, inv.edge2)):
        f = flow_of(r, iv)
        assert is_idempotent(f) and e in f.straight_productive()


def test_last_letter_mover_has_no_inversion():
    assert all(find_inversion(r) is None for r in runs_of("t1", "aba"))


@pytest.mark.parametrize("name, expected", [("identity", "YES"), ("t1", "YES"), ("t2", "NO"), ("reverse", "NO")])
def test_decision_examples(name, expected):
    d = decide_one_way_resynchronizable_bounded_visit(corpus.load(name), corpus.DEFAULT_K)
    assert d.verdict == expected
    assert (d.witness is None) == (expected == "YES")


def _concrete_inversion(name, max_len=6):
    return any(find_inversion(r) is not None for r in corpus_runs(name, max_len))


@pytest.mark.parametrize("name", corpus.BOUNDED)
def test_symbolic_agrees_with_concrete(name):
    found, witness = has_inversion_symbolic(corpus.load(name), corpus.DEFAULT_K)
    assert found == _concrete_inversion(name, 5)
    if found:
        assert find_inversion(witness.run) is not None


@pytest.mark.parametrize("name", ["t2", "reverse", "duplicate", "copy_reverse", "copy_or_reverse"])
def test_witness_is_consistent(name):
    t = corpus.load(name)
    _, w = has_inversion_symbolic(t, corpus.DEFAULT_K)
    q = w.quintuple
    assert is_idempotent(w.e) and is_idempotent(w.e2)
    assert is_accepting(compose_all(q))
    assert w.edge1 in w.e.straight_productive() and w.edge2 in w.e2.straight_productive()
    order = edge_run_order(list(q))
    assert order.index((3, w.edge2)) < order.index((1, w.edge1))
    assert w.run.successful and w.run.input == w.word
    assert flow_of(w.run, w.loop1) == w.e and flow_of(w.run, w.loop2) == w.e2
    for n in (2, 3):
        assert cross_width(origin_graph(pump_witness(w, n)))[0] >= n


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_swap_cross_width_grows(n):
    word = "a" * n + "#" + "b" * n
    for r in runs_of("t2", word):
        assert cross_width(origin_graph(r))[0] == n


def test_crossing_and_resynchronized_pairs():
    assert cross_width(FIG1_LEFT)[0] == 1
    assert not is_order_preserving(FIG1_LEFT)
    assert is_order_preserving(FIG1_RIGHT)
    assert max_traversal(FIG1_LEFT, FIG1_RIGHT) == 1


def test_swap_pair_width_two():
    s = SynchronizedPair("ab#cd", "cdab", (4, 5, 1, 2))
    assert cross_width(s)[0] == 2 == cross_width_naive(s)


@pytest.mark.parametrize("s, expected", [
    (SynchronizedPair("ab", "ab", (1, 2)), True),
    (SynchronizedPair("ab", "ba", (2, 1)), False),
])
def test_order_preservation(s, expected):
    assert is_order_preserving(s) is expected


def test_traversal_examples():
    assert traversals(FIG1_LEFT, FIG1_LEFT).by_position() == {}
    tr = traversals(FIG1_LEFT, FIG1_RIGHT)
    assert tr.by_position() == {2: {4}, 3: {4}, 4: {4}}
    assert tr.left_to_right == {}
    n = 5
    src = SynchronizedPair("a" * n, "xx", (n, n))
    tgt = SynchronizedPair("a" * n, "xx", (1, 1))
    by = traversals(src, tgt).by_position()
    assert set(by) == set(range(2, n + 1)) and all(v == {n} for v in by.values())
    src = SynchronizedPair("a" * 6, "xy", (3, 4))
    tgt = SynchronizedPair("a" * 6, "xy", (6, 6))
    assert max_traversal(src, tgt) == 2


def test_traversal_rejects_mismatch():
    with pytest.raises(MismatchedPair):
        traversals(FIG1_LEFT, SynchronizedPair("bac", "abac", (1, 1, 2, 3)))


def _pairs(max_out=10, max_in=5):
    return st.integers(1, max_in).flatmap(lambda n: st.lists(st.integers(1, n), max_size=max_out).map(
        lambda o: SynchronizedPair("a" * n, "x" * len(o), tuple(o))))


@settings(max_examples=200, deadline=None)
@given(_pairs(max_out=8))
def test_cross_width_sweep_is_exact(s):
    assert cross_width(s)[0] == cross_width_naive(s)


@settings(max_examples=300)
@given(_pairs())
def test_cross_width_zero_iff_order_preserving(s):
    width, cross = cross_width(s)
    assert (width == 0) == is_order_preserving(s)
    if width:
        assert is_cross(s, cross.x1, cross.x2)
        assert min(len({s.orig(x) for x in cross.x1}), len({s.orig(x) for x in cross.x2})) == width

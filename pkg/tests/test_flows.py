import itertools

import pytest
from hypothesis import given, settings, strategies as st

from resync import corpus
from resync.analysis import find_inversion
from resync.core import Interval, TwoWayTransducer, origin_graph
from resync.errors import BoundExceeded, InvalidInterval, NotTotallyOrdered
from resync.flows import (BOTTOM, EMPTY, Edge, Flow, PaddedRun, check_flow, compose, compose_all,
                          edge_run_order, flow_of, flow_with_witnesses, generate_monoid,
                          is_accepting, is_idempotent, letter_flows, monoid_size_bound,
                          padded_alphabet, padded_letter_flows)

from conftest import corpus_runs, monoid_of, runs_of


def lr(label, productive):
    return Flow((label,), (label,), (Edge(("L", 0), ("R", 0), productive),))


def reverse_run(word):
    return [r for r in runs_of("reverse", word) if origin_graph(r).output == word[::-1]][0]


def test_identity_flow_on_whole_input():
    (r,) = runs_of("identity", "ab")
    f = flow_of(r, Interval(1, 3))
    assert f == lr("q0", True)


def test_reverse_inner_interval_shape():
    f = flow_of(reverse_run("ab"), Interval(2, 3))
    assert f.l_vertices == f.r_vertices == ("r0", "l", "r1")
    assert sorted(e.ident() for e in f.edges) == ["L0->R0", "L2->R2", "R1->L1"]
    assert [e.ident() for e in f.edges if e.productive] == ["R1->L1"]
    assert check_flow(f, corpus.load("reverse").is_right) == []


def test_empty_interval_pairs_configurations_with_themselves():
    r = reverse_run("ab")
    f = flow_of(r, Interval(2, 2))
    at_cut = tuple(c.state for c in r.configs if c.cut == 2)
    assert f.l_vertices == f.r_vertices == at_cut
    assert all(e.src[1] == e.dst[1] and not e.productive for e in f.edges)
    assert len(f.edges) == len(at_cut)


def test_flow_interval_out_of_range():
    (r,) = runs_of("identity", "ab")
    with pytest.raises(InvalidInterval):
        flow_of(r, Interval(1, 6))


def test_compose_with_bottom():
    f = lr("q", True)
    assert compose(f, BOTTOM) == BOTTOM and compose(BOTTOM, f) == BOTTOM


@pytest.mark.parametrize("p1, p2", list(itertools.product([False, True], repeat=2)))
def test_compose_single_edges(p1, p2):
    assert compose(lr("q", p1), lr("q", p2)) == lr("q", p1 or p2)


def test_compose_label_mismatch():
    assert compose(lr("p", True), lr("q", True)) == BOTTOM


def test_idempotent_examples():
    assert is_idempotent(lr("q", True))
    assert not is_idempotent(BOTTOM)
    assert is_idempotent(flow_of(reverse_run("abb"), Interval(2, 3)))


def _splits(n_pad, max_pieces=4):
    cuts = list(range(1, n_pad))
    for k in range(0, min(max_pieces, len(cuts)) + 1):
        for cs in itertools.combinations(cuts, k):
            pts = [0, *cs, n_pad]
            yield [Interval(a, b) for a, b in zip(pts, pts[1:])]


@pytest.mark.parametrize("name", corpus.BOUNDED)
def test_homomorphism(name):
    for r in corpus_runs(name, 3):
        pr = PaddedRun.of(r)
        n_pad = len(r.input) + 2
        whole = flow_of(r, Interval(0, n_pad))
        assert is_accepting(whole)
        for pieces in _splits(n_pad):
            assert compose_all(flow_with_witnesses(pr, iv)[0] for iv in pieces) == whole


@pytest.mark.parametrize("name", corpus.BOUNDED)
def test_edge_run_order_matches_run(name):
    for r in corpus_runs(name, 3):
        pr = PaddedRun.of(r)
        for pieces in _splits(len(r.input) + 2, 3):
            parts = [flow_with_witnesses(pr, iv) for iv in pieces]
            order = edge_run_order([f for f, _ in parts])
            starts = [parts[k][1][e][0] for k, e in order]
            assert starts == sorted(starts)
            assert len(order) == sum(len(f.edges) for f, _ in parts)


def test_edge_run_order_single_edge():
    f = lr("q", True)
    assert edge_run_order([f]) == [(0, f.edges[0])]


def test_edge_run_order_rejects_mismatch():
    with pytest.raises(NotTotallyOrdered):
        edge_run_order([lr("p", True), lr("q", True)])
    with pytest.raises(NotTotallyOrdered):
        edge_run_order([BOTTOM])


@pytest.mark.parametrize("name", corpus.BOUNDED)
def test_letter_flows_respect_invariants(name):
    t = corpus.load(name)
    for a in padded_alphabet(t):
        for f in letter_flows(t, a, corpus.DEFAULT_K):
            assert check_flow(f, t.is_right) == []
            assert max(len(f.l_vertices), len(f.r_vertices)) <= corpus.DEFAULT_K


@pytest.mark.parametrize("name", corpus.BOUNDED)
def test_run_letter_flows_are_generators(name):
    m = monoid_of(name)
    for r in corpus_runs(name, 3):
        for f in padded_letter_flows(r):
            assert f in m
        assert compose_all(padded_letter_flows(r)) in m


@pytest.mark.parametrize("name", corpus.BOUNDED)
def test_monoid_size_bound(name):
    t = corpus.load(name)
    m = monoid_of(name)
    assert m.size_bound == monoid_size_bound(len(t.states), corpus.DEFAULT_K)
    assert len(m) <= m.size_bound
    assert BOTTOM in m


def test_size_bound_formula():
    assert monoid_size_bound(2, 1) == 37


def test_identity_monoid():
    m = generate_monoid(corpus.load("identity"), 1)
    sigma = {f for f in m.elements if f.is_sigma and f != EMPTY}
    assert sigma == {lr("q0", True)}
    assert len(m) == 9


def test_machine_without_transitions_or_states_in_use():
    t = TwoWayTransducer.build(right=["q"], left=[], initial=[], final=[], transitions=[],
                               input_letters="a")
    m = generate_monoid(t, 1)
    assert set(m.elements) == {BOTTOM, EMPTY}


def test_monoid_cap():
    with pytest.raises(BoundExceeded):
        generate_monoid(corpus.load("t1"), 3, cap=4)


def test_monoid_factor_reproduces_element():
    m = monoid_of("t2")
    for f in m.elements:
        if f.bottom or f == EMPTY:
            continue
        letters = m.factor(f)
        assert compose_all(g for _, g in letters) == f


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(corpus.BOUNDED), st.randoms(use_true_random=False))
def test_associativity(name, rnd):
    els = monoid_of(name).elements
    f, g, h = (rnd.choice(els) for _ in range(3))
    assert compose(compose(f, g), h) == compose(f, compose(g, h))


INVERSION_FREE = [n for n in corpus.BOUNDED
                  if all(find_inversion(r) is None for r in corpus_runs(n, 4))]


def test_inversion_free_part_of_corpus():
    assert set(INVERSION_FREE) == {"identity", "t1", "eraser", "letter_map", "three_pass",
                                   "first_to_end", "v_then_head"}


@pytest.mark.parametrize("name", INVERSION_FREE)
def test_loops_of_inversion_free_machines_have_one_straight_productive_edge(name):
    for r in corpus_runs(name, 4):
        n = len(r.input)
        for lo in range(1, n + 1):
            for hi in range(lo + 1, n + 2):
                f = flow_of(r, Interval(lo, hi))
                if is_idempotent(f):
                    sp = f.straight_productive()
                    assert len(sp) <= 1
                    assert all(e.kind == "LR" for e in sp)

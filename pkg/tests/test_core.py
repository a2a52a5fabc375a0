import warnings

import pytest
from hypothesis import given, strategies as st

from resync import corpus
from resync.core import (LEFT_MARK, RIGHT_MARK, Configuration, EmptyInputOutputWarning, Interval,
                         Run, SynchronizedPair, Transition, TwoWayTransducer, check_run,
                         clamp_origin, origin_graph, validate_transducer)
from resync.errors import InvalidInterval, InvalidRun, NotSuccessful

from conftest import corpus_runs, runs_of


def identity():
    return corpus.load("identity")


def test_identity_is_valid():
    assert validate_transducer(identity()) == []


def test_left_reading_initial_is_reported():
    t = TwoWayTransducer.build(right=["q"], left=["p"], initial=["p"], final=["q"],
                               transitions=[("q", "a", "a", "q")], input_letters="a")
    kinds = [v.kind for v in validate_transducer(t)]
    assert kinds == ["initial not right-reading"]


def test_undeclared_state_is_reported():
    t = TwoWayTransducer.build(right=["q"], left=[], initial=["q"], final=["q"],
                               transitions=[("q", "a", "a", "ghost")], input_letters="a")
    kinds = [v.kind for v in validate_transducer(t)]
    assert kinds == ["unknown state"]


@pytest.mark.parametrize("letters, kind", [("", "empty alphabet"), ("a" + LEFT_MARK, "endmarker in alphabet")])
def test_alphabet_violations(letters, kind):
    t = TwoWayTransducer.build(right=["q"], left=[], initial=["q"], final=["q"],
                               transitions=[], input_letters=letters)
    assert kind in [v.kind for v in validate_transducer(t)]


def test_overlapping_partition_is_reported():
    t = TwoWayTransducer.build(right=["q"], left=["q"], initial=["q"], final=["q"],
                               transitions=[], input_letters="a")
    assert "partition" in [v.kind for v in validate_transducer(t)]


def test_every_corpus_machine_validates():
    for name in corpus.names():
        assert validate_transducer(corpus.load(name)) == [], name


def test_identity_origin_graph():
    (r,) = runs_of("identity", "ab")
    assert origin_graph(r) == SynchronizedPair("ab", "ab", (1, 2))


def test_last_letter_mover_on_baca():
    pairs = {origin_graph(r) for r in runs_of("t1", "baca")}
    assert pairs == {SynchronizedPair("baca", "abac", (4, 1, 2, 3))}


def test_reverse_on_ab():
    pairs = {origin_graph(r) for r in runs_of("reverse", "ab")}
    assert SynchronizedPair("ab", "ba", (2, 1)) in pairs


def test_origin_graph_rejects_unsuccessful_run():
    t = identity()
    r = Run.from_transitions(t, "ab", Configuration("q0", 1), [Transition("q0", "a", "a", "q0")])
    assert not r.successful
    with pytest.raises(NotSuccessful):
        origin_graph(r)


def test_from_transitions_rejects_wrong_letter():
    with pytest.raises(InvalidRun):
        Run.from_transitions(identity(), "ab", Configuration("q0", 1), [Transition("q0", "b", "b", "q0")])


def test_empty_input_output_warns():
    # bounces between the endmarkers of the empty input, emitting x once
    t = TwoWayTransducer.build(right=["q"], left=["p"], initial=["q"], final=["q"],
                               transitions=[("q", RIGHT_MARK, "x", "p"), ("p", LEFT_MARK, "", "q")],
                               input_letters="a", output_letters="x")
    r = Run.from_transitions(t, "", Configuration("q", 1),
                             [Transition("q", RIGHT_MARK, "x", "p"), Transition("p", LEFT_MARK, "", "q")])
    assert r.successful
    with pytest.warns(EmptyInputOutputWarning):
        p = origin_graph(r)
    assert p == SynchronizedPair("", "x", (1,))


def test_silent_empty_input_does_not_warn():
    t = identity()
    r = Run.from_transitions(t, "", Configuration("q0", 1), [])
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert origin_graph(r).output == ""


@pytest.mark.parametrize("name", corpus.BOUNDED)
def test_origin_graph_is_consistent_with_steps(name):
    for r in corpus_runs(name, 3):
        assert check_run(r) == []
        p = origin_graph(r)
        assert len(p.output) == sum(len(tr.output) for tr in r.transitions)
        # replay: consecutive output chunks carry the clamped read position of their step
        x = 0
        for tr, j in zip(r.transitions, r.read_positions):
            for c in tr.output:
                assert p.output[x] == c
                assert p.origin[x] == clamp_origin(j, len(r.input))
                x += 1


def test_interval_rejects_reversed_bounds():
    with pytest.raises(InvalidInterval):
        Interval(3, 2)


@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
def test_interval_concat_and_order(a, b, c):
    lo, mid, hi = sorted((a, b, c))
    i, j = Interval(lo, mid), Interval(mid, hi)
    assert i.adjacent(j) and i.precedes(j)
    assert i.concat(j) == Interval(lo, hi)
    assert len(i) + len(j) == len(i.concat(j))


def test_pair_rejects_out_of_range_origin():
    with pytest.raises(ValueError):
        SynchronizedPair("ab", "x", (3,))


@given(st.text(alphabet="ab", max_size=5).flatmap(
    lambda u: st.tuples(st.just(u), st.lists(st.integers(1, max(1, len(u))), max_size=6))))
def test_pair_json_round_trip(data):
    u, origin = data
    p = SynchronizedPair(u, "c" * len(origin), tuple(origin))
    assert SynchronizedPair.from_json(p.to_json()) == p

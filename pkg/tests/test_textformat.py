import pytest
from hypothesis import given, settings, strategies as st

from resync import corpus
from resync.core import LEFT_MARK, RIGHT_MARK, TwoWayTransducer
from resync.textformat import ParseError, parse_transducer, render_transducer

IDENTITY_DOC = """\
# copies its input
input: a b
right: q0
initial: q0
final: q0
q0, a -> a, q0
q0, b -> b, q0
"""


def test_identity_document():
    t = parse_transducer(IDENTITY_DOC)
    assert t.states == {"q0"} and t.initial == {"q0"} and len(t.transitions) == 2
    assert t.alphabet.output_letters == {"a", "b"}


def test_unknown_letter_names_line_and_token():
    doc = IDENTITY_DOC + "q0, z -> a, q0\n"
    with pytest.raises(ParseError) as exc:
        parse_transducer(doc)
    assert exc.value.line == 8 and exc.value.token == "z"
    assert "line 8" in str(exc.value)


@pytest.mark.parametrize("extra, token", [
    ("q0, a -> a, nowhere\n", "nowhere"),
    ("q0, a -> x, q0\n", "x"),
    ("input: c\n", "input"),
    ("what is this\n", "what is this"),
])
def test_positioned_errors(extra, token):
    with pytest.raises(ParseError) as exc:
        parse_transducer(IDENTITY_DOC + extra)
    assert exc.value.token == token
    assert exc.value.line == 8


def test_validation_violation_is_surfaced():
    doc = IDENTITY_DOC.replace("right: q0", "right: q0\nleft: p").replace("initial: q0", "initial: p")
    with pytest.raises(ParseError) as exc:
        parse_transducer(doc)
    assert exc.value.token == "initial not right-reading"
    assert exc.value.line == 5


def test_hash_is_a_letter_outside_comment_lines():
    t = parse_transducer("input: a #\nright: q\ninitial: q\nfinal: q\nq, # -> #, q\n")
    assert "#" in t.alphabet.input_letters


def test_ascii_endmarkers_and_empty_output():
    t = parse_transducer("input: a\nright: q\nleft: p\ninitial: q\nfinal: q\n"
                         "q, -| -> ε, p\np, |- -> _, q\nq, a -> , q\n")
    letters = {tr.letter for tr in t.transitions}
    assert {LEFT_MARK, RIGHT_MARK} <= letters
    assert all(tr.output == "" for tr in t.transitions)


@pytest.mark.parametrize("name", corpus.names())
def test_corpus_round_trip(name):
    t = corpus.load(name)
    again = parse_transducer(render_transducer(t))
    assert again == t
    assert render_transducer(again) == render_transducer(t)


def test_last_letter_mover_document_is_one_way_resynchronizable():
    from resync.analysis import decide_one_way_resynchronizable_bounded_visit
    t = parse_transducer(corpus.source("t1"))
    assert decide_one_way_resynchronizable_bounded_visit(t, 3).verdict == "YES"


_names = st.sampled_from(["p", "q", "r", "s"])
_trans = st.tuples(_names, st.sampled_from(["a", "b", LEFT_MARK, RIGHT_MARK]),
                   st.text(alphabet="ab", max_size=2), _names)


@settings(max_examples=60)
@given(st.sets(_names, min_size=1), st.sets(_names), st.lists(_trans, max_size=8))
def test_render_parse_round_trip(right, left, transitions):
    left = left - right
    states = right | left
    transitions = [t for t in transitions if t[0] in states and t[3] in states]
    t = TwoWayTransducer.build(right=right, left=left, initial=sorted(right)[:1], final=sorted(states)[-1:],
                               transitions=transitions, input_letters="ab", output_letters="ab")
    assert parse_transducer(render_transducer(t)) == t

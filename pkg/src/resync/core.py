"""Machine model: two-way transducers, configurations, runs and origin graphs.

Words are Python strings whose characters are letters.  Cuts are numbered
``1 .. |w|+1`` and positions ``1 .. |w|``; position ``0`` holds the left
endmarker and position ``|w|+1`` the right one.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .errors import InvalidInterval, InvalidRun, NotSuccessful

LEFT_MARK = "⊢"
RIGHT_MARK = "⊣"
ENDMARKERS = (LEFT_MARK, RIGHT_MARK)


class EmptyInputOutputWarning(UserWarning):
    """An empty input produced output; its origins cannot land in dom(u)."""


@dataclass(frozen=True)
class Alphabet:
    input_letters: frozenset
    output_letters: frozenset

    def __post_init__(self):
        object.__setattr__(self, "input_letters", frozenset(self.input_letters))
        object.__setattr__(self, "output_letters", frozenset(self.output_letters))


@dataclass(frozen=True, order=True)
class Transition:
    source: str
    letter: str
    output: str
    target: str

    @property
    def productive(self) -> bool:
        return bool(self.output)

    def __str__(self):
        return f"{self.source}, {self.letter} -> {self.output}, {self.target}"


@dataclass(frozen=True)
class TwoWayTransducer:
    states: frozenset
    left_reading: frozenset
    right_reading: frozenset
    initial: frozenset
    final: frozenset
    transitions: frozenset
    alphabet: Alphabet
    name: str = field(default="", compare=False)

    def __post_init__(self):
        for attr in ("states", "left_reading", "right_reading", "initial", "final", "transitions"):
            object.__setattr__(self, attr, frozenset(getattr(self, attr)))

    @classmethod
    def build(cls, right, left, initial, final, transitions, input_letters,
              output_letters=None, name=""):
        """Convenience constructor; transitions are 4-tuples."""
        trans = [t if isinstance(t, Transition) else Transition(*t) for t in transitions]
        if output_letters is None:
            output_letters = {c for t in trans for c in t.output} or set(input_letters)
        right, left = frozenset(right), frozenset(left)
        return cls(states=right | left, left_reading=left, right_reading=right,
                   initial=frozenset(initial), final=frozenset(final),
                   transitions=frozenset(trans),
                   alphabet=Alphabet(frozenset(input_letters), frozenset(output_letters)),
                   name=name)

    def is_right(self, state: str) -> bool:
        return state in self.right_reading

    @cached_property
    def _index(self) -> dict:
        idx: dict = {}
        for t in sorted(self.transitions):
            idx.setdefault((t.source, t.letter), []).append(t)
        return idx

    def outgoing(self, state: str, letter: str) -> list:
        return self._index.get((state, letter), [])

    @cached_property
    def sorted_transitions(self) -> tuple:
        return tuple(sorted(self.transitions))

    @property
    def input_letters(self):
        return self.alphabet.input_letters


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def __str__(self):
        return f"{self.kind}: {self.detail}"


def validate_transducer(t: TwoWayTransducer) -> list[Violation]:
    out = []
    sigma = t.alphabet.input_letters
    if not sigma:
        out.append(Violation("empty alphabet", "input letter set is empty"))
    if not t.alphabet.output_letters:
        out.append(Violation("empty alphabet", "output letter set is empty"))
    for m in ENDMARKERS:
        if m in sigma:
            out.append(Violation("endmarker in alphabet", repr(m)))
    for q in sorted(t.left_reading & t.right_reading):
        out.append(Violation("partition", f"state {q!r} is both left- and right-reading"))
    for q in sorted(t.states - (t.left_reading | t.right_reading)):
        out.append(Violation("partition", f"state {q!r} has no reading direction"))
    for q in sorted((t.left_reading | t.right_reading) - t.states):
        out.append(Violation("unknown state", f"{q!r} has a direction but is not declared"))
    for q in sorted(t.initial):
        if q not in t.states:
            out.append(Violation("unknown state", f"initial state {q!r}"))
        elif q not in t.right_reading:
            out.append(Violation("initial not right-reading", f"initial state {q!r}"))
    for q in sorted(t.final - t.states):
        out.append(Violation("unknown state", f"final state {q!r}"))
    for tr in sorted(t.transitions):
        for q in (tr.source, tr.target):
            if q not in t.states:
                out.append(Violation("unknown state", f"{q!r} in transition ({tr})"))
        if tr.letter not in sigma and tr.letter not in ENDMARKERS:
            out.append(Violation("unknown letter", f"{tr.letter!r} in transition ({tr})"))
        bad = [c for c in tr.output if c not in t.alphabet.output_letters]
        if bad:
            out.append(Violation("unknown output letter", f"{bad[0]!r} in transition ({tr})"))
    return out


@dataclass(frozen=True, order=True)
class Configuration:
    state: str
    cut: int


@dataclass(frozen=True, order=True)
class Interval:
    """Half-open interval ``[lo, hi)`` of positions, i.e. between cuts lo and hi."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise InvalidInterval(f"[{self.lo},{self.hi}) has lo > hi")

    def __len__(self):
        return self.hi - self.lo

    def __contains__(self, pos: int) -> bool:
        return self.lo <= pos < self.hi

    def precedes(self, other: "Interval") -> bool:
        return self.hi <= other.lo

    def adjacent(self, other: "Interval") -> bool:
        return self.hi == other.lo

    def concat(self, other: "Interval") -> "Interval":
        if not self.adjacent(other):
            raise InvalidInterval(f"{self} and {other} are not adjacent")
        return Interval(self.lo, other.hi)

    @property
    def first(self) -> int:
        return self.lo

    @property
    def last(self) -> int:
        return self.hi - 1

    def __str__(self):
        return f"[{self.lo},{self.hi})"


def letter_at(word: str, pos: int) -> str:
    """Letter at a padded position (0 and |w|+1 are the endmarkers)."""
    if pos == 0:
        return LEFT_MARK
    if pos == len(word) + 1:
        return RIGHT_MARK
    return word[pos - 1]


def step(t: TwoWayTransducer, word: str, conf: Configuration, tr: Transition):
    """Apply ``tr`` at ``conf``; return (read position, next configuration) or None."""
    if tr.source != conf.state:
        return None
    src_right = t.is_right(tr.source)
    read = conf.cut if src_right else conf.cut - 1
    if read < 0 or read > len(word) + 1 or letter_at(word, read) != tr.letter:
        return None
    tgt_right = t.is_right(tr.target)
    if src_right and tgt_right:
        cut = conf.cut + 1
    elif src_right or tgt_right:
        cut = conf.cut
    else:
        cut = conf.cut - 1
    if not 1 <= cut <= len(word) + 1:
        return None
    return read, Configuration(tr.target, cut)


@dataclass(frozen=True)
class Run:
    """A run: ``configs[k] --transitions[k]--> configs[k+1]`` reading ``read_positions[k]``."""

    input: str
    configs: tuple
    transitions: tuple
    read_positions: tuple
    transducer: TwoWayTransducer = field(compare=False, hash=False, repr=False)

    @classmethod
    def from_transitions(cls, t: TwoWayTransducer, word: str, start: Configuration,
                         transitions: Iterable[Transition]) -> "Run":
        """Re-simulate ``transitions`` from ``start``; raise InvalidRun on a mismatch."""
        confs = [start]
        reads = []
        trs = tuple(transitions)
        for k, tr in enumerate(trs):
            nxt = step(t, word, confs[-1], tr)
            if nxt is None:
                raise InvalidRun(f"step {k}: ({tr}) not applicable at {confs[-1]} on {word!r}")
            reads.append(nxt[0])
            confs.append(nxt[1])
        return cls(word, tuple(confs), trs, tuple(reads), t)

    @property
    def steps(self):
        return list(zip(self.configs, self.transitions, self.read_positions))

    @property
    def successful(self) -> bool:
        first, last = self.configs[0], self.configs[-1]
        t = self.transducer
        return (first.state in t.initial and first.cut == 1
                and last.state in t.final and last.cut == len(self.input) + 1)

    @property
    def output(self) -> str:
        return "".join(tr.output for tr in self.transitions)

    def __len__(self):
        return len(self.transitions)


def check_run(r: Run) -> list[str]:
    """Re-derive every step of ``r``; return a list of problems (empty if valid)."""
    problems = []
    t, w = r.transducer, r.input
    if len(r.configs) != len(r.transitions) + 1 or len(r.read_positions) != len(r.transitions):
        return ["length mismatch between configurations, transitions and read positions"]
    for k, (c, tr, j) in enumerate(r.steps):
        if not 1 <= c.cut <= len(w) + 1:
            problems.append(f"step {k}: cut {c.cut} out of range")
            continue
        if tr not in t.transitions:
            problems.append(f"step {k}: ({tr}) is not a transition")
        nxt = step(t, w, c, tr)
        if nxt is None:
            problems.append(f"step {k}: ({tr}) not applicable at {c}")
        elif nxt != (j, r.configs[k + 1]):
            problems.append(f"step {k}: expected {nxt}, run has {(j, r.configs[k + 1])}")
    return problems


@dataclass(frozen=True)
class SynchronizedPair:
    input: str
    output: str
    origin: tuple

    def __post_init__(self):
        object.__setattr__(self, "origin", tuple(self.origin))
        if len(self.origin) != len(self.output):
            raise ValueError("origin map must be total on output positions")
        top = max(1, len(self.input))
        for o in self.origin:
            if not 1 <= o <= top:
                raise ValueError(f"origin {o} outside [1, {len(self.input)}]")

    def orig(self, x: int) -> int:
        """Origin of 1-based output position x."""
        return self.origin[x - 1]

    def to_json(self) -> dict:
        return {"input": self.input, "output": self.output, "origin": list(self.origin)}

    @classmethod
    def from_json(cls, obj: dict) -> "SynchronizedPair":
        return cls(obj["input"], obj["output"], tuple(obj["origin"]))


def clamp_origin(read_pos: int, n: int) -> int:
    return min(max(read_pos, 1), max(n, 1))


def origin_graph(r: Run) -> SynchronizedPair:
    if not r.successful:
        raise NotSuccessful("origin graphs are defined for successful runs only")
    n = len(r.input)
    if n == 0 and r.output:
        warnings.warn("output produced on the empty input; origins set to 1",
                      EmptyInputOutputWarning, stacklevel=2)
    origin = []
    for tr, j in zip(r.transitions, r.read_positions):
        origin.extend([clamp_origin(j, n)] * len(tr.output))
    return SynchronizedPair(r.input, r.output, tuple(origin))

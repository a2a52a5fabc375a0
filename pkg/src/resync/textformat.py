"""Plain-text transducer documents.

Grammar (one item per line; a line whose first non-blank character is ``#``
is a comment, so ``#`` stays usable as a letter elsewhere)::

    document   := line*
    line       := decl | transition | blank
    decl       := KEY ":" NAME*          KEY in {name, input, output, right, left, initial, final}
    transition := STATE "," LETTER "->" WORD? "," STATE
    LETTER     := a single input letter | "|-" | "-|" | "⊢" | "⊣"
    WORD       := output letters, written contiguously; empty or "ε" for no output

Names in declarations are separated by whitespace or commas.  The
``name`` declaration is optional.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .core import (LEFT_MARK, RIGHT_MARK, Alphabet, Transition, TwoWayTransducer,
                   validate_transducer)
from .errors import ResyncError

ASCII_MARKS = {"|-": LEFT_MARK, "-|": RIGHT_MARK}
EMPTY_WORDS = {"", "ε", "_"}
DECL_KEYS = ("name", "input", "output", "right", "left", "initial", "final")
_TRANS = re.compile(r"^\s*([^,\s]+)\s*,\s*(\S+)\s*->\s*([^,]*?)\s*,\s*([^,\s]+)\s*$")


@dataclass
class ParseError(ResyncError):
    line: int
    token: str
    message: str

    def __str__(self):
        return f"line {self.line}: {self.message} ({self.token!r})"


def _names(rest: str) -> list[str]:
    return [x for x in re.split(r"[\s,]+", rest.strip()) if x]


def parse_transducer(text: str, *, validate: bool = True) -> TwoWayTransducer:
    decls: dict[str, list[str]] = {}
    decl_line: dict[str, int] = {}
    trans: list[tuple[int, Transition]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _TRANS.match(line)
        if m and "->" in line:
            src, letter, word, tgt = m.groups()
            letter = ASCII_MARKS.get(letter, letter)
            word = "" if word in EMPTY_WORDS else word
            trans.append((lineno, Transition(src, letter, word, tgt)))
            continue
        key, sep, rest = line.partition(":")
        key = key.strip().lower()
        if not sep or key not in DECL_KEYS:
            raise ParseError(lineno, line, "expected a declaration or a transition")
        if key in decls:
            raise ParseError(lineno, key, "duplicate declaration")
        decls[key] = [rest.strip()] if key == "name" else _names(rest)
        decl_line[key] = lineno
    for key in ("input", "right"):
        if key not in decls:
            raise ParseError(0, key, "missing declaration")

    sigma = set(decls["input"])
    for lineno, tok in [(decl_line["input"], x) for x in decls["input"]]:
        if len(tok) != 1:
            raise ParseError(lineno, tok, "input letters must be single characters")
    gamma = set(decls.get("output", [])) or set(sigma)
    right, left = set(decls["right"]), set(decls.get("left", []))
    states = right | left
    for lineno, tr in trans:
        for q in (tr.source, tr.target):
            if q not in states:
                raise ParseError(lineno, q, "unknown state")
        if tr.letter not in sigma and tr.letter not in (LEFT_MARK, RIGHT_MARK):
            raise ParseError(lineno, tr.letter, "unknown letter")
        for c in tr.output:
            if c not in gamma:
                raise ParseError(lineno, c, "unknown output letter")
    for key in ("initial", "final"):
        for q in decls.get(key, []):
            if q not in states:
                raise ParseError(decl_line[key], q, f"unknown {key} state")

    t = TwoWayTransducer(
        states=frozenset(states), left_reading=frozenset(left), right_reading=frozenset(right),
        initial=frozenset(decls.get("initial", [])), final=frozenset(decls.get("final", [])),
        transitions=frozenset(tr for _, tr in trans),
        alphabet=Alphabet(sigma, gamma),
        name=(decls.get("name") or [""])[0],
    )
    if validate:
        problems = validate_transducer(t)
        if problems:
            first = problems[0]
            line = next((ln for ln, tr in trans if str(tr) in first.detail), 0)
            if not line and first.kind.startswith("initial"):
                line = decl_line.get("initial", 0)
            raise ParseError(line, first.kind, str(first))
    return t


def _letter_text(letter: str) -> str:
    return {LEFT_MARK: "|-", RIGHT_MARK: "-|"}.get(letter, letter)


def render_transducer(t: TwoWayTransducer) -> str:
    lines = []
    if t.name:
        lines.append(f"name: {t.name}")
    lines.append("input: " + " ".join(sorted(t.alphabet.input_letters)))
    lines.append("output: " + " ".join(sorted(t.alphabet.output_letters)))
    lines.append("right: " + " ".join(sorted(t.right_reading)))
    lines.append("left: " + " ".join(sorted(t.left_reading)))
    lines.append("initial: " + " ".join(sorted(t.initial)))
    lines.append("final: " + " ".join(sorted(t.final)))
    for tr in t.sorted_transitions:
        lines.append(f"{tr.source}, {_letter_text(tr.letter)} -> {tr.output}, {tr.target}")
    return "\n".join(lines) + "\n"

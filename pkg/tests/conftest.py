import itertools
import sys
from functools import lru_cache

from resync import corpus
from resync.core import Configuration, Run, Transition
from resync.flows import generate_monoid
from resync.runner import RunBudget, enumerate_runs


def words(letters, max_len):
    letters = sorted(letters)
    for n in range(max_len + 1):
        for tup in itertools.product(letters, repeat=n):
            yield "".join(tup)


@lru_cache(maxsize=None)
def runs_of(name: str, word: str) -> tuple:
    runs, truncated = enumerate_runs(corpus.load(name), word, RunBudget(visit_bound=corpus.DEFAULT_K))
    assert not truncated
    return tuple(runs)


@lru_cache(maxsize=None)
def corpus_runs(name: str, max_len: int) -> tuple:
    t = corpus.load(name)
    return tuple(r for w in words(t.alphabet.input_letters, max_len) for r in runs_of(name, w))


@lru_cache(maxsize=None)
def monoid_of(name: str, K: int = corpus.DEFAULT_K):
    return generate_monoid(corpus.load(name), K)


def multipass_run(word, origins):
    """A run of the multi-pass copier emitting the letters at ``origins`` in that order."""
    t = corpus.load("multipass")
    n = len(word)
    trs = []
    for k, y in enumerate(origins):
        trs += [Transition("r", word[i - 1], "", "r") for i in range(1, y)]
        trs.append(Transition("r", word[y - 1], word[y - 1], "c"))
        trs += [Transition("c", word[i - 1], "", "c") for i in range(y + 1, n + 1)]
        if k < len(origins) - 1:
            trs.append(Transition("c", "⊣", "", "l"))
            trs += [Transition("l", word[i - 1], "", "l") for i in range(n, 0, -1)]
            trs.append(Transition("l", "⊢", "", "r"))
    return Run.from_transitions(t, word, Configuration("r", 1), trs)



def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.RESULTS[n])

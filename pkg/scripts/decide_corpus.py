#!/usr/bin/env python3
"""Decide one-way resynchronizability for every bounded corpus machine.

Prints the symbolic verdict, whether a concrete sweep over short inputs
agrees, the flow monoid size against its bound, and the witness input.
"""
import argparse
import time

from resync import corpus
from resync.analysis import decide_one_way_resynchronizable_bounded_visit, find_inversion
from resync.flows import generate_monoid
from resync.runner import RunBudget, enumerate_runs
from resync.sparsity import shortlex


def concrete_has_inversion(t, K, max_len):
    for w in shortlex(t.alphabet.input_letters, max_len):
        runs, _ = enumerate_runs(t, w, RunBudget(visit_bound=K))
        if any(find_inversion(r) is not None for r in runs):
            return True
    return False


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-k", type=int, default=corpus.DEFAULT_K, help="visit bound (default %(default)s)")
    ap.add_argument("--max-len", type=int, default=6, help="concrete sweep input length (default %(default)s)")
    args = ap.parse_args()
    print(f"{'machine':16} {'verdict':7} {'agrees':6} {'|M|':>6} {'bound':>12} {'secs':>6}  witness")
    for name in corpus.BOUNDED:
        t = corpus.load(name)
        t0 = time.perf_counter()
        d = decide_one_way_resynchronizable_bounded_visit(t, args.k)
        m = generate_monoid(t, args.k)
        secs = time.perf_counter() - t0
        agrees = (d.verdict == "NO") == concrete_has_inversion(t, args.k, args.max_len)
        witness = repr(d.witness.run.input) if d.witness else "-"
        print(f"{name:16} {d.verdict:7} {str(agrees):6} {len(m):>6} {m.size_bound:>12} {secs:6.2f}  {witness}")


if __name__ == "__main__":
    main()

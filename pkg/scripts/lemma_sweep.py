#!/usr/bin/env python3
"""Instantiate the block lemmas on every inversion-free corpus run and report counterexamples."""
import argparse
from collections import Counter

from resync import corpus
from resync.analysis import find_inversion
from resync.factorization import check_lemmas
from resync.runner import RunBudget, enumerate_runs
from resync.sparsity import shortlex


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-len", type=int, default=6, help="input length bound (default %(default)s)")
    ap.add_argument("--thresholds", type=int, nargs="+", default=[1, 2])
    ap.add_argument("-k", type=int, default=corpus.DEFAULT_K, help="visit bound (default %(default)s)")
    args = ap.parse_args()
    checked, found = Counter(), Counter()
    runs = 0
    for name in corpus.BOUNDED:
        t = corpus.load(name)
        for w in shortlex(t.alphabet.input_letters, args.max_len):
            for r in enumerate_runs(t, w, RunBudget(visit_bound=args.k))[0]:
                if find_inversion(r) is not None:
                    continue
                runs += 1
                for th in args.thresholds:
                    rep = check_lemmas(r, th)
                    checked.update(rep.checked)
                    for lemma, items in rep.counterexamples.items():
                        found[lemma] += len(items)
                        for item in items[:1]:
                            print(f"counterexample {lemma} T={th} {name} {w!r}: {item}")
    print(f"{runs} runs")
    for lemma in sorted(checked):
        print(f"lemma {lemma}: {checked[lemma]} instances, {found[lemma]} counterexamples")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Build and verify retargetings on all inversion-free corpus runs, per threshold."""
import argparse
from collections import Counter

from resync import corpus
from resync.analysis import find_inversion, is_order_preserving
from resync.factorization import build_factorization_tree, build_retargeting, verify_retargeting
from resync.flows import generate_monoid, padded_letter_flows
from resync.runner import RunBudget, enumerate_runs, max_visits
from resync.sparsity import shortlex


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-len", type=int, default=5, help="input length bound (default %(default)s)")
    ap.add_argument("--thresholds", type=int, nargs="+", default=[0, 1, 2, 3])
    ap.add_argument("-k", type=int, default=corpus.DEFAULT_K, help="visit bound (default %(default)s)")
    args = ap.parse_args()
    clean, failing, kinds = Counter(), Counter(), Counter()
    for name in corpus.BOUNDED:
        t = corpus.load(name)
        m = generate_monoid(t, args.k)
        for w in shortlex(t.alphabet.input_letters, args.max_len):
            for r in enumerate_runs(t, w, RunBudget(visit_bound=args.k))[0]:
                if find_inversion(r) is not None:
                    continue
                tree = build_factorization_tree(padded_letter_flows(r), m)
                for th in args.thresholds:
                    ret = build_retargeting(r, tree, th)
                    v = verify_retargeting(r, tree, ret, th, max_visits(r))
                    kinds.update((th, x.kind) for x in v)
                    if v or not is_order_preserving(ret.target_pair()):
                        failing[th] += 1
                    else:
                        clean[th] += 1
    for th in args.thresholds:
        ks = {k: c for (t_, k), c in sorted(kinds.items()) if t_ == th}
        print(f"T={th}: clean {clean[th]}, failing {failing[th]}, violations {ks or 'none'}")


if __name__ == "__main__":
    main()

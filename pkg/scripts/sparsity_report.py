#!/usr/bin/env python3
"""Bounded K-sparsity verdicts for the whole corpus, plus cross runs built from dense classes."""
import argparse

from resync import corpus
from resync.analysis import cross_width
from resync.sparsity import k_sparse_bounded_check, sparsity_cross_pair


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-k", type=int, default=1, help="sparsity bound (default %(default)s)")
    ap.add_argument("--max-len", type=int, default=4, help="input length bound (default %(default)s)")
    ap.add_argument("--cross", type=int, nargs="*", default=[1, 2, 3],
                    help="target widths for the cross construction (default %(default)s)")
    args = ap.parse_args()
    for name in corpus.names():
        t = corpus.load(name)
        v = k_sparse_bounded_check(t, args.k, args.max_len)
        line = f"{name:16} {v.verdict:20} checked {v.checked:4}"
        if v.witness is not None:
            line += f"  witness {v.witness!r}, class of {len(v.violating_class.productive)} productive"
            widths = []
            for n in args.cross:
                pair = sparsity_cross_pair(t, n, max_len=2 * n + 2)
                widths.append(None if pair is None else cross_width(pair)[0])
            line += f"  cross widths {dict(zip(args.cross, widths))}"
        print(line)


if __name__ == "__main__":
    main()

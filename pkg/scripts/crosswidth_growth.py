#!/usr/bin/env python3
"""Cross-width growth: the swap machine on a^n#b^n and pumped NO witnesses."""
import argparse

from resync import corpus
from resync.analysis import cross_width, decide_one_way_resynchronizable_bounded_visit, pump_witness
from resync.core import origin_graph
from resync.runner import RunBudget, enumerate_runs


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=6, help="largest n (default %(default)s)")
    ap.add_argument("-k", type=int, default=corpus.DEFAULT_K, help="visit bound (default %(default)s)")
    args = ap.parse_args()
    t2 = corpus.load("t2")
    print("t2 on a^n#b^n")
    for n in range(1, args.max_n + 1):
        w = "a" * n + "#" + "b" * n
        runs, _ = enumerate_runs(t2, w, RunBudget(visit_bound=args.k))
        widths = sorted({cross_width(origin_graph(r))[0] for r in runs})
        print(f"  n={n}: widths {widths}")
    print("pumped inversion witnesses")
    for name in corpus.BOUNDED:
        d = decide_one_way_resynchronizable_bounded_visit(corpus.load(name), args.k)
        if d.verdict != "NO":
            continue
        widths = [cross_width(origin_graph(pump_witness(d.witness, n)))[0]
                  for n in range(1, args.max_n + 1)]
        print(f"  {name:16} {widths}")


if __name__ == "__main__":
    main()

"""Command-line interface.

Exit codes: 0 for YES / clean reports, 1 for NO verdicts or violations,
2 for usage and input errors, 3 when a configured bound is exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from importlib.resources import files
from pathlib import Path

from .analysis import (DEFAULT_SEARCH_CAP, cross_width,
                       decide_one_way_resynchronizable_bounded_visit, is_order_preserving,
                       max_traversal, traversals)
from .core import Interval, SynchronizedPair, origin_graph
from .dot import flow_to_dot, juxtaposition_to_dot, tree_to_dot
from .errors import BoundExceeded, HasInversion, ResyncError
from .factorization import build_factorization_tree, build_retargeting, verify_retargeting
from .flows import DEFAULT_MONOID_CAP, Flow, PaddedRun, flow_with_witnesses, generate_monoid, padded_letter_flows
from .runner import RunBudget, enumerate_runs, occurrence_order_violations, pump_run
from .sparsity import NOT_SPARSE, k_sparse_bounded_check
from .textformat import parse_transducer

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_BOUND = 0, 1, 2, 3


class UsageError(Exception):
    pass


def load_schema(name: str) -> dict:
    """JSON schema shipped for the ``--json`` report of one subcommand (or ``pair``)."""
    return json.loads(files("resync").joinpath("schemas").joinpath(f"{name}.json").read_text(encoding="utf-8"))


def flow_json(f: Flow) -> dict:
    return {
        "bottom": f.bottom,
        "l": list(f.l_vertices),
        "r": list(f.r_vertices),
        "edges": [{"src": f"{e.src[0]}{e.src[1]}", "dst": f"{e.dst[0]}{e.dst[1]}",
                   "productive": e.productive} for e in f.edges],
    }


def tree_json(node) -> dict:
    return {"kind": node.kind, "interval": [node.lo, node.hi], "height": node.height,
            "children": [tree_json(c) for c in node.children]}


def _load(path: str):
    try:
        return parse_transducer(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _load_pairs(path: str) -> list:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc.msg})") from exc
    items = data if isinstance(data, list) else [data]
    try:
        return [SynchronizedPair.from_json(x) for x in items]
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: not a synchronized pair ({exc})") from exc


def _budget(args) -> RunBudget:
    return RunBudget(args.visit_bound, args.step_bound, args.run_cap)


def _runs(t, word: str, args):
    bad = set(word) - set(t.alphabet.input_letters)
    if bad:
        raise UsageError(f"letters {sorted(bad)} are not in the input alphabet")
    runs, truncated = enumerate_runs(t, word, _budget(args))
    return runs, truncated


def _pick_run(t, word, args):
    runs, _ = _runs(t, word, args)
    if not runs:
        return None
    if not 0 <= args.run_index < len(runs):
        raise UsageError(f"--run-index {args.run_index} but only {len(runs)} runs")
    return runs[args.run_index]


def _write_dot(args, text: str) -> None:
    if args.dot:
        Path(args.dot).write_text(text, encoding="utf-8")


def _emit(args, report: dict, lines: list) -> None:
    if args.json:
        print(json.dumps(report, ensure_ascii=False, indent=2))
    else:
        for line in lines:
            print(line)


# --------------------------------------------------------------------------
# subcommands


def cmd_run(args) -> int:
    t = _load(args.file)
    runs, truncated = _runs(t, args.word, args)
    items = []
    lines = []
    for k, r in enumerate(runs):
        p = origin_graph(r)
        items.append({"output": p.output, "origin": list(p.origin),
                      "transitions": [str(tr) for tr in r.transitions]})
        lines.append(f"run {k}: {p.output!r} origins {list(p.origin)}")
    if truncated:
        lines.append("(search truncated by the run budget)")
    if not runs:
        lines.append("no successful run")
    _emit(args, {"input": args.word, "runs": items, "truncated": truncated}, lines)
    return EXIT_OK if runs else EXIT_NO


def cmd_flows(args) -> int:
    t = _load(args.file)
    r = _pick_run(t, args.word, args)
    if r is None:
        _emit(args, {"error": "no successful run"}, ["no successful run"])
        return EXIT_NO
    f, _ = flow_with_witnesses(PaddedRun.of(r), Interval(args.lo, args.hi))
    _write_dot(args, flow_to_dot(f))
    _emit(args, {"input": args.word, "interval": [args.lo, args.hi], "flow": flow_json(f)}, [str(f)])
    return EXIT_OK


def cmd_monoid(args) -> int:
    t = _load(args.file)
    m = generate_monoid(t, args.k, args.cap)
    ok = len(m) <= m.size_bound
    _emit(args, {"size": len(m), "bound": str(m.size_bound), "within_bound": ok,
                 "idempotents": len(m.idempotents())},
          [f"monoid size {len(m)} (bound M = {m.size_bound})"])
    return EXIT_OK if ok else EXIT_NO


def cmd_decide(args) -> int:
    t = _load(args.file)
    d = decide_one_way_resynchronizable_bounded_visit(t, args.k, args.cap)
    lines = [d.verdict]
    if d.witness is not None:
        w = d.witness
        lines += [f"witness input {w.word!r}, loops {w.loop1} and {w.loop2}",
                  f"edges {w.edge1.ident()} and {w.edge2.ident()}"]
        _write_dot(args, juxtaposition_to_dot(list(w.quintuple), "witness"))
    _emit(args, d.to_json(), lines)
    return EXIT_OK if d.one_way else EXIT_NO


def cmd_crosswidth(args) -> int:
    results = []
    lines = []
    for p in _load_pairs(args.pairs):
        width, cross = cross_width(p)
        results.append({"width": width, "x1": sorted(cross.x1), "x2": sorted(cross.x2),
                        "order_preserving": is_order_preserving(p)})
        lines.append(str(width))
    _emit(args, {"results": results}, lines)
    return EXIT_OK


def cmd_traversal(args) -> int:
    src, tgt = _load_pairs(args.source), _load_pairs(args.target)
    if len(src) != 1 or len(tgt) != 1:
        raise UsageError("traversal expects one pair per file")
    tr = traversals(src[0], tgt[0])
    k = max_traversal(src[0], tgt[0])
    report = {"max_traversal": k,
              "left_to_right": {str(y): sorted(v) for y, v in sorted(tr.left_to_right.items())},
              "right_to_left": {str(y): sorted(v) for y, v in sorted(tr.right_to_left.items())}}
    _emit(args, report, [str(k)])
    return EXIT_OK


def cmd_pump(args) -> int:
    t = _load(args.file)
    r = _pick_run(t, args.word, args)
    if r is None:
        _emit(args, {"error": "no successful run"}, ["no successful run"])
        return EXIT_NO
    iv = Interval(args.lo, args.hi)
    pumped = pump_run(r, iv, args.n)
    p = origin_graph(pumped)
    problems = occurrence_order_violations(r, iv, args.n)
    _emit(args, {"pair": p.to_json(), "order_violations": problems},
          [f"{p.input!r} -> {p.output!r} origins {list(p.origin)}", *problems])
    return EXIT_NO if problems else EXIT_OK


def cmd_factorize(args) -> int:
    t = _load(args.file)
    r = _pick_run(t, args.word, args)
    if r is None:
        _emit(args, {"error": "no successful run"}, ["no successful run"])
        return EXIT_NO
    m = generate_monoid(t, args.k, args.cap)
    tree = build_factorization_tree(padded_letter_flows(r), m)
    _write_dot(args, tree_to_dot(tree))
    try:
        ret = build_retargeting(r, tree, args.threshold)
    except HasInversion as exc:
        _emit(args, {"tree": tree_json(tree), "error": str(exc)}, [f"tree height {tree.height}", str(exc)])
        return EXIT_NO
    violations = verify_retargeting(r, tree, ret, args.threshold, args.k)
    pair = ret.target_pair()
    report = {"tree": tree_json(tree), "retargeting": ret.to_json(),
              "violations": [str(v) for v in violations],
              "order_preserving": is_order_preserving(pair)}
    lines = [f"tree height {tree.height}", f"retargeted origins {list(pair.origin)}"]
    lines += [str(v) for v in violations] or ["no violations"]
    _emit(args, report, lines)
    return EXIT_NO if violations else EXIT_OK


def cmd_sparsity(args) -> int:
    t = _load(args.file)
    v = k_sparse_bounded_check(t, args.k, args.max_len)
    line = v.verdict if v.witness is None else f"{v.verdict} witness {v.witness!r}"
    _emit(args, v.to_json(), [line])
    return EXIT_NO if v.verdict == NOT_SPARSE else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--dot", metavar="PATH", help="write a DOT graph where applicable")
    runs = argparse.ArgumentParser(add_help=False)
    runs.add_argument("--visit-bound", type=int, default=3, help="max configurations per cut (default 3)")
    runs.add_argument("--step-bound", type=int, default=10_000, help="max run length (default 10000)")
    runs.add_argument("--run-cap", type=int, default=10_000, help="max runs enumerated (default 10000)")
    runs.add_argument("--run-index", type=int, default=0, help="which enumerated run to use (default 0)")
    mon = argparse.ArgumentParser(add_help=False)
    mon.add_argument("-k", type=int, default=3, help="visit bound K (default 3)")

    p = argparse.ArgumentParser(prog="resync", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("run", parents=[common, runs], help="enumerate successful runs")
    s.add_argument("file")
    s.add_argument("word")
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("flows", parents=[common, runs], help="flow of a run on [lo,hi)")
    s.add_argument("file")
    s.add_argument("word")
    s.add_argument("lo", type=int)
    s.add_argument("hi", type=int)
    s.set_defaults(func=cmd_flows)

    s = sub.add_parser("monoid", parents=[common, mon], help="generate the flow monoid")
    s.add_argument("file")
    s.add_argument("--cap", type=int, default=DEFAULT_MONOID_CAP, help=f"element cap (default {DEFAULT_MONOID_CAP})")
    s.set_defaults(func=cmd_monoid)

    s = sub.add_parser("decide-oneway", parents=[common, mon], help="one-way resynchronizability")
    s.add_argument("file")
    s.add_argument("--cap", type=int, default=DEFAULT_SEARCH_CAP, help=f"search cap (default {DEFAULT_SEARCH_CAP})")
    s.set_defaults(func=cmd_decide)

    s = sub.add_parser("crosswidth", parents=[common], help="cross-width of pairs in a JSON file")
    s.add_argument("pairs")
    s.set_defaults(func=cmd_crosswidth)

    s = sub.add_parser("traversal", parents=[common], help="traversal between two pairs")
    s.add_argument("source")
    s.add_argument("target")
    s.set_defaults(func=cmd_traversal)

    s = sub.add_parser("pump", parents=[common, runs], help="pump a loop of a run")
    s.add_argument("file")
    s.add_argument("word")
    s.add_argument("lo", type=int)
    s.add_argument("hi", type=int)
    s.add_argument("-n", type=int, default=2, help="number of copies (default 2)")
    s.set_defaults(func=cmd_pump)

    s = sub.add_parser("factorize", parents=[common, runs, mon], help="tree, retargeting and checks")
    s.add_argument("file")
    s.add_argument("word")
    s.add_argument("--threshold", type=int, default=1, help="largeness threshold T (default 1)")
    s.add_argument("--cap", type=int, default=DEFAULT_MONOID_CAP, help=f"monoid cap (default {DEFAULT_MONOID_CAP})")
    s.set_defaults(func=cmd_factorize)

    s = sub.add_parser("sparsity", parents=[common, mon], help="bounded K-sparsity sweep")
    s.add_argument("file")
    s.add_argument("--max-len", type=int, default=5, help="longest input checked (default 5)")
    s.set_defaults(func=cmd_sparsity)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BoundExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except (UsageError, ResyncError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Inversions, the one-way resynchronizability decision, and pair metrics."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .core import (LEFT_MARK, RIGHT_MARK, Configuration, Interval, Run, SynchronizedPair,
                   TwoWayTransducer)
from .errors import BoundExceeded, InvalidRun, MismatchedPair
from .flows import (Edge, Flow, PaddedRun, compose_all, edge_run_order,
                    extend_checked, flow_with_witnesses, identity_flow, is_accepting,
                    is_idempotent, is_virtual, letter_flows)
from .runner import pump_run

DEFAULT_SEARCH_CAP = 200_000


@dataclass(frozen=True)
class Inversion:
    """Loops ``loop1 < loop2`` whose productive straight edges run in reverse order."""

    loop1: Interval
    edge1: Edge
    loop2: Interval
    edge2: Edge
    run: Optional[Run] = field(default=None, compare=False, repr=False)

    def to_json(self) -> dict:
        return {"loop1": [self.loop1.lo, self.loop1.hi], "edge1": self.edge1.ident(),
                "loop2": [self.loop2.lo, self.loop2.hi], "edge2": self.edge2.ident()}


def _loop_edges(pr: PaddedRun, n: int):
    """Intervals over input positions whose flow is idempotent, with their
    productive straight edges and the first step of each witnessing subrun."""
    loops = []
    for lo in range(1, n + 1):
        for hi in range(lo + 1, n + 2):
            iv = Interval(lo, hi)
            f, wit = flow_with_witnesses(pr, iv)
            if not is_idempotent(f):
                continue
            edges = [(e, wit[e][0]) for e in f.straight_productive()]
            if edges:
                loops.append((iv, edges))
    return loops


def find_inversion(r: Run) -> Optional[Inversion]:
    if not r.successful:
        return None
    pr = PaddedRun.of(r)
    loops = _loop_edges(pr, len(r.input))
    for iv1, edges1 in loops:
        for iv2, edges2 in loops:
            if not iv1.precedes(iv2):
                continue
            for e1, s1 in edges1:
                for e2, s2 in edges2:
                    if s2 < s1:
                        return Inversion(iv1, e1, iv2, e2, r)
    return None


# --------------------------------------------------------------------------
# symbolic search


@dataclass
class SymbolicWitness:
    """A flow quintuple ``F1 E F2 E' F3`` realized on a concrete word."""

    f1: Flow
    e: Flow
    f2: Flow
    e2: Flow
    f3: Flow
    edge1: Edge
    edge2: Edge
    word: str
    loop1: Interval
    loop2: Interval
    run: Run = field(repr=False)

    @property
    def quintuple(self) -> tuple:
        return (self.f1, self.e, self.f2, self.e2, self.f3)

    @property
    def inversion(self) -> Inversion:
        return Inversion(self.loop1, self.edge1, self.loop2, self.edge2, self.run)

    def to_json(self) -> dict:
        names = ("F1", "E", "F2", "E'", "F3")
        return {
            "word": self.word,
            "loop1": [self.loop1.lo, self.loop1.hi],
            "loop2": [self.loop2.lo, self.loop2.hi],
            "edge1": self.edge1.ident(),
            "edge2": self.edge2.ident(),
            "flows": {k: str(f) for k, f in zip(names, self.quintuple)},
            "output": self.run.output,
        }


def _sigma_products(t: TwoWayTransducer, K: int, seeds: set, cap: int) -> dict:
    """Realizable products of Σ letter flows whose L side is one of ``seeds``.

    Maps each product to ``(prev, letter, letter_flow)``; ``prev`` is None
    for single letters.
    """
    sigma = sorted(t.alphabet.input_letters)
    parents: dict = {}
    queue: deque = deque()
    for lab in sorted(seeds):
        for a in sigma:
            for x in letter_flows(t, a, K, lab):
                if x not in parents:
                    parents[x] = (None, a, x)
                    queue.append(x)
    while queue:
        p = queue.popleft()
        for a in sigma:
            for x in letter_flows(t, a, K, p.r_vertices):
                y = extend_checked(p, x)
                if y is None or y.bottom or y in parents:
                    continue
                parents[y] = (p, a, x)
                if len(parents) > cap:
                    raise BoundExceeded("realizable Σ-products", cap)
                queue.append(y)
    return parents


def _unwind(parents: dict, f: Flow) -> list[tuple[str, Flow]]:
    out = []
    while True:
        prev, a, x = parents[f]
        out.append((a, x))
        if prev is None:
            return out[::-1]
        f = prev


def realize_run(t: TwoWayTransducer, letters: list[str], flows: list[Flow]) -> Run:
    """Turn a realizable juxtaposition of padded letter flows into a run."""
    order = edge_run_order(flows)
    trs = []
    q0 = None
    for k, e in order:
        f = flows[k]
        src, dst = f.label(e.src), f.label(e.dst)
        if is_virtual(src) or is_virtual(dst):
            if src.startswith(LEFT_MARK):
                q0 = dst
            continue
        cands = [tr for tr in t.outgoing(src, letters[k])
                 if tr.target == dst and tr.productive == e.productive]
        if not cands:
            raise InvalidRun(f"no transition realizes {e} on {letters[k]!r}")
        trs.append(cands[0])
    if q0 is None:
        raise InvalidRun("juxtaposition has no start vertex")
    word = "".join(letters[1:-1])
    return Run.from_transitions(t, word, Configuration(q0, 1), trs)


def has_inversion_symbolic(t: TwoWayTransducer, K: int,
                           cap: int = DEFAULT_SEARCH_CAP) -> tuple[bool, Optional[SymbolicWitness]]:
    """Search ``F1·E·F2·E'·F3`` accepting with e' (in E') used before e (in E).

    Prefix flows are grown letter by letter, checking at each step that the
    juxtaposition is realizable, so that every reachable flow is the flow of
    an actual run prefix.  The productive straight edge chosen in E is
    tagged ``A`` and the one in E' is tagged ``B``; composition concatenates
    tags along contracted paths, so an accepting product whose single edge
    carries ``BA`` witnesses the reversed order.
    """
    sigma = sorted(t.alphabet.input_letters)
    start_flows = letter_flows(t, LEFT_MARK, K)
    # phase 0: untagged prefixes
    pre: dict = {}
    queue: deque = deque()
    for x in start_flows:
        st = (0, x)
        if st not in pre:
            pre[st] = None
            queue.append(st)
    labels: set = set()
    while queue:
        st = queue.popleft()
        p = st[1]
        labels.add(p.r_vertices)
        for a in sigma:
            for x in letter_flows(t, a, K, p.r_vertices):
                y = extend_checked(p, x)
                if y is None or y.bottom:
                    continue
                nst = (0, y)
                if nst not in pre:
                    pre[nst] = (st, ("letter", a, x))
                    if len(pre) > cap:
                        raise BoundExceeded("prefix flows", cap)
                    queue.append(nst)
    sig = _sigma_products(t, K, labels, cap)
    loops: dict = {}
    for f in sig:
        if f.l_vertices == f.r_vertices and is_idempotent(f):
            edges = f.straight_productive()
            if edges:
                loops.setdefault(f.l_vertices, []).append((f, edges))

    parents = dict(pre)
    queue = deque(parents)
    while queue:
        st = queue.popleft()
        phase, p = st
        succ = []
        if phase == 2:
            for x in letter_flows(t, RIGHT_MARK, K, p.r_vertices):
                y = extend_checked(p, x)
                if y is not None and is_accepting(y) and y.edges[0].tag == "BA":
                    return True, _build_witness(t, parents, sig, st, ("letter", RIGHT_MARK, x))
        if phase >= 1:
            for a in sigma:
                for x in letter_flows(t, a, K, p.r_vertices):
                    succ.append((phase, ("letter", a, x), x))
        if phase <= 1:
            tag = "A" if phase == 0 else "B"
            for e_flow, edges in loops.get(p.r_vertices, []):
                for edge in edges:
                    succ.append((phase + 1, ("loop", e_flow, edge), e_flow.with_tag(edge, tag)))
        for nphase, step, x in succ:
            y = extend_checked(p, x)
            if y is None or y.bottom:
                continue
            nst = (nphase, y)
            if nst not in parents:
                parents[nst] = (st, step)
                if len(parents) > cap:
                    raise BoundExceeded("tagged prefix flows", cap)
                queue.append(nst)
    return False, None


def _build_witness(t, parents, sig, last_state, last_step) -> SymbolicWitness:
    steps = [last_step]
    st = last_state
    while parents[st] is not None:
        st, step = parents[st]
        steps.append(step)
    first_flow = st[1]
    steps.reverse()
    letters = [LEFT_MARK]
    flows = [first_flow]
    pieces = [[first_flow]]          # F1, E, F2, E', F3 as letter-flow lists
    spans = []
    chosen = []
    for step in steps:
        if step[0] == "letter":
            _, a, x = step
            letters.append(a)
            flows.append(x)
            pieces[-1].append(x)
        else:
            _, e_flow, edge = step
            chosen.append(edge)
            lo = len(letters)
            seq = _unwind(sig, e_flow)
            for a, x in seq:
                letters.append(a)
                flows.append(x)
            spans.append(Interval(lo, len(letters)))
            pieces.append([x for _, x in seq])
            pieces.append([])
    run = realize_run(t, letters, flows)
    e_flow = compose_all(pieces[1])
    f2 = compose_all(pieces[2]) if pieces[2] else identity_flow(e_flow.r_vertices, t.is_right)
    quint = [compose_all(pieces[0]), e_flow, f2,
             compose_all(pieces[3]), compose_all(pieces[4])]
    return SymbolicWitness(*quint, edge1=chosen[0], edge2=chosen[1], word="".join(letters[1:-1]),
                           loop1=spans[0], loop2=spans[1], run=run)


@dataclass
class Decision:
    verdict: str                      # "YES" or "NO"
    witness: Optional[SymbolicWitness] = None

    @property
    def one_way(self) -> bool:
        return self.verdict == "YES"

    def to_json(self) -> dict:
        return {"verdict": self.verdict,
                "witness": self.witness.to_json() if self.witness else None}


def decide_one_way_resynchronizable_bounded_visit(t: TwoWayTransducer, K: int,
                                                  cap: int = DEFAULT_SEARCH_CAP) -> Decision:
    found, witness = has_inversion_symbolic(t, K, cap)
    return Decision("NO", witness) if found else Decision("YES")


def pump_witness(w: SymbolicWitness, n: int) -> Run:
    """Repeat both loops of the witness ``n`` times (right loop first)."""
    r = pump_run(w.run, w.loop2, n)
    return pump_run(r, w.loop1, n)


# --------------------------------------------------------------------------
# pair metrics


@dataclass(frozen=True)
class Cross:
    x1: frozenset
    x2: frozenset
    width: int


def _origins(s: SynchronizedPair, xs) -> set:
    return {s.orig(x) for x in xs}


def cross_width(s: SynchronizedPair) -> tuple[int, Cross]:
    """Maximal cross width, by sweeping a split point and an origin threshold.

    Any cross (X1, X2) sits inside the cross obtained from split
    ``max X1`` and threshold ``max orig(X2)``, so the sweep is exact.
    """
    m, n = len(s.output), len(s.input)
    best = Cross(frozenset(), frozenset(), 0)
    for split in range(1, m):
        for theta in range(1, n):
            x1 = [x for x in range(1, split + 1) if s.orig(x) > theta]
            x2 = [x for x in range(split + 1, m + 1) if s.orig(x) <= theta]
            w = min(len(_origins(s, x1)), len(_origins(s, x2)))
            if w > best.width:
                best = Cross(frozenset(x1), frozenset(x2), w)
    return best.width, best


def is_cross(s: SynchronizedPair, x1, x2) -> bool:
    return all(a < b and s.orig(a) > s.orig(b) for a in x1 for b in x2)


def cross_width_naive(s: SynchronizedPair) -> int:
    """Enumerates every cross; exponential, for cross-checking small pairs."""
    m = len(s.output)
    best = 0
    positions = range(1, m + 1)
    for k in range(1, m + 1):
        for x1 in combinations(positions, k):
            lo_orig = min(s.orig(x) for x in x1)
            cands = [y for y in range(max(x1) + 1, m + 1) if s.orig(y) < lo_orig]
            for j in range(1, len(cands) + 1):
                for x2 in combinations(cands, j):
                    if is_cross(s, x1, x2):
                        best = max(best, min(len(_origins(s, x1)), len(_origins(s, x2))))
    return best


def is_order_preserving(s: SynchronizedPair) -> bool:
    return all(a <= b for a, b in zip(s.origin, s.origin[1:]))


@dataclass(frozen=True)
class Traversals:
    left_to_right: dict
    right_to_left: dict

    def by_position(self) -> dict:
        keys = set(self.left_to_right) | set(self.right_to_left)
        return {y: frozenset(self.left_to_right.get(y, set()) | self.right_to_left.get(y, set()))
                for y in sorted(keys)}


def _check_same(source: SynchronizedPair, target: SynchronizedPair) -> None:
    if source.input != target.input or source.output != target.output:
        raise MismatchedPair("pairs must share input and output words")


def traversals(source: SynchronizedPair, target: SynchronizedPair) -> Traversals:
    _check_same(source, target)
    l2r: dict = {}
    r2l: dict = {}
    for y, z in zip(source.origin, target.origin):
        if z > y:
            for yp in range(y, z):
                l2r.setdefault(yp, set()).add(y)
        elif z < y:
            for yp in range(z + 1, y + 1):
                r2l.setdefault(yp, set()).add(y)
    return Traversals(l2r, r2l)


def max_traversal(source: SynchronizedPair, target: SynchronizedPair) -> int:
    return max((len(v) for v in traversals(source, target).by_position().values()), default=0)

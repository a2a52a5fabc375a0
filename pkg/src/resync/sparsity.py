"""Vertical loops on a fixed input: tagged-transition classes, K-sparsity and normalization."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Optional

import networkx as nx

from .core import (Configuration, Run, SynchronizedPair, Transition, TwoWayTransducer,
                   letter_at, origin_graph, step)
from .errors import NotSuccessful

SPARSE_UP_TO_BOUND = "SPARSE_UP_TO_BOUND"
NOT_SPARSE = "NOT_SPARSE"


@dataclass(frozen=True, order=True)
class TaggedTransition:
    transition: Transition
    position: int               # padded read position

    @property
    def productive(self) -> bool:
        return self.transition.productive

    def __str__(self):
        return f"({self.transition})@{self.position}"


@dataclass(frozen=True)
class EquivalenceClass:
    members: tuple

    @property
    def productive(self) -> tuple:
        return tuple(m for m in self.members if m.productive)

    @property
    def anchor(self) -> int:
        return min(m.position for m in self.members)

    def to_json(self) -> dict:
        return {"members": [str(m) for m in self.members], "anchor": self.anchor,
                "productive": len(self.productive)}


def configuration_graph(t: TwoWayTransducer, w: str) -> nx.DiGraph:
    """Configurations of ``t`` on ``w`` lying on some successful run.

    Each edge carries its tagged transitions under the ``tagged`` attribute.
    """
    n = len(w)
    g = nx.DiGraph()
    starts = [Configuration(q, 1) for q in sorted(t.initial & t.right_reading)]
    queue = deque(starts)
    g.add_nodes_from(starts)
    while queue:
        c = queue.popleft()
        read = c.cut if t.is_right(c.state) else c.cut - 1
        if not 0 <= read <= n + 1:
            continue
        for tr in t.outgoing(c.state, letter_at(w, read)):
            nxt = step(t, w, c, tr)
            if nxt is None:
                continue
            d = nxt[1]
            if d not in g:
                queue.append(d)
                g.add_node(d)
            if not g.has_edge(c, d):
                g.add_edge(c, d, tagged=[])
            g.edges[c, d]["tagged"].append(TaggedTransition(tr, nxt[0]))
    finals = [c for c in g if c.state in t.final and c.cut == n + 1]
    useful = set(finals).union(*(nx.ancestors(g, f) for f in finals)) if finals else set()
    trimmed = g.subgraph(useful).copy()
    trimmed.graph["starts"] = [s for s in starts if s in useful]
    trimmed.graph["finals"] = finals
    return trimmed


@dataclass
class TaggedEquivalence:
    input: str
    classes: list
    graph: nx.DiGraph = field(repr=False, compare=False)
    _source: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def members(self) -> list:
        return sorted(m for c in self.classes for m in c.members)

    def class_of(self, tt: TaggedTransition) -> EquivalenceClass:
        return next(c for c in self.classes if tt in c.members)

    def le(self, a: TaggedTransition, b: TaggedTransition) -> bool:
        """``a`` precedes ``b``: some run segment starts with ``a`` and ends with ``b``."""
        if a == b:
            return True
        _, a_dst = self._source[a]
        b_src, _ = self._source[b]
        return a_dst == b_src or nx.has_path(self.graph, a_dst, b_src)

    def equivalent(self, a: TaggedTransition, b: TaggedTransition) -> bool:
        return self.le(a, b) and self.le(b, a)

    def endpoints(self, tt: TaggedTransition) -> tuple:
        return self._source[tt]

    def to_json(self) -> dict:
        return {"input": self.input, "classes": [c.to_json() for c in self.classes]}


def tagged_equivalence(t: TwoWayTransducer, w: str) -> TaggedEquivalence:
    g = configuration_graph(t, w)
    scc_of = {}
    for k, comp in enumerate(nx.strongly_connected_components(g)):
        for c in comp:
            scc_of[c] = k
    by_scc: dict = {}
    singles = []
    source = {}
    for c, d, data in g.edges(data=True):
        for tt in data["tagged"]:
            source[tt] = (c, d)
            if scc_of[c] == scc_of[d]:
                by_scc.setdefault(scc_of[c], []).append(tt)
            else:
                singles.append(tt)
    classes = [EquivalenceClass(tuple(sorted(ms))) for ms in by_scc.values()]
    classes += [EquivalenceClass((tt,)) for tt in singles]
    classes.sort(key=lambda c: (c.anchor, c.members))
    return TaggedEquivalence(w, classes, g, source)


def k_sparse_on_input(t: TwoWayTransducer, w: str, K: int) -> tuple:
    """``(True, None)`` if every class has at most K productive members, else ``(False, class)``."""
    eq = tagged_equivalence(t, w)
    for c in eq.classes:
        if len(c.productive) > K:
            return False, c
    return True, None


def shortlex(letters, max_len: int):
    letters = sorted(letters)
    for n in range(max_len + 1):
        for tup in product(letters, repeat=n):
            yield "".join(tup)


@dataclass(frozen=True)
class SparsityVerdict:
    verdict: str
    witness: Optional[str] = None
    violating_class: Optional[EquivalenceClass] = None
    checked: int = 0

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "witness": self.witness, "checked": self.checked,
                "class": self.violating_class.to_json() if self.violating_class else None}


def k_sparse_bounded_check(t: TwoWayTransducer, K: int, max_len: int) -> SparsityVerdict:
    """Sweep all inputs up to ``max_len`` in shortlex order; the first violation is the witness."""
    checked = 0
    for w in shortlex(t.alphabet.input_letters, max_len):
        checked += 1
        ok, cls = k_sparse_on_input(t, w, K)
        if not ok:
            return SparsityVerdict(NOT_SPARSE, w, cls, checked)
    return SparsityVerdict(SPARSE_UP_TO_BOUND, checked=checked)


def normalize_with_loops(r: Run) -> tuple:
    """Normalized run and the excised ``(i, j)`` config-index ranges, in run order."""
    if not r.successful:
        raise NotSuccessful("normalization needs a successful run")
    last = {c: k for k, c in enumerate(r.configs)}
    trs = []
    loops = []
    i = 0
    while True:
        j = last[r.configs[i]]
        if j > i:
            loops.append((i, j))
        i = j
        if i == len(r.configs) - 1:
            break
        trs.append(r.transitions[i])
        i += 1
    return Run.from_transitions(r.transducer, r.input, r.configs[0], trs), loops


def normalize_run(r: Run) -> Run:
    """Excise every maximal vertical loop, scanning left to right."""
    return normalize_with_loops(r)[0]


def _bfs_path(g: nx.DiGraph, sources, goal) -> tuple:
    """``(source, tagged transitions)`` of a shortest path from any source to a node satisfying ``goal``."""
    prev = {s: None for s in sources}
    queue = deque(sources)
    while queue:
        c = queue.popleft()
        if goal(c):
            path = []
            while prev[c] is not None:
                p, tt = prev[c]
                path.append(tt)
                c = p
            return c, path[::-1]
        for d in g.successors(c):
            if d not in prev:
                prev[d] = (c, g.edges[c, d]["tagged"][0])
                queue.append(d)
    raise ValueError("goal unreachable in the trimmed configuration graph")


def sparsity_cross_run(t: TwoWayTransducer, n: int, max_len: int = 8) -> Optional[Run]:
    """A run with a cross of width at least ``n`` built from one vertical-loop class.

    Finds an input on which some class has productive members at ``2n``
    distinct input positions, then tours the class: first the ``n``
    rightmost of these positions, then the ``n`` leftmost.
    """
    for w in shortlex(t.alphabet.input_letters, max_len):
        if len(w) < 2 * n:
            continue
        eq = tagged_equivalence(t, w)
        for cls in eq.classes:
            by_pos: dict = {}
            for m in cls.productive:
                if 1 <= m.position <= len(w):
                    by_pos.setdefault(m.position, m)
            if len(by_pos) < 2 * n:
                continue
            ps = sorted(by_pos)
            order = [by_pos[p] for p in ps[-n:]] + [by_pos[p] for p in ps[:n]]
            return _tour(t, w, eq, order)
    return None


def _tour(t: TwoWayTransducer, w: str, eq: TaggedEquivalence, targets: list) -> Run:
    g = eq.graph
    trs = []
    here = list(g.graph["starts"])
    start = None
    for tt in targets:
        src, dst = eq.endpoints(tt)
        origin, path = _bfs_path(g, here, lambda c: c == src)
        start = start or origin
        trs.extend(p.transition for p in path)
        trs.append(tt.transition)
        here = [dst]
    finals = set(g.graph["finals"])
    trs.extend(p.transition for p in _bfs_path(g, here, lambda c: c in finals)[1])
    return Run.from_transitions(t, w, start, trs)


def sparsity_cross_pair(t: TwoWayTransducer, n: int, max_len: int = 8) -> Optional[SynchronizedPair]:
    r = sparsity_cross_run(t, n, max_len)
    return None if r is None else origin_graph(r)

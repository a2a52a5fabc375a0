"""Flows: finite summaries of how a run crosses an interval of its input.

Coordinates
-----------
Flows live on *padded* words ``⊢ w ⊣``.  Padded position ``p`` is the
interval between cuts ``p`` and ``p+1``; position 0 is ``⊢`` and position
``n+1`` is ``⊣``.  Run configurations only ever sit on cuts ``1..n+1``.  To
make the whole padded word summarizable, a successful run is extended with
a virtual start vertex on cut 0 (label ``⊢q0``) and a virtual exit vertex on
cut ``n+2`` (label ``f⊣``).  The virtual edges are non-productive.  Because
the virtual labels never coincide with state names, products such as
``⊣·a`` or ``a·⊢`` evaluate to ⊥ without special-casing.

Vertices are ``(side, index)`` pairs with side ``"L"`` or ``"R"``; indices
follow occurrence order in the run.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

from .core import LEFT_MARK, RIGHT_MARK, Interval, Run, TwoWayTransducer
from .errors import BoundExceeded, InvalidInterval, NotTotallyOrdered

L, R = "L", "R"
DEFAULT_MONOID_CAP = 200_000


def start_label(q: str) -> str:
    return LEFT_MARK + q


def exit_label(q: str) -> str:
    return q + RIGHT_MARK


def is_virtual(label: str) -> bool:
    return label.startswith(LEFT_MARK) or label.endswith(RIGHT_MARK)


class Edge(NamedTuple):
    src: tuple
    dst: tuple
    productive: bool
    tag: str = ""

    @property
    def kind(self) -> str:
        return self.src[0] + self.dst[0]

    @property
    def straight(self) -> bool:
        return self.src[0] != self.dst[0]

    def ident(self) -> str:
        return f"{self.src[0]}{self.src[1]}->{self.dst[0]}{self.dst[1]}"

    def __str__(self):
        mark = "*" if self.productive else ""
        tag = f"[{self.tag}]" if self.tag else ""
        return f"{self.ident()}{mark}{tag}"


@dataclass(frozen=True)
class Flow:
    l_vertices: tuple = ()
    r_vertices: tuple = ()
    edges: tuple = ()
    bottom: bool = False

    def __post_init__(self):
        object.__setattr__(self, "l_vertices", tuple(self.l_vertices))
        object.__setattr__(self, "r_vertices", tuple(self.r_vertices))
        object.__setattr__(self, "edges", tuple(sorted(self.edges)))

    @property
    def width(self) -> int:
        return max(len(self.l_vertices), len(self.r_vertices))

    def label(self, vertex: tuple) -> str:
        side, i = vertex
        return (self.l_vertices if side == L else self.r_vertices)[i]

    def edge_from(self, vertex: tuple):
        for e in self.edges:
            if e.src == vertex:
                return e
        return None

    def straight_productive(self) -> list[Edge]:
        return [e for e in self.edges if e.straight and e.productive]

    def untagged(self) -> "Flow":
        if not any(e.tag for e in self.edges):
            return self
        return replace(self, edges=tuple(e._replace(tag="") for e in self.edges))

    def with_tag(self, edge: Edge, tag: str) -> "Flow":
        if edge not in self.edges:
            raise ValueError(f"{edge} is not an edge of this flow")
        return replace(self, edges=tuple(e._replace(tag=tag) if e == edge else e
                                         for e in self.edges))

    @property
    def is_sigma(self) -> bool:
        """True when no virtual endmarker vertex occurs (a product of Σ letters)."""
        return not self.bottom and not any(
            is_virtual(x) for x in self.l_vertices + self.r_vertices)

    @property
    def is_prefix(self) -> bool:
        return not self.bottom and len(self.l_vertices) == 1 and self.l_vertices[0].startswith(LEFT_MARK)

    @property
    def is_suffix(self) -> bool:
        return not self.bottom and len(self.r_vertices) == 1 and self.r_vertices[0].endswith(RIGHT_MARK)

    def __str__(self):
        if self.bottom:
            return "⊥"
        es = " ".join(str(e) for e in self.edges)
        return f"L{list(self.l_vertices)} R{list(self.r_vertices)} {{{es}}}"


BOTTOM = Flow(bottom=True)
EMPTY = Flow()


def check_flow(f: Flow, is_right=None) -> list[str]:
    """Structural invariants; ``is_right`` (label -> bool) enables direction checks."""
    if f.bottom:
        return []
    problems = []
    ends: dict = {}
    for e in f.edges:
        for v in (e.src, e.dst):
            side, i = v
            size = len(f.l_vertices) if side == L else len(f.r_vertices)
            if not 0 <= i < size:
                problems.append(f"edge {e} names a missing vertex {v}")
            ends[v] = ends.get(v, 0) + 1
        if e.kind == "LL" and not e.src[1] < e.dst[1]:
            problems.append(f"LL edge {e} goes backwards")
        if e.kind == "RR" and not e.src[1] < e.dst[1]:
            problems.append(f"RR edge {e} goes backwards")
    for side, labels in ((L, f.l_vertices), (R, f.r_vertices)):
        for i in range(len(labels)):
            if ends.get((side, i), 0) != 1:
                problems.append(f"vertex {side}{i} is the endpoint of {ends.get((side, i), 0)} edges")
    if is_right is not None:
        for e in f.edges:
            src_right = _label_right(f.label(e.src), is_right)
            if (e.src[0] == L) != src_right:
                problems.append(f"edge {e} starts at a vertex of the wrong reading direction")
            dst_right = _label_right(f.label(e.dst), is_right)
            if (e.dst[0] == R) != dst_right:
                problems.append(f"edge {e} ends at a vertex of the wrong reading direction")
    return problems


def _label_right(label: str, is_right) -> bool:
    if label.startswith(LEFT_MARK) or label.endswith(RIGHT_MARK):
        return True
    return is_right(label)


@lru_cache(maxsize=1 << 18)
def compose(f: Flow, g: Flow) -> Flow:
    """Glue the R side of ``f`` to the L side of ``g`` and contract paths.

    Returns ⊥ on a label mismatch or when gluing leaves a cycle among the
    middle vertices (no run can realize such a product).
    """
    if f.bottom or g.bottom or f.r_vertices != g.l_vertices:
        return BOTTOM
    nxt: dict = {}
    for e in f.edges:
        s = ("M", e.src[1]) if e.src[0] == R else e.src
        d = ("M", e.dst[1]) if e.dst[0] == R else e.dst
        if s in nxt:
            return BOTTOM
        nxt[s] = (d, e.productive, e.tag)
    for e in g.edges:
        s = ("M", e.src[1]) if e.src[0] == L else e.src
        d = ("M", e.dst[1]) if e.dst[0] == L else e.dst
        if s in nxt:
            return BOTTOM
        nxt[s] = (d, e.productive, e.tag)
    middle = len(f.r_vertices)
    seen_middle = 0
    out = []
    for s, first in nxt.items():
        if s[0] == "M":
            continue
        d, prod, tag = first
        while d[0] == "M":
            seen_middle += 1
            if d not in nxt or seen_middle > middle:
                return BOTTOM
            d, p2, t2 = nxt[d]
            prod = prod or p2
            tag += t2
        out.append(Edge(s, d, prod, tag))
    if seen_middle != middle:
        return BOTTOM
    return Flow(f.l_vertices, g.r_vertices, tuple(out))


def compose_all(flows: Iterable[Flow]) -> Flow:
    it = iter(flows)
    acc = next(it)
    for f in it:
        acc = compose(acc, f)
    return acc


def is_idempotent(f: Flow) -> bool:
    return not f.bottom and compose(f, f) == f


def is_accepting(f: Flow) -> bool:
    """A whole-word flow: one edge from a start vertex to an exit vertex."""
    return (f.is_prefix and f.is_suffix and len(f.edges) == 1
            and f.edges[0].src == (L, 0) and f.edges[0].dst == (R, 0))


def identity_flow(labels: Sequence[str], is_right) -> Flow:
    """Flow of an empty interval whose cut carries ``labels`` in occurrence order."""
    edges = []
    for i, q in enumerate(labels):
        if _label_right(q, is_right):
            edges.append(Edge((L, i), (R, i), False))
        else:
            edges.append(Edge((R, i), (L, i), False))
    return Flow(tuple(labels), tuple(labels), tuple(edges))


def edge_run_order(flows: Sequence[Flow]) -> list[tuple[int, Edge]]:
    """Order in which a run consistent with the juxtaposed flows uses their edges.

    Boundary cuts are kept apart (group ``g`` sits between flow ``g-1`` and
    flow ``g``).  The walk starts at the first vertex of group 0.  Arriving
    at a vertex of an outer group means the run leaves the juxtaposed
    interval; it comes back at the next vertex of that group.  Arriving at
    an inner vertex continues with the edge of the neighbouring flow.  The
    walk must consume every edge, visit each group in index order, and stop
    at the last vertex of the last group.
    """
    if not flows:
        return []
    if any(f.bottom for f in flows):
        raise NotTotallyOrdered("⊥ in juxtaposition")
    m = len(flows)
    groups = [flows[0].l_vertices]
    for a, b in zip(flows, flows[1:]):
        if a.r_vertices != b.l_vertices:
            raise NotTotallyOrdered("adjacent flows have different boundary labels")
        groups.append(a.r_vertices)
    groups.append(flows[-1].r_vertices)
    total = sum(len(f.edges) for f in flows)
    if total == 0 and not any(groups):
        return []
    out_edge: dict = {}
    for k, f in enumerate(flows):
        for e in f.edges:
            s = (k if e.src[0] == L else k + 1, e.src[1])
            d = (k if e.dst[0] == L else k + 1, e.dst[1])
            if s in out_edge:
                raise NotTotallyOrdered(f"two edges leave vertex {s}")
            out_edge[s] = (k, e, d)
    expected = [0] * (m + 1)

    def visit(v):
        g, i = v
        if expected[g] != i:
            raise NotTotallyOrdered(f"group {g} visited out of order at vertex {i}")
        expected[g] += 1

    if not groups[0]:
        raise NotTotallyOrdered("no vertex to start from")
    order: list = []
    v = (0, 0)
    visit(v)
    while True:
        if v not in out_edge:
            raise NotTotallyOrdered(f"walk stuck at vertex {v}")
        k, e, d = out_edge.pop(v)
        order.append((k, e))
        visit(d)
        g, i = d
        if g == 0 or g == m:
            if g == m and i == len(groups[m]) - 1:
                break
            if i + 1 >= len(groups[g]):
                raise NotTotallyOrdered(f"walk leaves group {g} after its last vertex")
            v = (g, i + 1)
            visit(v)
        else:
            v = d
    if len(order) != total:
        raise NotTotallyOrdered(f"walk used {len(order)} of {total} edges")
    for g, labels in enumerate(groups):
        if expected[g] != len(labels):
            raise NotTotallyOrdered(f"group {g} not fully visited")
    return order


def realizable(flows: Sequence[Flow]) -> bool:
    try:
        edge_run_order(flows)
        return True
    except NotTotallyOrdered:
        return False


# --------------------------------------------------------------------------
# flows of concrete runs


@dataclass(frozen=True)
class PaddedRun:
    """A successful run extended by its virtual start and exit steps."""

    run: Run
    vertices: tuple          # (label, cut) per configuration, cuts in 0..n+2
    reads: tuple             # padded read position per step
    outputs: tuple           # output word per step
    transitions: tuple       # transition per step; None for virtual steps

    @classmethod
    def of(cls, r: Run) -> "PaddedRun":
        n = len(r.input)
        verts = [(c.state, c.cut) for c in r.configs]
        reads = list(r.read_positions)
        outs = [tr.output for tr in r.transitions]
        trs = list(r.transitions)
        if r.successful:
            verts = [(start_label(r.configs[0].state), 0)] + verts + [(exit_label(r.configs[-1].state), n + 2)]
            reads = [0] + reads + [n + 1]
            outs = [""] + outs + [""]
            trs = [None] + trs + [None]
        return cls(r, tuple(verts), tuple(reads), tuple(outs), tuple(trs))

    @property
    def cut_range(self) -> tuple[int, int]:
        n = len(self.run.input)
        return (0, n + 2) if self.run.successful else (1, n + 1)

    def is_right(self, label: str) -> bool:
        return _label_right(label, self.run.transducer.is_right)


def flow_with_witnesses(r: Run | PaddedRun, iv: Interval) -> tuple[Flow, dict]:
    """Flow of ``r`` on padded interval ``iv`` plus, per edge, the padded step range.

    The witness of an edge is ``(a, b)``: the subrun goes from padded
    configuration ``a`` to ``b`` (steps ``a .. b-1``).
    """
    pr = r if isinstance(r, PaddedRun) else PaddedRun.of(r)
    lo_min, hi_max = pr.cut_range
    if not (lo_min <= iv.lo <= iv.hi <= hi_max):
        raise InvalidInterval(f"{iv} outside cut range [{lo_min},{hi_max}]")
    occ_l = [k for k, (_, c) in enumerate(pr.vertices) if c == iv.lo]
    occ_r = [k for k, (_, c) in enumerate(pr.vertices) if c == iv.hi]
    idx_l = {k: i for i, k in enumerate(occ_l)}
    idx_r = {k: j for j, k in enumerate(occ_r)}
    lv = tuple(pr.vertices[k][0] for k in occ_l)
    rv = tuple(pr.vertices[k][0] for k in occ_r)
    edges = []
    wit = {}
    if iv.lo == iv.hi:
        for i, k in enumerate(occ_l):
            e = (Edge((L, i), (R, i), False) if pr.is_right(lv[i])
                 else Edge((R, i), (L, i), False))
            edges.append(e)
            wit[e] = (k, k)
        return Flow(lv, rv, tuple(edges)), wit
    inside = [iv.lo <= p < iv.hi for p in pr.reads]
    k = 0
    steps = len(pr.reads)
    while k < steps:
        if not inside[k]:
            k += 1
            continue
        a = k
        prod = False
        while k < steps and inside[k]:
            prod = prod or bool(pr.outputs[k])
            k += 1
        b = k
        if {pr.vertices[a][1], pr.vertices[b][1]} - {iv.lo, iv.hi}:
            raise InvalidInterval(f"subrun {a}..{b} of {iv} does not start and end on its cuts")
        src = (L, idx_l[a]) if pr.vertices[a][1] == iv.lo else (R, idx_r[a])
        dst = (L, idx_l[b]) if pr.vertices[b][1] == iv.lo else (R, idx_r[b])
        e = Edge(src, dst, prod)
        edges.append(e)
        wit[e] = (a, b)
    return Flow(lv, rv, tuple(edges)), wit


def flow_of(r: Run, iv: Interval) -> Flow:
    return flow_with_witnesses(r, iv)[0]


def padded_letter_flows(r: Run) -> list[Flow]:
    """Flows of ``r`` on each padded position 0..n+1 (a successful run)."""
    pr = PaddedRun.of(r)
    return [flow_with_witnesses(pr, Interval(p, p + 1))[0] for p in range(len(r.input) + 2)]


# --------------------------------------------------------------------------
# letter flows


class UnsupportedMachine(ValueError):
    """Raised for machines outside what the flow pipeline handles."""


def check_supported(t: TwoWayTransducer) -> None:
    left_finals = sorted(t.final & t.left_reading)
    if left_finals:
        raise UnsupportedMachine(
            f"left-reading final states {left_finals} are not supported by the flow pipeline")


def letter_flows(t: TwoWayTransducer, letter: str, width: int,
                 left_labels: tuple | None = None) -> tuple[Flow, ...]:
    """All realizable single-letter flows with at most ``width`` vertices per side.

    Candidates are produced by simulating the boundary walk of
    :func:`edge_run_order`, so every result is realizable on its own.  With
    ``left_labels`` the L side is forced to that label sequence.
    """
    return _letter_flows_cached(t, letter, width, left_labels)


@lru_cache(maxsize=1 << 16)
def _letter_flows_cached(t, letter, width, left_labels):
    check_supported(t)
    found: dict = {}
    rights = sorted(t.right_reading)
    lefts = sorted(t.left_reading)
    is_right = t.is_right

    def emit(lv, rv, es):
        if left_labels is not None and tuple(lv) != left_labels:
            return
        f = Flow(tuple(lv), tuple(rv), tuple(es))
        found.setdefault(f, None)

    def may_add_l(lv, q):
        if len(lv) >= width:
            return False
        if left_labels is not None:
            return len(lv) < len(left_labels) and left_labels[len(lv)] == q
        return True

    def at_r(lv, rv, es):
        emit(lv, rv, es)
        if letter == RIGHT_MARK or len(rv) >= width:
            return
        for p in lefts:
            j = len(rv)
            for tr in t.outgoing(p, letter):
                if is_right(tr.target):
                    if len(rv) + 1 >= width:
                        continue
                    at_r(lv, rv + [p, tr.target], es + [Edge((R, j), (R, j + 1), tr.productive)])
                elif letter != LEFT_MARK and may_add_l(lv, tr.target):
                    need_l(lv + [tr.target], rv + [p],
                           es + [Edge((R, j), (L, len(lv)), tr.productive)])

    def need_l(lv, rv, es):
        cands = rights
        if left_labels is not None:
            if len(lv) >= len(left_labels):
                return
            cands = [left_labels[len(lv)]] if left_labels[len(lv)] in t.right_reading else []
        if len(lv) >= width:
            return
        for q in cands:
            i = len(lv)
            if letter == RIGHT_MARK and q in t.final and not rv:
                emit(lv + [q], [exit_label(q)], es + [Edge((L, i), (R, 0), False)])
            for tr in t.outgoing(q, letter):
                if is_right(tr.target):
                    if letter == RIGHT_MARK:
                        continue
                    at_r(lv + [q], rv + [tr.target], es + [Edge((L, i), (R, len(rv)), tr.productive)])
                elif may_add_l(lv + [q], tr.target):
                    need_l(lv + [q, tr.target], rv, es + [Edge((L, i), (L, i + 1), tr.productive)])

    if letter == LEFT_MARK:
        for q0 in sorted(t.initial & t.right_reading):
            lab = start_label(q0)
            if left_labels is not None and left_labels != (lab,):
                continue
            at_r([lab], [q0], [Edge((L, 0), (R, 0), False)])
    else:
        need_l([], [], [])
    return tuple(found)


def padded_alphabet(t: TwoWayTransducer) -> list[str]:
    return [LEFT_MARK] + sorted(t.alphabet.input_letters) + [RIGHT_MARK]


def extend_checked(p: Flow, a: Flow):
    """``p·a`` if the juxtaposition ``p, a`` is realizable, else None."""
    try:
        edge_run_order((p, a))
    except NotTotallyOrdered:
        return None
    return compose(p, a)


# --------------------------------------------------------------------------
# the monoid


def monoid_size_bound(num_states: int, K: int) -> int:
    return (num_states * (2 * K + 1)) ** (2 * K) + 1


@dataclass
class FlowMonoid:
    transducer: TwoWayTransducer
    K: int
    generators: dict
    elements: tuple
    parents: dict = field(repr=False)

    @property
    def size_bound(self) -> int:
        return monoid_size_bound(len(self.transducer.states), self.K)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, f: Flow) -> bool:
        return f in self.parents

    def product(self, f: Flow, g: Flow) -> Flow:
        return compose(f, g)

    def factor(self, f: Flow) -> list[tuple[str, Flow]]:
        """A sequence of (letter, letter flow) whose product is ``f``."""
        out = []
        while f in self.parents and self.parents[f] is not None:
            prev, letter, gen = self.parents[f]
            out.append((letter, gen))
            if prev is None:
                break
            f = prev
        return out[::-1]

    @property
    def sigma_elements(self) -> list[Flow]:
        return [f for f in self.elements if f.is_sigma]

    def idempotents(self) -> list[Flow]:
        return [f for f in self.elements if is_idempotent(f)]


def generate_monoid(t: TwoWayTransducer, K: int, cap: int = DEFAULT_MONOID_CAP) -> FlowMonoid:
    """Closure of the letter flows (endmarkers included) under composition."""
    gens = {a: letter_flows(t, a, K) for a in padded_alphabet(t)}
    parents: dict = {BOTTOM: None, EMPTY: None}
    order = [BOTTOM, EMPTY]
    queue: deque = deque()
    for a, fs in gens.items():
        for f in fs:
            if f not in parents:
                parents[f] = (None, a, f)
                order.append(f)
                queue.append(f)
    all_gens = [(a, f) for a, fs in gens.items() for f in fs]
    while queue:
        x = queue.popleft()
        for a, g in all_gens:
            y = compose(x, g)
            if y not in parents:
                parents[y] = (x, a, g)
                order.append(y)
                if len(order) > cap:
                    raise BoundExceeded("monoid elements", cap)
                queue.append(y)
    return FlowMonoid(t, K, gens, tuple(order), parents)

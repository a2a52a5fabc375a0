"""Factorization trees over flows, dominant output intervals, and origin retargeting.

Output positions are 1-based.  Origins used internally are *padded* read
positions (0 for ``⊢``, ``n+1`` for ``⊣``) so that they line up with the
padded positions covered by tree nodes; they are clamped into ``[1, n]``
only when the final synchronized pair is produced.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .analysis import find_inversion, is_order_preserving
from .core import Interval, Run, SynchronizedPair, clamp_origin
from .errors import BoundExceeded, HasInversion, InvalidInterval, TreeMismatch
from .flows import Flow, PaddedRun, compose, flow_with_witnesses, is_idempotent, padded_letter_flows
from .runner import max_visits

OutInterval = Optional[tuple]   # inclusive (first, last) output positions, None when empty


@dataclass(frozen=True)
class Constants:
    K: int
    num_states: int

    @property
    def M(self) -> int:
        return (self.num_states * (2 * self.K + 1)) ** (2 * self.K) + 1

    @property
    def C(self) -> int:
        return self.M ** (2 * self.K)

    @property
    def H(self) -> int:
        return 3 * self.M


# --------------------------------------------------------------------------
# trees


@dataclass
class Node:
    label: Flow
    lo: int
    hi: int
    children: tuple = ()
    kind: str = "leaf"          # leaf | binary | idempotent
    height: int = 0

    @property
    def interval(self) -> Interval:
        return Interval(self.lo, self.hi)

    def nodes(self):
        yield self
        for c in self.children:
            yield from c.nodes()

    def leaves(self):
        if not self.children:
            yield self
        for c in self.children:
            yield from c.leaves()


def build_factorization_tree(seq: list[Flow], monoid=None, offset: int = 0) -> Node:
    """Bottom-up construction: runs of three or more equal idempotent labels
    become one idempotent node, everything else is paired left to right."""
    if not seq:
        raise ValueError("cannot factorize an empty sequence")
    level = [Node(f, offset + i, offset + i + 1) for i, f in enumerate(seq)]

    def admit(f: Flow) -> Flow:
        if monoid is not None and f not in monoid:
            raise BoundExceeded("factorization products outside the monoid", len(monoid))
        return f

    for f in seq:
        admit(f)
    while len(level) > 1:
        nxt = []
        i = 0
        while i < len(level):
            lab = level[i].label
            j = i
            if is_idempotent(lab):
                while j + 1 < len(level) and level[j + 1].label == lab:
                    j += 1
            if j - i + 1 >= 3:
                kids = tuple(level[i:j + 1])
                nxt.append(Node(lab, kids[0].lo, kids[-1].hi, kids, "idempotent",
                                1 + max(k.height for k in kids)))
                i = j + 1
            elif i + 1 < len(level):
                a, b = level[i], level[i + 1]
                nxt.append(Node(admit(compose(a.label, b.label)), a.lo, b.hi, (a, b), "binary",
                                1 + max(a.height, b.height)))
                i += 2
            else:
                nxt.append(level[i])
                i += 1
        level = nxt
    return level[0]


def check_tree(tree: Node, seq: list[Flow], monoid=None) -> list[str]:
    problems = []
    leaves = list(tree.leaves())
    if [lf.label for lf in leaves] != list(seq):
        problems.append("yield differs from the input sequence")
    for node in tree.nodes():
        if not node.children:
            if node.hi != node.lo + 1 or node.height != 0:
                problems.append(f"leaf {node.interval} malformed")
            continue
        kids = node.children
        if node.height != 1 + max(k.height for k in kids):
            problems.append(f"node {node.interval} has wrong height")
        if kids[0].lo != node.lo or kids[-1].hi != node.hi or any(
                a.hi != b.lo for a, b in zip(kids, kids[1:])):
            problems.append(f"node {node.interval}: children do not tile it")
        prod = kids[0].label
        for k in kids[1:]:
            prod = compose(prod, k.label)
        if prod != node.label:
            problems.append(f"node {node.interval}: label is not the product of its children")
        if len(kids) > 2:
            if any(k.label != node.label for k in kids) or not is_idempotent(node.label):
                problems.append(f"node {node.interval}: children not one idempotent label")
        if monoid is not None and node.label not in monoid:
            problems.append(f"node {node.interval}: label outside the monoid")
    if monoid is not None and tree.height > 3 * len(monoid):
        problems.append(f"height {tree.height} exceeds 3*|monoid| = {3 * len(monoid)}")
    return problems


def level_partition(root: Node, level: int) -> list[Node]:
    """For each leaf, its highest ancestor-or-self of height at most ``level``."""
    if root.height <= level:
        return [root]
    out = []
    for c in root.children:
        out.extend(level_partition(c, level))
    return out


# --------------------------------------------------------------------------
# output blocks


def padded_origins(r: Run) -> list[int]:
    """Unclamped read position of every output position (index x-1)."""
    out = []
    for tr, j in zip(r.transitions, r.read_positions):
        out.extend([j] * len(tr.output))
    return out


def _check_iv(r: Run, i: Interval) -> None:
    if not 0 <= i.lo <= i.hi <= len(r.input) + 2:
        raise InvalidInterval(f"{i} outside padded positions of {r.input!r}")


def _blocks(porig: list[int], i: Interval) -> list[tuple]:
    blocks = []
    start = None
    for x, y in enumerate(porig, start=1):
        if y in i:
            if start is None:
                start = x
        elif start is not None:
            blocks.append((start, x - 1))
            start = None
    if start is not None:
        blocks.append((start, len(porig)))
    return blocks


def output_blocks(r: Run, i: Interval) -> list[tuple]:
    """Maximal output intervals (inclusive, 1-based) whose origins all lie in ``i``."""
    _check_iv(r, i)
    return _blocks(padded_origins(r), i)


def _distinct(porig, first, last) -> int:
    return len(set(porig[first - 1:last]))


def _bout(porig: list[int], i: Interval, threshold: int) -> OutInterval:
    large = [b for b in _blocks(porig, i) if _distinct(porig, *b) > threshold]
    if not large:
        return None
    return (large[0][0], large[-1][1])


def dominant_output_interval(r: Run, i: Interval, threshold: int) -> OutInterval:
    """Smallest output interval covering every block of ``i`` with more than
    ``threshold`` distinct origins; None if there is no such block."""
    _check_iv(r, i)
    return _bout(padded_origins(r), i, threshold)


def _positions(b: OutInterval) -> range:
    return range(b[0], b[1] + 1) if b else range(0)


# --------------------------------------------------------------------------
# retargeting


@dataclass
class Retargeting:
    sources: tuple                  # padded source origin per output position
    levels: list                    # level -> {output position: padded target}
    degenerate: bool
    input: str
    output: str

    @property
    def top(self) -> dict:
        return self.levels[-1]

    def target_pair(self) -> SynchronizedPair:
        n = len(self.input)
        origin = tuple(clamp_origin(self.top[x], n) for x in range(1, len(self.output) + 1))
        return SynchronizedPair(self.input, self.output, origin)

    def source_pair(self) -> SynchronizedPair:
        n = len(self.input)
        return SynchronizedPair(self.input, self.output,
                                tuple(clamp_origin(y, n) for y in self.sources))

    def to_json(self) -> dict:
        n = len(self.input)
        return {
            "degenerate": self.degenerate,
            "positions": [{"position": x, "source": clamp_origin(self.sources[x - 1], n),
                           "target": clamp_origin(self.top[x], n)}
                          for x in sorted(self.top)],
            "levels": [sorted(lv) for lv in self.levels],
        }


def _check_tree_matches(r: Run, tree: Node) -> None:
    n = len(r.input)
    if tree.lo != 0 or tree.hi != n + 2:
        raise TreeMismatch(f"tree spans [{tree.lo},{tree.hi}), run needs [0,{n + 2})")
    if [lf.label for lf in tree.leaves()] != padded_letter_flows(r):
        raise TreeMismatch("tree leaves are not the run's letter flows")


def build_retargeting(r: Run, tree: Node, threshold: int) -> Retargeting:
    inv = find_inversion(r)
    if inv is not None:
        raise HasInversion(f"run has an inversion on {inv.loop1} and {inv.loop2}")
    _check_tree_matches(r, tree)
    porig = padded_origins(r)
    bout = {id(p): _bout(porig, p.interval, threshold) for p in tree.nodes()}
    targets: dict = {}

    def single(p: Node, z: int) -> dict:
        return {x: z for x in _positions(bout[id(p)])}

    def visit(p: Node) -> dict:
        for c in p.children:
            visit(c)
        B = bout[id(p)]
        if not p.children:
            res = {x: porig[x - 1] for x in _positions(B)}
        elif p.kind == "binary":
            res = _binary(p, B, bout, targets)
        else:
            res = _idempotent(p, B, bout, targets, porig)
        targets[id(p)] = res
        return res

    visit(tree)
    levels = []
    for lv in range(tree.height + 1):
        m: dict = {}
        for p in level_partition(tree, lv):
            m.update(targets[id(p)])
        levels.append(m)
    degenerate = bout[id(tree)] is None
    if degenerate:
        levels[-1] = {x: 1 for x in range(1, len(porig) + 1)}
    return Retargeting(tuple(porig), levels, degenerate, r.input, r.output)


def _ordered(blocks: list) -> bool:
    return all(a[1] < b[0] for a, b in zip(blocks, blocks[1:]))


def _binary(p: Node, B: OutInterval, bout: dict, targets: dict) -> dict:
    p1, p2 = p.children
    b1, b2 = bout[id(p1)], bout[id(p2)]
    if b1 and b2 and not _ordered([b1, b2]):
        # children's dominant intervals overlap; only possible below the true
        # threshold.  One shared target keeps the order.
        return {x: p1.interval.last for x in _positions(B)}
    res = {}
    t1, t2 = targets[id(p1)], targets[id(p2)]
    for x in _positions(B):
        if x in t1:
            res[x] = t1[x]
        elif x in t2:
            res[x] = t2[x]
        elif b1 and x < b1[0]:
            res[x] = p1.interval.first
        elif b2 and x > b2[1]:
            res[x] = p2.interval.last
        else:
            res[x] = p1.interval.last
    return res


def _idempotent(p: Node, B: OutInterval, bout: dict, targets: dict, porig) -> dict:
    kids = [(c, bout[id(c)]) for c in p.children if bout[id(c)]]
    blocks = [b for _, b in kids]
    if not _ordered(blocks):
        return {x: p.interval.last for x in _positions(B)}
    res = {}
    for x in _positions(B):
        hit = next((c for c, b in kids if b[0] <= x <= b[1]), None)
        if hit is not None:
            res[x] = targets[id(hit)][x]
            continue
        before = [c for c, b in kids if b[1] < x]
        after = [c for c, b in kids if b[0] > x]
        if not before:
            res[x] = p.interval.first
        elif not after:
            res[x] = p.interval.last
        else:
            ca, cb = before[-1], after[0]
            y = porig[x - 1]
            if y in ca.interval:
                res[x] = ca.interval.last
            elif y in cb.interval:
                res[x] = cb.interval.first
            else:
                res[x] = ca.interval.last
    return res


@dataclass(frozen=True)
class RetargetingViolation:
    level: int
    kind: str
    detail: str

    def __str__(self):
        return f"level {self.level} ({self.kind}): {self.detail}"


def verify_retargeting(r: Run, tree: Node, ret: Retargeting, threshold: int,
                       K: Optional[int] = None) -> list[RetargetingViolation]:
    """Check the per-level invariants; an empty list means the retargeting is sound.

    (a) defined positions are exactly the dominant intervals of the level's
    nodes; (b) source and target stay inside one node interval; (c) targets
    inside one node interval keep output order; (d) at most
    ``level * 4 * K * threshold`` distinct moved sources share a target.
    """
    K = max_visits(r) if K is None else K
    porig = list(ret.sources)
    out: list = []
    top = len(ret.levels) - 1
    for lv, m in enumerate(ret.levels):
        parts = level_partition(tree, lv)
        degenerate_top = lv == top and ret.degenerate
        expected = set()
        for p in parts:
            expected.update(_positions(_bout(porig, p.interval, threshold)))
        if not degenerate_top and set(m) != expected:
            out.append(RetargetingViolation(lv, "a", f"defined {sorted(m)} but dominant intervals give {sorted(expected)}"))
        for x, z in sorted(m.items()):
            y = porig[x - 1]
            if not any(y in p.interval and z in p.interval for p in parts):
                out.append(RetargetingViolation(lv, "b", f"position {x}: {y} -> {z} leaves its interval"))
        for p in parts:
            inside = [(x, z) for x, z in sorted(m.items()) if z in p.interval]
            for (x, z), (x2, z2) in zip(inside, inside[1:]):
                if z > z2:
                    out.append(RetargetingViolation(lv, "c", f"positions {x}<{x2} get targets {z}>{z2} in {p.interval}"))
        bound = lv * 4 * K * threshold
        moved: dict = {}
        for x, z in m.items():
            y = porig[x - 1]
            if y != z:
                moved.setdefault(z, set()).add(y)
        for z, ys in sorted(moved.items()):
            if len(ys) > bound:
                out.append(RetargetingViolation(lv, "d", f"{len(ys)} sources moved to {z}, bound {bound}"))
        if lv > 0:
            lost = set(ret.levels[lv - 1]) - set(m)
            if lost:
                out.append(RetargetingViolation(lv, "monotone", f"positions {sorted(lost)} undefined again"))
    if set(ret.top) != set(range(1, len(porig) + 1)):
        out.append(RetargetingViolation(top, "total", "top level is not total"))
    elif not is_order_preserving(ret.target_pair()):
        out.append(RetargetingViolation(top, "order", "final pair is not order-preserving"))
    return out


def retarget_run(r: Run, monoid, threshold: int):
    """Convenience: tree, retargeting and verification report for one run."""
    tree = build_factorization_tree(padded_letter_flows(r), monoid)
    ret = build_retargeting(r, tree, threshold)
    return tree, ret, verify_retargeting(r, tree, ret, threshold)


# --------------------------------------------------------------------------
# lemma checks


@dataclass
class LemmaReport:
    counterexamples: dict = field(default_factory=lambda: {k: [] for k in LEMMAS})
    checked: dict = field(default_factory=lambda: {k: 0 for k in LEMMAS})

    @property
    def ok(self) -> bool:
        return not any(self.counterexamples.values())


LEMMAS = ("4.2", "4.3", "4.4", "4.5")


def _intervals(n: int):
    for lo in range(1, n + 1):
        for hi in range(lo + 1, n + 2):
            yield Interval(lo, hi)


def _compositions(lo: int, hi: int):
    """All ways to cut [lo,hi) into at least two non-empty consecutive pieces."""
    inner = list(range(lo + 1, hi))
    for k in range(1, len(inner) + 1):
        for cuts in combinations(inner, k):
            pts = [lo, *cuts, hi]
            yield [Interval(a, b) for a, b in zip(pts, pts[1:])]


def check_lemmas(r: Run, threshold: int, K: Optional[int] = None,
                 lemmas=LEMMAS) -> LemmaReport:
    """Instantiate the large/small lemmas on every interval choice of ``r``,
    with ``threshold`` in place of the constant C."""
    if any(x != "4.2" for x in lemmas) and find_inversion(r) is not None:
        raise HasInversion("lemmas 4.3-4.5 assume an inversion-free run")
    K = max_visits(r) if K is None else K
    rep = LemmaReport()
    n = len(r.input)
    pr = PaddedRun.of(r)
    porig = padded_origins(r)
    step_out: list = []
    pos = 1
    for o in pr.outputs:
        step_out.append(range(pos, pos + len(o)))
        pos += len(o)
    ivs = list(_intervals(n))
    flows = {iv: flow_with_witnesses(pr, iv) for iv in ivs}

    def out_of(iv):
        return {x for x, y in enumerate(porig, start=1) if y in iv}

    def norig(xs):
        return len({porig[x - 1] for x in xs})

    if "4.2" in lemmas:
        loop_out = {}
        for iv, (f, wit) in flows.items():
            if is_idempotent(f):
                xs = set()
                for e in f.straight_productive():
                    a, b = wit[e]
                    for k in range(a, b):
                        xs.update(step_out[k])
                loop_out[iv] = xs
        for iv in ivs:
            g = set().union(*[xs for j, xs in loop_out.items() if iv.lo <= j.lo and j.hi <= iv.hi])
            rest = out_of(iv) - g
            rep.checked["4.2"] += 1
            if norig(rest) > threshold:
                rep.counterexamples["4.2"].append(
                    f"{iv}: outputs {sorted(rest)} avoid every loop edge yet have {norig(rest)} origins")
    blocks = {iv: [b for b in _blocks(porig, iv) if _distinct(porig, *b) > threshold] for iv in ivs}
    if "4.3" in lemmas:
        for i1 in ivs:
            for i2 in ivs:
                if not i1.precedes(i2):
                    continue
                for b1 in blocks[i1]:
                    for b2 in blocks[i2]:
                        rep.checked["4.3"] += 1
                        if not b1[1] < b2[0]:
                            rep.counterexamples["4.3"].append(f"{i1} block {b1} vs {i2} block {b2}")
    bouts = {iv: _bout(porig, iv, threshold) for iv in ivs}
    if "4.4" in lemmas:
        for iv in ivs:
            for mid in range(iv.lo + 1, iv.hi):
                i1, i2 = Interval(iv.lo, mid), Interval(mid, iv.hi)
                rest = set(_positions(bouts[iv])) - set(_positions(bouts[i1])) - set(_positions(bouts[i2]))
                rep.checked["4.4"] += 1
                if norig(rest) > 4 * K * threshold:
                    rep.counterexamples["4.4"].append(
                        f"{i1}.{i2}: {norig(rest)} origins outside the children's intervals")
    if "4.5" in lemmas:
        for iv in ivs:
            f = flows[iv][0]
            if not is_idempotent(f):
                continue
            for pieces in _compositions(iv.lo, iv.hi):
                if any(flows[p][0] != f for p in pieces):
                    continue
                rep.checked["4.5"] += 1
                if not _idem_decomposes(porig, bouts[iv], [bouts[p] for p in pieces], pieces,
                                        2 * K * threshold):
                    rep.counterexamples["4.5"].append(
                        f"{iv} split as {[str(p) for p in pieces]} has no valid decomposition")
    return rep


def _idem_decomposes(porig, B: OutInterval, child_bouts: list, pieces: list, bound: int) -> bool:
    """Is ``B = B_1 J_1 B_2 ... J_{n-1} B_n`` with each gap J_k small and
    originating in ``I_k ∪ I_{k+1}``?"""
    if B is None:
        return all(b is None for b in child_bouts)
    start, end = B

    def gap_ok(k, a, b):
        xs = range(a, b + 1)
        if len({porig[x - 1] for x in xs}) > bound:
            return False
        return all(porig[x - 1] in pieces[k] or porig[x - 1] in pieces[k + 1] for x in xs)

    n = len(pieces)
    frontier = {start}              # next uncovered output position
    for k in range(n):
        bk = child_bouts[k]
        if bk is not None:
            frontier = {bk[1] + 1} if bk[0] in frontier else set()
        if not frontier:
            return False
        if k == n - 1:
            break
        nxt_b = child_bouts[k + 1]
        new = set()
        for p in frontier:
            ends = [nxt_b[0] - 1] if nxt_b is not None else range(p - 1, end + 1)
            for q in ends:
                if q >= p - 1 and (q < p or gap_ok(k, p, q)):
                    new.add(q + 1)
        frontier = new
    return end + 1 in frontier

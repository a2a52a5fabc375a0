"""Run enumeration under budgets, visit checks, and loop pumping."""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass

from .core import (LEFT_MARK, RIGHT_MARK, Configuration, Interval, Run, TwoWayTransducer,
                   letter_at, step)
from .errors import BoundExceeded, InvalidInterval, NotALoop, NotSuccessful
from .flows import (PaddedRun, edge_run_order, extend_checked, flow_with_witnesses, is_accepting,
                    is_idempotent, letter_flows)


@dataclass(frozen=True)
class RunBudget:
    visit_bound: int = 3
    step_bound: int = 10_000
    run_cap: int = 10_000

    def __post_init__(self):
        for name in ("visit_bound", "step_bound", "run_cap"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")


class _CapReached(Exception):
    pass


def enumerate_runs(t: TwoWayTransducer, w: str, b: RunBudget = RunBudget()) -> tuple[list[Run], bool]:
    """Successful runs on ``w`` within the budget, and whether a cap cut the search short.

    Depth-first search; a (configuration, visit profile) pair from which no
    successful run was found is remembered and skipped afterwards.
    """
    n = len(w)
    counts = [0] * (n + 2)
    path: list = []
    found_paths: list = []
    dead: set = set()
    truncations = 0

    def dfs(conf: Configuration) -> bool:
        nonlocal truncations
        key = (conf, tuple(counts))
        if key in dead:
            return False
        before = truncations
        found = False
        if conf.state in t.final and conf.cut == n + 1:
            found_paths.append(tuple(path))
            found = True
            if len(found_paths) >= b.run_cap:
                truncations += 1
                raise _CapReached
        if len(path) >= b.step_bound:
            truncations += 1
            return found
        read = conf.cut if t.is_right(conf.state) else conf.cut - 1
        if 0 <= read <= n + 1:
            for tr in t.outgoing(conf.state, letter_at(w, read)):
                nxt = step(t, w, conf, tr)
                if nxt is None:
                    continue
                c2 = nxt[1]
                if counts[c2.cut] >= b.visit_bound:
                    continue
                counts[c2.cut] += 1
                path.append(tr)
                if dfs(c2):
                    found = True
                path.pop()
                counts[c2.cut] -= 1
        if not found and truncations == before:
            dead.add(key)
        return found

    try:
        for q0 in sorted(t.initial & t.right_reading):
            counts[1] = 1
            dfs(Configuration(q0, 1))
            counts[1] = 0
    except _CapReached:
        pass
    # the start of each path is recoverable from its first transition
    runs = []
    for trs in found_paths:
        q0 = trs[0].source if trs else _empty_run_start(t, w)
        runs.append(Run.from_transitions(t, w, Configuration(q0, 1), trs))
    return runs, truncations > 0


def _empty_run_start(t: TwoWayTransducer, w: str) -> str:
    # a zero-step run exists only when an initial state is final and w is empty
    return sorted(q for q in t.initial & t.final if t.is_right(q))[0]


def visit_profile(r: Run) -> Counter:
    return Counter(c.cut for c in r.configs)


def max_visits(r: Run) -> int:
    return max(visit_profile(r).values(), default=0)


def is_k_visit(r: Run, k: int) -> bool:
    return max_visits(r) <= k


def check_all_runs_k_visit(t: TwoWayTransducer, k: int, cap: int = 100_000) -> bool:
    """Decide whether every successful run of ``t`` (on any input) is k-visit.

    Explores prefix flows of width at most ``k + |Q|`` with a flag recording
    whether some cut already carries more than ``k`` configurations.  The
    width suffices: a run exceeding ``k`` somewhere can be rebuilt from a
    repetition-free run by inserting simple vertical cycles one at a time,
    each adding at most ``|Q|`` configurations per cut, so a run exceeding
    ``k`` by at most ``|Q|`` exists.
    """
    width = k + len(t.states)
    sigma = sorted(t.alphabet.input_letters)
    seen: set = set()
    queue: deque = deque()
    for a in letter_flows(t, LEFT_MARK, width):
        st = (a, len(a.r_vertices) > k)
        if st not in seen:
            seen.add(st)
            queue.append(st)
    while queue:
        p, flag = queue.popleft()
        if flag:
            for x in letter_flows(t, RIGHT_MARK, width, p.r_vertices):
                y = extend_checked(p, x)
                if y is not None and is_accepting(y):
                    return False
        for a in sigma:
            for x in letter_flows(t, a, width, p.r_vertices):
                y = extend_checked(p, x)
                if y is None or y.bottom:
                    continue
                st = (y, flag or len(y.r_vertices) > k)
                if st not in seen:
                    seen.add(st)
                    if len(seen) > cap:
                        raise BoundExceeded("k-visit summary states", cap)
                    queue.append(st)
    return True


def _pump_parts(r: Run, i: Interval):
    if not r.successful:
        raise NotSuccessful("pumping needs a successful run")
    n = len(r.input)
    if not 1 <= i.lo <= i.hi <= n + 1:
        raise InvalidInterval(f"{i} is not inside the input cuts [1,{n + 1}]")
    pr = PaddedRun.of(r)
    parts = [flow_with_witnesses(pr, iv) for iv in
             (Interval(0, i.lo), i, Interval(i.hi, n + 2))]
    if not is_idempotent(parts[1][0]):
        raise NotALoop(f"flow on {i} is not idempotent")
    return pr, parts


def pump_with_order(r: Run, i: Interval, n: int):
    """Pumped run plus the juxtaposition walk ``[(piece, edge), ...]`` that built it.

    Piece 0 is the part left of ``i``, pieces ``1..n`` are the copies of the
    loop and piece ``n+1`` is the part right of it.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    pr, ((f, wf), (e, we), (g, wg)) = _pump_parts(r, i)
    juxt = [f] + [e] * n + [g]
    order = edge_run_order(juxt)
    trs = []
    for k, edge in order:
        wit = wf if k == 0 else wg if k == n + 1 else we
        a, b = wit[edge]
        trs.extend(x for x in pr.transitions[a:b] if x is not None)
    w = r.input
    word = w[: i.lo - 1] + w[i.lo - 1: i.hi - 1] * n + w[i.hi - 1:]
    run = Run.from_transitions(r.transducer, word, r.configs[0], trs)
    return run, order


def pump_run(r: Run, i: Interval, n: int) -> Run:
    """The run on the input with the factor under loop ``i`` repeated ``n`` times."""
    return pump_with_order(r, i, n)[0]


def occurrence_order_violations(r: Run, i: Interval, n: int) -> list[str]:
    """Compare the run order of outside edges and copies of straight loop edges.

    For each edge ``f`` outside the loop and each straight edge ``e`` of the
    loop flow, every copy of ``e`` in the pumped run must sit on the same
    side of ``f`` as ``e`` does in ``r``.
    """
    _, ((fl, _), (el, _), (gl, _)) = _pump_parts(r, i)
    base = edge_run_order([fl, el, gl])
    pos0 = {(k, e): idx for idx, (k, e) in enumerate(base)}
    _, order = pump_with_order(r, i, n)
    problems = []
    outside = [(k, e) for (k, e) in base if k != 1]
    straight = [e for e in el.edges if e.straight]
    for fk, f in outside:
        pk = fk if fk == 0 else n + 1
        pos_f = order.index((pk, f))
        for e in straight:
            before = pos0[(fk, f)] < pos0[(1, e)]
            for c in range(1, n + 1):
                if (pos_f < order.index((c, e))) != before:
                    problems.append(f"edge {f} vs copy {c} of {e}: order changed")
    return problems

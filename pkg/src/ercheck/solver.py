"""First-fail branch and bound over start-time bounds.

Propagation at each node: precedences and Time-Table filtering to a joint
fixpoint, then (optionally) one energetic checker per resource used as a
pure consistency test. Branching picks the unfixed activity with the
smallest start domain (lowest index on ties) and splits ``s = s_min`` versus
``s >= s_min + 1``.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .checkers import get_checker
from .model import Activity, CheckResult, CuspInstance, RcpspInstance
from .timetable import Wipeout, filter_bounds

__all__ = [
    "Config",
    "parse_config",
    "CONFIGS",
    "SearchState",
    "SearchStats",
    "SolveResult",
    "precedence_filter",
    "propagate",
    "branch_first_fail",
    "solve_decision",
    "minimize_makespan",
    "schedule_violations",
]

LOG = logging.getLogger(__name__)

CONFIGS = ("tt", "tt+sweep", "tt+baptiste", "tt+cubic", "tt+brute",
           "sweep", "baptiste", "cubic", "brute")


@dataclass(frozen=True)
class Config:
    """Propagation setup. ``checker`` is one of brute/cubic/baptiste/sweep or None."""

    timetable: bool = True
    checker: Optional[str] = None

    @property
    def name(self) -> str:
        parts = (["tt"] if self.timetable else []) + ([self.checker] if self.checker else [])
        return "+".join(parts) or "none"


def parse_config(text: str) -> Config:
    tt = False
    checker = None
    for part in text.lower().split("+"):
        part = part.strip()
        if part == "tt":
            tt = True
        elif part == "none":
            continue
        else:
            get_checker(part)
            if checker is not None:
                raise ValueError(f"config {text!r} names two checkers")
            checker = part
    return Config(tt, checker)


class SearchState:
    """Start bounds with an undo trail."""

    def __init__(self, s_min: Sequence[int], s_max: Sequence[int]) -> None:
        self.s_min = list(s_min)
        self.s_max = list(s_max)
        self.trail: list[tuple[int, int, int]] = []
        self.depth = 0

    def mark(self) -> int:
        return len(self.trail)

    def set(self, a: int, lo: int, hi: int) -> None:
        if lo != self.s_min[a] or hi != self.s_max[a]:
            self.trail.append((a, self.s_min[a], self.s_max[a]))
            self.s_min[a] = lo
            self.s_max[a] = hi

    def undo(self, mark: int) -> None:
        trail = self.trail
        while len(trail) > mark:
            a, lo, hi = trail.pop()
            self.s_min[a] = lo
            self.s_max[a] = hi

    def snapshot(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return tuple(self.s_min), tuple(self.s_max)

    def commit(self, s_min: Sequence[int], s_max: Sequence[int]) -> None:
        """Record every difference between the current bounds and the given ones."""
        for a in range(len(s_min)):
            if s_min[a] != self.s_min[a] or s_max[a] != self.s_max[a]:
                self.set(a, s_min[a], s_max[a])

    def unfixed(self) -> list[int]:
        return [a for a in range(len(self.s_min)) if self.s_min[a] < self.s_max[a]]


@dataclass
class SearchStats:
    nodes: int = 0
    fails: int = 0
    solutions: int = 0
    wall_time: float = 0.0
    check_time: float = 0.0
    proved_optimal: bool = False
    budget_exhausted: bool = False
    intervals_examined: int = 0

    @property
    def time_per_node(self) -> float:
        """Microseconds per node."""
        return self.wall_time * 1e6 / self.nodes if self.nodes else 0.0

    @property
    def check_time_per_node(self) -> float:
        return self.check_time * 1e6 / self.nodes if self.nodes else 0.0


@dataclass
class SolveResult:
    status: str  # "sat", "unsat", "unknown", "optimal", "feasible"
    starts: Optional[list[int]]
    stats: SearchStats = field(default_factory=SearchStats)
    makespan: Optional[int] = None


def precedence_filter(rcpsp: RcpspInstance, s_min: list[int], s_max: list[int],
                      order: Optional[Sequence[int]] = None) -> bool:
    """Bound propagation along precedences in place; True if anything moved.

    ``order`` is a topological order (computed when omitted). One forward
    pass and one backward pass reach the fixpoint for precedences alone.
    """
    if not rcpsp.precedences:
        return False
    p = rcpsp.durations
    if order is None:
        order = topological_order(rcpsp.n, rcpsp.precedences)
    succ: list[list[int]] = [[] for _ in range(rcpsp.n)]
    pred: list[list[int]] = [[] for _ in range(rcpsp.n)]
    for i, j in rcpsp.precedences:
        succ[i].append(j)
        pred[j].append(i)
    changed = False
    for a in order:
        for b in pred[a]:
            if s_min[b] + p[b] > s_min[a]:
                s_min[a] = s_min[b] + p[b]
                changed = True
        if s_min[a] > s_max[a]:
            raise Wipeout(a, "precedences push past the latest start")
    for a in reversed(order):
        for b in succ[a]:
            if s_max[b] - p[a] < s_max[a]:
                s_max[a] = s_max[b] - p[a]
                changed = True
        if s_min[a] > s_max[a]:
            raise Wipeout(a, "precedences pull before the earliest start")
    return changed


def topological_order(n: int, edges: Sequence[tuple[int, int]]) -> list[int]:
    indeg = [0] * n
    succ: list[list[int]] = [[] for _ in range(n)]
    for i, j in edges:
        succ[i].append(j)
        indeg[j] += 1
    ready = [a for a in range(n) if indeg[a] == 0]
    order = []
    while ready:
        a = ready.pop()
        order.append(a)
        for b in succ[a]:
            indeg[b] -= 1
            if indeg[b] == 0:
                ready.append(b)
    if len(order) != n:
        raise ValueError("precedence graph has a cycle")
    return order


class _Propagator:
    def __init__(self, rcpsp: RcpspInstance, config: Config) -> None:
        self.rcpsp = rcpsp
        self.config = config
        self.p = rcpsp.durations
        self.heights = [[a.h for a in r.activities] for r in rcpsp.resources]
        self.order = topological_order(rcpsp.n, rcpsp.precedences)
        self.checker = get_checker(config.checker) if config.checker else None
        self.check_time = 0.0
        self.intervals_examined = 0

    def __call__(self, s_min: list[int], s_max: list[int]) -> Optional[CheckResult]:
        """Tighten bounds in place; return the failing check result, or None.

        Filtering failures raise :class:`Wipeout`.
        """
        rc = self.rcpsp
        for a in range(rc.n):
            if s_min[a] > s_max[a]:
                raise Wipeout(a)
        while True:
            moved = precedence_filter(rc, s_min, s_max, self.order)
            if self.config.timetable:
                for r, res in enumerate(rc.resources):
                    if filter_bounds(s_min, s_max, self.p, self.heights[r], res.capacity):
                        moved = True
            if not moved or (not rc.precedences and len(rc.resources) == 1):
                break
        if self.checker is None:
            return None
        t0 = time.perf_counter()
        try:
            for r, res in enumerate(rc.resources):
                acts = tuple(Activity(a, s_min[a], s_max[a], self.p[a], self.heights[r][a])
                             for a in range(rc.n))
                result = self.checker(CuspInstance(acts, res.capacity, rc.horizon))
                self.intervals_examined += result.intervals_examined
                if not result.feasible:
                    return result
        finally:
            self.check_time += time.perf_counter() - t0
        return None


def propagate(rcpsp: RcpspInstance, s_min: list[int], s_max: list[int],
              config: Config) -> bool:
    """Run the configured propagation in place; False means the node fails."""
    try:
        return _Propagator(rcpsp, config)(s_min, s_max) is None
    except Wipeout:
        return False


def branch_first_fail(s_min: Sequence[int], s_max: Sequence[int]) -> Optional[tuple[int, int]]:
    """``(activity, value)`` to branch on, or None when every start is fixed.

    Left child fixes ``s = value``; right child requires ``s >= value + 1``.
    """
    best = None
    best_width = None
    for a in range(len(s_min)):
        w = s_max[a] - s_min[a]
        if w > 0 and (best_width is None or w < best_width):
            best, best_width = a, w
    if best is None:
        return None
    return best, s_min[best]


def schedule_violations(rcpsp: RcpspInstance, starts: Sequence[int]) -> list[str]:
    """Direct simulation of a complete schedule against every constraint."""
    out = []
    p = rcpsp.durations
    base = rcpsp.base.activities
    for a, s in enumerate(starts):
        if not (base[a].s_min <= s <= base[a].s_max):
            out.append(f"activity {a} starts at {s}, outside [{base[a].s_min}, {base[a].s_max}]")
    for i, j in rcpsp.precedences:
        if starts[i] + p[i] > starts[j]:
            out.append(f"precedence {i} -> {j} violated")
    for r, res in enumerate(rcpsp.resources):
        usage: dict[int, int] = {}
        for a, act in enumerate(res.activities):
            for t in range(starts[a], starts[a] + act.p):
                usage[t] = usage.get(t, 0) + act.h
        for t in sorted(usage):
            if usage[t] > res.capacity:
                out.append(f"resource {r} overloaded at t={t}: {usage[t]} > {res.capacity}")
                break
    return out


def _as_rcpsp(inst) -> RcpspInstance:
    return inst if isinstance(inst, RcpspInstance) else RcpspInstance.single(inst)


def _search(rcpsp: RcpspInstance, config: Config, optimize: bool,
            node_limit: Optional[int], time_limit: Optional[float],
            on_solution: Optional[Callable[[list[int]], None]] = None) -> SolveResult:
    prop = _Propagator(rcpsp, config)
    p = rcpsp.durations
    base = rcpsp.base.activities
    state = SearchState([a.s_min for a in base], [a.s_max for a in base])
    stats = SearchStats()
    best: Optional[list[int]] = None
    upper: Optional[int] = None  # every activity must end by upper (inclusive)
    start = time.perf_counter()
    deadline = start + time_limit if time_limit is not None else None

    stack: list[Optional[tuple[int, int, int, bool, int]]] = [None]
    while stack:
        if node_limit is not None and stats.nodes >= node_limit:
            stats.budget_exhausted = True
            break
        if deadline is not None and time.perf_counter() >= deadline:
            stats.budget_exhausted = True
            break
        item = stack.pop()
        if item is not None:
            mark, a, value, left, depth = item
            state.undo(mark)
            state.depth = depth
            if left:
                state.set(a, value, value)
            else:
                state.set(a, value + 1, state.s_max[a])
        stats.nodes += 1
        s_min = list(state.s_min)
        s_max = list(state.s_max)
        if upper is not None:
            for a in range(len(p)):
                if s_max[a] + p[a] > upper:
                    s_max[a] = upper - p[a]
        try:
            failure = prop(s_min, s_max)
        except Wipeout:
            failure = True
        if failure is not None:
            stats.fails += 1
            continue
        state.commit(s_min, s_max)
        mark = state.mark()
        decision = branch_first_fail(state.s_min, state.s_max)
        if decision is None:
            starts = list(state.s_min)
            problems = schedule_violations(rcpsp, starts)
            if problems:
                raise AssertionError("search produced an invalid schedule: " + "; ".join(problems))
            stats.solutions += 1
            best = starts
            if on_solution is not None:
                on_solution(starts)
            if not optimize:
                break
            upper = max(s + d for s, d in zip(starts, p)) - 1
            LOG.debug("new makespan %d after %d nodes", upper + 1, stats.nodes)
            continue
        a, value = decision
        stack.append((mark, a, value, False, state.depth + 1))
        stack.append((mark, a, value, True, state.depth + 1))

    stats.wall_time = time.perf_counter() - start
    stats.check_time = prop.check_time
    stats.intervals_examined = prop.intervals_examined
    closed = not stats.budget_exhausted
    if optimize:
        stats.proved_optimal = closed and best is not None
        if best is None:
            status = "unsat" if closed else "unknown"
        else:
            status = "optimal" if closed else "feasible"
    else:
        if best is not None:
            status = "sat"
        else:
            status = "unsat" if closed else "unknown"
    makespan = max(s + d for s, d in zip(best, p)) if best is not None else None
    return SolveResult(status, best, stats, makespan)


def solve_decision(inst, config: Config | str = "tt+sweep",
                   node_limit: Optional[int] = None,
                   time_limit: Optional[float] = None) -> SolveResult:
    """Depth-first search for any schedule within the start windows."""
    if isinstance(config, str):
        config = parse_config(config)
    return _search(_as_rcpsp(inst), config, False, node_limit, time_limit)


def minimize_makespan(inst, config: Config | str = "tt+sweep",
                      node_limit: Optional[int] = None,
                      time_limit: Optional[float] = None) -> SolveResult:
    """Branch and bound: after each solution every end is bounded by the
    best makespan minus one, and the search continues where it stood."""
    if isinstance(config, str):
        config = parse_config(config)
    return _search(_as_rcpsp(inst), config, True, node_limit, time_limit)

"""Cumulative scheduling model: activities, instances, minimum intersection
and slack, plus the exhaustive feasibility oracle used throughout the tests.

All time and energy values are exact Python integers.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

import numpy as np

__all__ = [
    "Activity",
    "CuspInstance",
    "RcpspInstance",
    "Witness",
    "CheckResult",
    "Violation",
    "ContractError",
    "min_intersection",
    "slack",
    "brute_force_check",
    "validate_instance",
    "mirror_instance",
]


class ContractError(ValueError):
    """Raised when an operation is called outside its precondition."""


@dataclass(frozen=True, slots=True)
class Activity:
    """One task on the resource.

    ``s_min``/``s_max`` bound the start, ``e_min``/``e_max`` the end. When the
    end bounds are omitted they are derived from the start bounds and ``p``.
    """

    id: int
    s_min: int
    s_max: int
    p: int
    h: int
    e_min: int = None  # type: ignore[assignment]
    e_max: int = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.e_min is None:
            object.__setattr__(self, "e_min", self.s_min + self.p)
        if self.e_max is None:
            object.__setattr__(self, "e_max", self.s_max + self.p)

    @property
    def energy(self) -> int:
        return self.p * self.h

    @property
    def is_fixed(self) -> bool:
        return self.s_min == self.s_max

    def with_start_bounds(self, s_min: int, s_max: int) -> "Activity":
        return Activity(self.id, s_min, s_max, self.p, self.h)


@dataclass(frozen=True)
class CuspInstance:
    """A set of activities sharing one resource of capacity ``capacity``.

    ``horizon`` defaults to ``(min s_min, max e_max)``; ``(0, 0)`` when empty.
    """

    activities: tuple[Activity, ...]
    capacity: int
    horizon: Optional[tuple[int, int]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "activities", tuple(self.activities))
        if self.horizon is None:
            if self.activities:
                hz = (min(a.s_min for a in self.activities),
                      max(a.e_max for a in self.activities))
            else:
                hz = (0, 0)
            object.__setattr__(self, "horizon", hz)
        else:
            object.__setattr__(self, "horizon", tuple(self.horizon))

    def __len__(self) -> int:
        return len(self.activities)

    @classmethod
    def from_windows(cls, windows: Iterable[tuple[int, int, int, int]], capacity: int,
                     horizon: Optional[tuple[int, int]] = None) -> "CuspInstance":
        """Build from ``(s_min, s_max, p, h)`` tuples."""
        acts = tuple(Activity(i, lo, hi, p, h) for i, (lo, hi, p, h) in enumerate(windows))
        return cls(acts, capacity, horizon)


@dataclass(frozen=True)
class RcpspInstance:
    """Several renewable resources over the same activities plus precedences.

    Every entry of ``resources`` holds the same activity windows and
    durations; only heights and capacity differ per resource.
    """

    resources: tuple[CuspInstance, ...]
    precedences: tuple[tuple[int, int], ...] = ()
    horizon: Optional[tuple[int, int]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "resources", tuple(self.resources))
        object.__setattr__(self, "precedences", tuple(tuple(e) for e in self.precedences))
        if not self.resources:
            raise ValueError("an RCPSP instance needs at least one resource")
        if self.horizon is None:
            object.__setattr__(self, "horizon", self.resources[0].horizon)
        n = len(self.resources[0])
        for r in self.resources[1:]:
            if len(r) != n:
                raise ValueError("all resources must list the same activities")
        for i, j in self.precedences:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"precedence ({i}, {j}) refers to an unknown activity")
        cycle = find_cycle(n, self.precedences)
        if cycle:
            raise ValueError("precedence graph has a cycle: " + " -> ".join(map(str, cycle)))

    @property
    def base(self) -> CuspInstance:
        return self.resources[0]

    @property
    def n(self) -> int:
        return len(self.resources[0])

    @property
    def durations(self) -> list[int]:
        return [a.p for a in self.resources[0].activities]

    @property
    def capacities(self) -> list[int]:
        return [r.capacity for r in self.resources]

    @classmethod
    def single(cls, inst: CuspInstance,
               precedences: Sequence[tuple[int, int]] = ()) -> "RcpspInstance":
        return cls((inst,), tuple(precedences), inst.horizon)

    def with_bounds(self, s_min: Sequence[int], s_max: Sequence[int]) -> "RcpspInstance":
        res = tuple(
            CuspInstance(
                tuple(Activity(a.id, lo, hi, a.p, a.h)
                      for a, lo, hi in zip(r.activities, s_min, s_max)),
                r.capacity, r.horizon)
            for r in self.resources)
        return replace(self, resources=res)


def find_cycle(n: int, edges: Iterable[tuple[int, int]]) -> list[int]:
    """Return one directed cycle as a node list (first node repeated), or []."""
    succ: list[list[int]] = [[] for _ in range(n)]
    for i, j in edges:
        succ[i].append(j)
    color = [0] * n
    parent = [-1] * n
    for root in range(n):
        if color[root]:
            continue
        stack = [(root, iter(succ[root]))]
        color[root] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[node] = 2
                stack.pop()
            elif color[nxt] == 0:
                color[nxt] = 1
                parent[nxt] = node
                stack.append((nxt, iter(succ[nxt])))
            elif color[nxt] == 1:
                cycle = [nxt]
                cur = node
                while cur != nxt:
                    cycle.append(cur)
                    cur = parent[cur]
                cycle.append(nxt)
                return cycle[::-1]
    return []


@dataclass(frozen=True, slots=True)
class Witness:
    t1: int
    t2: int
    slack: int


@dataclass(frozen=True)
class CheckResult:
    """Verdict of a checker. Infeasible results carry a negative-slack witness.

    The two counters are instrumentation: slack evaluations performed and
    sweep events consumed.
    """

    feasible: bool
    witness: Optional[Witness] = None
    intervals_examined: int = field(default=0, compare=False)
    events_processed: int = field(default=0, compare=False)

    def __post_init__(self) -> None:
        if self.feasible and self.witness is not None:
            raise ContractError("a feasible result cannot carry a witness")
        if not self.feasible:
            w = self.witness
            if w is None:
                raise ContractError("an infeasible result needs a witness")
            if not (w.t1 < w.t2 and w.slack < 0):
                raise ContractError(f"invalid witness {w}")

    @classmethod
    def ok(cls, examined: int = 0, events: int = 0) -> "CheckResult":
        return cls(True, None, examined, events)

    @classmethod
    def fail(cls, t1: int, t2: int, slack_value: int, examined: int = 0,
             events: int = 0) -> "CheckResult":
        return cls(False, Witness(t1, t2, slack_value), examined, events)


def min_intersection(a: Activity, t1: int, t2: int) -> int:
    """Least amount of ``a`` that any placement puts inside ``[t1, t2)``."""
    if t1 >= t2:
        raise ContractError(f"min_intersection needs t1 < t2, got [{t1}, {t2}]")
    return max(0, min(a.p, t2 - t1, a.e_min - t1, t2 - a.s_max))


def slack(inst: CuspInstance, t1: int, t2: int) -> int:
    """Available area minus required energy on ``[t1, t2)``."""
    if t1 >= t2:
        raise ContractError(f"slack needs t1 < t2, got [{t1}, {t2}]")
    used = 0
    for a in inst.activities:
        if a.h:
            used += a.h * max(0, min(a.p, t2 - t1, a.e_min - t1, t2 - a.s_max))
    return inst.capacity * (t2 - t1) - used


def slack_matrix(inst: CuspInstance) -> tuple[np.ndarray, np.ndarray]:
    """Slack of every integer interval in the horizon.

    Returns ``(times, S)`` where ``S[i, j] = slack(times[i], times[j])`` for
    ``i < j``; entries on or below the diagonal are meaningless.
    """
    t_lo, t_hi = inst.horizon
    times = np.arange(t_lo, t_hi + 1, dtype=np.int64)
    t1 = times[:, None]
    t2 = times[None, :]
    used = np.zeros((times.size, times.size), dtype=np.int64)
    for a in inst.activities:
        if a.h == 0 or a.p == 0:
            continue
        mi = np.minimum(np.minimum(a.p, t2 - t1), np.minimum(a.e_min - t1, t2 - a.s_max))
        used += a.h * np.maximum(mi, 0)
    return times, inst.capacity * (t2 - t1) - used


def brute_force_check(inst: CuspInstance) -> CheckResult:
    """Evaluate the energetic condition on every integer ``t1 < t2`` of the horizon.

    The witness is the lexicographically smallest failing ``(t1, t2)``.
    """
    times, s = slack_matrix(inst)
    n = times.size
    if n < 2:
        return CheckResult.ok()
    upper = np.triu(np.ones((n, n), dtype=bool), k=1)
    bad = np.argwhere(upper & (s < 0))
    examined = n * (n - 1) // 2
    if bad.size == 0:
        return CheckResult.ok(examined)
    i, j = bad[0]
    return CheckResult.fail(int(times[i]), int(times[j]), int(s[i, j]), examined)


@dataclass(frozen=True)
class Violation:
    kind: str
    activity: Optional[int]
    message: str


def validate_instance(inst: CuspInstance) -> list[Violation]:
    """List every broken invariant of ``inst``; empty when well-formed."""
    out: list[Violation] = []
    t_lo, t_hi = inst.horizon
    if inst.capacity < 0:
        out.append(Violation("capacity", None, f"negative capacity {inst.capacity}"))
    for a in inst.activities:
        if a.p < 0 or a.h < 0:
            out.append(Violation("negative", a.id, f"activity {a.id}: p={a.p}, h={a.h}"))
        if a.s_min > a.s_max:
            out.append(Violation("bounds", a.id,
                                 f"activity {a.id}: s_min {a.s_min} > s_max {a.s_max}"))
        if a.e_min > a.e_max:
            out.append(Violation("bounds", a.id,
                                 f"activity {a.id}: e_min {a.e_min} > e_max {a.e_max}"))
        if a.e_min != a.s_min + a.p or a.e_max != a.s_max + a.p:
            out.append(Violation(
                "link", a.id,
                f"activity {a.id}: end bounds [{a.e_min}, {a.e_max}] do not match "
                f"start bounds [{a.s_min}, {a.s_max}] + p={a.p}"))
        if a.s_min < t_lo or a.e_max > t_hi:
            out.append(Violation("horizon", a.id,
                                 f"activity {a.id} leaves the horizon [{t_lo}, {t_hi}]"))
        if a.h > inst.capacity:
            out.append(Violation("capacity", a.id,
                                 f"activity {a.id}: height {a.h} exceeds capacity "
                                 f"{inst.capacity}"))
    return out


def mirror_instance(inst: CuspInstance) -> CuspInstance:
    """Reverse time around ``T = t_min + t_max``; an involution.

    ``slack(inst, t1, t2) == slack(mirror_instance(inst), T - t2, T - t1)``.
    """
    t_lo, t_hi = inst.horizon
    total = t_lo + t_hi
    acts = tuple(Activity(a.id, total - a.e_max, total - a.e_min, a.p, a.h,
                          total - a.s_max, total - a.s_min)
                 for a in inst.activities)
    return CuspInstance(acts, inst.capacity, (t_lo, t_hi))

"""Shared builders and hypothesis strategies for the test modules."""
from __future__ import annotations

import itertools

from hypothesis import strategies as st

from ercheck.model import Activity, CuspInstance


def act_a(h: int = 1, id: int = 0) -> Activity:
    """The running example: start in [2, 4], duration 4, end in [6, 8]."""
    return Activity(id, 2, 4, 4, h)


def overload() -> CuspInstance:
    """Two unit-height activities fixed on [0, 2) with capacity 1."""
    return CuspInstance.from_windows([(0, 0, 2, 1), (0, 0, 2, 1)], 1)


@st.composite
def activities(draw, max_t: int = 12, max_p: int = 6, max_h: int = 4, id: int = 0):
    s_min = draw(st.integers(0, max_t))
    s_max = draw(st.integers(s_min, s_min + max_t // 2))
    p = draw(st.integers(0, max_p))
    h = draw(st.integers(0, max_h))
    return Activity(id, s_min, s_max, p, h)


@st.composite
def instances(draw, max_n: int = 6, max_t: int = 12, max_p: int = 6, max_h: int = 4,
              min_n: int = 0):
    n = draw(st.integers(min_n, max_n))
    acts = [draw(activities(max_t, max_p, max_h, id=k)) for k in range(n)]
    capacity = draw(st.integers(1, 6))
    return CuspInstance(tuple(acts), capacity)


def feasible_schedules(inst: CuspInstance):
    """Every start vector within the windows that never exceeds the capacity."""
    acts = inst.activities
    for starts in itertools.product(*[range(a.s_min, a.s_max + 1) for a in acts]):
        usage: dict[int, int] = {}
        ok = True
        for a, s in zip(acts, starts):
            for t in range(s, s + a.p):
                usage[t] = usage.get(t, 0) + a.h
                if usage[t] > inst.capacity:
                    ok = False
        if ok:
            yield starts


def overlap_min(a: Activity, t1: int, t2: int) -> int:
    """Least overlap of ``[s, s + p)`` with ``[t1, t2)`` over every start, by enumeration."""
    return min(max(0, min(s + a.p, t2) - max(s, t1)) for s in range(a.s_min, a.s_max + 1))


def slack_by_units(inst: CuspInstance, t1: int, t2: int) -> int:
    """Slack with the energy summed one time unit at a time."""
    used = 0
    for a in inst.activities:
        best = None
        for s in range(a.s_min, a.s_max + 1):
            inside = sum(1 for t in range(t1, t2) if s <= t < s + a.p)
            best = inside if best is None else min(best, inside)
        used += a.h * (best or 0)
    return inst.capacity * (t2 - t1) - used

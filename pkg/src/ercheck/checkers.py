"""Energetic-reasoning checkers.

All three return a :class:`~ercheck.model.CheckResult` and agree on the
verdict; they differ in how many intervals they look at.

``check_cubic``     slack of every interval of the O1/O2/O(t) family, O(n^3).
``check_baptiste``  for each t1 in O1, one sweep over t2 through the slack's
                    breakpoints, testing every candidate of O2 and O(t1).
``check_sweep``     for each t1 among the start bounds, one sweep over the
                    inflection events only, then the same on the mirrored
                    instance.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .intervals import baptiste_intervals
from .model import (
    Activity,
    CheckResult,
    CuspInstance,
    brute_force_check,
    mirror_instance,
    slack,
)

__all__ = [
    "EventLists",
    "build_event_lists",
    "mirror_instance",
    "check_cubic",
    "check_baptiste",
    "check_sweep",
    "CHECKERS",
    "get_checker",
]

Trace = Callable[[int, int, int], None]

@dataclass(frozen=True)
class EventLists:
    """Per-activity event times, each sorted by time (ties by activity index)."""

    e_max_events: tuple[tuple[int, int], ...]
    e_min_events: tuple[tuple[int, int], ...]
    s_max_events: tuple[tuple[int, int], ...]
    l_events: tuple[tuple[int, int], ...]


def build_event_lists(inst: CuspInstance) -> EventLists:
    acts = inst.activities
    return EventLists(
        tuple(sorted((a.e_max, a.id) for a in acts)),
        tuple(sorted((a.e_min, a.id) for a in acts)),
        tuple(sorted((a.s_max, a.id) for a in acts)),
        tuple(sorted((a.s_min + a.e_max, a.id) for a in acts)),
    )


def _sweep_pass(acts: Sequence[Activity], capacity: int, trace: Optional[Trace]):
    """Forward event sweep for every t1 in {s_min} | {s_max}.

    For each t1 the active events are picked per activity from its
    inflection case (see :func:`~ercheck.intervals.inflection_profile`):
    the start of consumption at ``s_max`` and the end of consumption at
    ``e_max``, ``s_min + e_max - t1`` or ``e_min``. They are merged by one
    sort and swept in time order.

    Returns ``(witness_or_None, examined, events)``.
    """
    live = [(a.s_min, a.s_max, a.e_min, a.e_max, a.h) for a in acts if a.p > 0 and a.h > 0]
    if not live:
        return None, 0, 0
    starts = sorted({x[0] for x in live} | {x[1] for x in live})
    examined = events = 0
    for t1 in starts:
        slope = capacity
        ev = []
        for ls, us, le, ue, h in live:
            if t1 >= le:
                continue
            if t1 <= ls:
                if us > t1:
                    ev.append((us, -h))
                else:
                    slope -= h  # fixed at t1: already consuming
                ev.append((ue, h))
            elif t1 < us:
                ev.append((us, -h))
                ev.append((ls + ue - t1, h))
            else:
                slope -= h
                ev.append((le, h))
        ev.sort()
        events += len(ev)
        load = 0
        t_old = t1
        for t, d in ev:
            if t != t_old:
                load += slope * (t - t_old)
                t_old = t
                examined += 1
                if trace is not None:
                    trace(t1, t, load)
                if load < 0:
                    return (t1, t, load), examined, events
            slope += d
    return None, examined, events


def check_sweep(inst: CuspInstance, mirror: bool = True,
                trace: Optional[Trace] = None) -> CheckResult:
    """Event-sweep checker. ``mirror=False`` runs the forward pass only.

    ``trace(t1, t2, load)`` is called at every tested event time; in the
    mirrored pass the interval is reported in original coordinates.
    """
    w, examined, events = _sweep_pass(inst.activities, inst.capacity, trace)
    if w is not None:
        return CheckResult.fail(*w, examined=examined, events=events)
    if mirror:
        total = inst.horizon[0] + inst.horizon[1]
        mtrace = None
        if trace is not None:
            def mtrace(t1: int, t2: int, load: int) -> None:
                trace(total - t2, total - t1, load)
        m = mirror_instance(inst)
        w, ex2, ev2 = _sweep_pass(m.activities, m.capacity, mtrace)
        examined += ex2
        events += ev2
        if w is not None:
            t1, t2, s = w
            return CheckResult.fail(total - t2, total - t1, s, examined, events)
    return CheckResult.ok(examined, events)


def _baptiste_pass(acts: Sequence[Activity], capacity: int, with_o2: bool,
                   trace: Optional[Trace]):
    # zero-height or zero-length activities never change the slack
    live = [a for a in acts if a.p > 0 and a.h > 0]
    if not live:
        return None, 0, 0
    bounds = [(a.s_min, a.s_max, a.e_min, a.p, a.h) for a in live]
    o1 = sorted({x for a in live for x in (a.s_min, a.s_max, a.e_min)})
    o2 = sorted({x for a in live for x in (a.e_max, a.s_max, a.e_min)})
    sums = sorted({a.s_min + a.e_max for a in live})
    examined = events = 0
    for t1 in o1:
        items = []
        for ls, us, le, p, h in bounds:
            # MI(t1, ., a) = max(0, min(span, t2 - start))
            span = le - t1 if le - t1 < p else p
            if span <= 0:
                continue
            start = us if us > t1 else t1
            items.append((start, -h))
            items.append((start + span, h))
        if with_o2:
            items.extend((t2, 0) for t2 in o2[bisect_right(o2, t1):])
        items.extend((k - t1, 0) for k in sums[bisect_right(sums, 2 * t1):])
        items.sort()
        slope = capacity
        load = 0
        t_old = t1
        for t, d in items:
            if t != t_old:
                load += slope * (t - t_old)
                t_old = t
            if d:
                events += 1
                slope += d
            else:
                examined += 1
                if trace is not None:
                    trace(t1, t, load)
                if load < 0:
                    return (t1, t, load), examined, events
    return None, examined, events


def check_baptiste(inst: CuspInstance, trace: Optional[Trace] = None) -> CheckResult:
    """Quadratic checker over the O1/O2/O(t) candidates.

    The third candidate form (t2 in O2, t1 in O(t2)) is handled as the
    second form of the mirrored instance.
    """
    w, examined, events = _baptiste_pass(inst.activities, inst.capacity, True, trace)
    if w is not None:
        return CheckResult.fail(*w, examined=examined, events=events)
    total = inst.horizon[0] + inst.horizon[1]
    mtrace = None
    if trace is not None:
        def mtrace(t1: int, t2: int, load: int) -> None:
            trace(total - t2, total - t1, load)
    m = mirror_instance(inst)
    w, ex2, ev2 = _baptiste_pass(m.activities, m.capacity, False, mtrace)
    examined += ex2
    events += ev2
    if w is not None:
        t1, t2, s = w
        return CheckResult.fail(total - t2, total - t1, s, examined, events)
    return CheckResult.ok(examined, events)


def check_cubic(inst: CuspInstance) -> CheckResult:
    """Slack of every O1/O2/O(t) interval, in lexicographic order."""
    examined = 0
    for t1, t2 in baptiste_intervals(inst):
        examined += 1
        s = slack(inst, t1, t2)
        if s < 0:
            return CheckResult.fail(t1, t2, s, examined)
    return CheckResult.ok(examined)


CHECKERS: dict[str, Callable[[CuspInstance], CheckResult]] = {
    "brute": brute_force_check,
    "cubic": check_cubic,
    "baptiste": check_baptiste,
    "sweep": check_sweep,
}


def get_checker(name: str) -> Callable[[CuspInstance], CheckResult]:
    try:
        return CHECKERS[name]
    except KeyError:
        raise ValueError(f"unknown checker {name!r}; choose from {sorted(CHECKERS)}") from None

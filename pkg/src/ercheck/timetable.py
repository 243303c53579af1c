"""Time-Table reasoning on the profile of compulsory parts.

The compulsory part of an activity is ``[s_max, e_min)``: every placement
covers it. Summing them gives a lower bound on the resource usage at each
time; an activity cannot be placed anywhere the bound leaves it less room
than its height.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .model import Activity, CheckResult, CuspInstance

__all__ = [
    "Profile",
    "DomainUpdate",
    "Wipeout",
    "compulsory_part",
    "build_profile",
    "tt_check",
    "tt_filter",
    "filter_bounds",
]


class Wipeout(Exception):
    """An activity's start domain became empty."""

    def __init__(self, activity: int, reason: str = "") -> None:
        super().__init__(f"activity {activity}: domain wiped out{': ' + reason if reason else ''}")
        self.activity = activity


@dataclass(frozen=True)
class Profile:
    """Piecewise-constant height: ``breakpoints[k] = (t, h)`` holds on
    ``[t, next t)``. The last entry always has height 0."""

    breakpoints: tuple[tuple[int, int], ...]
    capacity: int

    def height_at(self, t: int) -> int:
        h = 0
        for bt, bh in self.breakpoints:
            if bt > t:
                break
            h = bh
        return h

    def segments(self) -> list[tuple[int, int, int]]:
        """``(start, end, height)`` for every segment of non-zero height."""
        bp = self.breakpoints
        return [(bp[k][0], bp[k + 1][0], bp[k][1])
                for k in range(len(bp) - 1) if bp[k][1] > 0]

    @property
    def max_height(self) -> int:
        return max((h for _, h in self.breakpoints), default=0)


@dataclass(frozen=True)
class DomainUpdate:
    activity: int
    new_s_min: Optional[int] = None
    new_s_max: Optional[int] = None


def compulsory_part(a: Activity) -> Optional[tuple[int, int, int]]:
    if a.s_max < a.e_min:
        return (a.s_max, a.e_min, a.h)
    return None


def _profile_from_parts(parts: Sequence[tuple[int, int, int]]) -> tuple[tuple[int, int], ...]:
    delta: dict[int, int] = {}
    for lo, hi, h in parts:
        if h == 0:
            continue
        delta[lo] = delta.get(lo, 0) + h
        delta[hi] = delta.get(hi, 0) - h
    out = []
    height = 0
    for t in sorted(delta):
        if delta[t] == 0:
            continue
        height += delta[t]
        out.append((t, height))
    return tuple(out)


def build_profile(inst: CuspInstance) -> Profile:
    parts = [cp for cp in map(compulsory_part, inst.activities) if cp is not None]
    return Profile(_profile_from_parts(parts), inst.capacity)


def tt_check(inst: CuspInstance) -> CheckResult:
    """Fail at the first time where the compulsory parts exceed the capacity.

    The witness is the unit interval ``[t, t + 1)`` with slack
    ``capacity - height``.
    """
    prof = build_profile(inst)
    for t, h in prof.breakpoints:
        if h > inst.capacity:
            return CheckResult.fail(t, t + 1, inst.capacity - h, examined=len(prof.breakpoints))
    return CheckResult.ok(len(prof.breakpoints))


def _forbidden(segments, capacity: int, own: Optional[tuple[int, int, int]], h: int):
    """Segments where ``h`` more units would overflow, self excluded."""
    out = []
    for lo, hi, height in segments:
        # a merged segment may straddle the activity's own part: split it
        if own is not None and lo < own[1] and own[0] < hi:
            a, b = max(lo, own[0]), min(hi, own[1])
            pieces = [(lo, a, height), (a, b, height - own[2]), (b, hi, height)]
        else:
            pieces = [(lo, hi, height)]
        for x, y, ht in pieces:
            if x >= y or ht + h <= capacity:
                continue
            if out and out[-1][1] == x:
                out[-1] = (out[-1][0], y)
            else:
                out.append((x, y))
    return out


def _earliest(s: int, p: int, forbidden) -> int:
    for lo, hi in forbidden:
        if hi <= s:
            continue
        if lo >= s + p:
            break
        s = hi
    return s


def _latest(s: int, p: int, forbidden) -> int:
    for lo, hi in reversed(forbidden):
        if lo >= s + p:
            continue
        if hi <= s:
            break
        s = lo - p
    return s


def filter_bounds(s_min: list[int], s_max: list[int], p: Sequence[int], h: Sequence[int],
                  capacity: int, max_rounds: Optional[int] = None) -> bool:
    """Time-Table filtering in place on bound lists; returns True if anything moved.

    Raises :class:`Wipeout` when a domain empties or the compulsory parts
    alone overflow the resource.
    """
    n = len(p)
    if max_rounds is None:
        # every productive round removes at least one value from some domain
        max_rounds = n * n + sum(hi - lo for lo, hi in zip(s_min, s_max)) + 1
    changed_any = False
    for _ in range(max_rounds):
        parts = [(s_max[a], s_min[a] + p[a], h[a]) if s_max[a] < s_min[a] + p[a] else None
                 for a in range(n)]
        bp = _profile_from_parts([cp for cp in parts if cp is not None])
        segs = [(bp[k][0], bp[k + 1][0], bp[k][1]) for k in range(len(bp) - 1) if bp[k][1] > 0]
        for lo, hi, height in segs:
            if height > capacity:
                culprit = next(a for a in range(n)
                               if parts[a] and parts[a][0] <= lo < parts[a][1] and h[a])
                raise Wipeout(culprit, f"profile reaches {height} > {capacity} at {lo}")
        changed = False
        for a in range(n):
            if h[a] == 0 or p[a] == 0 or not segs:
                continue
            forb = _forbidden(segs, capacity, parts[a], h[a])
            if not forb:
                continue
            lo = _earliest(s_min[a], p[a], forb)
            if lo > s_max[a]:
                raise Wipeout(a, "no start left of the profile")
            hi = _latest(s_max[a], p[a], forb)
            if lo != s_min[a] or hi != s_max[a]:
                s_min[a], s_max[a] = lo, hi
                changed = True
        if not changed:
            return changed_any
        changed_any = True
    raise RuntimeError("time-table filtering did not reach a fixpoint")


def tt_filter(inst: CuspInstance) -> list[DomainUpdate]:
    """Tightened start bounds at the Time-Table fixpoint, one entry per moved activity."""
    acts = inst.activities
    s_min = [a.s_min for a in acts]
    s_max = [a.s_max for a in acts]
    filter_bounds(s_min, s_max, [a.p for a in acts], [a.h for a in acts], inst.capacity)
    out = []
    for k, a in enumerate(acts):
        if s_min[k] != a.s_min or s_max[k] != a.s_max:
            out.append(DomainUpdate(a.id,
                                    s_min[k] if s_min[k] != a.s_min else None,
                                    s_max[k] if s_max[k] != a.s_max else None))
    return out

"""Candidate intervals for the energetic check.

Three sources are provided:

* the classical O1 / O2 / O(t) family (every start in O1 against every end
  in O2, plus the two "mirror" forms built from ``s_min + e_max - t``);
* the eight guarded pair rows A..H, which emit at most eight intervals for
  an ordered pair of activities ``(i, j)``;
* the per-activity inflection analysis used by the event sweep: for a fixed
  ``t1``, where does ``t2 -> MI(t1, t2, a)`` start growing and where does it
  stop (the only point where its left slope exceeds its right slope).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .model import Activity, ContractError, CuspInstance, min_intersection, mirror_instance

__all__ = [
    "IntervalFamily",
    "InflectionProfile",
    "o1_set",
    "o2_set",
    "ot_set",
    "baptiste_intervals",
    "pair_intervals",
    "pair_rows",
    "pair_row_intervals",
    "inflection_profile",
    "discrete_slopes",
    "ROW_VARIANTS",
]


@dataclass(frozen=True)
class IntervalFamily:
    intervals: frozenset[tuple[int, int]]
    provenance: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "intervals", frozenset(self.intervals))
        for t1, t2 in self.intervals:
            if t1 >= t2:
                raise ContractError(f"interval [{t1}, {t2}] is empty")

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self.intervals))

    def __contains__(self, item: object) -> bool:
        return item in self.intervals


def o1_set(inst: CuspInstance) -> set[int]:
    return ({a.s_min for a in inst.activities} | {a.s_max for a in inst.activities}
            | {a.e_min for a in inst.activities})


def o2_set(inst: CuspInstance) -> set[int]:
    return ({a.e_max for a in inst.activities} | {a.s_max for a in inst.activities}
            | {a.e_min for a in inst.activities})


def ot_set(inst: CuspInstance, t: int) -> set[int]:
    return {a.s_min + a.e_max - t for a in inst.activities}


def baptiste_intervals(inst: CuspInstance) -> IntervalFamily:
    o1 = o1_set(inst)
    o2 = o2_set(inst)
    sums = {a.s_min + a.e_max for a in inst.activities}
    out: set[tuple[int, int]] = set()
    for t1 in o1:
        for t2 in o2:
            if t1 < t2:
                out.add((t1, t2))
        for k in sums:
            if t1 < k - t1:
                out.add((t1, k - t1))
    for t2 in o2:
        for k in sums:
            if k - t2 < t2:
                out.add((k - t2, t2))
    return IntervalFamily(frozenset(out), "baptiste")


# Row variants. "derived" is the form obtained by combining the two
# inflection cases the row stands for; "alternate" is a second form of the
# same row (E ending at s_min_j + e_max_j - s_min_i, H with the sum guard
# reversed) that misses some overloads. Kept for comparison only.
ROW_VARIANTS = {
    # E: t1 = s_max_i, t2 = case-3 inflection of j seen from t1 = s_max_i.
    "E": ("alternate", "derived"),
    # H: t2 = e_min_j requires t1 >= s_max_j, i.e. s_min_i+e_max_i >= s_min_j+e_max_j.
    "H": ("alternate", "derived"),
}
DEFAULT_VARIANTS = {"E": "derived", "H": "derived"}


def pair_rows(i: Activity, j: Activity,
              variants: Optional[dict[str, str]] = None) -> list[tuple[str, int, int]]:
    """Rows of the pair table whose guard holds, as ``(row, t1, t2)``.

    Rows with an empty interval (``t1 >= t2``) are dropped.
    """
    v = dict(DEFAULT_VARIANTS)
    if variants:
        v.update(variants)
    ls_i, us_i, le_i, ue_i = i.s_min, i.s_max, i.e_min, i.e_max
    ls_j, us_j, le_j, ue_j = j.s_min, j.s_max, j.e_min, j.e_max
    rows: list[tuple[str, int, int]] = []

    if ls_i <= ls_j and ue_j >= ue_i:
        rows.append(("A", ls_i, ue_j))
    if (ls_i >= ls_j and ls_i <= le_j and ls_i <= us_j
            and ls_j + ue_j - ls_i >= ue_i):
        rows.append(("B", ls_i, ls_j + ue_j - ls_i))
    if ls_i >= ls_j and ls_i <= le_j and le_j >= ue_i:
        rows.append(("C", ls_i, le_j))
    if us_i <= ls_j <= ue_j <= le_i:
        rows.append(("D", us_i, ue_j))
    if (us_i >= ls_j and us_i <= le_j and us_i <= us_j
            and ls_j + ue_j <= us_i + le_i and ls_j + ue_j >= 2 * us_i):
        end = ls_j + ue_j - (ls_i if v["E"] == "alternate" else us_i)
        rows.append(("E", us_i, end))
    if us_j <= us_i <= le_j <= le_i:
        rows.append(("F", us_i, le_j))
    if (ue_j <= ue_i and ue_j >= us_i and ue_j >= le_i
            and ls_i + ue_i <= us_j + le_j):
        rows.append(("G", ls_i + ue_i - ue_j, ue_j))
    if v["H"] == "alternate":
        h_order = ls_i + ue_i <= ls_j + ue_j
    else:
        h_order = ls_i + ue_i >= ls_j + ue_j
    if (le_j <= ue_i and le_j >= us_i and le_j >= le_i and h_order
            and ls_i + ue_i <= 2 * le_j):
        rows.append(("H", ls_i + ue_i - le_j, le_j))
    return [r for r in rows if r[1] < r[2]]


def pair_intervals(i: Activity, j: Activity,
                   variants: Optional[dict[str, str]] = None) -> list[tuple[int, int]]:
    """At most eight intervals of interest for the ordered pair ``(i, j)``."""
    return [(t1, t2) for _, t1, t2 in pair_rows(i, j, variants)]


def pair_row_intervals(inst: CuspInstance, variants: Optional[dict[str, str]] = None,
                       mirrored: bool = False) -> IntervalFamily:
    """Union of :func:`pair_intervals` over all ordered pairs (``i == j`` included).

    With ``mirrored`` the pair rows of the time-reversed instance are added,
    mapped back to the original time axis.
    """
    acts = inst.activities
    out: set[tuple[int, int]] = set()
    for i in acts:
        for j in acts:
            out.update(pair_intervals(i, j, variants))
    if mirrored:
        t_sum = inst.horizon[0] + inst.horizon[1]
        m = mirror_instance(inst).activities
        for i in m:
            for j in m:
                out.update((t_sum - t2, t_sum - t1) for t1, t2 in pair_intervals(i, j, variants))
    return IntervalFamily(frozenset(out), "table1")


@dataclass(frozen=True)
class InflectionProfile:
    """Breakpoints of ``t2 -> MI(t1, t2, a)`` for a fixed ``t1``.

    ``soi`` is where the intersection starts growing, ``doi`` where it stops.
    ``initially_on`` marks the case where it already grows right after ``t1``.
    """

    activity: int
    t1: int
    initially_on: bool
    soi: Optional[int]
    doi: Optional[int]
    delta: int
    case: int


def inflection_profile(a: Activity, t1: int) -> InflectionProfile:
    delta = max(0, t1 - a.s_min)
    if t1 >= a.e_min:
        return InflectionProfile(a.id, t1, False, None, None, delta, 2)
    if t1 <= a.s_min:
        case, on, soi, doi = 1, False, a.s_max, a.e_max
    elif t1 < a.s_max:
        case, on, soi, doi = 3, False, a.s_max, a.s_min + a.e_max - t1
    else:
        case, on, soi, doi = 4, True, None, a.e_min
    if soi is not None and soi == doi:
        # zero-length ramp (p == 0): nothing ever grows
        soi = doi = None
    return InflectionProfile(a.id, t1, on, soi, doi, delta, case)


def discrete_slopes(a: Activity, t1: int, t2: int) -> tuple[int, int]:
    """One-step left and right differences of ``t2 -> MI(t1, t2, a)``."""
    if t1 >= t2 - 1:
        raise ContractError(f"discrete_slopes needs t1 < t2 - 1, got t1={t1}, t2={t2}")
    mid = min_intersection(a, t1, t2)
    return (mid - min_intersection(a, t1, t2 - 1),
            min_intersection(a, t1, t2 + 1) - mid)


def positive_inflections(a: Activity, t1: int, t2_values: Iterable[int]) -> list[int]:
    """All ``t2 > t1`` among ``t2_values`` where the left slope exceeds the right slope.

    The empty interval ``[t1, t1]`` counts as intersection 0, so ``t2 = t1 + 1``
    is scanned too.
    """
    def mi(t2: int) -> int:
        return min_intersection(a, t1, t2) if t2 > t1 else 0

    out = []
    for t2 in t2_values:
        if t2 > t1 and mi(t2) - mi(t2 - 1) > mi(t2 + 1) - mi(t2):
            out.append(t2)
    return out

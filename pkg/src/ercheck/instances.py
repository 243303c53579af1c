"""Instance input/output and seeded generators.

JSON layout::

    {"capacity": 5,
     "activities": [{"s": [0, 4], "p": 3, "h": 2}, ...],
     "precedences": [[0, 1], ...],
     "horizon": [0, 20],
     "resources": [{"capacity": 5, "heights": [2, ...]}, ...]}

``capacity`` and each activity's ``h`` describe the first resource.
``resources``, when present, lists every resource (first one included).
``precedences``, ``horizon`` and ``resources`` are optional.

PSPLIB support covers the single-mode ``.sm`` layout.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence, Union

from .model import Activity, CuspInstance, RcpspInstance, find_cycle
from .rng import SplitMix64

__all__ = [
    "ParseError",
    "to_dict",
    "from_dict",
    "dumps",
    "loads",
    "load",
    "save",
    "parse_psplib",
    "write_psplib",
    "GenParams",
    "gen_random",
    "gen_rcpsp",
]

Instance = Union[CuspInstance, RcpspInstance]


class ParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None,
                 section: Optional[str] = None) -> None:
        where = []
        if section:
            where.append(f"section {section}")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.line = line
        self.section = section


# --------------------------------------------------------------------- JSON

def to_dict(inst: Instance) -> dict:
    rc = inst if isinstance(inst, RcpspInstance) else RcpspInstance.single(inst)
    base = rc.base
    doc: dict = {
        "capacity": base.capacity,
        "activities": [{"s": [a.s_min, a.s_max], "p": a.p, "h": a.h} for a in base.activities],
        "precedences": [list(e) for e in rc.precedences],
        "horizon": list(rc.horizon),
    }
    if len(rc.resources) > 1:
        doc["resources"] = [{"capacity": r.capacity, "heights": [a.h for a in r.activities]}
                            for r in rc.resources]
    return doc


def from_dict(doc: dict) -> Instance:
    """Instance from a JSON document.

    Returns a :class:`CuspInstance` for a single resource without
    precedences, an :class:`RcpspInstance` otherwise.
    """
    try:
        acts_doc = doc["activities"]
        windows = []
        for k, a in enumerate(acts_doc):
            lo, hi = a["s"]
            windows.append((int(lo), int(hi), int(a["p"]), int(a.get("h", 0))))
        horizon = tuple(doc["horizon"]) if doc.get("horizon") is not None else None
        precedences = [tuple(map(int, e)) for e in doc.get("precedences", [])]
        if "resources" in doc:
            res_docs = doc["resources"]
        else:
            res_docs = [{"capacity": doc["capacity"], "heights": [w[3] for w in windows]}]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed instance document: {exc!r}") from exc
    resources = []
    for r in res_docs:
        try:
            heights = [int(h) for h in r["heights"]]
            capacity = int(r["capacity"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed resource entry: {exc!r}") from exc
        if len(heights) != len(windows):
            raise ParseError("resource heights do not match the activity count")
        acts = tuple(Activity(k, lo, hi, p, h)
                     for k, ((lo, hi, p, _), h) in enumerate(zip(windows, heights)))
        resources.append(CuspInstance(acts, capacity, horizon))
    if len(resources) == 1 and not precedences:
        return resources[0]
    try:
        return RcpspInstance(tuple(resources), tuple(precedences), resources[0].horizon)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def dumps(inst: Instance) -> str:
    return json.dumps(to_dict(inst), indent=1)


def loads(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, "json") from exc
    return from_dict(doc)


def load(path: Union[str, Path]) -> Instance:
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".sm":
        return parse_psplib(text)
    return loads(text)


def save(inst: Instance, path: Union[str, Path]) -> None:
    path = Path(path)
    if path.suffix.lower() == ".sm":
        rc = inst if isinstance(inst, RcpspInstance) else RcpspInstance.single(inst)
        path.write_text(write_psplib(rc))
    else:
        path.write_text(dumps(inst) + "\n")


# ------------------------------------------------------------------- PSPLIB

_INT = re.compile(r"-?\d+")


def _ints(line: str) -> list[int]:
    return [int(x) for x in _INT.findall(line)]


def parse_psplib(text: str) -> RcpspInstance:
    """Parse a single-mode PSPLIB ``.sm`` file (dummy source/sink jobs kept).

    Start windows are ``[0, horizon - p]`` with the declared horizon, or the
    sum of durations when the file does not declare one.
    """
    lines = text.splitlines()
    if not any(line.strip() for line in lines):
        raise ParseError("empty file")
    n_jobs = None
    horizon = None
    n_renewable = None
    succ: dict[int, list[int]] = {}
    durations: dict[int, int] = {}
    requests: dict[int, list[int]] = {}
    capacities: Optional[list[int]] = None

    def after_colon(k: int, section: str) -> int:
        vals = _ints(lines[k].split(":", 1)[1]) if ":" in lines[k] else []
        if not vals:
            raise ParseError("expected an integer after ':'", k + 1, section)
        return vals[0]

    k = 0
    while k < len(lines):
        line = lines[k]
        low = line.strip().lower()
        if low.startswith("jobs (incl"):
            n_jobs = after_colon(k, "header")
        elif low.startswith("horizon"):
            horizon = after_colon(k, "header")
        elif low.startswith("- renewable"):
            n_renewable = after_colon(k, "RESOURCES")
        elif low.startswith("precedence relations"):
            k += 2  # skip column header
            while k < len(lines) and lines[k].strip() and not lines[k].startswith("*"):
                vals = _ints(lines[k])
                if len(vals) < 3 or len(vals) != 3 + vals[2]:
                    raise ParseError("bad precedence row", k + 1, "PRECEDENCE RELATIONS")
                succ[vals[0]] = vals[3:]
                k += 1
            continue
        elif low.startswith("requests/durations"):
            k += 1
            while (k < len(lines) and not lines[k].strip()[:1].isdigit()
                   and not lines[k].startswith("*")):
                k += 1  # column header and dash line
            while k < len(lines) and lines[k].strip() and not lines[k].startswith("*"):
                vals = _ints(lines[k])
                if len(vals) < 3:
                    raise ParseError("bad request row", k + 1, "REQUESTS/DURATIONS")
                durations[vals[0]] = vals[2]
                requests[vals[0]] = vals[3:]
                k += 1
            continue
        elif low.startswith("resourceavailabilities"):
            k += 2
            if k >= len(lines):
                raise ParseError("missing capacities", k, "RESOURCEAVAILABILITIES")
            capacities = _ints(lines[k])
        k += 1

    if n_jobs is None:
        raise ParseError("missing job count", None, "header")
    if capacities is None:
        raise ParseError("missing resource availabilities", None, "RESOURCEAVAILABILITIES")
    if n_renewable is None:
        n_renewable = len(capacities)
    capacities = capacities[:n_renewable]
    jobs = list(range(1, n_jobs + 1))
    for j in jobs:
        if j not in succ:
            raise ParseError(f"job {j} has no precedence row", None, "PRECEDENCE RELATIONS")
        if j not in durations:
            raise ParseError(f"job {j} has no duration row", None, "REQUESTS/DURATIONS")
        if len(requests[j]) < n_renewable:
            raise ParseError(f"job {j} lists {len(requests[j])} requests, "
                             f"expected {n_renewable}", None, "REQUESTS/DURATIONS")
    precedences = []
    for j in jobs:
        for s in succ[j]:
            if not 1 <= s <= n_jobs:
                raise ParseError(f"job {j} has unknown successor {s}", None,
                                 "PRECEDENCE RELATIONS")
            precedences.append((j - 1, s - 1))
    cycle = find_cycle(n_jobs, precedences)
    if cycle:
        raise ParseError("cyclic precedences: " + " -> ".join(str(c + 1) for c in cycle),
                         None, "PRECEDENCE RELATIONS")
    p = [durations[j] for j in jobs]
    if horizon is None:
        horizon = sum(p)
    if any(d > horizon for d in p):
        raise ParseError(f"horizon {horizon} is shorter than a job", None, "header")
    resources = tuple(
        CuspInstance(tuple(Activity(j - 1, 0, horizon - durations[j], durations[j],
                                    requests[j][r]) for j in jobs),
                     capacities[r], (0, horizon))
        for r in range(n_renewable))
    return RcpspInstance(resources, tuple(precedences), (0, horizon))


def write_psplib(rc: RcpspInstance, name: str = "generated") -> str:
    """Render as a single-mode ``.sm`` file; start windows are not preserved."""
    n = rc.n
    nr = len(rc.resources)
    succ: list[list[int]] = [[] for _ in range(n)]
    for i, j in rc.precedences:
        succ[i].append(j)
    star = "*" * 72
    out = [
        star,
        f"file with basedata            : {name}.bas",
        "initial value random generator: 0",
        star,
        "projects                      :  1",
        f"jobs (incl. supersource/sink ):  {n}",
        f"horizon                       :  {rc.horizon[1]}",
        "RESOURCES",
        f"  - renewable                 :  {nr}   R",
        "  - nonrenewable              :  0   N",
        "  - doubly constrained        :  0   D",
        star,
        "PRECEDENCE RELATIONS:",
        "jobnr.    #modes  #successors   successors",
    ]
    for j in range(n):
        out.append(f"{j + 1:>4}{1:>9}{len(succ[j]):>11}       "
                   + "".join(f"{s + 1:>4}" for s in sorted(succ[j])))
    out += [
        star,
        "REQUESTS/DURATIONS:",
        "jobnr. mode duration  " + "  ".join(f"R {r + 1}" for r in range(nr)),
        "-" * 72,
    ]
    for j in range(n):
        reqs = "".join(f"{res.activities[j].h:>5}" for res in rc.resources)
        out.append(f"{j + 1:>3}{1:>7}{rc.resources[0].activities[j].p:>6}   {reqs}")
    out += [
        star,
        "RESOURCEAVAILABILITIES:",
        "  " + "  ".join(f"R {r + 1}" for r in range(nr)),
        "  " + "".join(f"{c:>5}" for c in rc.capacities),
        star,
    ]
    return "\n".join(out) + "\n"


# --------------------------------------------------------------- generators

@dataclass(frozen=True)
class GenParams:
    """Random single-resource instance parameters.

    ``capacity=None`` draws it uniformly in ``[max h, 2 max h]``. The horizon
    is ``ceil(horizon_factor * total energy / capacity)``, at least the
    longest duration. ``windows="open"`` gives every activity the full
    window ``[0, horizon - p]``, the horizon capped at the sum of durations
    (the makespan-minimization setting). ``windows="planted"`` first builds a
    feasible schedule by serial list scheduling in random order and then
    draws each window around its planted start, so every instance is
    feasible.
    """

    n: int
    p_range: tuple[int, int] = (1, 10)
    h_range: tuple[int, int] = (1, 5)
    capacity: Optional[int] = None
    horizon_factor: Fraction = Fraction(1)
    seed: int = 0
    windows: str = "random"

    def __post_init__(self) -> None:
        if self.n <= 0:
            raise ValueError("n must be positive")
        if self.windows not in ("random", "open", "planted"):
            raise ValueError(f"unknown window mode {self.windows!r}")
        for lo, hi in (self.p_range, self.h_range):
            if lo > hi:
                raise ValueError(f"empty range [{lo}, {hi}]")
        object.__setattr__(self, "horizon_factor", Fraction(self.horizon_factor))


def _serial_schedule(ph: Sequence[tuple[int, int]], capacity: int, rng: SplitMix64) -> list[int]:
    """Earliest capacity-feasible start for each activity, in a random order."""
    order = list(range(len(ph)))
    for k in range(len(order) - 1, 0, -1):
        r = rng.randint(0, k)
        order[k], order[r] = order[r], order[k]
    usage: dict[int, int] = {}
    starts = [0] * len(ph)
    for a in order:
        p, h = ph[a]
        t = 0
        while any(usage.get(x, 0) + h > capacity for x in range(t, t + p)):
            t += 1
        for x in range(t, t + p):
            usage[x] = usage.get(x, 0) + h
        starts[a] = t
    return starts


def gen_random(params: GenParams) -> CuspInstance:
    """Seeded random instance.

    Draw order: ``(p, h)`` per activity, then the capacity (if not given),
    then ``(s_min, width)`` per activity with ``s_min`` uniform in
    ``[0, horizon - p]``, width uniform in ``[0, horizon // 2]`` and
    ``s_max = min(s_min + width, horizon - p)``.
    """
    rng = SplitMix64(params.seed)
    ph = [(rng.randint(*params.p_range), rng.randint(*params.h_range)) for _ in range(params.n)]
    max_h = max(h for _, h in ph)
    capacity = params.capacity
    if capacity is None:
        capacity = rng.randint(max(max_h, 1), max(2 * max_h, 1))
    energy = sum(p * h for p, h in ph)
    horizon = max(max(p for p, _ in ph),
                  math.ceil(params.horizon_factor * energy / max(capacity, 1)))
    if params.windows == "open":
        horizon = min(horizon, sum(p for p, _ in ph))
        acts = [Activity(k, 0, horizon - p, p, h) for k, (p, h) in enumerate(ph)]
        return CuspInstance(tuple(acts), capacity, (0, horizon))
    if params.windows == "planted":
        starts = _serial_schedule(ph, capacity, rng)
        horizon = max(horizon, max(s + p for s, (p, _) in zip(starts, ph)))
        reach = horizon // 4
        acts = []
        for k, ((p, h), s) in enumerate(zip(ph, starts)):
            lo = max(0, s - rng.randint(0, reach))
            hi = min(horizon - p, s + rng.randint(0, reach))
            acts.append(Activity(k, lo, hi, p, h))
        return CuspInstance(tuple(acts), capacity, (0, horizon))
    acts = []
    for k, (p, h) in enumerate(ph):
        lo = rng.randint(0, horizon - p)
        width = rng.randint(0, horizon // 2)
        acts.append(Activity(k, lo, min(lo + width, horizon - p), p, h))
    return CuspInstance(tuple(acts), capacity, (0, horizon))


def gen_rcpsp(n_jobs: int = 30, n_resources: int = 4, seed: int = 0,
              p_range: tuple[int, int] = (1, 10), req_range: tuple[int, int] = (1, 10),
              ) -> RcpspInstance:
    """PSPLIB-shaped project: dummy source and sink around ``n_jobs`` real jobs.

    Each real job gets one to three successors among later jobs and uses
    each resource with probability one half (at least one). Capacities sit
    between the largest request and the peak of the earliest-start schedule.
    """
    rng = SplitMix64(seed)
    n = n_jobs + 2
    sink = n - 1
    p = [0] + [rng.randint(*p_range) for _ in range(n_jobs)] + [0]
    req = [[0] * n for _ in range(n_resources)]
    for j in range(1, n - 1):
        used = [rng.randint(0, 1) for _ in range(n_resources)]
        if not any(used):
            used[rng.randint(0, n_resources - 1)] = 1
        for r in range(n_resources):
            if used[r]:
                req[r][j] = rng.randint(*req_range)
    edges: set[tuple[int, int]] = set()
    for j in range(1, n - 1):
        later = list(range(j + 1, n - 1))
        k = min(len(later), rng.randint(1, 3))
        for _ in range(k):
            edges.add((j, later[rng.randint(0, len(later) - 1)]))
    has_pred = {b for _, b in edges}
    has_succ = {a for a, _ in edges}
    for j in range(1, n - 1):
        if j not in has_pred:
            edges.add((0, j))
        if j not in has_succ:
            edges.add((j, sink))
    precedences = tuple(sorted(edges))
    # earliest-start schedule for the capacity draw
    es = [0] * n
    for a, b in sorted(precedences, key=lambda e: e[0]):
        es[b] = max(es[b], es[a] + p[a])
    horizon = sum(p)
    capacities = []
    for r in range(n_resources):
        usage = [0] * (horizon + 1)
        for j in range(n):
            for t in range(es[j], es[j] + p[j]):
                usage[t] += req[r][j]
        top = max(req[r])
        peak = max(usage)
        strength = (1, 2, 3, 5)[rng.randint(0, 3)]
        capacities.append(top + (strength * max(peak - top, 0)) // 10)
    resources = tuple(
        CuspInstance(tuple(Activity(j, 0, horizon - p[j], p[j], req[r][j]) for j in range(n)),
                     capacities[r], (0, horizon))
        for r in range(n_resources))
    return RcpspInstance(resources, precedences, (0, horizon))

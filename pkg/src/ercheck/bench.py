"""Benchmark harness: run solver configurations over an instance suite.

A suite is a name (``random10``, ``random20``, ``optimality``,
``psplib30``) or a path / glob of instance files. Every (instance, config)
pair gives one :class:`BenchRow`; a file that cannot be read gives an error
row and the run carries on.
"""
from __future__ import annotations

import csv
import glob
import io
import logging
import os
import statistics
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence

from .instances import GenParams, gen_random, gen_rcpsp, load
from .intervals import pair_intervals
from .model import CuspInstance, RcpspInstance
from .solver import minimize_makespan, solve_decision

__all__ = [
    "BenchRow",
    "SuiteItem",
    "CSV_COLUMNS",
    "SUITES",
    "resolve_suite",
    "run_bench",
    "write_csv",
    "read_csv",
    "median_time_per_node",
    "interval_reduction_factor",
    "env_time_limit",
]

LOG = logging.getLogger(__name__)

CSV_COLUMNS = ("instance", "config", "result", "nodes", "time_us", "time_per_node_us",
               "intervals_examined", "proved_optimal")


@dataclass
class BenchRow:
    instance: str
    config: str
    result: str
    nodes: int = 0
    time_us: float = 0.0
    time_per_node_us: float = 0.0
    intervals_examined: int = 0
    proved_optimal: bool = False


@dataclass
class SuiteItem:
    """One instance of a suite. ``instance`` is None when it failed to load."""

    name: str
    instance: Optional[object]
    objective: str  # "decision" or "makespan"
    node_limit: Optional[int] = None
    error: str = ""


# name -> (description, default count)
SUITES = {
    "random10": ("10 activities, random windows, decision", 100),
    "random20": ("20 activities, random windows, decision", 100),
    "optimality": ("20 activities, planted windows, makespan with a node budget", 100),
    "psplib30": ("30-job generated projects, 4 resources, makespan with a node budget", 20),
}

# Random windows at 3/2 of the energy bound give a mix of feasible and
# infeasible decision instances with non-trivial search.
DECISION_FACTOR = Fraction(3, 2)
OPTIMALITY_BUDGET = 3000
PSPLIB_BUDGET = 2000


def _generated(suite: str, count: int) -> Iterator[SuiteItem]:
    for seed in range(1, count + 1):
        if suite in ("random10", "random20"):
            n = 10 if suite == "random10" else 20
            inst = gen_random(GenParams(n, horizon_factor=DECISION_FACTOR, seed=seed))
            yield SuiteItem(f"{suite}-{seed}", inst, "decision")
        elif suite == "optimality":
            inst = gen_random(GenParams(20, windows="planted", seed=seed))
            yield SuiteItem(f"{suite}-{seed}", inst, "makespan", OPTIMALITY_BUDGET)
        else:
            yield SuiteItem(f"{suite}-{seed}", gen_rcpsp(30, 4, seed=seed), "makespan",
                            PSPLIB_BUDGET)


def resolve_suite(suite: str, count: Optional[int] = None) -> list[SuiteItem]:
    """Expand a suite name or a path/glob into instances."""
    if suite in SUITES:
        return list(_generated(suite, count if count is not None else SUITES[suite][1]))
    paths = sorted(glob.glob(suite)) if any(c in suite for c in "*?[") else [suite]
    if not paths:
        raise ValueError(f"suite {suite!r} matches no file")
    items = []
    for p in paths[:count] if count is not None else paths:
        try:
            inst = load(p)
        except (OSError, ValueError) as exc:
            items.append(SuiteItem(Path(p).name, None, "decision", error=str(exc)))
            continue
        objective = "makespan" if isinstance(inst, RcpspInstance) else "decision"
        items.append(SuiteItem(Path(p).name, inst, objective))
    return items


def env_time_limit(default: Optional[float] = None) -> Optional[float]:
    """Per-run time limit in seconds, overridden by ``ERC_TIME_LIMIT``."""
    raw = os.environ.get("ERC_TIME_LIMIT")
    if raw is None or raw.strip() == "":
        return default
    return float(raw.strip().rstrip("s"))


def run_bench(suite, configs: Sequence[str], count: Optional[int] = None,
              node_limit: Optional[int] = None,
              time_limit: Optional[float] = None) -> list[BenchRow]:
    """One row per instance and config. ``suite`` is a name, a path/glob or a
    list of :class:`SuiteItem`. ``node_limit`` overrides the suite budget."""
    items = resolve_suite(suite, count) if isinstance(suite, str) else list(suite)
    time_limit = env_time_limit(time_limit)
    rows = []
    for item in items:
        for config in configs:
            if item.instance is None:
                rows.append(BenchRow(item.name, config, f"error: {item.error}"))
                continue
            limit = node_limit if node_limit is not None else item.node_limit
            solve = minimize_makespan if item.objective == "makespan" else solve_decision
            res = solve(item.instance, config, node_limit=limit, time_limit=time_limit)
            st = res.stats
            rows.append(BenchRow(item.name, config, res.status, st.nodes,
                                 round(st.wall_time * 1e6, 1), round(st.time_per_node, 3),
                                 st.intervals_examined, st.proved_optimal))
            LOG.info("%s %s %s nodes=%d", item.name, config, res.status, st.nodes)
    return rows


def write_csv(rows: Iterable[BenchRow], out=None) -> str:
    """Write rows with the fixed column order; returns the CSV text."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        d = asdict(r)
        w.writerow([str(d[c]).lower() if isinstance(d[c], bool) else d[c] for c in CSV_COLUMNS])
    text = buf.getvalue()
    if out is not None:
        Path(out).write_text(text)
    return text


def read_csv(text: str) -> list[BenchRow]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    types = {f.name: f.type for f in fields(BenchRow)}
    rows = []
    for rec in reader:
        vals = {}
        for k, v in rec.items():
            t = types[k]
            if t in (int, "int"):
                vals[k] = int(v)
            elif t in (float, "float"):
                vals[k] = float(v)
            elif t in (bool, "bool"):
                vals[k] = v == "true"
            else:
                vals[k] = v
        rows.append(BenchRow(**vals))
    return rows


def median_time_per_node(rows: Iterable[BenchRow]) -> dict[str, float]:
    """Median time per node (µs) per config, over rows that explored a node."""
    by: dict[str, list[float]] = {}
    for r in rows:
        if r.nodes > 0 and not r.result.startswith("error"):
            by.setdefault(r.config, []).append(r.time_per_node_us)
    return {c: statistics.median(v) for c, v in by.items()}


def interval_reduction_factor(pairs: int = 10_000, seed: int = 0) -> tuple[float, float]:
    """``(mean pair intervals, 15 / mean)`` over random activity pairs.

    Pairs are the two activities of a 2-activity generated instance; 15 is
    the number of candidate intervals the classical family builds per pair.
    """
    total = 0
    for k in range(pairs):
        i, j = gen_random(GenParams(2, seed=seed * pairs + k)).activities
        total += len(pair_intervals(i, j))
    mean = total / pairs
    return mean, (15 / mean if mean else float("inf"))

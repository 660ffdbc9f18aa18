"""Batch trials over random graphs, plus an exhaustive small-graph census.

A threshold experiment sweeps additive offsets a in the edge probability
p = (ln n + a) / n (or p = (ln n + ln ln n + a) / n for the Hamiltonicity
regime), samples G(n, p) for each (offset, trial) cell, runs the
two-coloring construction on connected samples, and records one row per
trial: connectivity, whether a Hamiltonian cycle was found, the stage the
construction reached, whether the verified two-coloring succeeded, and wall
time.  Trial seeds derive from the master seed by counter-based splitting
on (offset index, trial index), so any cell can be reproduced in isolation
and results do not depend on execution order.

The census enumerates every connected labeled graph on up to five vertices
and histograms the exact proper connection number over them.
"""

from __future__ import annotations

import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

from numpy.random import SeedSequence

from .construct import ConstructionParams, construct_two_coloring
from .exact import pc_exact
from .graph import Graph, RandomModel, gnp_sample, is_connected

__all__ = [
    "TrialRecord",
    "TrialReport",
    "run_threshold_experiment",
    "trial_csv",
    "census_small_graphs",
    "connected_labeled_graphs",
]

FORMULAS = ("connect", "hamilton")
CSV_HEADER = "n,p,a,seed,connected,ham_found,stage,pc_le_2,ms"


def offset_probability(n: int, formula: str, a: float) -> float:
    """Edge probability for offset a: (ln n + a)/n, plus ln ln n for 'hamilton'."""
    if formula not in FORMULAS:
        raise ValueError(f"formula must be one of {FORMULAS}, got {formula!r}")
    base = math.log(n) + a
    if formula == "hamilton":
        base += math.log(math.log(n))
    return min(max(base / n, 0.0), 1.0)


def trial_seed(master_seed: int, offset_index: int, trial_index: int) -> int:
    """Per-cell seed: counter-based split of the master seed."""
    ss = SeedSequence(entropy=master_seed, spawn_key=(offset_index, trial_index))
    return int(ss.generate_state(1)[0])


@dataclass(frozen=True)
class TrialRecord:
    """One sampled graph and what happened to it."""

    n: int
    p: float
    a: float
    seed: int
    connected: bool
    ham_found: bool
    stage: str
    pc_le_2: bool
    ms: int


@dataclass(frozen=True)
class TrialReport:
    """All trial records of one experiment plus per-offset aggregates."""

    n: int
    formula: str
    master_seed: int
    offsets: tuple[float, ...]
    trials: int
    records: tuple[TrialRecord, ...]
    aggregates: dict

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "formula": self.formula,
            "master_seed": self.master_seed,
            "offsets": list(self.offsets),
            "trials": self.trials,
            "aggregates": self.aggregates,
        }


def _run_trial(
    n: int,
    p: float,
    a: float,
    seed: int,
    construct: bool,
    params: ConstructionParams | None,
) -> TrialRecord:
    t0 = time.perf_counter()
    g = gnp_sample(RandomModel(n=n, p=p, seed=seed))
    connected = is_connected(g)
    ham_found = False
    pc_le_2 = False
    if not connected:
        stage = "disconnected"
    elif not construct:
        stage = "skipped"
    else:
        coloring, trace = construct_two_coloring(g, params, seed=seed)
        stage = trace.stage_reached
        ham_found = trace.hamiltonian_cycle is not None
        pc_le_2 = coloring is not None
    ms = int(round((time.perf_counter() - t0) * 1000))
    return TrialRecord(
        n=n, p=p, a=a, seed=seed, connected=connected,
        ham_found=ham_found, stage=stage, pc_le_2=pc_le_2, ms=ms,
    )


def run_threshold_experiment(
    n: int,
    p_formula: str,
    offsets: Sequence[float],
    trials: int,
    seed: int,
    construct: bool = True,
    params: ConstructionParams | None = None,
    workers: int = 1,
) -> TrialReport:
    """Samples G(n, p(a)) for every offset and trial and records outcomes.

    Each cell (offset index, trial index) derives its own seed from the
    master seed, samples one graph, and — when the sample is connected and
    ``construct`` is True — runs the two-coloring construction with that
    same seed.  Failures are recorded, never raised.  Trials are
    independent; ``workers`` bounds a thread pool, and records are sorted
    by cell before aggregation so the output is order-independent.

    Raises:
        ValueError: on an unknown formula or trials < 1.
    """
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    offsets = tuple(float(a) for a in offsets)
    cells = []
    for oi, a in enumerate(offsets):
        p = offset_probability(n, p_formula, a)
        for t in range(trials):
            cells.append((oi, a, p, trial_seed(seed, oi, t)))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(lambda c: _run_trial(n, c[2], c[1], c[3], construct, params), cells)
            )
    else:
        results = [_run_trial(n, p, a, s, construct, params) for (_, a, p, s) in cells]
    order = sorted(range(len(cells)), key=lambda i: (cells[i][0], i))
    records = tuple(results[i] for i in order)

    by_offset = []
    for oi, a in enumerate(offsets):
        chunk = records[oi * trials : (oi + 1) * trials]
        stages: dict[str, int] = {}
        for r in chunk:
            stages[r.stage] = stages.get(r.stage, 0) + 1
        by_offset.append(
            {
                "a": a,
                "p": chunk[0].p,
                "trials": trials,
                "connected": sum(r.connected for r in chunk),
                "connected_fraction": sum(r.connected for r in chunk) / trials,
                "ham_found": sum(r.ham_found for r in chunk),
                "ham_fraction": sum(r.ham_found for r in chunk) / trials,
                "pc_le_2": sum(r.pc_le_2 for r in chunk),
                "pc_le_2_fraction": sum(r.pc_le_2 for r in chunk) / trials,
                "stage_histogram": dict(sorted(stages.items())),
                "total_ms": sum(r.ms for r in chunk),
            }
        )
    aggregates = {
        "by_offset": by_offset,
        "total_trials": len(records),
        "total_ms": sum(r.ms for r in records),
    }
    return TrialReport(
        n=n,
        formula=p_formula,
        master_seed=seed,
        offsets=offsets,
        trials=trials,
        records=records,
        aggregates=aggregates,
    )


def trial_csv(report: TrialReport) -> str:
    """Per-trial rows in a stable text format (timings live in the ms column)."""
    out = io.StringIO()
    out.write(CSV_HEADER + "\n")
    for r in report.records:
        out.write(
            f"{r.n},{r.p:.12g},{r.a:.12g},{r.seed},{int(r.connected)},"
            f"{int(r.ham_found)},{r.stage},{int(r.pc_le_2)},{r.ms}\n"
        )
    return out.getvalue()


# ---------------------------------------------------------------------------
# small-graph census


def connected_labeled_graphs(n: int) -> Iterator[Graph]:
    """Yields every connected labeled graph on vertices 0..n-1.

    Enumerates all 2^(n choose 2) edge subsets in increasing mask order and
    keeps the connected ones; feasible for n <= 6.
    """
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        if mask.bit_count() < n - 1:
            continue
        edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
        g = Graph.from_edges(n, edges)
        if is_connected(g):
            yield g


def census_small_graphs(n: int, mode: str = "labeled") -> dict[int, int]:
    """Histogram of exact proper connection numbers over connected labeled graphs.

    Raises:
        ValueError: if n is outside 2..5 or mode is not 'labeled'.
    """
    if mode != "labeled":
        raise ValueError(f"only labeled mode is supported, got {mode!r}")
    if not 2 <= n <= 5:
        raise ValueError(f"census covers 2 <= n <= 5, got {n}")
    hist: dict[int, int] = {}
    for g in connected_labeled_graphs(n):
        value = pc_exact(g).value
        hist[value] = hist.get(value, 0) + 1
    return dict(sorted(hist.items()))

from __future__ import annotations

import time
from typing import Sequence

import numpy as np

from ..core import DataPoint, RunCounters, Summary, summary_push
from ..objectives import Objective
from .base import RunReport


def run_greedy(data: Sequence[DataPoint], K: int, objective: Objective) -> RunReport:
    """Classic greedy: K passes, each adding the item with the largest gain.

    Ties go to the lowest ordinal.
    """
    if K < 1:
        raise ValueError("K must be a positive integer")
    start = time.perf_counter()
    counters = RunCounters()
    summary = Summary(K)
    points = sorted(data, key=lambda p: p.ordinal)
    n = len(points)
    if n:
        X = np.vstack([p.features for p in points])
        state = objective.new_state()
        available = np.ones(n, dtype=bool)
        for _ in range(min(K, n)):
            counters.passes += 1
            gains = state.peek_gains(X)
            counters.oracle_queries += int(available.sum())
            gains[~available] = -np.inf
            j = int(np.argmax(gains))
            g = state.commit(X[j])
            summary_push(summary, points[j], g)
            available[j] = False
            counters.commits += 1
            counters.observe(1, len(summary))
    counters.items_processed = n * counters.passes
    return RunReport(
        algorithm="greedy",
        config={"K": K},
        summary=summary,
        fvalue=summary.fvalue,
        counters=counters,
        wall_time=time.perf_counter() - start,
    )

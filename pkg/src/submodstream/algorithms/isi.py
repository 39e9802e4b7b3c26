from __future__ import annotations

import heapq
from typing import Dict, List, Tuple

from ..core import DataPoint, Summary, summary_push, summary_replace
from .base import StreamingAlgorithm, execute


class IndependentSetImprovement(StreamingAlgorithm):
    """Keeps each item's gain at arrival as a fixed weight.

    Once full, an arriving item replaces the lightest stored item when its
    weight is more than twice as large. Weights are never refreshed.
    """

    name = "isi"

    def __init__(self, objective, K: int):
        super().__init__(objective, K)
        self.state = objective.new_state()
        self._summary = Summary(K)
        self._heap: List[Tuple[float, int]] = []
        self._pos: Dict[int, int] = {}

    def process(self, point: DataPoint):
        c = self.counters
        c.items_processed += 1
        if point in self._summary:
            return
        x = point.features
        w = self.state.peek_gain(x)
        c.oracle_queries += 1
        if len(self._summary) < self.K:
            g = self.state.commit(x)
            self._pos[point.ordinal] = len(self._summary)
            summary_push(self._summary, point, g)
            heapq.heappush(self._heap, (w, point.ordinal))
            c.commits += 1
        else:
            w_min, victim = self._heap[0]
            if w > 2.0 * w_min:
                heapq.heapreplace(self._heap, (w, point.ordinal))
                idx = self._pos.pop(victim)
                value = self.state.replace(idx, x)
                self._pos[point.ordinal] = idx
                summary_replace(self._summary, idx, point, value)
                c.commits += 1
        c.observe(1, len(self._summary))

    def weights(self) -> Dict[int, float]:
        return {o: w for w, o in self._heap}

    def summary(self) -> Summary:
        return self._summary.copy()


def run_isi(stream, K: int, objective, protocol: str = "stream"):
    return execute(IndependentSetImprovement(objective, K), stream, protocol)

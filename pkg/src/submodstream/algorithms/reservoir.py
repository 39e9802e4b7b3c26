from __future__ import annotations

from typing import List, Optional

import numpy as np

from ..core import DataPoint, Summary
from .base import StreamingAlgorithm, execute


class RandomReservoir(StreamingAlgorithm):
    """Uniform sample of K items via reservoir sampling; ignores the objective until the end."""

    name = "random"

    def __init__(self, objective, K: int, seed: Optional[int] = 0):
        super().__init__(objective, K, seed)
        self._rng = np.random.default_rng(seed)
        self._items: List[DataPoint] = []
        self._ordinals = set()
        self._seen = 0
        self._cached: Optional[Summary] = None

    def process(self, point: DataPoint):
        self.counters.items_processed += 1
        if point.ordinal in self._ordinals:
            return
        self._seen += 1
        if len(self._items) < self.K:
            self._items.append(point)
            self._ordinals.add(point.ordinal)
            self.counters.commits += 1
            self._cached = None
        else:
            j = int(self._rng.integers(1, self._seen + 1))
            if j <= self.K:
                old = self._items[j - 1]
                self._ordinals.discard(old.ordinal)
                self._items[j - 1] = point
                self._ordinals.add(point.ordinal)
                self.counters.commits += 1
                self._cached = None
        self.counters.observe(1, len(self._items))

    def summary(self) -> Summary:
        if self._cached is None:
            value = 0.0
            if self._items:
                self.counters.oracle_queries += 1
                value = self.objective.evaluate(np.vstack([p.features for p in self._items]))
            self._cached = Summary(self.K, list(self._items), value)
        return self._cached.copy()

    def config(self):
        return {"K": self.K}


def run_random(stream, K: int, objective, seed: Optional[int] = 0, protocol: str = "stream"):
    return execute(RandomReservoir(objective, K, seed), stream, protocol)

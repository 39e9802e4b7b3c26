from __future__ import annotations

import math
from typing import List, Optional

import numpy as np

from ..core import DataPoint, Summary
from .base import StreamingAlgorithm, execute


def quickstream_l(epsilon: float) -> int:
    return math.ceil(math.log2(1.0 / (4.0 * epsilon))) + 3


class QuickStream(StreamingAlgorithm):
    """Buffers ``c`` items and evaluates f once per full buffer.

    A buffer is kept whole when it raises f(A) by at least ``f(A)/K``. ``A``
    is trimmed to its most recent items once it grows past
    ``2 c l (K+1) log2 K``. The answer is the best block of a seeded random
    partition of the ``cK`` most recent items of ``A``.
    """

    name = "quickstream"

    def __init__(self, objective, K: int, c: int = 1, epsilon: float = 0.01, seed: Optional[int] = 0):
        if K < 2:
            raise ValueError("QuickStream needs K >= 2")
        if c < 1:
            raise ValueError("c must be a positive integer")
        super().__init__(objective, K, seed)
        self.c = int(c)
        self.epsilon = float(epsilon)
        self.l = quickstream_l(epsilon)
        keep = self.c * self.l * (self.K + 1) * math.log2(self.K)
        self.trim_at = 2.0 * keep
        self.keep = max(int(math.floor(keep)), self.c * self.K)
        self.state = objective.new_state()
        self.A: List[DataPoint] = []
        self.C: List[DataPoint] = []
        self._in_A = set()
        self._cached: Optional[Summary] = None

    def _rebuild(self):
        self.state = self.objective.new_state()
        for p in self.A:
            self.state.commit(p.features)
        self.counters.oracle_queries += 1

    def process(self, point: DataPoint):
        c = self.counters
        c.items_processed += 1
        if point.ordinal in self._in_A or any(p.ordinal == point.ordinal for p in self.C):
            return
        self.C.append(point)
        if len(self.C) == self.c:
            trial = self.state.clone()
            for p in self.C:
                trial.commit(p.features)
            c.oracle_queries += 1
            if trial.value - self.state.value >= self.state.value / self.K:
                self.state = trial
                self.A.extend(self.C)
                self._in_A.update(p.ordinal for p in self.C)
                c.commits += len(self.C)
                self._cached = None
            if len(self.A) >= self.trim_at:
                self.A = self.A[-self.keep:]
                self._in_A = {p.ordinal for p in self.A}
                self._rebuild()
                self._cached = None
            c.observe(1, len(self.A) + len(self.C))
            self.C = []
        else:
            c.observe(1, len(self.A) + len(self.C))

    def summary(self) -> Summary:
        if self._cached is None:
            recent = self.A[-self.c * self.K:]
            rng = np.random.default_rng(self.seed)
            order = rng.permutation(len(recent))
            blocks = [[recent[i] for i in order[j:j + self.K]] for j in range(0, len(recent), self.K)]
            best = Summary(self.K)
            for block in blocks:
                value = self.objective.evaluate(np.vstack([p.features for p in block]))
                self.counters.oracle_queries += 1
                if value > best.fvalue or not best.items:
                    best = Summary(self.K, list(block), value)
            self._cached = best
        return self._cached.copy()

    def config(self):
        return {"K": self.K, "c": self.c, "epsilon": self.epsilon}


def run_quickstream(stream, K: int, objective, c: int = 1, epsilon: float = 0.01, seed: Optional[int] = 0, protocol: str = "stream"):
    return execute(QuickStream(objective, K, c, epsilon, seed), stream, protocol)

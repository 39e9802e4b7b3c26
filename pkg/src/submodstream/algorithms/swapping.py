"""Exchange-based maximizers: fill to K, then swap in items that improve f enough."""

from __future__ import annotations

from typing import Optional

import numpy as np

from ..core import DataPoint, Summary, summary_push, summary_replace
from .base import StreamingAlgorithm, execute, run_batch


class _SwapStreaming(StreamingAlgorithm):
    def __init__(self, objective, K: int):
        super().__init__(objective, K)
        self.state = objective.new_state()
        self._summary = Summary(K)
        self.swaps = 0
        self._swapped_this_pass = False

    def required_gain(self) -> float:
        raise NotImplementedError

    def begin_pass(self):
        super().begin_pass()
        self._swapped_this_pass = False

    def process(self, point: DataPoint):
        c = self.counters
        c.items_processed += 1
        if point in self._summary:
            return
        x = point.features
        if len(self._summary) < self.K:
            g = self.state.commit(x)
            c.oracle_queries += 1
            summary_push(self._summary, point, g)
            c.commits += 1
        else:
            gains = self.state.swap_gains(x)
            c.oracle_queries += gains.size
            u = int(np.argmax(gains))
            if gains[u] >= self.required_gain():
                value = self.state.replace(u, x)
                summary_replace(self._summary, u, point, value)
                c.commits += 1
                self.swaps += 1
                self._swapped_this_pass = True
        c.observe(1, len(self._summary))

    def summary(self) -> Summary:
        return self._summary.copy()


class StreamGreedy(_SwapStreaming):
    """Swaps when the best exchange improves f by at least ``nu``.

    Multi-pass: keeps re-reading the data until a full pass makes no swap.
    """

    name = "stream-greedy"
    streaming = False

    def __init__(self, objective, K: int, nu: float):
        super().__init__(objective, K)
        if not nu > 0:
            raise ValueError("nu must be positive")
        self.nu = float(nu)

    def required_gain(self) -> float:
        return self.nu

    def wants_another_pass(self) -> bool:
        return len(self._summary) < self.K or self._swapped_this_pass

    def config(self):
        return {"K": self.K, "nu": self.nu}


class PreemptionStreaming(_SwapStreaming):
    """Swaps when the best exchange improves f by at least ``c f(S) / K``."""

    name = "preemption"

    def __init__(self, objective, K: int, c: float = 1.0):
        super().__init__(objective, K)
        if not c > 0:
            raise ValueError("c must be positive")
        self.c = float(c)

    def required_gain(self) -> float:
        return self.c * self._summary.fvalue / self.K

    def config(self):
        return {"K": self.K, "c": self.c}


def run_stream_greedy(data, K: int, objective, nu: float, max_passes: Optional[int] = None):
    if max_passes is None:
        max_passes = K
    return run_batch(StreamGreedy(objective, K, nu), data, max_passes)


def run_preemption(stream, K: int, objective, c: float = 1.0, protocol: str = "stream"):
    return execute(PreemptionStreaming(objective, K, c), stream, protocol)

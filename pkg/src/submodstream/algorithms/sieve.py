"""SieveStreaming and SieveStreaming++."""

from __future__ import annotations

from typing import Optional

import numpy as np

from ..core import DataPoint, Summary
from ..thresholds import DEFAULT_EPSILON, ThresholdGrid, power_range
from .base import SieveBank, StreamingAlgorithm, execute, resolve_m


def sieve_cutoff(K: int):
    def cutoff(v: np.ndarray, f_S: float, size: int) -> np.ndarray:
        return (v / 2.0 - f_S) / (K - size)

    return cutoff


class SieveStreaming(StreamingAlgorithm):
    """One sieve per grid threshold v; each keeps items passing the v-cutoff.

    With ``m_policy="estimate"`` the grid follows the running maximum
    singleton: thresholds that fall below it are dropped and new ones above
    the old top are opened empty.
    """

    name = "sieve-streaming"

    def __init__(self, objective, K: int, epsilon: float = DEFAULT_EPSILON, m_policy=None):
        super().__init__(objective, K)
        self.epsilon = float(epsilon)
        self.m = resolve_m(m_policy, objective)
        self.estimate = self.m is None
        self.bank = SieveBank(objective, self.K, self.counters)
        self._cutoff = sieve_cutoff(self.K)
        self._top = None
        if not self.estimate:
            self._open(self.m)

    def _open(self, m: float):
        grid = ThresholdGrid(m, self.K, self.epsilon)
        self.bank.drop_below(grid.value(grid.i_lo))
        live_top = self._top
        new = [v for v in grid.thresholds() if live_top is None or v > live_top]
        self.bank.add(new)
        self._top = grid.value(grid.i_hi)
        self.grid = grid

    def _track_m(self, point: DataPoint):
        s = self.objective.singleton(point.features)
        self.counters.oracle_queries += 1
        if self.m is None or s > self.m:
            self.m = s
            self.counters.resets += 1
            self._open(s)

    def process(self, point: DataPoint):
        self.counters.items_processed += 1
        if self.estimate:
            self._track_m(point)
        self.bank.offer(point, self._cutoff)
        self.counters.observe(self.bank.n_candidates, self.bank.n_elements)

    def summary(self) -> Summary:
        node = self.bank.best()
        return node.summary.copy() if node is not None else Summary(self.K)

    def config(self):
        return {"K": self.K, "epsilon": self.epsilon, "m": "estimate" if self.estimate else self.m}


class SieveStreamingPP(StreamingAlgorithm):
    """SieveStreaming++: per-item thresholds in ``[tau_min/(1+eps), m]``.

    ``tau_min = max(LB, m) / (2K)`` where ``LB`` is the best sieve value so
    far; sieves whose threshold falls below the live range are discarded and
    an item joins a sieve when its gain reaches the sieve's threshold.
    """

    name = "sieve-streaming-pp"

    def __init__(self, objective, K: int, epsilon: float = DEFAULT_EPSILON, m_policy=None):
        super().__init__(objective, K)
        self.epsilon = float(epsilon)
        self.m = resolve_m(m_policy, objective)
        self.estimate = self.m is None
        self.base = 1.0 + self.epsilon
        self.bank = SieveBank(objective, self.K, self.counters)
        self.lower_bound = 0.0
        self.tau_min = 0.0
        self._live: Optional[tuple] = None

    @staticmethod
    def _cutoff(v: np.ndarray, f_S: float, size: int) -> np.ndarray:
        return v

    def _refresh(self):
        self.tau_min = max(self.lower_bound, self.m) / (2.0 * self.K)
        lo = self.tau_min / self.base
        i_lo, i_hi = power_range(lo, self.m, self.epsilon)
        self.bank.drop_below(self.base ** i_lo)
        if self._live is None:
            start = i_lo
        else:
            start = max(i_lo, self._live[1] + 1)
        self.bank.add([self.base ** i for i in range(start, i_hi + 1)])
        self._live = (i_lo, max(i_hi, self._live[1]) if self._live else i_hi)

    def process(self, point: DataPoint):
        c = self.counters
        c.items_processed += 1
        if self.estimate:
            s = self.objective.singleton(point.features)
            c.oracle_queries += 1
            if self.m is None or s > self.m:
                self.m = s
                c.resets += 1
        self._refresh()
        self.bank.offer(point, self._cutoff)
        self.lower_bound = max(self.lower_bound, self.bank.best_value())
        c.observe(self.bank.n_candidates, self.bank.n_elements)

    def summary(self) -> Summary:
        node = self.bank.best()
        return node.summary.copy() if node is not None else Summary(self.K)

    def config(self):
        return {"K": self.K, "epsilon": self.epsilon, "m": "estimate" if self.estimate else self.m}


def run_sieve_streaming(stream, K: int, objective, epsilon: float = DEFAULT_EPSILON, m_policy=None, protocol: str = "stream"):
    return execute(SieveStreaming(objective, K, epsilon, m_policy), stream, protocol)


def run_sieve_streaming_pp(stream, K: int, objective, epsilon: float = DEFAULT_EPSILON, m_policy=None, protocol: str = "stream"):
    return execute(SieveStreamingPP(objective, K, epsilon, m_policy), stream, protocol)

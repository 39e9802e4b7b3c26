from __future__ import annotations

from typing import Optional, Union

from ..core import DataPoint, Summary, summary_push
from ..thresholds import (
    DEFAULT_EPSILON,
    RuleOfThreeConfig,
    ThresholdGrid,
    grid_next_descending,
    m_estimator_update,
)
from .base import StreamingAlgorithm, execute, resolve_m, sieve_accepts


class ThreeSieves(StreamingAlgorithm):
    """Single summary, single threshold, lowered after T consecutive rejections.

    The threshold walks the grid downward starting at its largest value. An
    item joins when its gain passes the sieve cutoff for the current
    threshold (resetting the rejection count). After ``T`` rejections in a row
    the next smaller threshold is taken; once the grid is exhausted the
    summary is final even if it holds fewer than K items.

    Under ``m_policy="estimate"`` a new maximum singleton value discards the
    summary and restarts from the top of the regenerated grid.
    """

    name = "three-sieves"

    def __init__(self, objective, K: int, epsilon: float = DEFAULT_EPSILON,
                 T: Union[int, RuleOfThreeConfig, None] = None, m_policy=None):
        super().__init__(objective, K)
        self.epsilon = float(epsilon)
        if not isinstance(T, RuleOfThreeConfig):
            T = RuleOfThreeConfig(T=T)
        self.rule = T
        self.T = T.resolve()
        self.m = resolve_m(m_policy, objective)
        self.estimate = self.m is None
        self.exhausted = False
        self.t = 0
        self._restart()

    def _restart(self):
        self.state = self.objective.new_state()
        self._summary = Summary(self.K)
        self.t = 0
        self.exhausted = False
        if self.m is None:
            self.grid = None
            self.v = None
            return
        self.grid = ThresholdGrid(self.m, self.K, self.epsilon)
        self.v, self._cursor = grid_next_descending(self.grid, self.grid.top())

    def _lower_threshold(self):
        nxt = grid_next_descending(self.grid, self._cursor)
        self.t = 0
        if nxt is None:
            self.exhausted = True
            return
        self.v, self._cursor = nxt
        self.counters.threshold_drops += 1

    def process(self, point: DataPoint):
        c = self.counters
        c.items_processed += 1
        if self.estimate:
            singleton = self.objective.singleton(point.features)
            c.oracle_queries += 1
            self.m, reset = m_estimator_update(self.m or 0.0, singleton)
            if reset:
                c.resets += 1
                self._restart()
        s = self._summary
        c.observe(1, len(s))
        if self.exhausted or len(s) >= self.K or point in s:
            return
        gain = self.state.peek_gain(point.features)
        c.oracle_queries += 1
        if sieve_accepts(self.v, s.fvalue, self.K, len(s), gain):
            g = self.state.commit(point.features)
            summary_push(s, point, g)
            c.commits += 1
            c.observe(1, len(s))
            self.t = 0
        else:
            self.t += 1
            if self.t >= self.T:
                self._lower_threshold()

    def wants_another_pass(self) -> bool:
        return len(self._summary) < self.K and not self.exhausted

    def summary(self) -> Summary:
        return self._summary.copy()

    def config(self):
        cfg = {"K": self.K, "epsilon": self.epsilon, "m": "estimate" if self.estimate else self.m}
        cfg.update(self.rule.as_dict())
        return cfg


def run_three_sieves(stream, K: int, objective, epsilon: float = DEFAULT_EPSILON,
                     T: Union[int, RuleOfThreeConfig, None] = None, m_policy=None, protocol: str = "stream"):
    return execute(ThreeSieves(objective, K, epsilon, T, m_policy), stream, protocol)

"""Single-pass Salsa: several threshold rules run side by side over one grid."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from ..core import DataPoint, Summary
from ..thresholds import DEFAULT_EPSILON, ThresholdGrid
from .base import SieveBank, StreamingAlgorithm, execute, resolve_m
from .sieve import sieve_cutoff

RULES = ("sieve", "dense", "sparse")


class Salsa(StreamingAlgorithm):
    """Runs one sieve family per acceptance rule and returns the best summary overall.

    Rules, for a grid value ``v``:

    * ``sieve``: ``gain >= (v/2 - f(S)) / (K - |S|)``
    * ``dense``: fixed cutoff ``gain >= v / (2K)``
    * ``sparse``: needs ``length_hint``. Before position
      ``length_hint * (1 - 1/K)`` only items worth ``(v - f(S)) / (K - |S|)``
      are taken; in the tail the sieve cutoff applies, so sparse streams can
      still fill the summary.
    """

    name = "salsa"

    def __init__(
        self,
        objective,
        K: int,
        epsilon: float = DEFAULT_EPSILON,
        m_policy=None,
        length_hint: Optional[int] = None,
        rules: Sequence[str] = RULES,
    ):
        super().__init__(objective, K)
        unknown = set(rules) - set(RULES)
        if unknown:
            raise ValueError(f"unknown Salsa rules {sorted(unknown)}")
        self.epsilon = float(epsilon)
        self.m = resolve_m(m_policy, objective)
        self.estimate = self.m is None
        self.length_hint = length_hint
        self.rules = [r for r in RULES if r in rules]
        if "sparse" in self.rules and length_hint is None:
            self.rules.remove("sparse")
            self.notes["sparse_rule"] = "disabled: no length_hint"
        self.banks = {r: SieveBank(objective, self.K, self.counters) for r in self.rules}
        self.position = 0
        self._top = None
        K_ = self.K
        sieve = sieve_cutoff(K_)
        self._cutoffs = {
            "sieve": sieve,
            "dense": lambda v, f, size: v / (2.0 * K_),
            "sparse": self._sparse_cutoff,
        }
        if not self.estimate:
            self._open(self.m)

    def _sparse_cutoff(self, v: np.ndarray, f_S: float, size: int) -> np.ndarray:
        if self.position >= self.length_hint * (1.0 - 1.0 / self.K):
            return (v / 2.0 - f_S) / (self.K - size)
        return (v - f_S) / (self.K - size)

    def _open(self, m: float):
        grid = ThresholdGrid(m, self.K, self.epsilon)
        new = [v for v in grid.thresholds() if self._top is None or v > self._top]
        for bank in self.banks.values():
            bank.drop_below(grid.value(grid.i_lo))
            bank.add(new)
        self._top = grid.value(grid.i_hi)

    def begin_pass(self):
        super().begin_pass()
        self.position = 0

    def process(self, point: DataPoint):
        c = self.counters
        c.items_processed += 1
        if self.estimate:
            s = self.objective.singleton(point.features)
            c.oracle_queries += 1
            if self.m is None or s > self.m:
                self.m = s
                c.resets += 1
                self._open(s)
        for rule in self.rules:
            self.banks[rule].offer(point, self._cutoffs[rule])
        self.position += 1
        c.observe(
            sum(b.n_candidates for b in self.banks.values()),
            sum(b.n_elements for b in self.banks.values()),
        )

    def summary(self) -> Summary:
        best = None
        for rule in self.rules:
            node = self.banks[rule].best()
            if node is not None and (best is None or node.summary.fvalue > best.summary.fvalue):
                best = node
        return best.summary.copy() if best is not None else Summary(self.K)

    def config(self):
        return {
            "K": self.K,
            "epsilon": self.epsilon,
            "m": "estimate" if self.estimate else self.m,
            "length_hint": self.length_hint,
            "rules": ",".join(self.rules),
        }


def run_salsa(stream, K: int, objective, epsilon: float = DEFAULT_EPSILON, m_policy=None,
              length_hint: Optional[int] = None, rules: Sequence[str] = RULES, protocol: str = "stream"):
    return execute(Salsa(objective, K, epsilon, m_policy, length_hint, rules), stream, protocol)

"""Run loop plumbing shared by all maximizers."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np

from ..core import DataPoint, RunCounters, Summary, summary_push
from ..objectives import Objective, ObjectiveState


@dataclass
class RunReport:
    algorithm: str
    config: Dict[str, Any]
    summary: Summary
    fvalue: float
    counters: RunCounters
    wall_time: float
    seed: Optional[int] = None
    relative_performance: Optional[float] = None
    notes: Dict[str, Any] = field(default_factory=dict)

    @property
    def K(self) -> int:
        return self.summary.capacity

    def __repr__(self):
        return (
            f"RunReport({self.algorithm}, K={self.K}, |S|={len(self.summary)}, "
            f"f={self.fvalue:.6g}, queries={self.counters.oracle_queries})"
        )


def sieve_accepts(v: float, f_S: float, K: int, size: int, gain: float) -> bool:
    """Sieve acceptance: ``gain >= (v/2 - f(S)) / (K - |S|)``."""
    return gain >= (v / 2.0 - f_S) / (K - size)


def resolve_m(m_policy, objective: Objective) -> Optional[float]:
    """Turn an m policy into a known value, or ``None`` for on-the-fly estimation.

    ``m_policy`` is a positive number, ``"known"`` (use the objective's analytic
    singleton maximum), ``"estimate"``, or ``None`` (known when available).
    """
    if m_policy is None:
        return objective.max_singleton
    if m_policy == "estimate":
        return None
    if m_policy == "known":
        m = objective.max_singleton
        if m is None:
            raise ValueError(f"{objective!r} has no analytic singleton maximum; pass m explicitly")
        return m
    m = float(m_policy)
    if not m > 0:
        raise ValueError("known m must be positive")
    return m


class StreamingAlgorithm:
    """One maximizer consuming items one at a time via :meth:`process`."""

    name = "abstract"
    streaming = True

    def __init__(self, objective: Objective, K: int, seed: Optional[int] = None):
        if K < 1:
            raise ValueError("K must be a positive integer")
        self.objective = objective
        self.K = int(K)
        self.seed = seed
        self.counters = RunCounters()
        self.notes: Dict[str, Any] = {}

    def config(self) -> Dict[str, Any]:
        return {"K": self.K}

    def begin_pass(self):
        self.counters.passes += 1

    def process(self, point: DataPoint):
        raise NotImplementedError

    def summary(self) -> Summary:
        raise NotImplementedError

    def wants_another_pass(self) -> bool:
        return len(self.summary()) < self.K

    def report(self, wall_time: float) -> RunReport:
        s = self.summary()
        return RunReport(
            algorithm=self.name,
            config=self.config(),
            summary=s,
            fvalue=s.fvalue,
            counters=self.counters,
            wall_time=wall_time,
            seed=self.seed,
            notes=dict(self.notes),
        )


def run_stream(alg: StreamingAlgorithm, stream: Iterable[DataPoint]) -> RunReport:
    """Feed every item exactly once."""
    start = time.perf_counter()
    alg.begin_pass()
    for p in stream:
        alg.process(p)
    return alg.report(time.perf_counter() - start)


def run_batch(alg: StreamingAlgorithm, data: Sequence[DataPoint], max_passes: Optional[int] = None) -> RunReport:
    """Re-feed the dataset with state retained until the summary is full.

    At most ``max_passes`` passes (default ``K``); timing covers every pass.
    """
    if max_passes is None:
        max_passes = alg.K
    start = time.perf_counter()
    while True:
        alg.begin_pass()
        for p in data:
            alg.process(p)
        if alg.counters.passes >= max_passes or not alg.wants_another_pass():
            break
    return alg.report(time.perf_counter() - start)


def execute(alg: StreamingAlgorithm, data, protocol: str = "stream", max_passes: Optional[int] = None) -> RunReport:
    if protocol == "stream":
        return run_stream(alg, data)
    if protocol == "batch":
        return run_batch(alg, data, max_passes)
    raise ValueError(f"unknown protocol {protocol!r}")


class _Node:
    """A summary shared by every candidate whose thresholds are in ``thresholds``."""

    __slots__ = ("state", "summary", "thresholds")

    def __init__(self, state: ObjectiveState, summary: Summary, thresholds: np.ndarray):
        self.state = state
        self.summary = summary
        self.thresholds = thresholds


# cutoff(thresholds, f(S), |S|) -> per-candidate minimum gain
Cutoff = Callable[[np.ndarray, float, int], np.ndarray]


class SieveBank:
    """A family of threshold candidates with copy-on-write summaries.

    Candidates that have accepted exactly the same items share one objective
    state. Every acceptance rule used here is non-decreasing in the
    threshold, so an item is accepted by a prefix of each group's sorted
    thresholds and groups stay contiguous threshold intervals. Counters are
    kept per logical candidate, identical to running each sieve separately.
    """

    def __init__(self, objective: Objective, K: int, counters: RunCounters):
        self.objective = objective
        self.K = K
        self.counters = counters
        self.nodes: List[_Node] = []

    def add(self, thresholds: Sequence[float]):
        """Create empty candidates for ``thresholds`` (ascending, above all live ones)."""
        th = np.asarray(thresholds, dtype=np.float64)
        if th.size:
            self.nodes.append(_Node(self.objective.new_state(), Summary(self.K), th))

    def drop_below(self, lo: float):
        """Discard candidates whose threshold is below ``lo``."""
        kept = []
        for node in self.nodes:
            th = node.thresholds
            if th[-1] < lo:
                continue
            if th[0] < lo:
                node.thresholds = th[th >= lo]
            kept.append(node)
        self.nodes = kept

    @property
    def n_candidates(self) -> int:
        return sum(node.thresholds.size for node in self.nodes)

    @property
    def n_elements(self) -> int:
        return sum(node.thresholds.size * len(node.summary) for node in self.nodes)

    def thresholds(self) -> np.ndarray:
        if not self.nodes:
            return np.empty(0)
        return np.concatenate([node.thresholds for node in self.nodes])

    def offer(self, point: DataPoint, cutoff: Cutoff):
        """Offer ``point`` to every candidate that still has room."""
        x = point.features
        out = []
        for node in self.nodes:
            s = node.summary
            if len(s) >= self.K or point in s:
                out.append(node)
                continue
            th = node.thresholds
            gain = node.state.peek_gain(x)
            self.counters.oracle_queries += th.size
            accept = gain >= cutoff(th, s.fvalue, len(s))
            n_acc = int(np.count_nonzero(accept))
            if n_acc == 0:
                out.append(node)
                continue
            self.counters.commits += n_acc
            if n_acc == th.size:
                g = node.state.commit(x)
                summary_push(s, point, g)
                out.append(node)
                continue
            state = node.state.clone()
            g = state.commit(x)
            new = _Node(state, summary_push(s.copy(), point, g), th[accept])
            node.thresholds = th[~accept]
            out.append(new)
            out.append(node)
        self.nodes = out

    def best(self) -> Optional[_Node]:
        """Node with the largest value; ties go to the lowest threshold."""
        best = None
        for node in self.nodes:
            if best is None or node.summary.fvalue > best.summary.fvalue:
                best = node
        return best

    def best_value(self) -> float:
        node = self.best()
        return node.summary.fvalue if node is not None else 0.0

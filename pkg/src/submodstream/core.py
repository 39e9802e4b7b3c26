"""Shared domain types: stream items, summaries and run counters."""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Iterable, List, Sequence

import numpy as np


class CapacityExceededError(ValueError):
    pass


class DuplicateOrdinalError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class DataPoint:
    """One stream item: its arrival index plus a dense feature vector."""

    ordinal: int
    features: np.ndarray

    def __post_init__(self):
        if self.ordinal < 0:
            raise ValueError(f"ordinal must be non-negative, got {self.ordinal}")
        x = np.asarray(self.features, dtype=np.float64)
        if x.ndim != 1 or x.size < 1:
            raise ValueError("features must be a non-empty 1-d vector")
        if not np.all(np.isfinite(x)):
            raise ValueError(f"item {self.ordinal} has non-finite features")
        x.setflags(write=False)
        object.__setattr__(self, "features", x)

    @property
    def dim(self) -> int:
        return self.features.shape[0]

    def __repr__(self):
        return f"DataPoint({self.ordinal}, d={self.dim})"


def as_points(X: Iterable[Sequence[float]], start: int = 0) -> List[DataPoint]:
    """Wrap rows of a matrix as consecutively numbered DataPoints."""
    return [DataPoint(start + i, np.asarray(row, dtype=np.float64)) for i, row in enumerate(X)]


def stack(points: Sequence[DataPoint]) -> np.ndarray:
    if not points:
        return np.empty((0, 0))
    return np.vstack([p.features for p in points])


@dataclass
class Summary:
    """Selected items in insertion order, with the objective value carried alongside."""

    capacity: int
    items: List[DataPoint] = field(default_factory=list)
    fvalue: float = 0.0

    def __post_init__(self):
        if self.capacity < 1:
            raise ValueError("capacity must be a positive integer")
        self._ordinals = {p.ordinal for p in self.items}

    def __len__(self):
        return len(self.items)

    def __contains__(self, point: DataPoint) -> bool:
        return point.ordinal in self._ordinals

    @property
    def full(self) -> bool:
        return len(self.items) >= self.capacity

    @property
    def ordinals(self) -> List[int]:
        return [p.ordinal for p in self.items]

    def copy(self) -> "Summary":
        return Summary(self.capacity, list(self.items), self.fvalue)


def summary_push(s: Summary, e: DataPoint, gain: float) -> Summary:
    """Append ``e`` to ``s`` in place and add ``gain`` to its value."""
    if len(s.items) >= s.capacity:
        raise CapacityExceededError(f"summary already holds {s.capacity} items")
    if e.ordinal in s._ordinals:
        raise DuplicateOrdinalError(f"item {e.ordinal} is already in the summary")
    s.items.append(e)
    s._ordinals.add(e.ordinal)
    s.fvalue += gain
    return s


def summary_replace(s: Summary, idx: int, e: DataPoint, new_value: float) -> Summary:
    """Put ``e`` at position ``idx`` (dropping the old item) and set the value."""
    if e.ordinal in s._ordinals:
        raise DuplicateOrdinalError(f"item {e.ordinal} is already in the summary")
    old = s.items[idx]
    s._ordinals.discard(old.ordinal)
    s.items[idx] = e
    s._ordinals.add(e.ordinal)
    s.fvalue = new_value
    return s


@dataclass
class RunCounters:
    """Resource accounting for one run.

    ``peak_elements`` counts stored items summed over every live candidate
    summary, ``peak_candidates`` the number of simultaneously live summaries.
    """

    oracle_queries: int = 0
    commits: int = 0
    items_processed: int = 0
    peak_candidates: int = 0
    peak_elements: int = 0
    passes: int = 0
    threshold_drops: int = 0
    resets: int = 0

    def observe(self, candidates: int, elements: int):
        if candidates > self.peak_candidates:
            self.peak_candidates = candidates
        if elements > self.peak_elements:
            self.peak_elements = elements

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


def relative_performance(f_alg: float, f_greedy: float) -> float:
    """Ratio of an algorithm's objective value to the Greedy reference."""
    if not f_greedy > 0:
        raise ZeroDivisionError(f"reference value must be positive, got {f_greedy}")
    return f_alg / f_greedy

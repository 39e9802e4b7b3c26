"""Geometric threshold grids, the Rule of Three and running singleton maxima."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

DEFAULT_EPSILON = 0.001
DEFAULT_T = 5000


class EmptyGridError(ValueError):
    pass


def power_range(lo: float, hi: float, epsilon: float) -> Tuple[int, int]:
    """Exponents ``i`` with ``lo <= (1+eps)^i <= hi``, as an inclusive pair.

    The log-based estimate is corrected by scanning one step either way, so
    exact powers at the boundaries are never lost to rounding. The returned
    pair is empty (``i_lo > i_hi``) when no power fits.
    """
    if not lo > 0 or not hi > 0:
        raise ValueError("grid bounds must be positive")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    base = 1.0 + epsilon
    log_base = math.log(base)
    i_lo = math.ceil(math.log(lo) / log_base)
    while base ** (i_lo - 1) >= lo:
        i_lo -= 1
    while base ** i_lo < lo:
        i_lo += 1
    i_hi = math.floor(math.log(hi) / log_base)
    while base ** (i_hi + 1) <= hi:
        i_hi += 1
    while base ** i_hi > hi:
        i_hi -= 1
    return i_lo, i_hi


class ThresholdGrid:
    """The set ``{(1+eps)^i : m <= (1+eps)^i <= K m}``.

    Values are recomputed as powers on demand; the grid is never materialised
    unless asked for. If rounding leaves no power in range (only possible for
    ``K = 1``), the grid degenerates to the single threshold ``m``.
    """

    def __init__(self, m: float, K: int, epsilon: float):
        if not m > 0:
            raise ValueError("m must be positive")
        if K < 1:
            raise ValueError("K must be a positive integer")
        self.m = float(m)
        self.K = int(K)
        self.epsilon = float(epsilon)
        self.base = 1.0 + self.epsilon
        self.i_lo, self.i_hi = power_range(self.m, self.K * self.m, self.epsilon)
        self.degenerate = self.i_lo > self.i_hi
        if self.degenerate:
            self.i_lo = self.i_hi = 0

    def __len__(self):
        return self.i_hi - self.i_lo + 1

    def value(self, i: int) -> float:
        if self.degenerate:
            return self.m
        return self.base ** i

    def top(self) -> int:
        return self.i_hi

    def thresholds(self) -> List[float]:
        """All thresholds in ascending order."""
        return [self.value(i) for i in range(self.i_lo, self.i_hi + 1)]

    def __iter__(self) -> Iterator[float]:
        return (self.value(i) for i in range(self.i_hi, self.i_lo - 1, -1))

    def __repr__(self):
        return f"ThresholdGrid(m={self.m:g}, K={self.K}, epsilon={self.epsilon:g}, size={len(self)})"


def grid_make(m: float, K: int, epsilon: float) -> ThresholdGrid:
    return ThresholdGrid(m, K, epsilon)


def grid_next_descending(grid: ThresholdGrid, cursor: int) -> Optional[Tuple[float, int]]:
    """Yield the threshold at ``cursor`` and the next cursor, or ``None`` once exhausted.

    Start with ``cursor = grid.top()``.
    """
    if cursor < grid.i_lo:
        return None
    return grid.value(cursor), cursor - 1


def rule_of_three_bound(alpha: float, T: int) -> float:
    """Upper end of the confidence interval ``[0, -ln(alpha)/T]`` after T misses."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    return -math.log(alpha) / T


def rule_of_three_T(alpha: float, tau: float) -> int:
    """Smallest ``T`` whose Rule-of-Three bound is at most ``tau``."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if not 0 < tau < 1:
        raise ValueError("tau must lie in (0, 1)")
    numer = -math.log(alpha)
    T = max(1, math.ceil(numer / tau))
    while T > 1 and numer / (T - 1) <= tau:
        T -= 1
    while numer / T > tau:
        T += 1
    return T


@dataclass(frozen=True)
class RuleOfThreeConfig:
    """Either ``T`` directly or a confidence ``alpha`` with margin ``tau``."""

    T: Optional[int] = None
    alpha: Optional[float] = None
    tau: Optional[float] = None

    def __post_init__(self):
        if self.T is not None:
            if self.alpha is not None or self.tau is not None:
                raise ValueError("give either T or (alpha, tau), not both")
            if self.T < 1:
                raise ValueError("T must be a positive integer")
        elif (self.alpha is None) != (self.tau is None):
            raise ValueError("alpha and tau must be given together")

    def resolve(self) -> int:
        if self.T is not None:
            return int(self.T)
        if self.alpha is None:
            return DEFAULT_T
        return rule_of_three_T(self.alpha, self.tau)

    def as_dict(self):
        if self.alpha is not None:
            return {"alpha": self.alpha, "tau": self.tau, "T": self.resolve()}
        return {"T": self.resolve()}


def m_estimator_update(current_m: float, singleton_value: float) -> Tuple[float, bool]:
    """Track the running maximum singleton value; flag when it increases."""
    if singleton_value > current_m:
        return singleton_value, True
    return current_m, False

"""Exhaustive search for small instances."""

from __future__ import annotations

import itertools
import math
from typing import Sequence, Tuple

import numpy as np

from ..core import DataPoint
from ..objectives import Objective

MAX_SUBSETS = 10 ** 6


class InstanceTooLargeError(ValueError):
    pass


def brute_force_opt(data: Sequence[DataPoint], K: int, objective: Objective,
                    max_subsets: int = MAX_SUBSETS) -> Tuple[float, Tuple[int, ...]]:
    """Best value over all subsets of size ``min(K, n)`` and the ordinals achieving it.

    Ties go to the lexicographically smallest ordinal tuple. For a monotone
    objective this is the optimum over all sets of at most K items.
    """
    points = sorted(data, key=lambda p: p.ordinal)
    n = len(points)
    k = min(K, n)
    if math.comb(n, k) > max_subsets:
        raise InstanceTooLargeError(f"C({n}, {k}) subsets exceed the limit of {max_subsets}")
    if k == 0:
        return 0.0, ()
    X = np.vstack([p.features for p in points])
    best_value, best_set = -np.inf, None
    for combo in itertools.combinations(range(n), k):
        value = objective.evaluate(X[list(combo)])
        if value > best_value:
            best_value, best_set = value, combo
    return float(best_value), tuple(points[i].ordinal for i in best_set)


def max_singleton(data: Sequence[DataPoint], objective: Objective) -> float:
    return max(objective.singleton(p.features) for p in data)

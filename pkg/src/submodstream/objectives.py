"""Monotone submodular objectives and their incremental evaluation states.

Every objective exposes ``new_state()`` which returns a mutable state for one
candidate summary. States answer marginal-gain queries without mutating
themselves (``peek_gain``), accept items (``commit``), evaluate and perform
single-item exchanges (``swap_gain`` / ``replace``) and can be cloned.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from typing import Optional

import numpy as np
from scipy.linalg import solve_triangular

#: Floor applied to Schur complements before taking logs or square roots.
SCHUR_FLOOR = 1e-12


class DimensionMismatchError(ValueError):
    pass


def rbf_eval(x, y, length_scale: float) -> float:
    """``exp(-||x - y||^2 / (2 l^2))``."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise DimensionMismatchError(f"cannot compare vectors of shape {x.shape} and {y.shape}")
    if not length_scale > 0:
        raise ValueError("length_scale must be positive")
    diff = x - y
    return math.exp(-float(diff @ diff) / (2.0 * length_scale * length_scale))


class RbfKernel:
    """Gaussian RBF kernel. Normalised: ``k(x, x) = 1``."""

    normalized = True

    def __init__(self, length_scale: float):
        if not length_scale > 0:
            raise ValueError("length_scale must be positive")
        self.length_scale = float(length_scale)
        self._gamma = 1.0 / (2.0 * self.length_scale ** 2)

    @classmethod
    def for_batch(cls, d: int) -> "RbfKernel":
        return cls(1.0 / (2.0 * math.sqrt(d)))

    @classmethod
    def for_stream(cls, d: int) -> "RbfKernel":
        return cls(1.0 / math.sqrt(d))

    def __call__(self, x, y) -> float:
        return rbf_eval(x, y, self.length_scale)

    def diag(self, x) -> float:
        return 1.0

    def cross(self, X: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Kernel values between every row of ``X`` and ``y``."""
        if X.shape[0] == 0:
            return np.empty(0)
        if X.shape[1] != y.shape[0]:
            raise DimensionMismatchError(f"dimension {y.shape[0]} does not match {X.shape[1]}")
        diff = X - y
        return np.exp(-self._gamma * np.einsum("ij,ij->i", diff, diff))

    def gram(self, X: np.ndarray, Y: Optional[np.ndarray] = None) -> np.ndarray:
        if Y is None:
            Y = X
        if X.shape[1] != Y.shape[1]:
            raise DimensionMismatchError(f"dimension {Y.shape[1]} does not match {X.shape[1]}")
        sq = (
            np.einsum("ij,ij->i", X, X)[:, None]
            + np.einsum("ij,ij->i", Y, Y)[None, :]
            - 2.0 * X @ Y.T
        )
        np.maximum(sq, 0.0, out=sq)
        return np.exp(-self._gamma * sq)

    def __repr__(self):
        return f"RbfKernel(length_scale={self.length_scale!r})"


class ObjectiveState(ABC):
    """Evaluation state of one candidate summary."""

    size: int
    value: float

    @abstractmethod
    def peek_gain(self, x: np.ndarray) -> float:
        """Marginal gain of adding ``x``; the state is left unchanged."""

    @abstractmethod
    def commit(self, x: np.ndarray) -> float:
        """Add ``x`` and return the realised gain."""

    @abstractmethod
    def swap_gain(self, idx: int, x: np.ndarray) -> float:
        """``f(S - s_idx + x) - f(S)``; the state is left unchanged."""

    @abstractmethod
    def replace(self, idx: int, x: np.ndarray) -> float:
        """Exchange the item at ``idx`` for ``x`` and return the new value."""

    @abstractmethod
    def clone(self) -> "ObjectiveState":
        pass

    def peek_gains(self, X: np.ndarray) -> np.ndarray:
        return np.array([self.peek_gain(x) for x in X])

    def swap_gains(self, x: np.ndarray) -> np.ndarray:
        return np.array([self.swap_gain(i, x) for i in range(self.size)])


class Objective(ABC):
    @abstractmethod
    def new_state(self) -> ObjectiveState:
        pass

    @abstractmethod
    def evaluate(self, X: np.ndarray) -> float:
        """Value of the set whose rows are ``X``, computed from scratch."""

    def singleton(self, x: np.ndarray) -> float:
        return self.evaluate(np.asarray(x, dtype=np.float64)[None, :])

    @property
    def max_singleton(self) -> Optional[float]:
        """Analytic maximum singleton value, when it does not depend on the data."""
        return None


def logdet_singleton_bound(a: float) -> float:
    """Largest singleton value of the log-det objective under a normalised kernel."""
    if not a > 0:
        raise ValueError("scale a must be positive")
    return 0.5 * math.log1p(a)


class LogDet(Objective):
    """``f(S) = 1/2 log det(I + a K_S)`` over a kernel matrix ``K_S``."""

    def __init__(self, kernel, a: float = 1.0):
        if not a > 0:
            raise ValueError("scale a must be positive")
        self.kernel = kernel
        self.a = float(a)

    def new_state(self) -> "LogDetState":
        return LogDetState(self)

    def matrix(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        return np.eye(X.shape[0]) + self.a * self.kernel.gram(X)

    def evaluate(self, X: np.ndarray) -> float:
        X = np.asarray(X, dtype=np.float64)
        if X.size == 0:
            return 0.0
        L = np.linalg.cholesky(self.matrix(X))
        return float(np.sum(np.log(np.diag(L))))

    def singleton(self, x: np.ndarray) -> float:
        return 0.5 * math.log(max(1.0 + self.a * self.kernel.diag(x), SCHUR_FLOOR))

    @property
    def max_singleton(self) -> Optional[float]:
        if getattr(self.kernel, "normalized", False):
            return logdet_singleton_bound(self.a)
        return None

    def __repr__(self):
        return f"LogDet({self.kernel!r}, a={self.a!r})"


class LogDetState(ObjectiveState):
    """Incremental Cholesky factor ``L`` of ``I + a K_S`` and its inverse.

    Commits extend the factor by one row in O(|S|^2); exchanges refactorise
    from scratch.
    """

    def __init__(self, objective: LogDet):
        self.objective = objective
        self.size = 0
        self.value = 0.0
        self._X = np.empty((0, 0))
        self._L = np.zeros((0, 0))
        self._Linv = np.zeros((0, 0))
        self._peeked = None

    @property
    def rows(self) -> np.ndarray:
        return self._X[: self.size]

    @property
    def factor(self) -> np.ndarray:
        k = self.size
        return self._L[:k, :k]

    def _grow(self, d: int):
        cap = self._L.shape[0]
        if self.size < cap:
            return
        new_cap = max(4, 2 * cap)
        X = np.empty((new_cap, d))
        L = np.zeros((new_cap, new_cap))
        Linv = np.zeros((new_cap, new_cap))
        k = self.size
        if k:
            X[:k] = self._X[:k]
        L[:k, :k] = self._L[:k, :k]
        Linv[:k, :k] = self._Linv[:k, :k]
        self._X, self._L, self._Linv = X, L, Linv

    def _schur(self, x: np.ndarray):
        obj = self.objective
        k = self.size
        d_e = 1.0 + obj.a * obj.kernel.diag(x)
        if k == 0:
            return np.empty(0), d_e
        b = obj.a * obj.kernel.cross(self._X[:k], x)
        c = self._Linv[:k, :k] @ b
        return c, d_e - float(c @ c)

    def peek_gain(self, x: np.ndarray) -> float:
        c, s = self._schur(x)
        self._peeked = (x, c, s)
        if s <= SCHUR_FLOOR:
            return 0.0
        return 0.5 * math.log(s)

    def peek_gains(self, X: np.ndarray) -> np.ndarray:
        obj = self.objective
        k = self.size
        X = np.asarray(X, dtype=np.float64)
        if getattr(obj.kernel, "normalized", False):
            diag = np.ones(X.shape[0])
        else:
            diag = np.array([obj.kernel.diag(x) for x in X])
        s = 1.0 + obj.a * diag
        if k:
            B = obj.a * obj.kernel.gram(self._X[:k], X)
            C = self._Linv[:k, :k] @ B
            s = s - np.einsum("ij,ij->j", C, C)
        gains = 0.5 * np.log(np.maximum(s, SCHUR_FLOOR))
        gains[s <= SCHUR_FLOOR] = 0.0
        return gains

    def commit(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=np.float64)
        if self._peeked is not None and self._peeked[0] is x:
            _, c, s = self._peeked
        else:
            c, s = self._schur(x)
        self._peeked = None
        s = max(s, SCHUR_FLOOR)
        delta = math.sqrt(s)
        self._grow(x.shape[0])
        k = self.size
        self._X[k] = x
        self._L[k, :k] = c
        self._L[k, k] = delta
        if k:
            self._Linv[k, :k] = -(c @ self._Linv[:k, :k]) / delta
        self._Linv[k, k] = 1.0 / delta
        self.size = k + 1
        gain = 0.0 if s <= SCHUR_FLOOR else 0.5 * math.log(s)
        self.value += gain
        return gain

    def _check_index(self, idx: int):
        if not 0 <= idx < self.size:
            raise IndexError(f"position {idx} outside summary of size {self.size}")

    def swap_gain(self, idx: int, x: np.ndarray) -> float:
        self._check_index(idx)
        rows = self._X[: self.size].copy()
        rows[idx] = x
        return self.objective.evaluate(rows) - self.value

    def swap_gains(self, x: np.ndarray) -> np.ndarray:
        """All exchange gains at once.

        Uses ``log det(M_{-u}) = log det(M) + log (M^{-1})_{uu}`` on the
        factor of ``S + x``, which costs O(|S|^2) instead of |S| refactorisations.
        """
        k = self.size
        if k == 0:
            return np.empty(0)
        c, s = self._schur(x)
        s = max(s, SCHUR_FLOOR)
        Linv = self._Linv[:k, :k]
        r = -(c @ Linv) / math.sqrt(s)
        inv_diag = np.einsum("ij,ij->j", Linv, Linv) + r * r
        return 0.5 * math.log(s) + 0.5 * np.log(inv_diag)

    def replace(self, idx: int, x: np.ndarray) -> float:
        self._check_index(idx)
        k = self.size
        self._X[idx] = x
        L = np.linalg.cholesky(self.objective.matrix(self._X[:k]))
        self._L[:k, :k] = L
        self._Linv[:k, :k] = solve_triangular(L, np.eye(k), lower=True)
        self.value = float(np.sum(np.log(np.diag(L))))
        self._peeked = None
        return self.value

    def clone(self) -> "LogDetState":
        other = LogDetState.__new__(LogDetState)
        other.objective = self.objective
        other.size = self.size
        other.value = self.value
        other._X = self._X.copy()
        other._L = self._L.copy()
        other._Linv = self._Linv.copy()
        other._peeked = self._peeked
        return other


class Coverage(Objective):
    """Weighted coverage: each item covers the universe indices where it is positive."""

    def __init__(self, weights):
        w = np.asarray(weights, dtype=np.float64)
        if w.ndim != 1 or np.any(w < 0):
            raise ValueError("weights must be a non-negative vector")
        self.weights = w

    def new_state(self) -> "CoverageState":
        return CoverageState(self)

    def covers(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        if x.shape[-1] != self.weights.shape[0]:
            raise DimensionMismatchError(f"item dimension {x.shape[-1]} != universe size {self.weights.shape[0]}")
        return x > 0

    def evaluate(self, X: np.ndarray) -> float:
        X = np.asarray(X, dtype=np.float64)
        if X.size == 0:
            return 0.0
        covered = self.covers(X).any(axis=0)
        return float(self.weights[covered].sum())

    def __repr__(self):
        return f"Coverage(universe={self.weights.shape[0]})"


class CoverageState(ObjectiveState):
    def __init__(self, objective: Coverage):
        self.objective = objective
        self.size = 0
        self.value = 0.0
        self._rows = []
        self._counts = np.zeros(objective.weights.shape[0], dtype=np.int64)

    def peek_gain(self, x: np.ndarray) -> float:
        new = self.objective.covers(x) & (self._counts == 0)
        return float(self.objective.weights[new].sum())

    def peek_gains(self, X: np.ndarray) -> np.ndarray:
        new = self.objective.covers(X) & (self._counts == 0)
        return new.astype(np.float64) @ self.objective.weights

    def commit(self, x: np.ndarray) -> float:
        gain = self.peek_gain(x)
        self._counts += self.objective.covers(x)
        self._rows.append(np.asarray(x, dtype=np.float64))
        self.size += 1
        self.value += gain
        return gain

    def _exchanged_value(self, idx: int, x: np.ndarray) -> float:
        if not 0 <= idx < self.size:
            raise IndexError(f"position {idx} outside summary of size {self.size}")
        counts = self._counts - self.objective.covers(self._rows[idx]) + self.objective.covers(x)
        return float(self.objective.weights[counts > 0].sum())

    def swap_gain(self, idx: int, x: np.ndarray) -> float:
        return self._exchanged_value(idx, x) - self.value

    def replace(self, idx: int, x: np.ndarray) -> float:
        value = self._exchanged_value(idx, x)
        self._counts += self.objective.covers(x)
        self._counts -= self.objective.covers(self._rows[idx])
        self._rows[idx] = np.asarray(x, dtype=np.float64)
        self.value = value
        return value

    def clone(self) -> "CoverageState":
        other = CoverageState.__new__(CoverageState)
        other.objective = self.objective
        other.size = self.size
        other.value = self.value
        other._rows = list(self._rows)
        other._counts = self._counts.copy()
        return other

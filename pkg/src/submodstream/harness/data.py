"""Dataset ingestion and seeded synthetic streams."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..core import DataPoint


class CsvParseError(ValueError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class DimensionInconsistencyError(ValueError):
    pass


def _is_number(field_: str) -> bool:
    try:
        float(field_)
    except ValueError:
        return False
    return True


def load_csv(path, delimiter: str = ",", header: Optional[bool] = None) -> List[DataPoint]:
    """Read numeric rows as DataPoints numbered from 0.

    ``header=None`` treats the first row as a header when any of its fields
    is not a number. Blank lines are skipped. Non-finite values are rejected.
    """
    points: List[DataPoint] = []
    dim = None
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        for lineno, row in enumerate(reader, start=1):
            if not row or all(not f.strip() for f in row):
                continue
            if lineno == 1 and not points:
                is_header = header if header is not None else not all(_is_number(f) for f in row)
                if is_header:
                    continue
            values = []
            for col, f in enumerate(row, start=1):
                try:
                    v = float(f)
                except ValueError:
                    raise CsvParseError(lineno, col, f"not a number: {f!r}") from None
                if not math.isfinite(v):
                    raise CsvParseError(lineno, col, f"non-finite value {f!r}")
                values.append(v)
            if dim is None:
                dim = len(values)
            elif len(values) != dim:
                raise DimensionInconsistencyError(f"line {lineno} has {len(values)} columns, expected {dim}")
            points.append(DataPoint(len(points), np.array(values)))
    return points


def write_csv(path, points: Sequence[DataPoint], delimiter: str = ","):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, delimiter=delimiter)
        for p in points:
            w.writerow([repr(float(v)) for v in p.features])


@dataclass(frozen=True)
class SyntheticSpec:
    """A Gaussian mixture stream, optionally with drifting active components.

    ``components`` holds ``(mean, scale)`` pairs. For ``kind="drift"``,
    ``segments[j]`` lists the components active between change points
    ``j-1`` and ``j``; by default each segment gets its own component.
    """

    kind: str
    n: int
    components: Tuple[Tuple[Tuple[float, ...], float], ...]
    weights: Optional[Tuple[float, ...]] = None
    change_points: Tuple[int, ...] = ()
    segments: Optional[Tuple[Tuple[int, ...], ...]] = None
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("iid", "drift"):
            raise ValueError(f"unknown stream kind {self.kind!r}")
        if not self.components:
            raise ValueError("at least one component is required")
        dims = {len(mean) for mean, _ in self.components}
        if len(dims) != 1:
            raise ValueError("all component means must have the same dimension")
        cps = list(self.change_points)
        if self.kind == "iid" and cps:
            raise ValueError("iid streams have no change points")
        if any(b <= a for a, b in zip(cps, cps[1:])) or any(c <= 0 or c >= self.n for c in cps):
            raise ValueError("change points must be strictly increasing and inside (0, n)")
        if self.segments is not None and len(self.segments) != len(cps) + 1:
            raise ValueError("need one active component set per segment")
        if self.weights is not None and len(self.weights) != len(self.components):
            raise ValueError("one weight per component")

    @property
    def d(self) -> int:
        return len(self.components[0][0])

    def with_seed(self, seed: int) -> "SyntheticSpec":
        return replace(self, seed=seed)

    def segment_components(self) -> List[Tuple[int, ...]]:
        if self.kind == "iid":
            return [tuple(range(len(self.components)))]
        if self.segments is not None:
            return [tuple(s) for s in self.segments]
        C = len(self.components)
        return [(j % C,) for j in range(len(self.change_points) + 1)]


def generate(spec: SyntheticSpec, return_labels: bool = False):
    """Draw the stream described by ``spec``; identical specs give identical streams."""
    rng = np.random.default_rng(spec.seed)
    means = np.array([m for m, _ in spec.components], dtype=np.float64)
    scales = np.array([s for _, s in spec.components], dtype=np.float64)
    w = np.ones(len(means)) if spec.weights is None else np.asarray(spec.weights, dtype=np.float64)
    bounds = [0, *spec.change_points, spec.n]
    labels = np.empty(spec.n, dtype=np.int64)
    for (lo, hi), active in zip(zip(bounds, bounds[1:]), spec.segment_components()):
        active = np.asarray(active)
        p = w[active] / w[active].sum()
        labels[lo:hi] = active[rng.choice(len(active), size=hi - lo, p=p)]
    X = means[labels] + scales[labels, None] * rng.standard_normal((spec.n, spec.d))
    points = [DataPoint(i, X[i]) for i in range(spec.n)]
    if return_labels:
        return points, labels
    return points


def zipf_weights(n_components: int, exponent: float) -> Tuple[float, ...]:
    """Weights proportional to ``1 / (j+1)^exponent``; exponent 0 is uniform."""
    w = 1.0 / np.arange(1, n_components + 1, dtype=np.float64) ** exponent
    return tuple(float(x) for x in w / w.sum())


def iid_mixture(n: int, d: int, n_components: int = 50, scale: float = 0.05, seed: int = 0,
                skew: float = 0.0) -> SyntheticSpec:
    """Static mixture with means uniform in the unit cube.

    ``skew`` is a Zipf exponent on the component weights: a few components
    then dominate the stream and most items are near-duplicates.
    """
    rng = np.random.default_rng([seed, 0x5EED])
    means = rng.uniform(0.0, 1.0, size=(n_components, d))
    comps = tuple((tuple(map(float, m)), float(scale)) for m in means)
    weights = zipf_weights(n_components, skew) if skew else None
    return SyntheticSpec("iid", n, comps, weights=weights, seed=seed)


def drift_stream(n: int, d: int, n_change_points: int = 5, per_segment: int = 10,
                 scale: float = 0.05, seed: int = 0) -> SyntheticSpec:
    """Evenly spaced change points; each segment draws from its own fresh components."""
    n_seg = n_change_points + 1
    rng = np.random.default_rng([seed, 0xD21F7])
    means = rng.uniform(0.0, 1.0, size=(n_seg * per_segment, d))
    comps = tuple((tuple(map(float, m)), float(scale)) for m in means)
    cps = tuple(int(round(n * (j + 1) / n_seg)) for j in range(n_change_points))
    segs = tuple(tuple(range(j * per_segment, (j + 1) * per_segment)) for j in range(n_seg))
    return SyntheticSpec("drift", n, comps, change_points=cps, segments=segs, seed=seed)

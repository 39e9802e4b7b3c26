"""Experiment grids: every (K, algorithm configuration, seed) cell against a Greedy reference."""

from __future__ import annotations

import itertools
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Union

from ..algorithms import ALGORITHMS, RunReport, execute, is_streaming, make_algorithm, run_greedy
from ..core import DataPoint, relative_performance
from ..objectives import LogDet, RbfKernel
from .data import SyntheticSpec, generate, load_csv

log = logging.getLogger(__name__)


class ConfigurationError(ValueError):
    pass


@dataclass
class AlgorithmSpec:
    """An algorithm name plus parameters; list-valued parameters expand into a grid."""

    name: str
    params: Dict[str, Any] = field(default_factory=dict)

    def expand(self) -> List[Dict[str, Any]]:
        keys = sorted(self.params)
        values = [v if isinstance(v, (list, tuple)) else [v] for v in (self.params[k] for k in keys)]
        return [dict(zip(keys, combo)) for combo in itertools.product(*values)]


@dataclass
class ExperimentSpec:
    source: Union[str, SyntheticSpec, Sequence[DataPoint]]
    algorithms: List[AlgorithmSpec]
    K: Sequence[int] = (20,)
    protocol: str = "batch"
    repetitions: int = 1
    seed: int = 0
    a: float = 1.0
    length_scale: Optional[float] = None
    delimiter: str = ","
    max_passes: Optional[int] = None

    def validate(self):
        if self.protocol not in ("batch", "stream"):
            raise ConfigurationError(f"protocol must be 'batch' or 'stream', got {self.protocol!r}")
        if self.repetitions < 1:
            raise ConfigurationError("repetitions must be at least 1")
        if not self.algorithms:
            raise ConfigurationError("no algorithms given")
        for K in self.K:
            if int(K) < 1:
                raise ConfigurationError("K must be positive")
        for alg in self.algorithms:
            if alg.name not in ALGORITHMS:
                raise ConfigurationError(f"unknown algorithm {alg.name!r}; choose from {', '.join(ALGORITHMS)}")
            if self.protocol == "stream" and alg.name != "greedy" and not is_streaming(alg.name):
                raise ConfigurationError(f"{alg.name} needs several passes and cannot run under the stream protocol")
            if self.protocol == "stream" and alg.name == "greedy":
                raise ConfigurationError("greedy is not a streaming algorithm and cannot run under the stream protocol")
            if alg.name == "stream-greedy" and "nu" not in alg.params:
                raise ConfigurationError("stream-greedy needs nu")

    def seeds(self) -> List[int]:
        return [self.seed + r for r in range(self.repetitions)]


class ExperimentResult(list):
    """Reports in deterministic order; ``failures`` lists cells that raised."""

    def __init__(self, reports=(), failures=()):
        super().__init__(reports)
        self.failures = list(failures)


def _dataset(spec: ExperimentSpec, seed: int) -> List[DataPoint]:
    src = spec.source
    if isinstance(src, SyntheticSpec):
        return generate(src.with_seed(seed))
    if isinstance(src, (str, os.PathLike)):
        return load_csv(src, delimiter=spec.delimiter)
    return list(src)


def default_length_scale(d: int, protocol: str) -> float:
    return 1.0 / (2.0 * math.sqrt(d)) if protocol == "batch" else 1.0 / math.sqrt(d)


def make_objective(data: Sequence[DataPoint], spec: ExperimentSpec) -> LogDet:
    d = data[0].dim if data else 1
    l = spec.length_scale if spec.length_scale is not None else default_length_scale(d, spec.protocol)
    return LogDet(RbfKernel(l), spec.a)


def _run_cell(spec: ExperimentSpec, data: Sequence[DataPoint], seed: int, K: int, name: str,
              params: Dict[str, Any]) -> RunReport:
    objective = make_objective(data, spec)
    if name == "greedy":
        report = run_greedy(data, K, objective)
    else:
        p = dict(params)
        if name in ("random", "quickstream"):
            p.setdefault("seed", seed)
        alg = make_algorithm(name, objective, K, **p)
        report = execute(alg, data, spec.protocol, max_passes=spec.max_passes or K)
    report.seed = seed
    report.notes["protocol"] = spec.protocol
    return report


def _cells(spec: ExperimentSpec):
    for seed in spec.seeds():
        for K in spec.K:
            yield (seed, int(K), "greedy", {})
            for alg in spec.algorithms:
                if alg.name == "greedy":
                    continue
                for params in alg.expand():
                    yield (seed, int(K), alg.name, params)


def _sort_key(r: RunReport):
    cfg = r.config
    return (
        r.K,
        r.algorithm,
        tuple(sorted((k, str(v)) for k, v in cfg.items())),
        r.seed if r.seed is not None else -1,
    )


def run_experiment(spec: ExperimentSpec, parallel: int = 1) -> ExperimentResult:
    """Run every cell of ``spec`` and attach relative performance against Greedy.

    A Greedy reference runs for every (seed, K) pair, under either protocol.
    Dataset errors propagate; cells that raise afterwards are logged and
    collected in ``result.failures`` instead of aborting the grid.
    """
    spec.validate()
    if isinstance(spec.source, SyntheticSpec):
        datasets = {seed: _dataset(spec, seed) for seed in spec.seeds()}
    else:
        shared = _dataset(spec, spec.seed)
        datasets = {seed: shared for seed in spec.seeds()}
    cells = list(_cells(spec))
    reports: List[Optional[RunReport]] = [None] * len(cells)
    failures = []
    if parallel > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            futures = [pool.submit(_run_cell, spec, datasets[cell[0]], *cell) for cell in cells]
            outcomes = []
            for fut in futures:
                try:
                    outcomes.append(fut.result())
                except Exception as exc:  # noqa: BLE001
                    outcomes.append(exc)
    else:
        outcomes = []
        for cell in cells:
            try:
                outcomes.append(_run_cell(spec, datasets[cell[0]], *cell))
            except Exception as exc:  # noqa: BLE001
                outcomes.append(exc)
    for i, (cell, out) in enumerate(zip(cells, outcomes)):
        if isinstance(out, Exception):
            log.warning("cell %s failed: %s", cell, out)
            failures.append({"seed": cell[0], "K": cell[1], "algorithm": cell[2], "params": cell[3], "error": repr(out)})
        else:
            reports[i] = out
    ref = {(r.seed, r.K): r.fvalue for r in reports if r is not None and r.algorithm == "greedy"}
    done = []
    for r in reports:
        if r is None:
            continue
        f_greedy = ref.get((r.seed, r.K))
        if f_greedy is not None and f_greedy > 0:
            r.relative_performance = 1.0 if r.algorithm == "greedy" else relative_performance(r.fvalue, f_greedy)
        done.append(r)
    done.sort(key=_sort_key)
    return ExperimentResult(done, failures)

"""Small-instance verification against exhaustive search.

Each contract runs one algorithm over a seeded family of tiny instances and
counts how often its value falls below the promised fraction of the optimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from ..algorithms import execute, make_algorithm, run_greedy
from ..core import DataPoint, stack
from ..objectives import Coverage, LogDet, Objective, RbfKernel
from ..thresholds import RuleOfThreeConfig
from .data import generate, iid_mixture
from .oracle import brute_force_opt, max_singleton

TOL = 1e-9
E_FACTOR = 1.0 - 1.0 / math.e


@dataclass
class Instance:
    name: str
    data: List[DataPoint]
    objective: Objective
    m: float
    opt: float


@dataclass
class ContractResult:
    contract: str
    ratio: float
    checked: int = 0
    violations: int = 0
    worst: float = math.inf
    flagged: bool = False
    details: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        flag = " (empirical)" if self.flagged else ""
        return (f"{status} {self.contract}{flag}: {self.checked} runs, {self.violations} violations, "
                f"worst f/OPT={self.worst:.4f}, required {self.ratio:.4f}")


def logdet_instance(seed: int, n: int = 12, d: int = 3, K: int = 3) -> Instance:
    """A few tight clusters, so that diversity actually matters."""
    spec = iid_mixture(n, d, n_components=4, scale=0.15, seed=seed)
    data = generate(spec)
    obj = LogDet(RbfKernel.for_stream(d), 1.0)
    opt, _ = brute_force_opt(data, K, obj)
    return Instance(f"logdet-{seed}", data, obj, obj.max_singleton, opt)


def coverage_instance(seed: int, n: int = 12, universe: int = 10, K: int = 3) -> Instance:
    rng = np.random.default_rng([seed, 0xC0])
    weights = rng.uniform(0.1, 1.0, size=universe)
    X = (rng.random((n, universe)) < 0.3).astype(np.float64)
    # every item covers something, so all singletons are positive
    empty = X.sum(axis=1) == 0
    X[empty, rng.integers(0, universe, size=int(empty.sum()))] = 1.0
    data = [DataPoint(i, X[i]) for i in range(n)]
    obj = Coverage(weights)
    opt, _ = brute_force_opt(data, K, obj)
    return Instance(f"coverage-{seed}", data, obj, max_singleton(data, obj), opt)


def oracle_instances(n_instances: int = 50, seed: int = 0, n: int = 12, K: int = 3) -> List[Instance]:
    """``n_instances`` of each objective."""
    out = []
    for i in range(n_instances):
        out.append(logdet_instance(seed + i, n=n, K=K))
        out.append(coverage_instance(seed + i, n=n, K=K))
    return out


# (contract name, algorithm, params, required fraction of OPT, empirical-only)
def default_contracts(epsilon: float = 0.01) -> List[Tuple[str, str, Dict, float, bool]]:
    half = 0.5 - epsilon
    return [
        ("greedy >= (1-1/e) OPT", "greedy", {}, E_FACTOR, False),
        ("sieve-streaming >= (1/2-eps) OPT", "sieve-streaming", {"epsilon": epsilon}, half, False),
        ("sieve-streaming-pp >= (1/2-eps) OPT", "sieve-streaming-pp", {"epsilon": epsilon}, half, False),
        ("salsa >= (1/2-eps) OPT", "salsa", {"epsilon": epsilon}, half, False),
        ("quickstream(c=1) >= (1/4-eps) OPT", "quickstream", {"c": 1, "epsilon": epsilon}, 0.25 - epsilon, False),
        ("isi >= 1/4 OPT", "isi", {}, 0.25, True),
        ("preemption >= 1/4 OPT", "preemption", {}, 0.25, True),
    ]


def _run(name: str, params: Dict, inst: Instance, K: int, seed: int):
    if name == "greedy":
        return run_greedy(inst.data, K, inst.objective)
    p = dict(params)
    p.setdefault("m_policy", inst.m)
    p.setdefault("seed", seed)
    alg = make_algorithm(name, inst.objective, K, **p)
    return execute(alg, inst.data, "stream")


def check_contract(contract: str, name: str, params: Dict, ratio: float, instances: Sequence[Instance],
                   K: int = 3, flagged: bool = False) -> ContractResult:
    res = ContractResult(contract, ratio, flagged=flagged)
    for i, inst in enumerate(instances):
        r = _run(name, params, inst, K, seed=i)
        f = r.fvalue
        res.checked += 1
        frac = f / inst.opt if inst.opt > 0 else 1.0
        res.worst = min(res.worst, frac)
        rechecked = inst.objective.evaluate(stack(r.summary.items)) if len(r.summary) else 0.0
        if f > inst.opt + TOL * max(1.0, abs(inst.opt)):
            res.violations += 1
            res.details.append(f"{inst.name}: f={f!r} exceeds OPT={inst.opt!r}")
        elif f < ratio * inst.opt - TOL:
            res.violations += 1
            res.details.append(f"{inst.name}: f={f!r} < {ratio:.4f}*OPT={ratio * inst.opt!r}")
        elif abs(rechecked - f) > 1e-8 * max(1.0, abs(f)):
            res.violations += 1
            res.details.append(f"{inst.name}: reported f={f!r} but re-evaluation gives {rechecked!r}")
    return res


@dataclass
class StatisticalResult:
    contract: str
    successes: int
    trials: int
    required: float

    @property
    def fraction(self) -> float:
        return self.successes / self.trials

    @property
    def passed(self) -> bool:
        return self.fraction >= self.required

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.contract}: {self.successes}/{self.trials} = {self.fraction:.3f}, required {self.required:.3f}"


def three_sieves_statistical(n_instances: int = 200, seed: int = 0, n: int = 16, K: int = 3,
                             alpha: float = 0.05, tau: float = 0.001, epsilon: float = 0.01,
                             slack: float = 0.05, protocol: str = "stream") -> StatisticalResult:
    """Fraction of iid instances where ThreeSieves reaches ``(1-eps)(1-1/e) OPT``.

    The guarantee holds with probability ``(1-alpha)^K``; the requirement
    subtracts ``slack`` for sampling noise over a finite number of trials.
    """
    T = RuleOfThreeConfig(alpha=alpha, tau=tau).resolve()
    target = (1.0 - epsilon) * E_FACTOR
    wins = 0
    for i in range(n_instances):
        inst = logdet_instance(seed + i, n=n, K=K)
        alg = make_algorithm("three-sieves", inst.objective, K, epsilon=epsilon, T=T, m_policy=inst.m)
        r = execute(alg, inst.data, protocol)
        if r.fvalue >= target * inst.opt - TOL:
            wins += 1
    required = (1.0 - alpha) ** K - slack
    return StatisticalResult(f"three-sieves (T={T}) >= (1-eps)(1-1/e) OPT w.p. (1-alpha)^K", wins, n_instances, required)


def run_suite(seed: int = 0, n_instances: int = 50, epsilon: float = 0.01, statistical: bool = True,
              log: Callable[[str], None] = print) -> bool:
    """Run every oracle contract; print one line each and return overall success."""
    instances = oracle_instances(n_instances, seed)
    ok = True
    for contract, name, params, ratio, flagged in default_contracts(epsilon):
        res = check_contract(contract, name, params, ratio, instances, flagged=flagged)
        log(res.line())
        for d in res.details[:5]:
            log("    " + d)
        ok &= res.passed
    if statistical:
        st = three_sieves_statistical(seed=seed, epsilon=epsilon)
        log(st.line())
        ok &= st.passed
    return ok

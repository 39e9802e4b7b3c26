# %% [markdown]
# # Summarising a static stream
#
# Draw 10 000 points from a fixed Gaussian mixture, pick K of them with
# every algorithm, and compare each summary's log-det value against Greedy.

# %%
import statistics
from collections import defaultdict

from submodstream.harness import AlgorithmSpec, ExperimentSpec, iid_mixture, run_experiment

algorithms = [
    AlgorithmSpec("random"),
    AlgorithmSpec("isi"),
    AlgorithmSpec("sieve-streaming", {"epsilon": 0.001}),
    AlgorithmSpec("salsa", {"epsilon": 0.001}),
    AlgorithmSpec("three-sieves", {"epsilon": 0.001, "T": [500, 2500]}),
]
spec = ExperimentSpec(iid_mixture(10_000, 5), algorithms, K=(20, 50), protocol="batch", repetitions=3)
results = run_experiment(spec)

# %% [markdown]
# Median relative performance and wall time per (K, algorithm, T).

# %%
rows = defaultdict(list)
for r in results:
    rows[(r.K, r.algorithm, r.config.get("T"))].append(r)
for (K, name, T), runs in sorted(rows.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2] or 0)):
    rel = statistics.median(r.relative_performance for r in runs)
    ms = statistics.median(r.wall_time for r in runs) * 1e3
    label = f"{name} T={T}" if T else name
    print(f"K={K:3d}  {label:22s} rel={rel:.3f}  {ms:8.1f} ms  queries={runs[0].counters.oracle_queries}")

# %% [markdown]
# ThreeSieves keeps one summary, so its memory stays at K items, while
# SieveStreaming carries one summary per grid threshold.

# %%
for r in results:
    if r.K == 20 and r.seed == 0 and r.algorithm in ("three-sieves", "sieve-streaming"):
        c = r.counters
        print(r.algorithm, "candidates", c.peak_candidates, "stored items", c.peak_elements)

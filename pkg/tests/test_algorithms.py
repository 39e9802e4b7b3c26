import math

import numpy as np
import pytest

from conftest import clustered, coverage_points
from submodstream.algorithms import (
    ALGORITHMS,
    IndependentSetImprovement,
    QuickStream,
    RandomReservoir,
    Salsa,
    SieveStreaming,
    SieveStreamingPP,
    ThreeSieves,
    execute,
    make_algorithm,
    quickstream_l,
    run_batch,
    run_greedy,
    run_isi,
    run_preemption,
    run_quickstream,
    run_random,
    run_salsa,
    run_sieve_streaming,
    run_sieve_streaming_pp,
    run_stream,
    run_stream_greedy,
    run_three_sieves,
    sieve_accepts,
)
from submodstream.core import DataPoint, as_points, stack
from submodstream.objectives import Coverage, LogDet, RbfKernel
from submodstream.thresholds import RuleOfThreeConfig, ThresholdGrid, power_range

STREAMING = [a for a in ALGORITHMS if a != "greedy"]


def build(name, obj, K, **kw):
    params = {"nu": 1e-3, "epsilon": 0.05, "T": 20}
    params.update(kw)
    return make_algorithm(name, obj, K, **params)


# ---------------------------------------------------------------- invariants


@pytest.mark.parametrize("name", STREAMING)
@pytest.mark.parametrize("protocol", ["stream", "batch"])
def test_summary_invariants(name, protocol, small_points, logdet3):
    if protocol == "stream" and name == "stream-greedy":
        pytest.skip("multi-pass only")
    K = 6
    r = execute(build(name, logdet3, K), small_points, protocol)
    assert len(r.summary) <= K
    assert len(set(r.summary.ordinals)) == len(r.summary)
    assert r.fvalue >= 0
    if len(r.summary):
        assert r.fvalue == pytest.approx(logdet3.evaluate(stack(r.summary.items)), rel=1e-8)
    if protocol == "stream":
        assert r.counters.items_processed == len(small_points)
        assert r.counters.passes == 1
    else:
        assert r.counters.passes <= K


@pytest.mark.parametrize("name", STREAMING)
def test_deterministic(name, small_points, logdet3):
    a = run_batch(build(name, logdet3, 5), small_points)
    b = run_batch(build(name, logdet3, 5), small_points)
    assert a.summary.ordinals == b.summary.ordinals
    assert a.fvalue == b.fvalue
    assert a.counters.as_dict() == b.counters.as_dict()


@pytest.mark.parametrize("name", STREAMING)
def test_empty_stream(name, logdet3):
    r = run_stream(build(name, logdet3, 3), [])
    assert len(r.summary) == 0 and r.fvalue == 0.0


def test_make_algorithm_unknown():
    with pytest.raises(ValueError):
        make_algorithm("nope", None, 3)


# --------------------------------------------------------------------- greedy


def test_greedy_modular_picks_heaviest():
    pts, _ = coverage_points(1, 3, seed=0)
    cov = Coverage([3.0, 1.0, 2.0])
    r = run_greedy(as_points(np.eye(3)), 2, cov)
    assert r.summary.ordinals == [0, 2] and r.fvalue == 5.0
    assert r.counters.passes == 2


def test_greedy_ties_lowest_ordinal():
    cov = Coverage([1.0, 1.0])
    r = run_greedy(as_points(np.eye(2)), 1, cov)
    assert r.summary.ordinals == [0]


def test_greedy_k_larger_than_n(logdet3):
    pts = clustered(4, 3, seed=1)
    r = run_greedy(pts, 10, logdet3)
    assert len(r.summary) == 4
    assert r.fvalue == pytest.approx(logdet3.evaluate(stack(pts)), rel=1e-10)


def test_greedy_matches_naive_loop(logdet3):
    pts = clustered(40, 3, seed=2)
    K = 5
    chosen = []
    for _ in range(K):
        best, best_val = None, -1.0
        for p in pts:
            if p.ordinal in chosen:
                continue
            val = logdet3.evaluate(stack([q for q in pts if q.ordinal in chosen] + [p]))
            if val > best_val + 1e-12:
                best, best_val = p.ordinal, val
        chosen.append(best)
    r = run_greedy(pts, K, logdet3)
    assert r.summary.ordinals == chosen


# ------------------------------------------------------------------ reservoir


def test_reservoir_is_uniform():
    pts = as_points(np.arange(10.0)[:, None])
    obj = LogDet(RbfKernel(1.0))
    counts = np.zeros(10)
    trials = 4000
    for s in range(trials):
        alg = RandomReservoir(obj, 3, seed=s)
        for p in pts:
            alg.process(p)
        for o in alg._items:
            counts[o.ordinal] += 1
    freq = counts / trials
    # each item kept with probability 3/10; 4 sigma band
    sigma = math.sqrt(0.3 * 0.7 / trials)
    assert np.all(np.abs(freq - 0.3) < 4 * sigma)


def test_reservoir_first_k_kept():
    r = run_random(as_points(np.eye(3)), 5, Coverage(np.ones(3)))
    assert r.summary.ordinals == [0, 1, 2]
    assert r.counters.oracle_queries == 1


def test_reservoir_seeds_differ(small_points, logdet3):
    a = run_random(small_points, 5, logdet3, seed=1)
    b = run_random(small_points, 5, logdet3, seed=2)
    assert a.summary.ordinals != b.summary.ordinals


# ------------------------------------------------------------------------ ISI


def test_isi_replaces_only_when_twice_as_heavy():
    # modular objective: weight is the item's own value
    cov = Coverage([1.0, 1.5, 2.5, 10.0])
    pts = as_points(np.eye(4))
    r = run_isi(pts, 1, cov)
    # 1.5 <= 2*1 no; 2.5 > 2*1 yes; 10 > 2*2.5 yes
    assert r.summary.ordinals == [3]
    alg = IndependentSetImprovement(cov, 1)
    for p in pts[:3]:
        alg.process(p)
    assert alg.weights() == {2: 2.5}


# ----------------------------------------------------------- swap algorithms


def test_stream_greedy_swaps_until_stable():
    cov = Coverage([1.0, 1.0, 5.0, 1.0])
    X = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], float)
    r = run_stream_greedy(as_points(X), 2, cov, nu=0.5)
    assert 2 in r.summary.ordinals and r.fvalue == 6.0
    with pytest.raises(ValueError):
        run_stream_greedy(as_points(X), 2, cov, nu=0.0)


def test_preemption_threshold():
    cov = Coverage([1.0, 1.0, 1.4, 3.0])
    pts = as_points(np.eye(4))
    # f = 2 after the fill, required gain = f/K = 1: swapping in 1.4 gains 0.4, 3.0 gains 2
    r = run_preemption(pts, 2, cov)
    assert sorted(r.summary.ordinals) == [0, 3] or sorted(r.summary.ordinals) == [1, 3]
    assert r.fvalue == 4.0
    assert r.counters.oracle_queries == 2 + 2 * 2


# ----------------------------------------------------------------- sieves


def naive_sieve_streaming(points, K, obj, m, eps):
    grid = ThresholdGrid(m, K, eps)
    sieves = []
    for v in grid.thresholds():
        sieves.append({"v": v, "state": obj.new_state(), "items": [], "f": 0.0})
    queries = commits = peak_el = 0
    for p in points:
        for s in sieves:
            if len(s["items"]) >= K or p.ordinal in [q.ordinal for q in s["items"]]:
                continue
            g = s["state"].peek_gain(p.features)
            queries += 1
            if g >= (s["v"] / 2 - s["f"]) / (K - len(s["items"])):
                s["f"] += s["state"].commit(p.features)
                s["items"].append(p)
                commits += 1
        peak_el = max(peak_el, sum(len(s["items"]) for s in sieves))
    best = None
    for s in sieves:
        if best is None or s["f"] > best["f"]:
            best = s
    return best, queries, commits, len(sieves), peak_el


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_sieve_bank_matches_independent_sieves(seed, logdet3):
    pts = clustered(80, 3, seed=seed, scale=0.15)
    K, eps = 5, 0.05
    best, q, commits, n_sieves, peak_el = naive_sieve_streaming(pts, K, logdet3, logdet3.max_singleton, eps)
    r = run_sieve_streaming(pts, K, logdet3, epsilon=eps)
    assert r.summary.ordinals == [p.ordinal for p in best["items"]]
    assert r.fvalue == pytest.approx(best["f"], rel=1e-10)
    assert r.counters.oracle_queries == q
    assert r.counters.commits == commits
    assert r.counters.peak_candidates == n_sieves
    assert r.counters.peak_elements == peak_el


def naive_sieve_pp(points, K, obj, m, eps):
    base = 1 + eps
    sieves = {}
    top = None
    lb = 0.0
    queries = 0
    for p in points:
        tau_min = max(lb, m) / (2 * K)
        i_lo, i_hi = power_range(tau_min / base, m, eps)
        for i in list(sieves):
            if i < i_lo:
                del sieves[i]
        for i in range(i_lo, i_hi + 1):
            if i not in sieves and (top is None or i > top):
                sieves[i] = {"v": base ** i, "state": obj.new_state(), "items": [], "f": 0.0}
        top = i_hi if top is None else max(top, i_hi)
        for i in sorted(sieves):
            s = sieves[i]
            if len(s["items"]) >= K or any(q.ordinal == p.ordinal for q in s["items"]):
                continue
            g = s["state"].peek_gain(p.features)
            queries += 1
            if g >= s["v"]:
                s["f"] += s["state"].commit(p.features)
                s["items"].append(p)
        lb = max([lb] + [s["f"] for s in sieves.values()])
    best = None
    for i in sorted(sieves):
        if best is None or sieves[i]["f"] > best["f"]:
            best = sieves[i]
    return best, queries


@pytest.mark.parametrize("seed", [0, 3])
def test_sieve_pp_matches_reference(seed, logdet3):
    pts = clustered(80, 3, seed=seed, scale=0.15)
    K, eps = 5, 0.1
    best, q = naive_sieve_pp(pts, K, logdet3, logdet3.max_singleton, eps)
    r = run_sieve_streaming_pp(pts, K, logdet3, epsilon=eps)
    assert r.summary.ordinals == [p.ordinal for p in best["items"]]
    assert r.counters.oracle_queries == q


def test_sieve_pp_uses_fewer_elements(logdet3):
    pts = clustered(300, 3, seed=4, scale=0.2)
    a = run_sieve_streaming(pts, 8, logdet3, epsilon=0.05)
    b = run_sieve_streaming_pp(pts, 8, logdet3, epsilon=0.05)
    assert b.counters.peak_elements <= a.counters.peak_elements


def test_sieve_estimate_mode_counts_singletons():
    pts, cov = coverage_points(30, 8, seed=5)
    r = run_sieve_streaming(pts, 3, cov, epsilon=0.1, m_policy="estimate")
    assert r.counters.resets >= 1
    assert r.fvalue > 0
    with pytest.raises(ValueError):
        SieveStreaming(cov, 3, m_policy="known")


def test_sieve_accepts_rule():
    # v = 10, K = 5, empty summary -> cutoff v/(2K) = 1
    assert sieve_accepts(10.0, 0.0, 5, 0, 1.0)
    assert not sieve_accepts(10.0, 0.0, 5, 0, 0.999)


# ----------------------------------------------------------------- salsa


def test_salsa_without_length_hint_flags_sparse_rule(small_points, logdet3):
    r = run_salsa(small_points, 4, logdet3, epsilon=0.1)
    assert "sparse_rule" in r.notes
    r2 = run_salsa(small_points, 4, logdet3, epsilon=0.1, length_hint=len(small_points))
    assert "sparse_rule" not in r2.notes
    with pytest.raises(ValueError):
        Salsa(logdet3, 4, rules=("bogus",))


def test_salsa_at_least_its_sieve_rule(small_points, logdet3):
    sieve_only = run_salsa(small_points, 4, logdet3, epsilon=0.1, rules=("sieve",))
    plain = run_sieve_streaming(small_points, 4, logdet3, epsilon=0.1)
    full = run_salsa(small_points, 4, logdet3, epsilon=0.1, length_hint=len(small_points))
    assert sieve_only.fvalue == plain.fvalue
    assert full.fvalue >= plain.fvalue


# ------------------------------------------------------------- quickstream


def test_quickstream_l():
    assert quickstream_l(1 / 16) == 5
    with pytest.raises(ValueError):
        QuickStream(LogDet(RbfKernel(1.0)), 1)


def test_quickstream_c1_is_per_item_test():
    cov = Coverage([1.0, 1.0, 1.0, 0.1])
    X = np.array([[1, 0, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1]], float)
    alg = QuickStream(cov, 2, c=1, epsilon=0.1)
    for p in as_points(X):
        alg.process(p)
    # item 1 adds nothing (0 < 1/2), item 2 adds 1 >= 1/2, item 3 adds 0.1 < 2/2
    assert [p.ordinal for p in alg.A] == [0, 2]


def test_quickstream_buffered(small_points, logdet3):
    r = run_quickstream(small_points, 4, logdet3, c=2, epsilon=0.1)
    assert len(r.summary) <= 4
    # one query per full buffer plus the final partition
    assert r.counters.oracle_queries <= len(small_points) // 2 + 2


# ----------------------------------------------------------- three sieves


def test_three_sieves_identical_items():
    cov = Coverage(np.ones(3))
    x = np.array([1.0, 0.0, 0.0])
    # m = 1, grid {1, 1.5, 2.25, 3.375}; duplicates are refused while v/2 > f(S) = 1
    pts = [DataPoint(i, x) for i in range(21)]
    r = run_three_sieves(pts, 5, cov, epsilon=0.5, T=10, m_policy="estimate")
    assert len(r.summary) == 1
    assert r.counters.threshold_drops == 2


def test_three_sieves_negative_cutoff_admits_zero_gain():
    cov = Coverage(np.ones(3))
    x = np.array([1.0, 0.0, 0.0])
    pts = [DataPoint(i, x) for i in range(22)]
    r = run_three_sieves(pts, 5, cov, epsilon=0.5, T=10, m_policy="estimate")
    # at v = 1.5 the cutoff (0.75 - 1)/4 is negative
    assert r.summary.ordinals == [0, 21]


def test_three_sieves_first_item_rule():
    obj = LogDet(RbfKernel(0.1), a=1.0)
    K, eps = 4, 0.01
    grid = ThresholdGrid(obj.max_singleton, K, eps)
    v = grid.value(grid.top())
    # a fresh item has gain m; accepted iff m >= v / (2K), which holds as v <= Km
    alg = ThreeSieves(obj, K, eps, T=5)
    alg.process(DataPoint(0, np.zeros(2)))
    assert len(alg.summary()) == 1
    assert alg.v == v
    assert obj.max_singleton >= v / (2 * K)


def test_three_sieves_lowers_after_T_rejections():
    cov = Coverage(np.ones(4))
    e0 = np.array([1.0, 0, 0, 0])
    pts = [DataPoint(0, e0)] + [DataPoint(i, e0) for i in range(1, 8)]
    # grid for m = 1, K = 8: 1.5^i up to 7.59; v/2 stays above f(S) = 1 for three levels
    alg = ThreeSieves(cov, 8, 0.5, T=3, m_policy=1.0)
    v0 = None
    for i, p in enumerate(pts):
        alg.process(p)
        if i == 0:
            v0 = alg.v
    assert alg.counters.threshold_drops == 2
    assert alg.v < v0


def test_three_sieves_resources(logdet3):
    pts = clustered(500, 3, seed=8, scale=0.05)
    r = run_three_sieves(pts, 10, logdet3, epsilon=0.01, T=50)
    c = r.counters
    assert c.peak_candidates == 1
    assert c.oracle_queries <= len(pts) + c.resets * 10


def test_three_sieves_estimate_resets():
    # singletons grow along the stream, every new maximum restarts the summary
    w = np.array([1.0, 2.0, 4.0])
    cov = Coverage(w)
    pts = as_points(np.eye(3))
    r = run_three_sieves(pts, 2, cov, epsilon=0.1, T=10, m_policy="estimate")
    assert r.counters.resets == 3
    assert r.summary.ordinals == [2]


def test_three_sieves_alpha_tau():
    obj = LogDet(RbfKernel(1.0))
    alg = ThreeSieves(obj, 3, 0.1, T=RuleOfThreeConfig(alpha=0.05, tau=0.001))
    assert alg.T == 2996
    assert alg.config()["alpha"] == 0.05


def test_batch_protocol_stops_after_K_passes():
    cov = Coverage(np.ones(3))
    x = np.array([1.0, 0.0, 0.0])
    pts = [DataPoint(i, x) for i in range(5)]
    one = run_three_sieves(pts, 3, cov, epsilon=0.5, T=100, m_policy=1.0)
    many = run_three_sieves(pts, 3, cov, epsilon=0.5, T=100, m_policy=1.0, protocol="batch")
    assert one.counters.passes == 1
    assert many.counters.passes == 3
    assert many.summary.ordinals == [0]
    # item 0 is skipped on re-passes, so it is never queried twice
    assert many.counters.oracle_queries == 5 + 4 + 4


def test_batch_protocol_refills_partial_summary():
    pts = clustered(40, 3, seed=9, scale=0.3)
    obj = LogDet(RbfKernel(0.2))
    one = run_sieve_streaming(pts, 30, obj, epsilon=0.1)
    many = run_sieve_streaming(pts, 30, obj, epsilon=0.1, protocol="batch")
    assert many.counters.passes >= 1
    assert len(many.summary) >= len(one.summary)
    assert len(set(many.summary.ordinals)) == len(many.summary)

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from submodstream.thresholds import (
    RuleOfThreeConfig,
    ThresholdGrid,
    grid_make,
    grid_next_descending,
    m_estimator_update,
    power_range,
    rule_of_three_bound,
    rule_of_three_T,
)


def test_grid_bounds_and_order():
    g = grid_make(1.0, 10, 0.1)
    th = g.thresholds()
    assert th == sorted(th)
    assert th[0] >= 1.0 and th[-1] <= 10.0
    assert th[0] / 1.1 < 1.0 and th[-1] * 1.1 > 10.0
    assert list(g) == th[::-1]
    assert len(g) == len(th)


def test_grid_includes_exact_powers():
    # m = (1+eps)^3 exactly, K m = (1+eps)^5 up to rounding of the product
    base = 1.5
    g = ThresholdGrid(base ** 3, 2, 0.5)
    assert g.i_lo == 3
    assert g.value(g.i_lo) == base ** 3


def test_grid_size_close_to_log_ratio():
    for K, eps in [(20, 0.001), (50, 0.01), (5, 0.1)]:
        g = ThresholdGrid(0.5 * math.log(2), K, eps)
        expected = math.log(K) / math.log1p(eps)
        assert abs(len(g) - expected) <= 1.0


def test_degenerate_single_threshold():
    # K = 1 and m strictly between two powers -> nothing in [m, m]
    g = ThresholdGrid(1.05, 1, 0.5)
    assert g.degenerate and g.thresholds() == [1.05]


def test_descending_cursor_exhausts():
    g = ThresholdGrid(1.0, 4, 0.5)
    seen, cur = [], g.top()
    while (nxt := grid_next_descending(g, cur)) is not None:
        v, cur = nxt
        seen.append(v)
    assert seen == list(g)


@pytest.mark.parametrize("bad", [dict(m=0.0, K=3, epsilon=0.1), dict(m=1.0, K=0, epsilon=0.1), dict(m=1.0, K=3, epsilon=0.0)])
def test_grid_rejects_bad_input(bad):
    with pytest.raises(ValueError):
        ThresholdGrid(**bad)


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-3, 1e3), st.integers(1, 200), st.floats(1e-3, 0.5))
def test_grid_covers_every_value_in_range(m, K, eps):
    """Every OPT guess in [lowest grid value, Km] has a grid point within a (1+eps) factor below it."""
    g = ThresholdGrid(m, K, eps)
    if g.degenerate:
        return
    th = g.thresholds()
    for opt in (th[0], (th[0] + K * m) / 2, K * m):
        below = [v for v in th if v <= opt * (1 + 1e-12)]
        assert below and opt <= below[-1] * (1 + eps) * (1 + 1e-12)


def test_power_range_boundaries():
    lo, hi = power_range(1.0, 1.0, 0.25)
    assert (lo, hi) == (0, 0)
    lo, hi = power_range(1.1, 1.2, 0.25)
    assert lo > hi


def test_rule_of_three_worked_example():
    # T = 1000 misses -> below 0.003 at 95 % confidence
    assert rule_of_three_bound(0.05, 1000) < 0.003
    T = rule_of_three_T(0.05, 0.003)
    assert rule_of_three_bound(0.05, T) <= 0.003
    assert rule_of_three_bound(0.05, T - 1) > 0.003
    assert rule_of_three_T(0.05, 0.001) == 2996


def test_rule_of_three_config():
    assert RuleOfThreeConfig().resolve() == 5000
    assert RuleOfThreeConfig(T=123).resolve() == 123
    cfg = RuleOfThreeConfig(alpha=0.05, tau=0.001)
    assert cfg.resolve() == 2996
    assert cfg.as_dict() == {"alpha": 0.05, "tau": 0.001, "T": 2996}
    with pytest.raises(ValueError):
        RuleOfThreeConfig(T=10, alpha=0.05, tau=0.01)
    with pytest.raises(ValueError):
        RuleOfThreeConfig(alpha=0.05)
    with pytest.raises(ValueError):
        rule_of_three_T(1.5, 0.1)


def test_m_estimator():
    assert m_estimator_update(1.0, 0.5) == (1.0, False)
    assert m_estimator_update(1.0, 2.0) == (2.0, True)

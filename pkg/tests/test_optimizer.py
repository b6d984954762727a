import math

import numpy as np
import pytest

import secrecy_ascent as sa
from helpers import random_instance

SMALL = sa.ChannelParams(n_clusters=2, n_rays=3, n_rx=2, n_tx=8, angular_spread_deg=10)
PW = sa.PowerConfig(p_s=10.0, p_j=10.0)


def small_problem(seed):
    rng = sa.seed_fanout(900, seed)
    return sa.draw_channel_set(SMALL, rng), sa.warm_start(SMALL, rng)


def test_project_unit_norm_basic():
    np.testing.assert_allclose(
        sa.project_unit_norm(np.array([3.0, 4.0], dtype=complex)), [0.6, 0.8], atol=1e-15
    )


def test_project_unit_norm_idempotent():
    v = sa.project_unit_norm(np.array([1.0 + 2j, -0.5j, 0.3]))
    np.testing.assert_allclose(sa.project_unit_norm(v), v, atol=1e-15)


def test_project_unit_norm_zero_vector():
    with pytest.raises(ValueError):
        sa.project_unit_norm(np.zeros(3, dtype=complex))


def test_project_ca_preserves_phases():
    out = sa.project_ca(np.array([2.0, 2.0j]))
    np.testing.assert_allclose(out, [1 / math.sqrt(2), 1j / math.sqrt(2)], atol=1e-15)


def test_project_ca_near_zero_entry_gets_phase_zero():
    out = sa.project_ca(np.array([1e-20, 1.0], dtype=complex))
    np.testing.assert_allclose(out, [1 / math.sqrt(2), 1 / math.sqrt(2)], atol=1e-15)


def test_projection_properties_random_vectors():
    rng = np.random.default_rng(30)
    for _ in range(1000):
        n = int(rng.integers(1, 12))
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        ca = sa.project_ca(v)
        # idempotence of both projections
        np.testing.assert_allclose(sa.project_ca(ca), ca, atol=1e-15)
        un = sa.project_unit_norm(v)
        np.testing.assert_allclose(sa.project_unit_norm(un), un, atol=1e-15)
        # CA after unit-norm equals CA alone, and CA output is unit-norm
        np.testing.assert_allclose(sa.project_ca(un), ca, atol=1e-12)
        assert abs(np.linalg.norm(ca) - 1.0) < 1e-12
        assert sa.ca_violation(ca) < 1e-15


def test_warm_start_is_ca_and_deterministic():
    params = sa.ChannelParams(n_clusters=2, n_rays=2, n_rx=4, n_tx=64, angular_spread_deg=10)
    a = sa.warm_start(params, np.random.default_rng(31))
    b = sa.warm_start(params, np.random.default_rng(31))
    for name in ("w_l", "w_e", "f_s", "f_j"):
        np.testing.assert_array_equal(getattr(a, name), getattr(b, name))
    assert sa.state_ca_violation(a) < 1e-12
    np.testing.assert_allclose(np.abs(a.f_s), 1 / 8, atol=1e-15)
    np.testing.assert_allclose(np.abs(a.f_j), 1 / 8, atol=1e-15)


def test_ascent_trace_monotone_and_feasible():
    ch, init = small_problem(0)
    seen = []
    res = sa.ascend_fixed_power(ch, PW, sa.OptimizerConfig(max_iters=500), init,
                                on_accept=seen.append)
    c_s = [r.c_s for r in res.trace.records]
    assert all(b >= a for a, b in zip(c_s, c_s[1:]))
    assert res.snapshot.c_s >= c_s[0]
    iters = [r.iteration for r in res.trace.records]
    assert all(b > a for a, b in zip(iters, iters[1:]))
    assert seen, "no accepted iterations"
    for state in seen:
        assert sa.state_ca_violation(state) < 1e-9
        for v in state.vectors():
            assert abs(np.linalg.norm(v) - 1.0) < 1e-9
    assert res.trace.reason in (sa.TerminationReason.CONVERGED, sa.TerminationReason.ITER_CAP)


def test_ascent_improves_over_start():
    for seed in range(5):
        ch, init = small_problem(seed)
        res = sa.ascend_fixed_power(ch, PW, sa.OptimizerConfig(max_iters=2000), init)
        start = sa.secrecy_capacity(ch, init, PW).c_s
        assert res.snapshot.c_s >= start


def test_ascent_zero_gradient_converges_immediately():
    ch, init = small_problem(1)
    res = sa.ascend_fixed_power(ch, sa.PowerConfig(p_s=0.0, p_j=0.0),
                                sa.OptimizerConfig(), init)
    assert res.trace.reason is sa.TerminationReason.CONVERGED
    assert res.trace.n_iters == 1
    np.testing.assert_allclose(res.state.w_l, init.w_l, atol=1e-14)


def test_ascent_rejects_non_ca_start():
    ch, init = small_problem(2)
    init.f_s = sa.project_unit_norm(np.arange(1, 9).astype(complex))
    with pytest.raises(ValueError):
        sa.ascend_fixed_power(ch, PW, sa.OptimizerConfig(), init)


def test_ascent_final_state_is_feasible():
    ch, init = small_problem(3)
    res = sa.ascend_fixed_power(ch, PW, sa.OptimizerConfig(max_iters=300), init)
    assert sa.state_ca_violation(res.state) < 1e-9


def test_optimize_we_updates_eavesdropper_combiner():
    ch, init = small_problem(4)
    fixed = sa.ascend_fixed_power(ch, PW, sa.OptimizerConfig(max_iters=200), init)
    np.testing.assert_array_equal(fixed.state.w_e, init.w_e)
    moved = sa.ascend_fixed_power(
        ch, PW, sa.OptimizerConfig(max_iters=200, optimize_we=True), init
    )
    assert not np.array_equal(moved.state.w_e, init.w_e)


def test_variable_power_requires_zeta():
    ch, init = small_problem(5)
    with pytest.raises(ValueError):
        sa.ascend_variable_power(ch, PW, sa.OptimizerConfig(), init)


def test_variable_power_trivial_target():
    ch, init = small_problem(6)
    res = sa.ascend_variable_power(ch, PW, sa.OptimizerConfig(zeta=0.0), init)
    assert res.trace.reason is sa.TerminationReason.TARGET_REACHED
    assert len(res.trace.cycles) == 1
    assert res.p_s == PW.p_s


def test_variable_power_power_cap():
    ch, init = small_problem(7)
    cfg = sa.OptimizerConfig(zeta=1e6, mu=sa.db_to_linear(11.0), max_iters=200)
    res = sa.ascend_variable_power(ch, PW, cfg, init)
    assert res.trace.reason is sa.TerminationReason.POWER_CAP
    assert res.p_s <= cfg.mu
    # every bump multiplies by 1 + kappa
    powers = [c.p_s for c in res.trace.cycles]
    for a, b in zip(powers, powers[1:]):
        assert b == pytest.approx(a * (1 + cfg.kappa))


def test_variable_power_cycle_cap():
    ch, init = small_problem(8)
    cfg = sa.OptimizerConfig(zeta=1e6, max_cycles=3, max_iters=100)
    res = sa.ascend_variable_power(ch, PW, cfg, init)
    assert res.trace.reason is sa.TerminationReason.CYCLE_CAP
    assert len(res.trace.cycles) == 3
    assert [c.cycle for c in res.trace.cycles] == [1, 2, 3]


def test_variable_power_trace_iterations_increase_within_cycles():
    ch, init = small_problem(9)
    cfg = sa.OptimizerConfig(zeta=1e6, max_cycles=4, max_iters=50)
    res = sa.ascend_variable_power(ch, PW, cfg, init)
    by_cycle = {}
    for r in res.trace.records:
        by_cycle.setdefault(r.cycle, []).append(r.iteration)
    for iters in by_cycle.values():
        assert all(b > a for a, b in zip(iters, iters[1:]))


def test_optimizer_config_validation():
    with pytest.raises(ValueError):
        sa.OptimizerConfig(delta0=0.0)
    with pytest.raises(ValueError):
        sa.OptimizerConfig(epsilon=-1.0)
    with pytest.raises(ValueError):
        sa.OptimizerConfig(max_iters=0)

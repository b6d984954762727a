"""Monte Carlo harness tying channel draws, ascent runs, and benchmarks.

Each trial owns an independent random stream derived from the master seed
and its trial index, so results are identical no matter how trials are
scheduled. Aggregation always reduces in trial-index order.
"""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .channel import ChannelParams, draw_channel_set
from .metrics import PowerConfig, linear_to_db, svd_upper_bound
from .optimizer import (
    OptimizeResult,
    OptimizerConfig,
    ascend_fixed_power,
    ascend_variable_power,
    warm_start,
)


class ExperimentKind(str, enum.Enum):
    FIXED_POWER = "fixed_power"
    VARIABLE_POWER = "variable_power"


@dataclass(frozen=True)
class SystemConfig:
    """Everything a run needs: geometry, powers, optimizer knobs, trial plan."""

    channel: ChannelParams
    powers: PowerConfig
    optimizer: OptimizerConfig
    n_trials: int
    seed: int
    experiment: ExperimentKind
    svd_bound_literal: bool = False

    def __post_init__(self):
        if self.n_trials < 1:
            raise ValueError("n_trials must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be >= 0")
        if self.experiment is ExperimentKind.VARIABLE_POWER and self.optimizer.zeta is None:
            raise ValueError("variable-power experiment needs optimizer.zeta")


@dataclass
class AggregateReport:
    """Monte Carlo means, spreads, and benchmark curves for one experiment.

    Curves share the longest trial's axis; shorter trials are padded by
    carrying their terminal value forward. For fixed power the axis is the
    iteration index (entry 0 is the starting point); for variable power it
    is the cycle index (entry k is cycle k+1).
    """

    experiment: str
    n_trials: int
    c_s_mean_curve: list[float] = field(default_factory=list)
    c_s_we_opt_mean_curve: list[float] = field(default_factory=list)
    p_s_db_mean_curve: list[float] = field(default_factory=list)
    converged_c_s_mean: float = 0.0
    converged_c_s_std: float = 0.0
    converged_c_s_we_opt_mean: float = 0.0
    svd_bound_mean: float = 0.0
    mean_iterations: float = 0.0
    mean_cycles: float = 0.0
    mean_final_p_s_db: float = 0.0
    svd_violations: int = 0
    svd_violation_trials: list[int] = field(default_factory=list)
    termination_reasons: dict[str, int] = field(default_factory=dict)


class TrialError(RuntimeError):
    """A Monte Carlo trial failed; carries enough to reproduce it."""

    def __init__(self, trial_index: int, master_seed: int, cause: BaseException):
        super().__init__(
            f"trial {trial_index} (master seed {master_seed}) failed: {cause}"
        )
        self.trial_index = trial_index
        self.master_seed = master_seed


def seed_fanout(master_seed: int, trial_index: int) -> np.random.Generator:
    """Independent, reproducible stream for one trial."""
    return np.random.default_rng(np.random.SeedSequence([master_seed, trial_index]))


def _dense_curve(records, n_iters: int) -> np.ndarray:
    """Expand accepted-iteration records to one value per loop pass.

    Passes with no accepted record hold the last accepted value, which is
    exactly the objective of the iterate kept through those passes.
    """
    positions = np.array([r.iteration for r in records])
    values = np.array([r.c_s for r in records])
    idx = np.searchsorted(positions, np.arange(n_iters + 1), side="right") - 1
    return values[idx]


def _pad_mean(curves: list[np.ndarray]) -> list[float]:
    """Mean across trials after carry-forward padding to the longest curve."""
    length = max(c.size for c in curves)
    padded = np.empty((len(curves), length))
    for i, c in enumerate(curves):
        padded[i, : c.size] = c
        padded[i, c.size :] = c[-1]
    return padded.mean(axis=0).tolist()


def _fixed_trial(cfg: SystemConfig, trial_index: int):
    rng = seed_fanout(cfg.seed, trial_index)
    ch = draw_channel_set(cfg.channel, rng)
    init = warm_start(cfg.channel, rng)
    res_rand = ascend_fixed_power(ch, cfg.powers, replace(cfg.optimizer, optimize_we=False), init)
    res_opt = ascend_fixed_power(ch, cfg.powers, replace(cfg.optimizer, optimize_we=True), init)
    bound = svd_upper_bound(ch, cfg.powers, literal=cfg.svd_bound_literal)
    return res_rand, res_opt, bound


def _variable_trial(cfg: SystemConfig, trial_index: int):
    rng = seed_fanout(cfg.seed, trial_index)
    ch = draw_channel_set(cfg.channel, rng)
    init = warm_start(cfg.channel, rng)
    return ascend_variable_power(ch, cfg.powers, cfg.optimizer, init)


def _map_trials(worker, cfg: SystemConfig, threads: int):
    """Run trials 0..n_trials-1, yielding results in trial-index order."""
    indices = range(cfg.n_trials)
    if threads <= 1:
        for i in indices:
            try:
                yield i, worker(cfg, i)
            except Exception as exc:
                raise TrialError(i, cfg.seed, exc) from exc
        return
    with ProcessPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(worker, cfg, i) for i in indices]
        for i, fut in enumerate(futures):
            try:
                yield i, fut.result()
            except Exception as exc:
                raise TrialError(i, cfg.seed, exc) from exc


def run_fixed_power_experiment(
    cfg: SystemConfig,
    threads: int = 1,
    on_trial: Optional[Callable[[int, OptimizeResult, OptimizeResult, float], None]] = None,
) -> AggregateReport:
    """Per trial: one ascent with the eavesdropper combiner held at its
    random start, one benchmark ascent that optimizes it too (same channel
    and same start), and the SVD diagnostic for that realization.

    ``on_trial`` observes every trial in index order, e.g. to stream traces.
    """
    if cfg.experiment is not ExperimentKind.FIXED_POWER:
        raise ValueError("config does not describe a fixed-power experiment")
    curves_rand, curves_opt = [], []
    finals_rand, finals_opt, bounds, iters = [], [], [], []
    violations = []
    reasons: dict[str, int] = {}
    for i, (res_rand, res_opt, bound) in _map_trials(_fixed_trial, cfg, threads):
        if on_trial is not None:
            on_trial(i, res_rand, res_opt, bound)
        curves_rand.append(_dense_curve(res_rand.trace.records, res_rand.trace.n_iters))
        curves_opt.append(_dense_curve(res_opt.trace.records, res_opt.trace.n_iters))
        finals_rand.append(res_rand.snapshot.c_s)
        finals_opt.append(res_opt.snapshot.c_s)
        bounds.append(bound)
        iters.append(res_rand.trace.n_iters)
        reason = res_rand.trace.reason.value
        reasons[reason] = reasons.get(reason, 0) + 1
        if res_rand.snapshot.c_s > bound:
            violations.append(i)
    return AggregateReport(
        experiment=cfg.experiment.value,
        n_trials=cfg.n_trials,
        c_s_mean_curve=_pad_mean(curves_rand),
        c_s_we_opt_mean_curve=_pad_mean(curves_opt),
        converged_c_s_mean=float(np.mean(finals_rand)),
        converged_c_s_std=float(np.std(finals_rand)),
        converged_c_s_we_opt_mean=float(np.mean(finals_opt)),
        svd_bound_mean=float(np.mean(bounds)),
        mean_iterations=float(np.mean(iters)),
        svd_violations=len(violations),
        svd_violation_trials=violations,
        termination_reasons=reasons,
    )


def run_variable_power_experiment(
    cfg: SystemConfig,
    threads: int = 1,
    on_trial: Optional[Callable[[int, OptimizeResult], None]] = None,
) -> AggregateReport:
    """Per trial: one variable-power ascent toward the secrecy target."""
    if cfg.experiment is not ExperimentKind.VARIABLE_POWER:
        raise ValueError("config does not describe a variable-power experiment")
    c_s_curves, p_db_curves = [], []
    n_cycles, finals, final_p_db = [], [], []
    reasons: dict[str, int] = {}
    for i, res in _map_trials(_variable_trial, cfg, threads):
        if on_trial is not None:
            on_trial(i, res)
        cyc = res.trace.cycles
        c_s_curves.append(np.array([c.c_s for c in cyc]))
        p_db_curves.append(np.array([linear_to_db(c.p_s) for c in cyc]))
        n_cycles.append(len(cyc))
        finals.append(res.snapshot.c_s)
        final_p_db.append(linear_to_db(res.p_s))
        reason = res.trace.reason.value
        reasons[reason] = reasons.get(reason, 0) + 1
    return AggregateReport(
        experiment=cfg.experiment.value,
        n_trials=cfg.n_trials,
        c_s_mean_curve=_pad_mean(c_s_curves),
        p_s_db_mean_curve=_pad_mean(p_db_curves),
        converged_c_s_mean=float(np.mean(finals)),
        converged_c_s_std=float(np.std(finals)),
        mean_cycles=float(np.mean(n_cycles)),
        mean_final_p_s_db=float(np.mean(final_p_db)),
        termination_reasons=reasons,
    )

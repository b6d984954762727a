"""Projected gradient ascent over constant-amplitude analog beamformers.

Every update follows the same pattern: gradient step, 2-norm projection,
constant-amplitude projection. A step that decreases the objective is a
perturbation: the iterate is reverted and the step size halved (floored at
``delta_min``), which keeps the accepted trajectory monotone.

The acceptance and convergence tests run on the unclamped capacity
difference c_l - c_e. The reported secrecy capacity clamps at zero; running
the loop on the clamped value would freeze any start where the eavesdropper
is ahead, since the clamp is flat there while the difference still climbs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .channel import ChannelParams, ChannelSet
from .gradients import _grad_fj, _grad_fs, _grad_we, _grad_wl, _Links
from .metrics import BeamformerState, PowerConfig, SecrecySnapshot, db_to_linear


@dataclass(frozen=True)
class OptimizerConfig:
    """Step-size schedule, stopping rules, and power adaptation knobs."""

    delta0: float = 0.1
    epsilon: float = 1e-7
    kappa: float = 1e-2
    zeta: Optional[float] = None
    mu: float = db_to_linear(30.0)
    max_iters: int = 10_000
    max_cycles: int = 1_000
    delta_min: float = 1e-6
    optimize_we: bool = False

    def __post_init__(self):
        if self.delta0 <= 0 or self.epsilon <= 0 or self.kappa <= 0:
            raise ValueError("delta0, epsilon and kappa must be > 0")
        if self.mu <= 0 or self.delta_min <= 0:
            raise ValueError("mu and delta_min must be > 0")
        if self.max_iters < 1 or self.max_cycles < 1:
            raise ValueError("max_iters and max_cycles must be >= 1")


class TerminationReason(str, enum.Enum):
    CONVERGED = "converged"
    ITER_CAP = "iter_cap"
    POWER_CAP = "power_cap"
    TARGET_REACHED = "target_reached"
    CYCLE_CAP = "cycle_cap"


@dataclass(frozen=True)
class IterationRecord:
    """One accepted iteration (iteration 0 is the starting point)."""

    cycle: int
    iteration: int
    c_s: float
    c_l: float
    c_e: float
    delta: float
    p_s: float


@dataclass(frozen=True)
class CycleRecord:
    """Converged state of one fixed-power cycle."""

    cycle: int
    c_s: float
    p_s: float
    n_iters: int


@dataclass
class OptimizerTrace:
    records: list[IterationRecord] = field(default_factory=list)
    cycles: list[CycleRecord] = field(default_factory=list)
    reason: TerminationReason = TerminationReason.ITER_CAP
    n_iters: int = 0


@dataclass
class OptimizeResult:
    state: BeamformerState
    snapshot: SecrecySnapshot
    p_s: float
    trace: OptimizerTrace


def project_unit_norm(v: np.ndarray) -> np.ndarray:
    """Scale to unit 2-norm. A zero vector is a degenerate iterate."""
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return v / norm


def project_ca(v: np.ndarray) -> np.ndarray:
    """Force every entry onto modulus 1/sqrt(N), keeping phases.

    Entries with modulus below 1e-12 have no usable phase and are set to
    1/sqrt(N) with phase zero. The output always has unit 2-norm.
    """
    n = v.size
    scale = 1.0 / math.sqrt(n)
    mag = np.abs(v)
    out = np.full(v.shape, scale, dtype=complex)
    ok = mag >= 1e-12
    out[ok] = v[ok] * (scale / mag[ok])
    return out


def ca_violation(v: np.ndarray) -> float:
    """Max deviation of entry moduli from 1/sqrt(N); 0 for a CA vector."""
    return float(np.max(np.abs(np.abs(v) - 1.0 / math.sqrt(v.size))))


def state_ca_violation(bf: BeamformerState) -> float:
    return max(ca_violation(v) for v in bf.vectors())


def warm_start(params: ChannelParams, rng: np.random.Generator) -> BeamformerState:
    """Random start: i.i.d. CN(0,1) draws pushed onto the CA manifold."""

    def draw(n):
        z = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2.0)
        return project_ca(z)

    return BeamformerState(
        w_l=draw(params.n_rx),
        w_e=draw(params.n_rx),
        f_s=draw(params.n_tx),
        f_j=draw(params.n_tx),
    )


def _snapshot(lk: _Links) -> SecrecySnapshot:
    c_l = lk.c_l()
    c_e = lk.c_e()
    gamma_l = lk.den_l1 / lk.den_l0 - 1.0
    gamma_e = lk.den_e1 / lk.den_e0 - 1.0
    return SecrecySnapshot(gamma_l=gamma_l, gamma_e=gamma_e, c_l=c_l, c_e=c_e,
                           c_s=max(c_l - c_e, 0.0))


def _run_cycle(
    ch: ChannelSet,
    pw: PowerConfig,
    cfg: OptimizerConfig,
    bf: BeamformerState,
    cycle: int,
    records: list[IterationRecord],
    on_accept: Optional[Callable[[BeamformerState], None]],
):
    """One fixed-power ascent until |change| <= epsilon or the cap.

    Returns (state, links, passes, reason). Rejected passes consume an
    iteration index but leave the iterate and the records untouched.
    """
    lk = _Links(ch, bf, pw)
    diff = lk.capacity_difference()
    if not math.isfinite(diff):
        raise ValueError("non-finite objective at the initial state")
    delta = cfg.delta0
    reason = TerminationReason.ITER_CAP
    n = 0
    for n in range(1, cfg.max_iters + 1):
        g_wl = _grad_wl(lk, bf, pw)
        g_fj = _grad_fj(lk, ch, bf, pw)
        g_fs = _grad_fs(lk, ch, bf, pw)
        cand = BeamformerState(
            w_l=project_ca(project_unit_norm(bf.w_l + delta * g_wl)),
            w_e=project_ca(project_unit_norm(bf.w_e + delta * _grad_we(lk, bf, pw)))
            if cfg.optimize_we
            else bf.w_e,
            f_s=project_ca(project_unit_norm(bf.f_s + delta * g_fs)),
            f_j=project_ca(project_unit_norm(bf.f_j + delta * g_fj)),
        )
        lk_cand = _Links(ch, cand, pw)
        c_l_cand = lk_cand.c_l()
        c_e_cand = lk_cand.c_e()
        diff_cand = c_l_cand - c_e_cand
        if not math.isfinite(diff_cand):
            raise ValueError(f"non-finite objective at iteration {n}")
        change = diff_cand - diff
        if change < 0.0:
            # perturbation: revert, then halve the step
            if -change <= cfg.epsilon or delta <= cfg.delta_min:
                reason = TerminationReason.CONVERGED
                break
            delta = max(0.5 * delta, cfg.delta_min)
            continue
        bf, lk, diff = cand, lk_cand, diff_cand
        records.append(
            IterationRecord(cycle, n, max(diff, 0.0), c_l_cand, c_e_cand, delta, pw.p_s)
        )
        if on_accept is not None:
            on_accept(bf)
        if change <= cfg.epsilon:
            reason = TerminationReason.CONVERGED
            break
    return bf, lk, n, reason


def _require_ca(init: BeamformerState) -> None:
    if state_ca_violation(init) > 1e-6:
        raise ValueError("initial state violates the constant-amplitude constraint")


def ascend_fixed_power(
    ch: ChannelSet,
    pw: PowerConfig,
    cfg: OptimizerConfig,
    init: BeamformerState,
    on_accept: Optional[Callable[[BeamformerState], None]] = None,
) -> OptimizeResult:
    """Maximize the secrecy objective at constant source power.

    The eavesdropper combiner stays at its initial value unless
    ``cfg.optimize_we`` turns on the benchmark variant, which ascends w_e
    alongside the other three vectors.
    """
    _require_ca(init)
    trace = OptimizerTrace()
    lk0 = _Links(ch, init, pw)
    s0 = _snapshot(lk0)
    trace.records.append(
        IterationRecord(1, 0, s0.c_s, s0.c_l, s0.c_e, cfg.delta0, pw.p_s)
    )
    bf, lk, n, reason = _run_cycle(ch, pw, cfg, init.copy(), 1, trace.records, on_accept)
    snap = _snapshot(lk)
    trace.cycles.append(CycleRecord(1, snap.c_s, pw.p_s, n))
    trace.reason = reason
    trace.n_iters = n
    return OptimizeResult(state=bf, snapshot=snap, p_s=pw.p_s, trace=trace)


def ascend_variable_power(
    ch: ChannelSet,
    pw: PowerConfig,
    cfg: OptimizerConfig,
    init: BeamformerState,
    on_accept: Optional[Callable[[BeamformerState], None]] = None,
) -> OptimizeResult:
    """Repeat fixed-power cycles, raising P_s by kappa*P_s after any cycle
    that misses the secrecy target zeta, up to the power ceiling mu.

    The beamformers carry over between cycles; the step size restarts at
    delta0 each cycle. At least one cycle always runs, so zeta = 0 reports
    the target as reached without touching the power.
    """
    if cfg.zeta is None:
        raise ValueError("variable-power ascent needs cfg.zeta")
    _require_ca(init)
    trace = OptimizerTrace()
    p_s = pw.p_s
    bf = init.copy()
    lk0 = _Links(ch, bf, pw)
    s0 = _snapshot(lk0)
    trace.records.append(IterationRecord(1, 0, s0.c_s, s0.c_l, s0.c_e, cfg.delta0, p_s))
    lk = lk0
    total = 0
    reason = TerminationReason.CYCLE_CAP
    for cycle in range(1, cfg.max_cycles + 1):
        pw_c = replace(pw, p_s=p_s)
        bf, lk, n, _ = _run_cycle(ch, pw_c, cfg, bf, cycle, trace.records, on_accept)
        total += n
        snap = _snapshot(lk)
        trace.cycles.append(CycleRecord(cycle, snap.c_s, p_s, n))
        if snap.c_s >= cfg.zeta:
            reason = TerminationReason.TARGET_REACHED
            break
        bumped = p_s + cfg.kappa * p_s
        if bumped > cfg.mu:
            reason = TerminationReason.POWER_CAP
            break
        p_s = bumped
    trace.reason = reason
    trace.n_iters = total
    return OptimizeResult(state=bf, snapshot=_snapshot(lk), p_s=p_s, trace=trace)

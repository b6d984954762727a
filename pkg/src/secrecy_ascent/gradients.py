"""Conjugate (Wirtinger) gradients of the secrecy objective.

All gradients are taken with respect to the conjugated vector, so that for
the real objective c(v) the steepest-ascent update is v + delta * grad. The
1/ln(2) factor from the base-2 logarithms is kept.

The objective differentiated here is the smooth capacity difference
c_l - c_e; the clamp max(., 0) is flat wherever it binds and the ascent
direction of the difference is what drives the optimizer.

``fd_gradient`` is an independent central-difference oracle over the real
and imaginary parts of each coordinate, assembled into the same convention
0.5 * (d/dRe + j * d/dIm). It is the arbiter used by the test suite: the
analytic forms below are the ones that agree with it (for the source
precoder this means source-side factors P_s, h_sl, f_s in the legitimate
term and P_s, h_se, f_s in the eavesdropper term).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .channel import ChannelSet
from .metrics import LN2, BeamformerState, PowerConfig, _check_dims


@dataclass(frozen=True)
class QuadForms:
    """The four squared bilinear forms |w^H H f|^2, one per link."""

    psi_sl: float
    psi_jl: float
    psi_se: float
    psi_je: float


@dataclass
class GradientBundle:
    """Conjugate gradients of the secrecy objective at one state."""

    g_wl: np.ndarray
    g_fj: np.ndarray
    g_fs: np.ndarray
    g_we: Optional[np.ndarray] = None


def quad_forms(ch: ChannelSet, bf: BeamformerState) -> QuadForms:
    _check_dims(ch, bf)
    return QuadForms(
        psi_sl=abs(bf.w_l.conj() @ ch.h_sl @ bf.f_s) ** 2,
        psi_jl=abs(bf.w_l.conj() @ ch.h_jl @ bf.f_j) ** 2,
        psi_se=abs(bf.w_e.conj() @ ch.h_se @ bf.f_s) ** 2,
        psi_je=abs(bf.w_e.conj() @ ch.h_je @ bf.f_j) ** 2,
    )


class _Links:
    """Per-state link quantities shared by the objective and all gradients.

    a_* = H f (receive-side images), s_* = w^H H f (bilinear scalars),
    den_*0 = noise + jamming, den_*1 = den_*0 + source term. With these,
    c_l - c_e = (log(den_l1) - log(den_l0) - log(den_e1) + log(den_e0))/ln2.
    """

    __slots__ = (
        "a_sl", "a_jl", "a_se", "a_je",
        "s_sl", "s_jl", "s_se", "s_je",
        "den_l0", "den_l1", "den_e0", "den_e1",
    )

    def __init__(self, ch: ChannelSet, bf: BeamformerState, pw: PowerConfig):
        w_l, w_e, f_s, f_j = bf.w_l, bf.w_e, bf.f_s, bf.f_j
        self.a_sl = ch.h_sl @ f_s
        self.a_jl = ch.h_jl @ f_j
        self.a_se = ch.h_se @ f_s
        self.a_je = ch.h_je @ f_j
        self.s_sl = w_l.conj() @ self.a_sl
        self.s_jl = w_l.conj() @ self.a_jl
        self.s_se = w_e.conj() @ self.a_se
        self.s_je = w_e.conj() @ self.a_je
        wl2 = float(np.vdot(w_l, w_l).real)
        we2 = float(np.vdot(w_e, w_e).real)
        self.den_l0 = pw.sigma2_l * wl2 + pw.p_j * abs(self.s_jl) ** 2
        self.den_l1 = self.den_l0 + pw.p_s * abs(self.s_sl) ** 2
        self.den_e0 = pw.sigma2_e * we2 + pw.p_j * abs(self.s_je) ** 2
        self.den_e1 = self.den_e0 + pw.p_s * abs(self.s_se) ** 2

    def c_l(self) -> float:
        return math.log2(self.den_l1) - math.log2(self.den_l0)

    def c_e(self) -> float:
        return math.log2(self.den_e1) - math.log2(self.den_e0)

    def capacity_difference(self) -> float:
        return self.c_l() - self.c_e()


def _grad_wl(lk: _Links, bf: BeamformerState, pw: PowerConfig) -> np.ndarray:
    base = pw.sigma2_l * bf.w_l + pw.p_j * np.conj(lk.s_jl) * lk.a_jl
    full = base + pw.p_s * np.conj(lk.s_sl) * lk.a_sl
    return (full / lk.den_l1 - base / lk.den_l0) / LN2


def _grad_we(lk: _Links, bf: BeamformerState, pw: PowerConfig) -> np.ndarray:
    base = pw.sigma2_e * bf.w_e + pw.p_j * np.conj(lk.s_je) * lk.a_je
    full = base + pw.p_s * np.conj(lk.s_se) * lk.a_se
    return (base / lk.den_e0 - full / lk.den_e1) / LN2


def _grad_fj(lk: _Links, ch: ChannelSet, bf: BeamformerState, pw: PowerConfig) -> np.ndarray:
    c_jl = ch.h_jl.conj().T @ bf.w_l
    c_je = ch.h_je.conj().T @ bf.w_e
    leg = (1.0 / lk.den_l1 - 1.0 / lk.den_l0) * lk.s_jl * c_jl
    eav = (1.0 / lk.den_e1 - 1.0 / lk.den_e0) * lk.s_je * c_je
    return pw.p_j * (leg - eav) / LN2


def _grad_fs(lk: _Links, ch: ChannelSet, bf: BeamformerState, pw: PowerConfig) -> np.ndarray:
    c_sl = ch.h_sl.conj().T @ bf.w_l
    c_se = ch.h_se.conj().T @ bf.w_e
    return pw.p_s * (lk.s_sl * c_sl / lk.den_l1 - lk.s_se * c_se / lk.den_e1) / LN2


def grad_wl(ch: ChannelSet, bf: BeamformerState, pw: PowerConfig) -> np.ndarray:
    """Gradient w.r.t. the conjugate of the legitimate combiner."""
    _check_dims(ch, bf)
    return _grad_wl(_Links(ch, bf, pw), bf, pw)


def grad_fj(ch: ChannelSet, bf: BeamformerState, pw: PowerConfig) -> np.ndarray:
    """Gradient w.r.t. the conjugate of the jammer precoder."""
    _check_dims(ch, bf)
    return _grad_fj(_Links(ch, bf, pw), ch, bf, pw)


def grad_fs(ch: ChannelSet, bf: BeamformerState, pw: PowerConfig) -> np.ndarray:
    """Gradient w.r.t. the conjugate of the source precoder."""
    _check_dims(ch, bf)
    return _grad_fs(_Links(ch, bf, pw), ch, bf, pw)


def grad_we(ch: ChannelSet, bf: BeamformerState, pw: PowerConfig) -> np.ndarray:
    """Gradient w.r.t. the conjugate of the eavesdropper combiner
    (benchmark mode: ascending it degrades the eavesdropper link)."""
    _check_dims(ch, bf)
    return _grad_we(_Links(ch, bf, pw), bf, pw)


def gradient_bundle(
    ch: ChannelSet, bf: BeamformerState, pw: PowerConfig, include_we: bool = False
) -> GradientBundle:
    """All gradients at one state, sharing the link quantities."""
    _check_dims(ch, bf)
    lk = _Links(ch, bf, pw)
    return GradientBundle(
        g_wl=_grad_wl(lk, bf, pw),
        g_fj=_grad_fj(lk, ch, bf, pw),
        g_fs=_grad_fs(lk, ch, bf, pw),
        g_we=_grad_we(lk, bf, pw) if include_we else None,
    )


def capacity_difference(ch: ChannelSet, bf: BeamformerState, pw: PowerConfig) -> float:
    """Unclamped c_l - c_e, the smooth function the gradients differentiate."""
    _check_dims(ch, bf)
    return _Links(ch, bf, pw).capacity_difference()


def gradient_check_error(analytic: np.ndarray, reference: np.ndarray) -> float:
    """Relative 2-norm disagreement between a gradient and its oracle.

    Degenerate configurations (a scalar combiner, zeroed powers) have
    exactly-zero gradients where a relative error is meaningless; when both
    sides are below the finite-difference noise floor the error is 0.
    """
    norm_ref = float(np.linalg.norm(reference))
    norm_ana = float(np.linalg.norm(analytic))
    if norm_ref < 1e-8 and norm_ana < 1e-8:
        return 0.0
    return float(np.linalg.norm(analytic - reference)) / max(norm_ref, 1e-8)


def fd_gradient(
    objective: Callable[[np.ndarray], float], point: np.ndarray, h: float = 1e-6
) -> np.ndarray:
    """Central-difference conjugate gradient of a real objective.

    Probes each coordinate along the real and imaginary axes and assembles
    0.5 * (d/dRe + j * d/dIm). Independent of every analytic form above.
    """
    if h <= 0:
        raise ValueError("h must be > 0")
    grad = np.zeros(point.shape, dtype=complex)
    for k in range(point.size):
        probes = []
        for step in (h, -h, 1j * h, -1j * h):
            v = point.astype(complex).copy()
            v[k] += step
            val = objective(v)
            if not np.isfinite(val):
                raise ValueError(f"objective not finite at probe {k}, step {step}")
            probes.append(val)
        d_re = (probes[0] - probes[1]) / (2.0 * h)
        d_im = (probes[2] - probes[3]) / (2.0 * h)
        grad[k] = 0.5 * (d_re + 1j * d_im)
    return grad

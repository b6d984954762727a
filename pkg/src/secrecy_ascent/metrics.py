"""SINRs, link capacities, secrecy capacity, and the SVD diagnostic bound."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelSet

LN2 = np.log(2.0)


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * np.log10(x)


@dataclass(frozen=True)
class PowerConfig:
    """Transmit/jamming powers and noise variances, all linear scale."""

    p_s: float
    p_j: float
    sigma2_l: float = 1.0
    sigma2_e: float = 1.0

    def __post_init__(self):
        if self.p_s < 0 or self.p_j < 0:
            raise ValueError("powers must be >= 0")
        if self.sigma2_l <= 0 or self.sigma2_e <= 0:
            raise ValueError("noise variances must be > 0")


@dataclass
class BeamformerState:
    """Combiners (w_l at the receiver, w_e at the eavesdropper) and
    precoders (f_s at the source, f_j at the jammer)."""

    w_l: np.ndarray
    w_e: np.ndarray
    f_s: np.ndarray
    f_j: np.ndarray

    def copy(self) -> "BeamformerState":
        return BeamformerState(self.w_l.copy(), self.w_e.copy(), self.f_s.copy(), self.f_j.copy())

    def vectors(self):
        return (self.w_l, self.w_e, self.f_s, self.f_j)


@dataclass(frozen=True)
class SecrecySnapshot:
    """Point evaluation of both links: SINRs, capacities, secrecy capacity."""

    gamma_l: float
    gamma_e: float
    c_l: float
    c_e: float
    c_s: float


def _check_dims(ch: ChannelSet, bf: BeamformerState) -> None:
    n_rx, n_tx = ch.h_sl.shape
    if bf.w_l.shape != (n_rx,) or bf.w_e.shape != (n_rx,):
        raise ValueError(f"combiners must have shape ({n_rx},)")
    if bf.f_s.shape != (n_tx,) or bf.f_j.shape != (n_tx,):
        raise ValueError(f"precoders must have shape ({n_tx},)")


def _bilinear_power(w: np.ndarray, h: np.ndarray, f: np.ndarray) -> float:
    s = w.conj() @ (h @ f)
    return float(s.real * s.real + s.imag * s.imag)


def sinr_legitimate(ch: ChannelSet, bf: BeamformerState, pw: PowerConfig) -> float:
    """P_s|w_l^H H_sl f_s|^2 / (w_l^H w_l sigma_l^2 + P_j|w_l^H H_jl f_j|^2)."""
    _check_dims(ch, bf)
    num = pw.p_s * _bilinear_power(bf.w_l, ch.h_sl, bf.f_s)
    den = pw.sigma2_l * float(np.vdot(bf.w_l, bf.w_l).real) + pw.p_j * _bilinear_power(
        bf.w_l, ch.h_jl, bf.f_j
    )
    return num / den


def sinr_eavesdropper(ch: ChannelSet, bf: BeamformerState, pw: PowerConfig) -> float:
    """Mirror of sinr_legitimate on the eavesdropper side."""
    _check_dims(ch, bf)
    num = pw.p_s * _bilinear_power(bf.w_e, ch.h_se, bf.f_s)
    den = pw.sigma2_e * float(np.vdot(bf.w_e, bf.w_e).real) + pw.p_j * _bilinear_power(
        bf.w_e, ch.h_je, bf.f_j
    )
    return num / den


def capacity(gamma: float) -> float:
    """Shannon capacity log2(1 + gamma) in bps/Hz."""
    if gamma < 0:
        raise ValueError("gamma must be >= 0")
    return float(np.log2(1.0 + gamma))


def secrecy_capacity(ch: ChannelSet, bf: BeamformerState, pw: PowerConfig) -> SecrecySnapshot:
    """Evaluate both links and clamp the capacity difference at zero."""
    gamma_l = sinr_legitimate(ch, bf, pw)
    gamma_e = sinr_eavesdropper(ch, bf, pw)
    c_l = capacity(gamma_l)
    c_e = capacity(gamma_e)
    return SecrecySnapshot(
        gamma_l=gamma_l, gamma_e=gamma_e, c_l=c_l, c_e=c_e, c_s=max(c_l - c_e, 0.0)
    )


def svd_upper_bound(ch: ChannelSet, pw: PowerConfig, literal: bool = False) -> float:
    """Secrecy diagnostic from extreme singular values of the four channels.

    Best case for the legitimate link (largest singular value of h_sl,
    smallest of h_jl) against the worst case for the eavesdropper (smallest
    of h_se, largest of h_je). Not an achievable rate and not clamped: a
    negative value is reported as-is.

    With ``literal=True`` the jammer power is dropped from the legitimate
    denominator, i.e. sigma_l^2 + lambda_min(h_jl)^2 instead of
    sigma_l^2 + P_j lambda_min(h_jl)^2. The default keeps P_j in both
    denominators for dimensional consistency.
    """
    s_sl = np.linalg.svd(ch.h_sl, compute_uv=False)
    s_se = np.linalg.svd(ch.h_se, compute_uv=False)
    s_jl = np.linalg.svd(ch.h_jl, compute_uv=False)
    s_je = np.linalg.svd(ch.h_je, compute_uv=False)
    p_j_leg = 1.0 if literal else pw.p_j
    term_l = np.log2(1.0 + pw.p_s * s_sl[0] ** 2 / (pw.sigma2_l + p_j_leg * s_jl[-1] ** 2))
    term_e = np.log2(1.0 + pw.p_s * s_se[-1] ** 2 / (pw.sigma2_e + pw.p_j * s_je[0] ** 2))
    return float(term_l - term_e)

"""Shared builders for the test suite."""

import numpy as np

import secrecy_ascent as sa


def scalar_channel(h_sl=1.0, h_se=0.0, h_jl=0.0, h_je=0.0) -> sa.ChannelSet:
    return sa.ChannelSet(
        h_sl=np.array([[h_sl]], dtype=complex),
        h_se=np.array([[h_se]], dtype=complex),
        h_jl=np.array([[h_jl]], dtype=complex),
        h_je=np.array([[h_je]], dtype=complex),
    )


def scalar_state(w_l=1.0, w_e=1.0, f_s=1.0, f_j=1.0) -> sa.BeamformerState:
    return sa.BeamformerState(
        w_l=np.array([w_l], dtype=complex),
        w_e=np.array([w_e], dtype=complex),
        f_s=np.array([f_s], dtype=complex),
        f_j=np.array([f_j], dtype=complex),
    )


def random_instance(n_rx, n_tx, seed, n_clusters=2, n_rays=3, p_s=10.0, p_j=10.0):
    """A seeded (channel set, CA state, powers) triple."""
    params = sa.ChannelParams(
        n_clusters=n_clusters, n_rays=n_rays, n_rx=n_rx, n_tx=n_tx, angular_spread_deg=10.0
    )
    rng = np.random.default_rng(seed)
    ch = sa.draw_channel_set(params, rng)
    bf = sa.warm_start(params, rng)
    return ch, bf, sa.PowerConfig(p_s=p_s, p_j=p_j)


def objective_in(ch, bf, pw, name):
    """c_l - c_e as a function of one beamformer vector, others held."""

    def objective(v):
        probe = bf.copy()
        setattr(probe, name, v)
        return sa.capacity_difference(ch, probe, pw)

    return objective


MMWAVE_PARAMS = sa.ChannelParams(
    n_clusters=4, n_rays=15, n_rx=4, n_tx=64, angular_spread_deg=10.0,
    carrier_band=sa.Band.MMWAVE,
)
SUB6_PARAMS = sa.ChannelParams(
    n_clusters=10, n_rays=20, n_rx=4, n_tx=16, angular_spread_deg=10.0,
    carrier_band=sa.Band.SUB6,
)

"""Clustered geometric MIMO channel synthesis.

Channels are built as a normalized sum over clusters and rays of complex
path gains times outer products of uniform-linear-array response vectors:

    H = sqrt(N_rx*N_tx / (N_cl*N_ray)) * sum_paths  gain * a_rx(aoa) a_tx(aod)^H

Arrays are half-wavelength ULAs with an azimuth-only response; elevation
angles are drawn and kept on each path but do not enter the response.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class Band(str, enum.Enum):
    """Carrier band tag. Metadata only; never enters any formula."""

    SUB6 = "sub6"
    MMWAVE = "mmwave"


@dataclass(frozen=True)
class ChannelParams:
    """Cluster/ray geometry and array sizes for one link configuration."""

    n_clusters: int
    n_rays: int
    n_rx: int
    n_tx: int
    angular_spread_deg: float
    carrier_band: Band = Band.MMWAVE

    def __post_init__(self):
        for name in ("n_clusters", "n_rays", "n_rx", "n_tx"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.angular_spread_deg < 0:
            raise ValueError("angular_spread_deg must be >= 0")

    @property
    def n_paths(self) -> int:
        return self.n_clusters * self.n_rays


@dataclass(frozen=True)
class PathComponent:
    """One ray: complex gain plus arrival/departure angles in radians."""

    gain: complex
    aoa_azimuth: float
    aoa_elevation: float
    aod_azimuth: float
    aod_elevation: float


@dataclass
class ChannelSet:
    """The four N_rx x N_tx channels of one realization.

    h_sl: source -> legitimate receiver      h_se: source -> eavesdropper
    h_jl: jammer -> legitimate receiver      h_je: jammer -> eavesdropper
    """

    h_sl: np.ndarray
    h_se: np.ndarray
    h_jl: np.ndarray
    h_je: np.ndarray

    def __post_init__(self):
        shape = self.h_sl.shape
        for name in ("h_se", "h_jl", "h_je"):
            if getattr(self, name).shape != shape:
                raise ValueError(f"{name} has shape {getattr(self, name).shape}, expected {shape}")

    @property
    def n_rx(self) -> int:
        return self.h_sl.shape[0]

    @property
    def n_tx(self) -> int:
        return self.h_sl.shape[1]


def steering_vector(n_antennas: int, azimuth: float) -> np.ndarray:
    """Half-wavelength ULA response: entry k is exp(j*pi*k*sin(az))/sqrt(n).

    The result always has unit 2-norm.
    """
    if n_antennas < 1:
        raise ValueError("n_antennas must be >= 1")
    k = np.arange(n_antennas)
    return np.exp(1j * np.pi * k * math.sin(azimuth)) / math.sqrt(n_antennas)


def _steering_matrix(n_antennas: int, azimuths: np.ndarray) -> np.ndarray:
    # column p is steering_vector(n_antennas, azimuths[p])
    k = np.arange(n_antennas)[:, None]
    return np.exp(1j * np.pi * k * np.sin(azimuths)[None, :]) / math.sqrt(n_antennas)


def draw_paths(params: ChannelParams, rng: np.random.Generator) -> list[PathComponent]:
    """Draw N_cl*N_ray path components.

    Gains are i.i.d. CN(0,1). Cluster-center azimuths are uniform on
    [0, 2*pi); per-ray offsets are zero-mean Gaussian with the configured
    angular spread. Arrival and departure angles are independent, and
    elevation angles follow the same cluster/offset construction as azimuths.
    """
    spread = math.radians(params.angular_spread_deg)
    paths = []
    for _ in range(params.n_clusters):
        centers = rng.uniform(0.0, 2.0 * np.pi, size=4)  # aoa_az, aoa_el, aod_az, aod_el
        for _ in range(params.n_rays):
            offsets = rng.normal(0.0, spread, size=4)
            re, im = rng.standard_normal(2)
            paths.append(
                PathComponent(
                    gain=complex(re, im) / math.sqrt(2.0),
                    aoa_azimuth=centers[0] + offsets[0],
                    aoa_elevation=centers[1] + offsets[1],
                    aod_azimuth=centers[2] + offsets[2],
                    aod_elevation=centers[3] + offsets[3],
                )
            )
    return paths


def build_channel(params: ChannelParams, paths: list[PathComponent]) -> np.ndarray:
    """Assemble the channel matrix from path components."""
    if len(paths) != params.n_paths:
        raise ValueError(f"expected {params.n_paths} paths, got {len(paths)}")
    gains = np.array([p.gain for p in paths])
    a_rx = _steering_matrix(params.n_rx, np.array([p.aoa_azimuth for p in paths]))
    a_tx = _steering_matrix(params.n_tx, np.array([p.aod_azimuth for p in paths]))
    scale = math.sqrt(params.n_rx * params.n_tx / params.n_paths)
    return scale * ((a_rx * gains) @ a_tx.conj().T)


def draw_channel_set(params: ChannelParams, rng: np.random.Generator) -> ChannelSet:
    """Draw four independent channels sharing one geometry configuration."""
    h_sl, h_se, h_jl, h_je = (build_channel(params, draw_paths(params, rng)) for _ in range(4))
    return ChannelSet(h_sl=h_sl, h_se=h_se, h_jl=h_jl, h_je=h_je)

"""Free-space link budget and Shannon capacity."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from wigig.errors import InvalidParameter

SPEED_OF_LIGHT = 299_792_458.0
THERMAL_NOISE_DBM_HZ = -174.0


@dataclass(frozen=True)
class LinkParams:
    p_t: float = 10.0            # dBm
    g_t: float = 0.0             # dBi
    g_r: float = 0.0             # dBi
    freq: float = 60e9           # Hz
    dist: float = 10.0           # m
    bandwidth: float = 2e9       # Hz
    noise_figure: float = 10.0   # dB
    shadow_margin: float = 6.0   # dB

    def __post_init__(self):
        if self.dist <= 0 or self.freq <= 0 or self.bandwidth <= 0:
            raise InvalidParameter("distance, frequency and bandwidth must be positive")


def path_loss(freq: float, dist: float) -> float:
    """Free-space path loss in dB, 20 log10(4 pi d / lambda)."""
    wavelength = SPEED_OF_LIGHT / freq
    return 20 * math.log10(4 * math.pi * dist / wavelength)


def received_power(p: LinkParams) -> float:
    return p.p_t + p.g_t + p.g_r - path_loss(p.freq, p.dist)


def noise_floor(p: LinkParams) -> float:
    return THERMAL_NOISE_DBM_HZ + 10 * math.log10(p.bandwidth) + p.noise_figure


def snr_db(p: LinkParams) -> float:
    return received_power(p) - noise_floor(p) - p.shadow_margin


def shannon_capacity(p: LinkParams) -> float:
    return p.bandwidth * math.log2(1 + 10 ** (snr_db(p) / 10))


def required_gain(target_rate: float, p: LinkParams) -> float:
    """Total antenna gain g_t + g_r (dB) at which capacity reaches ``target_rate``."""
    if target_rate <= 0:
        raise InvalidParameter("target rate must be positive")
    needed_snr = 10 * math.log10(2 ** (target_rate / p.bandwidth) - 1)
    return p.g_t + p.g_r + needed_snr - snr_db(p)


def capacity_sweep(p: LinkParams, p_t_values):
    """Rows of (p_t, received power, SNR, capacity) for a transmit-power sweep."""
    rows = []
    for pt in np.asarray(p_t_values, dtype=float):
        q = replace(p, p_t=float(pt))
        rows.append((float(pt), received_power(q), snr_db(q), shannon_capacity(q)))
    return rows

"""Instantaneous SINRs and achievable rates for a channel draw."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelDraw
from .model import PowerBudget, SystemParams, relay_power

# Noise power; every power in the package is measured in units of N0.
N0 = 1.0


@dataclass(frozen=True)
class SinrSet:
    x2_sr: np.ndarray
    x2_sd: np.ndarray
    x1_sr: np.ndarray
    x1_rd: np.ndarray


@dataclass(frozen=True)
class RatePair:
    r1: float
    r2: float

    @property
    def sum(self):
        return self.r1 + self.r2

    def __iter__(self):
        return iter((self.r1, self.r2, self.sum))


def instantaneous_sinrs(params: SystemParams, budget: PowerBudget, draw: ChannelDraw) -> SinrSet:
    """SINRs of both symbols on every link.

    x2 is decoded treating x1 as noise; the relay then removes x2 by SIC
    before decoding x1. Works elementwise on array-valued draws.
    """
    a = params.alpha
    rx = budget.p_factor * budget.p_source
    g_sr = np.asarray(draw.gamma_sr, dtype=float)
    g_sd = np.asarray(draw.gamma_sd, dtype=float)
    g_rd = np.asarray(draw.gamma_rd, dtype=float)
    p_r = relay_power(params.protocol, budget.p_source, g_sr, params.eta)
    return SinrSet(
        x2_sr=(1 - a) * rx * g_sr / (a * rx * g_sr + N0),
        x2_sd=(1 - a) * rx * g_sd / (a * rx * g_sd + N0),
        x1_sr=a * rx * g_sr / N0,
        x1_rd=p_r * g_rd / N0,
    )


def instantaneous_rates(sinrs: SinrSet, zeta: float) -> RatePair:
    """Rates in bits/s/Hz, each limited by its weakest link."""
    r1 = zeta * np.log1p(np.minimum(sinrs.x1_sr, sinrs.x1_rd)) / np.log(2.0)
    r2 = zeta * np.log1p(np.minimum(sinrs.x2_sr, sinrs.x2_sd)) / np.log(2.0)
    if np.ndim(r1) == 0:
        return RatePair(float(r1), float(r2))
    return RatePair(r1, r2)

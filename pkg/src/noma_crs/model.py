"""Scenario parameters, EH protocols and per-protocol power budgets.

Noise power is normalised to one, so ``snr_total`` plays the role of the
total transmit power P_t and every power below is expressed in units of N0.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np


class ProtocolKind(enum.Enum):
    PS = "ps"
    TS = "ts"
    IDEAL = "ideal"
    BENCHMARK = "benchmark"


@dataclass(frozen=True)
class EhProtocol:
    """Energy-harvesting protocol, with rho (PS) or xi (TS) where relevant."""

    kind: ProtocolKind
    param: Optional[float] = None

    def __post_init__(self):
        if self.kind in (ProtocolKind.PS, ProtocolKind.TS):
            name = "rho" if self.kind is ProtocolKind.PS else "xi"
            if self.param is None:
                raise ValueError(f"{self.kind.value} protocol requires {name}")
            if not 0.0 < self.param < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {self.param}")
            object.__setattr__(self, "param", float(self.param))
        elif self.param is not None:
            raise ValueError(f"{self.kind.value} protocol takes no parameter")

    @classmethod
    def power_sharing(cls, rho: float) -> "EhProtocol":
        return cls(ProtocolKind.PS, rho)

    @classmethod
    def time_sharing(cls, xi: float) -> "EhProtocol":
        return cls(ProtocolKind.TS, xi)

    @classmethod
    def ideal(cls) -> "EhProtocol":
        return cls(ProtocolKind.IDEAL)

    @classmethod
    def benchmark(cls) -> "EhProtocol":
        return cls(ProtocolKind.BENCHMARK)

    @property
    def harvests(self) -> bool:
        return self.kind is not ProtocolKind.BENCHMARK

    @property
    def label(self) -> str:
        if self.kind is ProtocolKind.PS:
            return f"PS(rho={self.param:g})"
        if self.kind is ProtocolKind.TS:
            return f"TS(xi={self.param:g})"
        return "Ideal" if self.kind is ProtocolKind.IDEAL else "Benchmark"

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class SystemParams:
    """All constants of one scenario, on linear scale."""

    sigma2_sr: float
    sigma2_sd: float
    sigma2_rd: float
    alpha: float
    snr_total: float
    protocol: EhProtocol
    eta: float = 0.95
    frame_duration: float = field(default=1.0, repr=False)

    def __post_init__(self):
        for name in ("sigma2_sr", "sigma2_sd", "sigma2_rd", "snr_total"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if not 0.0 < self.alpha < 0.5:
            raise ValueError(f"alpha must lie in (0, 0.5), got {self.alpha}")
        if not 0.0 < self.eta <= 1.0:
            raise ValueError(f"eta must lie in (0, 1], got {self.eta}")
        if self.frame_duration != 1.0:
            raise ValueError("frame_duration is normalised to 1")


@dataclass(frozen=True)
class PowerBudget:
    p_source: float
    p_factor: float
    zeta: float
    upsilon: Optional[float]  # None for the benchmark (no harvesting)


def db_to_linear(db):
    out = 10.0 ** (np.asarray(db, dtype=float) / 10.0)
    return float(out) if out.ndim == 0 else out


def linear_to_db(x):
    return 10.0 * np.log10(x)


def source_power(protocol: EhProtocol, p_t: float) -> float:
    if protocol.kind is ProtocolKind.TS:
        return 2.0 * p_t / (1.0 + protocol.param)
    if protocol.kind is ProtocolKind.BENCHMARK:
        return p_t
    return 2.0 * p_t


def relay_power(protocol: EhProtocol, p_s, gamma_sr, eta: float):
    """Relay transmit power. Harvested from ``gamma_sr`` except for the benchmark,
    whose relay always transmits at P_t (which equals ``p_s`` there)."""
    kind = protocol.kind
    if kind is ProtocolKind.PS:
        return eta * protocol.param * p_s * gamma_sr
    if kind is ProtocolKind.TS:
        xi = protocol.param
        return 2.0 * eta * xi / (1.0 - xi) * p_s * gamma_sr
    if kind is ProtocolKind.IDEAL:
        return eta * p_s * gamma_sr
    return p_s * np.ones_like(gamma_sr, dtype=float) if np.ndim(gamma_sr) else float(p_s)


def harvest_coefficient(protocol: EhProtocol, eta: float) -> Optional[float]:
    """Upsilon: relay power divided by P_s * gamma_sr."""
    kind = protocol.kind
    if kind is ProtocolKind.PS:
        return eta * protocol.param
    if kind is ProtocolKind.TS:
        return 2.0 * eta * protocol.param / (1.0 - protocol.param)
    if kind is ProtocolKind.IDEAL:
        return eta
    return None


def power_budget(params: SystemParams) -> PowerBudget:
    protocol = params.protocol
    p_factor = 1.0 - protocol.param if protocol.kind is ProtocolKind.PS else 1.0
    zeta = (1.0 - protocol.param) / 2.0 if protocol.kind is ProtocolKind.TS else 0.5
    return PowerBudget(
        p_source=source_power(protocol, params.snr_total),
        p_factor=p_factor,
        zeta=zeta,
        upsilon=harvest_coefficient(protocol, params.eta),
    )


def frame_slots(protocol: EhProtocol, frame_duration: float = 1.0) -> dict:
    """Durations of the slots making up one frame."""
    T = frame_duration
    if protocol.kind is ProtocolKind.TS:
        xi = protocol.param
        return {"harvest": xi * T, "broadcast": (1 - xi) * T / 2, "relay": (1 - xi) * T / 2}
    return {"harvest": 0.0, "broadcast": T / 2, "relay": T / 2}


def frame_energy(protocol: EhProtocol, p_t: float, frame_duration: float = 1.0) -> float:
    """Energy drawn from the external supply during one frame.

    Only the source draws external power when the relay harvests; in the
    benchmark the relay transmits from its own supply too.
    """
    slots = frame_slots(protocol, frame_duration)
    p_s = source_power(protocol, p_t)
    energy = p_s * (slots["harvest"] + slots["broadcast"])
    if protocol.kind is ProtocolKind.BENCHMARK:
        energy += p_t * slots["relay"]
    return energy

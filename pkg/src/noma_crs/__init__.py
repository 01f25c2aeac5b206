"""Ergodic rates of a wireless-powered NOMA cooperative relaying link.

A source superposes two symbols for one destination; a decode-and-forward
relay, powered by energy harvested from the source signal, forwards the
weak symbol. Rates are computed by Monte Carlo over Rayleigh fading and by
numerical quadrature of the ergodic-rate integrals.
"""
from .analytic import ergodic_c1, ergodic_c1_benchmark, ergodic_c1_double, ergodic_c2, ergodic_sum
from .channel import ChannelDraw, RngStream, pdf_w, pdf_y, pdf_z, sample_draw, sample_draws
from .errors import DomainError, QuadratureError, UnsupportedProtocolError
from .explore import alpha_optima, optimize_scalar, sweep_scalar, sweep_snr
from .model import (
    EhProtocol, PowerBudget, ProtocolKind, SystemParams, db_to_linear, power_budget,
    relay_power, source_power,
)
from .montecarlo import ErgodicEstimate, estimate_ergodic
from .quadrature import QuadratureSpec
from .rates import RatePair, SinrSet, instantaneous_rates, instantaneous_sinrs

__all__ = [
    "ChannelDraw", "DomainError", "EhProtocol", "ErgodicEstimate", "PowerBudget",
    "ProtocolKind", "QuadratureError", "QuadratureSpec", "RatePair", "RngStream", "SinrSet",
    "SystemParams", "UnsupportedProtocolError", "alpha_optima", "db_to_linear",
    "ergodic_c1", "ergodic_c1_benchmark", "ergodic_c1_double", "ergodic_c2", "ergodic_sum",
    "estimate_ergodic", "instantaneous_rates", "instantaneous_sinrs", "optimize_scalar",
    "pdf_w", "pdf_y", "pdf_z", "power_budget", "relay_power", "sample_draw", "sample_draws",
    "source_power", "sweep_scalar", "sweep_snr",
]

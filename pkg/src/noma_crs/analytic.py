"""Ergodic rates by numerical quadrature.

All improper integrals are truncated at ``QuadratureSpec.upper_bound``.
C1 is computed through the density of Z = gamma_sr * W; the direct double
integral over (gamma_sr, gamma_rd) is kept as :func:`ergodic_c1_double` for
cross-checking.
"""
from __future__ import annotations

import numpy as np

from .channel import pdf_y, pdf_z
from .errors import UnsupportedProtocolError
from .model import PowerBudget, SystemParams, power_budget
from .quadrature import QuadratureSpec, integrate
from .rates import N0, RatePair

DEFAULT_QUAD = QuadratureSpec()
_LN2 = np.log(2.0)
_DECADES = (1e-8, 1e-6, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0)


def _breakpoints(upper, *extra):
    pts = [p for p in (*_DECADES, *extra) if 0.0 < p < upper]
    return sorted(set(pts))


def _log2_1p(x):
    return np.log1p(x) / _LN2


def _integrate(f, upper, quad, extra=()):
    return float(integrate(f, 0.0, upper, rel_tol=quad.rel_tol,
                           max_panels=quad.max_panels,
                           breakpoints=_breakpoints(upper, *extra)).value)


def ergodic_c2(params: SystemParams, budget: PowerBudget | None = None,
               quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Ergodic rate of x2 as the difference of two averages over Y."""
    budget = budget or power_budget(params)
    snr = budget.p_factor * budget.p_source / N0
    ub = quad.upper_bound
    lam = 1.0 / params.sigma2_sr + 1.0 / params.sigma2_sd
    full = _integrate(lambda y: _log2_1p(snr * y) * pdf_y(y, params), ub, quad, (1 / lam,))
    interf = _integrate(lambda y: _log2_1p(params.alpha * snr * y) * pdf_y(y, params),
                        ub, quad, (1 / lam,))
    return budget.zeta * (full - interf)


def ergodic_c1(params: SystemParams, budget: PowerBudget | None = None,
               quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Ergodic rate of x1 for a harvesting protocol, averaged over Z."""
    budget = budget or power_budget(params)
    if budget.upsilon is None:
        raise UnsupportedProtocolError("use ergodic_c1_benchmark for the benchmark")
    snr = budget.p_source / N0
    inner_tol = min(1e-9, quad.rel_tol / 10)
    scale = params.alpha * budget.p_factor * params.sigma2_sr

    def integrand(z):
        return _log2_1p(snr * z) * pdf_z(z, params, budget, rel_tol=inner_tol)

    return budget.zeta * _integrate(integrand, quad.upper_bound, quad, (scale,))


def ergodic_c1_benchmark(params: SystemParams, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Ergodic rate of x1 without harvesting.

    V = min(alpha*gamma_sr, gamma_rd) is exponential with rate
    1/(alpha*sigma2_sr) + 1/sigma2_rd.
    """
    budget = power_budget(params)
    if budget.upsilon is not None:
        raise UnsupportedProtocolError(f"{params.protocol.label} is not the benchmark")
    snr = budget.p_source / N0
    lam = 1.0 / (params.alpha * params.sigma2_sr) + 1.0 / params.sigma2_rd
    return budget.zeta * _integrate(
        lambda v: _log2_1p(snr * v) * lam * np.exp(-lam * v), quad.upper_bound, quad, (1 / lam,))


def ergodic_c1_double(params: SystemParams, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Ergodic rate of x1 by direct 2-D quadrature over (gamma_sr, gamma_rd).

    Debug oracle for :func:`ergodic_c1` / :func:`ergodic_c1_benchmark`. The
    inner integral is split where the two links' SINRs cross.
    """
    budget = power_budget(params)
    ub = quad.upper_bound
    s_sr, s_rd = params.sigma2_sr, params.sigma2_rd
    ps = budget.p_source
    x1_gain = params.alpha * budget.p_factor * ps / N0
    inner_tol = min(1e-9, quad.rel_tol / 10)

    def relay_gain(g_sr):
        # relay SINR per unit gamma_rd
        if budget.upsilon is None:
            return np.full_like(g_sr, ps / N0)
        return budget.upsilon * ps * g_sr / N0

    def outer(g_sr):
        a = x1_gain * g_sr
        b = relay_gain(g_sr)
        with np.errstate(divide="ignore", invalid="ignore"):
            kink = np.where(b > 0, np.minimum(a / b, ub), ub)

        def part(lo, hi):
            width = hi - lo

            def f(s):
                g_rd = lo[:, None] + width[:, None] * s[None, :]
                sinr = np.minimum(a[:, None], b[:, None] * g_rd)
                return _log2_1p(sinr) * np.exp(-g_rd / s_rd) / s_rd * width[:, None]

            return integrate(f, 0.0, 1.0, rel_tol=inner_tol, abs_tol=1e-300,
                             breakpoints=(1e-4, 1e-3, 1e-2, 0.1)).value

        zero = np.zeros_like(g_sr)
        inner = part(zero, kink) + part(kink, np.full_like(g_sr, ub))
        return inner * np.exp(-g_sr / s_sr) / s_sr

    return budget.zeta * _integrate(outer, ub, quad, (s_sr,))


def ergodic_sum(params: SystemParams, quad: QuadratureSpec = DEFAULT_QUAD) -> RatePair:
    """(C1, C2) for any protocol; ``.sum`` is C1 + C2."""
    budget = power_budget(params)
    if budget.upsilon is None:
        c1 = ergodic_c1_benchmark(params, quad)
    else:
        c1 = ergodic_c1(params, budget, quad)
    return RatePair(c1, ergodic_c2(params, budget, quad))

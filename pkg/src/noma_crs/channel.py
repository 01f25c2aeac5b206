"""Rayleigh-fading gain sampling and the densities of the derived variables.

Y = min(gamma_sr, gamma_sd), W = min(alpha*p, upsilon*gamma_rd) and
Z = gamma_sr * W are the random variables the ergodic-rate integrals average
over.

Random numbers come from Philox, a counter-based generator. Trial ``i`` of a
seed owns the 256-bit Philox block at counter ``i``; its first three 64-bit
words become (gamma_sr, gamma_sd, gamma_rd). A trial's draw therefore depends
only on (seed, i), never on how the trials are batched or which thread
produces them.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import exp1

from .errors import DomainError, UnsupportedProtocolError
from .model import PowerBudget, SystemParams
from .quadrature import integrate

_WORDS_PER_TRIAL = 4
_TWO_M53 = 2.0 ** -53
_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class ChannelDraw:
    """Instantaneous power gains; fields may be scalars or equal-length arrays."""

    gamma_sr: np.ndarray
    gamma_sd: np.ndarray
    gamma_rd: np.ndarray


@dataclass(frozen=True)
class RngStream:
    seed: int
    stream_index: int

    def __post_init__(self):
        if self.stream_index < 0:
            raise ValueError("stream_index must be non-negative")


def _exponentials(seed, start, count):
    """Unit-mean exponentials for trials start..start+count-1, shape (count, 3)."""
    bitgen = np.random.Philox(key=int(seed) & _SEED_MASK, counter=int(start))
    raw = bitgen.random_raw(count * _WORDS_PER_TRIAL).reshape(count, _WORDS_PER_TRIAL)
    u = (raw[:, :3] >> np.uint64(11)).astype(np.float64) * _TWO_M53
    return -np.log1p(-u)


def sample_draws(params: SystemParams, seed: int, count: int, start: int = 0) -> ChannelDraw:
    """Draws of trials ``start`` .. ``start + count - 1`` for ``seed``."""
    e = _exponentials(seed, start, count)
    return ChannelDraw(
        gamma_sr=params.sigma2_sr * e[:, 0],
        gamma_sd=params.sigma2_sd * e[:, 1],
        gamma_rd=params.sigma2_rd * e[:, 2],
    )


def sample_draw(params: SystemParams, rng: RngStream) -> ChannelDraw:
    batch = sample_draws(params, rng.seed, 1, start=rng.stream_index)
    return ChannelDraw(float(batch.gamma_sr[0]), float(batch.gamma_sd[0]),
                       float(batch.gamma_rd[0]))


def _check_nonnegative(x, name):
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise DomainError(f"{name} must be non-negative")
    return x


def _scalar_or_array(x):
    return float(x) if np.ndim(x) == 0 else x


def pdf_y(y, params: SystemParams):
    y = _check_nonnegative(y, "y")
    rate = 1.0 / params.sigma2_sr + 1.0 / params.sigma2_sd
    return _scalar_or_array(rate * np.exp(-rate * y))


def _harvest_scale(params, budget):
    if budget.upsilon is None:
        raise UnsupportedProtocolError(
            f"{params.protocol.label} does not harvest energy; W and Z are undefined")
    return budget.upsilon * params.sigma2_rd


def pdf_w(w, params: SystemParams, budget: PowerBudget):
    """Density of W as ``(atom_mass, density)``.

    W has a point mass ``atom_mass`` at ``alpha * p`` and the returned
    continuous density on [0, alpha * p), zero above.
    """
    w = _check_nonnegative(w, "w")
    scale = _harvest_scale(params, budget)
    cap = params.alpha * budget.p_factor
    atom = float(np.exp(-cap / scale))
    density = np.where(w < cap, np.exp(-w / scale) / scale, 0.0)
    return atom, _scalar_or_array(density)


def pdf_w_continuous_mass(params: SystemParams, budget: PowerBudget) -> float:
    """Closed-form integral of the continuous part of W's density."""
    scale = _harvest_scale(params, budget)
    return float(-np.expm1(-params.alpha * budget.p_factor / scale))


# Inner integral over w is done in u = ln(w); the lower cutoff is
# cap * _W_CUTOFF and the sliver below it is added in closed form.
_W_CUTOFF = 1e-12


def pdf_z(z, params: SystemParams, budget: PowerBudget, rel_tol: float = 1e-9):
    """Density of Z = gamma_sr * W for z > 0.

    First term: the atom of W at alpha*p. Second term: the integral of the
    continuous part of W over (0, alpha*p].
    """
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0) or np.any(np.isnan(z)):
        raise DomainError("pdf_z requires z > 0")
    scale = _harvest_scale(params, budget)
    s_sr = params.sigma2_sr
    cap = params.alpha * budget.p_factor
    zf = z.ravel()

    atom_term = np.exp(-zf / (cap * s_sr) - cap / scale) / (cap * s_sr)

    # With w = e^u the integrand exp(-z/(s_sr w) - w/scale) / (scale s_sr w) dw
    # becomes exp(-z/(s_sr w) - w/scale) / (scale s_sr) du.
    def integrand(u):
        w = np.exp(u)
        return np.exp(-zf[:, None] / (s_sr * w[None, :]) - w[None, :] / scale)

    lo = np.log(cap * _W_CUTOFF)
    hi = np.log(cap)
    inner = integrate(integrand, lo, hi, rel_tol=rel_tol, abs_tol=1e-300,
                      breakpoints=np.linspace(lo, hi, 17)).value
    # Below the cutoff exp(-w/scale) ~ 1 and the w-integral is E1.
    sliver = exp1(zf / (s_sr * cap * _W_CUTOFF))
    cont_term = (inner + sliver) / (scale * s_sr)
    out = (atom_term + cont_term).reshape(z.shape)
    return _scalar_or_array(out)

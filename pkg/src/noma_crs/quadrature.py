"""Panel-adaptive Gauss-Legendre quadrature for vector-valued integrands.

The integrand receives a 1-D array of abscissae and returns an array whose
last axis runs over those abscissae; any leading axes are independent
components integrated simultaneously over the same panel set. This lets the
inner integral of a nested quadrature be evaluated for all outer nodes in
one call.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import QuadratureError


@dataclass(frozen=True)
class QuadratureSpec:
    """Controls for the ergodic-rate integrals.

    ``upper_bound`` replaces infinity in the improper integrals.
    """

    upper_bound: float = 1e3
    rel_tol: float = 1e-7
    max_panels: int = 4000

    def __post_init__(self):
        if not self.upper_bound > 0:
            raise ValueError("upper_bound must be positive")
        if not 0.0 < self.rel_tol < 1e-2:
            raise ValueError("rel_tol must lie in (0, 1e-2)")
        if self.max_panels < 1:
            raise ValueError("max_panels must be at least 1")


@dataclass(frozen=True)
class QuadResult:
    value: np.ndarray
    error: np.ndarray
    n_panels: int


@lru_cache(maxsize=None)
def _rule(order):
    return np.polynomial.legendre.leggauss(order)


def _panel_sums(f, left, right, order):
    """Gauss-Legendre estimate on each panel [left_i, right_i]."""
    x, w = _rule(order)
    half = 0.5 * (right - left)
    mid = 0.5 * (right + left)
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    vals = np.asarray(f(nodes), dtype=float)
    vals = vals.reshape(vals.shape[:-1] + (left.size, order))
    return (vals * w).sum(axis=-1) * half


def integrate(f, a, b, *, rel_tol=1e-7, abs_tol=1e-15, max_panels=4000,
              breakpoints=(), order=15):
    """Integrate ``f`` over [a, b] by bisecting panels until converged.

    Each panel is estimated with one ``order``-point rule and with the same
    rule on its two halves; the difference is the panel error. Panels are
    bisected until the summed error of every component is below
    ``max(abs_tol, rel_tol * |value|)``. Nodes never touch a or b, so
    integrable endpoint singularities are fine.
    """
    a, b = float(a), float(b)
    if b < a:
        raise ValueError("require a <= b")
    if b == a:
        probe = np.asarray(f(np.array([a])), dtype=float)
        zero = np.zeros(probe.shape[:-1])
        return QuadResult(zero, zero.copy(), 0)

    edges = np.unique(np.clip([a, *breakpoints, b], a, b))
    left, right = edges[:-1], edges[1:]

    def estimate(lo, hi):
        mid = 0.5 * (lo + hi)
        coarse = _panel_sums(f, lo, hi, order)
        fine_l = _panel_sums(f, lo, mid, order)
        fine_r = _panel_sums(f, mid, hi, order)
        return fine_l + fine_r, np.abs(fine_l + fine_r - coarse)

    vals, errs = estimate(left, right)
    while True:
        total = vals.sum(axis=-1)
        err_total = errs.sum(axis=-1)
        tol = np.maximum(abs_tol, rel_tol * np.abs(total))
        if np.all(err_total <= tol):
            return QuadResult(total, err_total, left.size)
        if left.size >= max_panels:
            raise QuadratureError(
                f"no convergence on [{a}, {b}] within {max_panels} panels",
                float(np.max(err_total - tol)),
            )
        # Score panels by error relative to each component's tolerance,
        # then split the worst ones carrying most of the excess.
        score = np.max(np.atleast_2d(errs / tol[..., None]), axis=0)
        ranked = np.argsort(score)[::-1]
        cum = np.cumsum(score[ranked])
        n_split = int(np.searchsorted(cum, 0.5 * cum[-1])) + 1
        n_split = min(n_split, max_panels - left.size)
        split = np.zeros(left.size, dtype=bool)
        split[ranked[:n_split]] = True

        lo, hi = left[split], right[split]
        mid = 0.5 * (lo + hi)
        new_lo = np.concatenate([lo, mid])
        new_hi = np.concatenate([mid, hi])
        new_vals, new_errs = estimate(new_lo, new_hi)

        keep = ~split
        left = np.concatenate([left[keep], new_lo])
        right = np.concatenate([right[keep], new_hi])
        vals = np.concatenate([vals[..., keep], new_vals], axis=-1)
        errs = np.concatenate([errs[..., keep], new_errs], axis=-1)

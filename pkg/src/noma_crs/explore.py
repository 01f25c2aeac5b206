"""Parameter sweeps and one-dimensional optimum search."""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from . import analytic, montecarlo
from .model import EhProtocol, SystemParams, db_to_linear
from .quadrature import QuadratureSpec
from .rates import RatePair

log = logging.getLogger(__name__)

METHODS = ("analytic", "mc")
SCALARS = ("rho", "xi", "alpha")
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SweepRow:
    value: float
    rates: dict  # (protocol label, method) -> RatePair


@dataclass(frozen=True)
class SweepTable:
    swept_name: str
    series: tuple  # ordered (protocol label, method) column groups
    rows: tuple
    fixed_params: SystemParams

    def column(self, label, method="analytic", field="sum"):
        return np.array([getattr(row.rates[(label, method)], field) for row in self.rows])

    @property
    def values(self):
        return np.array([row.value for row in self.rows])


@dataclass(frozen=True)
class OptimumResult:
    arg: float
    value: float
    flat: bool = False      # no interior improvement over the bracket endpoints
    unimodal: bool = True   # coarse-grid differences change sign at most once


def evaluate(params: SystemParams, method: str = "analytic", *, n_trials=100_000,
             seed=montecarlo.DEFAULT_SEED, quad=analytic.DEFAULT_QUAD, workers=1) -> RatePair:
    if method == "analytic":
        return analytic.ergodic_sum(params, quad)
    if method == "mc":
        est = montecarlo.estimate_ergodic(params, n_trials, seed, workers=workers)
        return RatePair(est.c1, est.c2)
    raise ValueError(f"unknown method {method!r}")


def _methods(method):
    if method == "both":
        return METHODS
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    return (method,)


def _run(points, methods, n_trials, seed, quad, workers):
    """Evaluate a list of (value, params) for each method, preserving order."""
    tasks = [(v, p, m) for v, p in points for m in methods]

    def one(task):
        _, p, m = task
        return evaluate(p, m, n_trials=n_trials, seed=seed, quad=quad)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, tasks))
    else:
        results = [one(t) for t in tasks]
    return [(v, p.protocol.label, m, r) for (v, p, m), r in zip(tasks, results)]


def _table(name, base, grid, evaluated, series):
    by_value = {}
    for value, label, method, rates in evaluated:
        by_value.setdefault(value, {})[(label, method)] = rates
    rows = tuple(SweepRow(v, by_value[v]) for v in sorted(set(grid)))
    return SweepTable(name, tuple(series), rows, base)


def sweep_snr(base: SystemParams, snr_db_grid: Sequence[float],
              protocols: Sequence[EhProtocol] | None = None, method="analytic", *,
              n_trials=100_000, seed=montecarlo.DEFAULT_SEED,
              quad=analytic.DEFAULT_QUAD, workers=1) -> SweepTable:
    """Rates versus total SNR P_t/N0 given in dB."""
    if len(snr_db_grid) == 0:
        raise ValueError("empty SNR grid")
    protocols = list(protocols or [base.protocol])
    methods = _methods(method)
    points = [(float(s), replace(base, snr_total=db_to_linear(s), protocol=pr))
              for pr in protocols for s in snr_db_grid]
    evaluated = _run(points, methods, n_trials, seed, quad, workers)
    series = [(pr.label, m) for pr in protocols for m in methods]
    return _table("snr_db", base, [float(s) for s in snr_db_grid], evaluated, series)


def with_scalar(base: SystemParams, which: str, value: float,
                protocol: EhProtocol | None = None) -> SystemParams:
    """``base`` (or ``protocol``) with rho, xi or alpha set to ``value``."""
    protocol = protocol or base.protocol
    if which == "alpha":
        return replace(base, alpha=value, protocol=protocol)
    if which == "rho":
        return replace(base, protocol=EhProtocol.power_sharing(value))
    if which == "xi":
        return replace(base, protocol=EhProtocol.time_sharing(value))
    raise ValueError(f"cannot sweep {which!r}; expected one of {SCALARS}")


def _swept_label(which):
    return {"rho": "PS(rho=*)", "xi": "TS(xi=*)"}[which]


def sweep_scalar(base: SystemParams, which: str, grid: Sequence[float], method="analytic",
                 protocols: Sequence[EhProtocol] | None = None, *,
                 n_trials=100_000, seed=montecarlo.DEFAULT_SEED,
                 quad=analytic.DEFAULT_QUAD, workers=1) -> SweepTable:
    """Rates versus rho, xi or alpha at fixed SNR.

    Alpha sweeps evaluate every protocol in ``protocols`` (default: the base
    protocol). Rho and xi sweeps evaluate the owning protocol, labelled
    ``PS(rho=*)`` / ``TS(xi=*)``, plus constant Ideal and Benchmark
    reference lines.
    """
    if which not in SCALARS:
        raise ValueError(f"cannot sweep {which!r}; expected one of {SCALARS}")
    if len(grid) == 0:
        raise ValueError("empty grid")
    methods = _methods(method)
    grid = [float(v) for v in grid]
    if which == "alpha":
        protocols = list(protocols or [base.protocol])
        points = [(v, with_scalar(base, "alpha", v, pr)) for pr in protocols for v in grid]
        evaluated = _run(points, methods, n_trials, seed, quad, workers)
        series = [(pr.label, m) for pr in protocols for m in methods]
        return _table("alpha", base, grid, evaluated, series)

    label = _swept_label(which)
    points = [(v, with_scalar(base, which, v)) for v in grid]
    evaluated = [(v, label, m, r)
                 for v, _, m, r in _run(points, methods, n_trials, seed, quad, workers)]
    refs = [EhProtocol.ideal(), EhProtocol.benchmark()]
    ref_points = [(grid[0], replace(base, protocol=pr)) for pr in refs]
    for _, ref_label, m, r in _run(ref_points, methods, n_trials, seed, quad, workers):
        evaluated.extend((v, ref_label, m, r) for v in grid)
    series = [(label, m) for m in methods] + [(pr.label, m) for pr in refs for m in methods]
    return _table(which, base, grid, evaluated, series)


def golden_section(f: Callable[[float], float], lo: float, hi: float, tol: float):
    """Maximise a unimodal ``f`` on [lo, hi] to within ``tol``; returns (x, f(x))."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    fx = f(x)
    # the midpoint can be marginally worse than a probe on a flat top
    return max([(x, fx), (c, fc), (d, fd)], key=lambda t: t[1])


def sign_changes(values) -> int:
    diffs = np.diff(np.asarray(values, dtype=float))
    signs = np.sign(diffs[diffs != 0])
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def optimize_scalar(base: SystemParams, which: str, bracket: tuple, tol: float = 1e-4, *,
                    objective: Callable[[float], float] | None = None,
                    protocol: EhProtocol | None = None,
                    quad: QuadratureSpec = analytic.DEFAULT_QUAD,
                    n_grid: int = 41, n_dense: int = 401) -> OptimumResult:
    """Maximise the analytic sum rate over rho, xi or alpha.

    A coarse grid over ``bracket`` locates the best point, then golden-section
    search refines between its neighbours. If the grid shows more than one
    local maximum, the grid is redone with ``n_dense`` points before refining.
    ``objective`` replaces the sum-rate objective when given.
    """
    lo, hi = map(float, bracket)
    if not lo < hi:
        raise ValueError("bracket must satisfy lo < hi")
    if objective is None:
        if which not in SCALARS:
            raise ValueError(f"cannot optimise {which!r}; expected one of {SCALARS}")

        def objective(x):
            return analytic.ergodic_sum(with_scalar(base, which, x, protocol), quad).sum

    def scan(n):
        xs = np.linspace(lo, hi, n)
        return xs, np.array([objective(float(x)) for x in xs])

    xs, ys = scan(n_grid)
    unimodal = sign_changes(ys) <= 1
    if not unimodal:
        log.warning("%s objective is not unimodal on [%g, %g]; rescanning with %d points",
                    which, lo, hi, n_dense)
        xs, ys = scan(n_dense)
    i = int(np.argmax(ys))
    if i in (0, len(xs) - 1):
        log.warning("%s objective has no interior maximum on [%g, %g]", which, lo, hi)
        return OptimumResult(float(xs[i]), float(ys[i]), flat=True, unimodal=unimodal)
    x, fx = golden_section(objective, float(xs[i - 1]), float(xs[i + 1]), tol)
    if fx < ys[i]:
        x, fx = float(xs[i]), float(ys[i])
    return OptimumResult(float(x), float(fx), flat=False, unimodal=unimodal)


@dataclass(frozen=True)
class AlphaOptima:
    per_protocol: dict       # protocol label -> OptimumResult
    best_protocol: str       # label whose optimum sum rate is highest
    aggregate: OptimumResult  # maximiser of the summed harvesting-protocol sum rates

    @property
    def best(self) -> OptimumResult:
        return self.per_protocol[self.best_protocol]


def alpha_optima(base: SystemParams, protocols: Sequence[EhProtocol],
                 bracket=(0.01, 0.49), tol: float = 1e-4,
                 quad: QuadratureSpec = analytic.DEFAULT_QUAD) -> AlphaOptima:
    """Alpha optima of every protocol plus two cross-protocol summaries."""
    per = {pr.label: optimize_scalar(base, "alpha", bracket, tol, protocol=pr, quad=quad)
           for pr in protocols}
    best_label = max(per, key=lambda k: per[k].value)
    harvesting = [pr for pr in protocols if pr.harvests]
    if not harvesting:
        raise ValueError("aggregate needs at least one harvesting protocol")

    def total(a):
        return sum(analytic.ergodic_sum(with_scalar(base, "alpha", a, pr), quad).sum
                   for pr in harvesting)

    aggregate = optimize_scalar(base, "alpha", bracket, tol, objective=total)
    return AlphaOptima(per, best_label, aggregate)

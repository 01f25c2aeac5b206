"""Command-line front end.

Scenario files are flat ``key = value`` lines with ``#`` comments. Channel
variances and ``snr_total`` accept a ``dB`` suffix; everything else is
linear. ``protocol``, ``rho`` and ``xi`` take comma-separated lists, so one
file can describe a whole figure::

    sigma2_sr = 10 dB
    sigma2_sd = 3 dB
    sigma2_rd = 10 dB
    alpha = 0.1
    snr_total = 20 dB
    protocol = ps, ts, ideal, benchmark
    rho = 0.1, 0.3
    xi = 0.1
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional

import numpy as np

from . import analytic, explore, montecarlo
from .errors import QuadratureError
from .model import EhProtocol, ProtocolKind, SystemParams, db_to_linear, linear_to_db
from .output import csv_text, emit_csv, emit_plot
from .quadrature import QuadratureSpec

log = logging.getLogger("noma_crs")

REQUIRED = ("sigma2_sr", "sigma2_sd", "sigma2_rd", "protocol")
DB_KEYS = ("sigma2_sr", "sigma2_sd", "sigma2_rd", "snr_total")
PROTOCOL_NAMES = ("ps", "ts", "ideal", "benchmark")
VALIDATE_TOL = 0.02
DEFAULT_GRIDS = {
    "snr": "0:40:5",
    "rho": "0.01:0.6:0.005",
    "xi": "0.005:0.3:0.0025",
    "alpha": "0.01:0.49:0.005",
}
DEFAULT_BRACKETS = {"rho": (0.005, 0.6), "xi": (0.002, 0.3), "alpha": (0.01, 0.49)}


class ConfigError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass(frozen=True)
class ScenarioConfig:
    sigma2_sr: float
    sigma2_sd: float
    sigma2_rd: float
    protocol: tuple
    alpha: float = 0.1
    eta: float = 0.95
    snr_total: float = 100.0
    rho: tuple = (0.135,)
    xi: tuple = (0.025,)
    n_trials: int = 100_000
    seed: int = montecarlo.DEFAULT_SEED
    method: str = "both"
    upper_bound: float = 1e3
    out: Optional[str] = field(default=None)

    @property
    def protocols(self):
        out = []
        for name in self.protocol:
            if name == "ps":
                out += [EhProtocol.power_sharing(r) for r in self.rho]
            elif name == "ts":
                out += [EhProtocol.time_sharing(x) for x in self.xi]
            else:
                out.append(EhProtocol(ProtocolKind(name)))
        return out

    @property
    def quad(self):
        return QuadratureSpec(upper_bound=self.upper_bound)

    def params(self, protocol: EhProtocol | None = None) -> SystemParams:
        return SystemParams(
            sigma2_sr=self.sigma2_sr, sigma2_sd=self.sigma2_sd, sigma2_rd=self.sigma2_rd,
            alpha=self.alpha, snr_total=self.snr_total, eta=self.eta,
            protocol=protocol or self.protocols[0],
        )


def _number(text, key, line, allow_db=False):
    text = text.strip()
    is_db = allow_db and text.lower().endswith("db")
    if is_db:
        text = text[:-2].strip()
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {text!r} as a number", line) from None
    if not np.isfinite(value):
        raise ConfigError(f"{key}: value must be finite", line)
    return db_to_linear(value) if is_db else value


def _fraction_list(text, key, line):
    values = tuple(_number(v, key, line) for v in text.split(",") if v.strip())
    if not values:
        raise ConfigError(f"{key}: empty list", line)
    for v in values:
        if not 0.0 < v < 1.0:
            raise ConfigError(f"{key} must lie in (0, 1), got {v}", line)
    return values


def _parse_value(key, text, line):
    if key in DB_KEYS:
        value = _number(text, key, line, allow_db=True)
        if value <= 0:
            raise ConfigError(f"{key} must be positive", line)
        return value
    if key == "alpha":
        value = _number(text, key, line)
        if not 0.0 < value < 0.5:
            raise ConfigError(f"alpha must satisfy 0 < alpha < 0.5, got {value}", line)
        return value
    if key == "eta":
        value = _number(text, key, line)
        if not 0.0 < value <= 1.0:
            raise ConfigError(f"eta must lie in (0, 1], got {value}", line)
        return value
    if key in ("rho", "xi"):
        return _fraction_list(text, key, line)
    if key == "protocol":
        names = tuple(n.strip().lower() for n in text.split(",") if n.strip())
        if names == ("all",):
            names = PROTOCOL_NAMES
        bad = [n for n in names if n not in PROTOCOL_NAMES]
        if bad or not names:
            raise ConfigError(f"protocol must be drawn from {PROTOCOL_NAMES}, got {text!r}", line)
        return names
    if key in ("n_trials", "seed"):
        try:
            value = int(text.strip())
        except ValueError:
            raise ConfigError(f"{key}: expected an integer, got {text!r}", line) from None
        if key == "n_trials" and value < 1:
            raise ConfigError("n_trials must be at least 1", line)
        if key == "seed" and not 0 <= value < 2 ** 64:
            raise ConfigError("seed must be a 64-bit unsigned integer", line)
        return value
    if key == "method":
        value = text.strip().lower()
        if value not in ("mc", "analytic", "both"):
            raise ConfigError(f"method must be mc, analytic or both, got {text!r}", line)
        return value
    if key == "upper_bound":
        value = _number(text, key, line)
        if value <= 0:
            raise ConfigError("upper_bound must be positive", line)
        return value
    if key == "out":
        return text.strip() or None
    raise ConfigError(f"unknown key {key!r}", line)


_KEYS = tuple(f.name for f in fields(ScenarioConfig))


def parse_config(text: str) -> ScenarioConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lower()
        if key not in _KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        values[key] = _parse_value(key, value, lineno)
    missing = [k for k in REQUIRED if k not in values]
    if missing:
        raise ConfigError(f"missing required key(s): {', '.join(missing)}")
    return ScenarioConfig(**values)


def serialize_config(cfg: ScenarioConfig) -> str:
    lines = []
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        if value is None:
            continue
        if isinstance(value, tuple):
            value = ", ".join(repr(v) if isinstance(v, float) else str(v) for v in value)
        elif isinstance(value, float):
            value = repr(value)
        lines.append(f"{f.name} = {value}")
    return "\n".join(lines) + "\n"


def parse_grid(text: str) -> list:
    """``start:stop:step`` with ``stop`` included when it lies on the grid."""
    try:
        start, stop, step = (float(p) for p in text.split(":"))
    except ValueError:
        raise ValueError(f"grid must be start:stop:step, got {text!r}") from None
    if step <= 0 or stop < start:
        raise ValueError(f"grid needs step > 0 and stop >= start, got {text!r}")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(n)]


def _load(args) -> ScenarioConfig:
    cfg = parse_config(Path(args.config).read_text(encoding="utf-8"))
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "method", None) is not None:
        overrides["method"] = args.method
    if getattr(args, "out", None) is not None:
        overrides["out"] = args.out
    return replace(cfg, **overrides)


def cmd_rate(args) -> int:
    cfg = _load(args)
    methods = explore._methods(cfg.method)
    header = f"{'protocol':<16}" + "".join(
        f"{m + '_' + c:>16}" for m in methods for c in ("c1", "c2", "c_sum"))
    print(f"# P_t/N0 = {linear_to_db(cfg.snr_total):.4g} dB, alpha = {cfg.alpha:g}")
    print(header)
    for pr in cfg.protocols:
        cells = []
        for m in methods:
            r = explore.evaluate(cfg.params(pr), m, n_trials=cfg.n_trials, seed=cfg.seed,
                                 quad=cfg.quad, workers=args.workers)
            cells += [r.r1, r.r2, r.sum]
        print(f"{pr.label:<16}" + "".join(f"{c:>16.6f}" for c in cells))
    return 0


def cmd_sweep(args) -> int:
    cfg = _load(args)
    grid = parse_grid(args.grid or DEFAULT_GRIDS[args.which])
    kw = dict(n_trials=cfg.n_trials, seed=cfg.seed, quad=cfg.quad, workers=args.workers)
    if args.which == "snr":
        table = explore.sweep_snr(cfg.params(), grid, cfg.protocols, cfg.method, **kw)
    else:
        table = explore.sweep_scalar(cfg.params(), args.which, grid, cfg.method,
                                     cfg.protocols, **kw)
    if cfg.out:
        emit_csv(table, cfg.out)
        log.info("wrote %s", cfg.out)
    else:
        sys.stdout.write(csv_text(table))
    if args.plot:
        emit_plot(table, args.plot)
        log.info("wrote %s", args.plot)
    return 0


def _bracket(args):
    if args.bracket:
        lo, hi = (float(v) for v in args.bracket.split(":"))
        return lo, hi
    return DEFAULT_BRACKETS[args.which]


def cmd_optimize(args) -> int:
    cfg = _load(args)
    bracket = _bracket(args)
    if args.which == "alpha":
        res = explore.alpha_optima(cfg.params(), cfg.protocols, bracket, args.tol, cfg.quad)
        for label, opt in res.per_protocol.items():
            print(f"{label:<16} alpha_opt = {opt.arg:.6f}  c_sum = {opt.value:.6f}")
        print(f"{'best':<16} alpha_opt = {res.best.arg:.6f}  ({res.best_protocol})")
        print(f"{'aggregate':<16} alpha_opt = {res.aggregate.arg:.6f}  "
              f"(sum over harvesting protocols)")
        return 0
    opt = explore.optimize_scalar(cfg.params(), args.which, bracket, args.tol, quad=cfg.quad)
    flag = "  [flat: no interior maximum]" if opt.flat else ""
    print(f"{args.which}_opt = {opt.arg:.6f}  c_sum = {opt.value:.6f}{flag}")
    return 0


def cmd_validate(args) -> int:
    cfg = _load(args)
    grid = parse_grid(args.grid or "0:30:10")
    worst = 0.0
    print(f"{'protocol':<16}{'snr_db':>8}{'analytic':>12}{'mc':>12}{'rel_err':>12}")
    for pr in cfg.protocols:
        for s in grid:
            p = replace(cfg.params(pr), snr_total=db_to_linear(s))
            exact = analytic.ergodic_sum(p, cfg.quad).sum
            mc = montecarlo.estimate_ergodic(p, cfg.n_trials, cfg.seed, workers=args.workers)
            rel = abs(mc.c_sum - exact) / exact
            worst = max(worst, rel)
            print(f"{pr.label:<16}{s:>8.3g}{exact:>12.6f}{mc.c_sum:>12.6f}{rel:>12.2e}")
    ok = worst < VALIDATE_TOL
    print(f"max relative error = {worst:.3e} ({'PASS' if ok else 'FAIL'}, "
          f"threshold {VALIDATE_TOL:g})")
    return 0 if ok else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="noma-crs",
        description="Ergodic rates of wireless-powered NOMA cooperative relaying.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def common(p, out=False):
        p.add_argument("--config", required=True, metavar="PATH")
        p.add_argument("--seed", type=int)
        p.add_argument("--method", choices=("mc", "analytic", "both"))
        p.add_argument("--workers", type=int, default=1,
                       help="threads for Monte Carlo and grid evaluation")
        if out:
            p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("rate", help="ergodic rates of every configured protocol")
    common(p)
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("sweep", help="sweep one parameter and write CSV")
    common(p, out=True)
    p.add_argument("--which", choices=("snr", "rho", "xi", "alpha"), default="snr")
    p.add_argument("--grid", metavar="START:STOP:STEP")
    p.add_argument("--plot", metavar="PATH", help="also write an SVG chart")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("optimize", help="maximise the analytic sum rate over one parameter")
    common(p)
    p.add_argument("--which", choices=("rho", "xi", "alpha"), required=True)
    p.add_argument("--bracket", metavar="LO:HI")
    p.add_argument("--tol", type=float, default=1e-4)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("validate", help="cross-check Monte Carlo against quadrature")
    common(p)
    p.add_argument("--grid", metavar="START:STOP:STEP", help="SNR grid in dB")
    p.set_defaults(func=cmd_validate)
    return parser


def run_command(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, ValueError, OSError, QuadratureError) as exc:
        print(f"noma-crs: error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()

"""Command line front end.

    latticesimplex count        --preset golden --t-min 10 --t-max 1000
    latticesimplex error-sweep  --preset d3 --t-max 1e4 --grid jump-aligned
    latticesimplex dioph        --weights "1,sqrt2,sqrt3" --M 100000
    latticesimplex fourier-check --seed 7
    latticesimplex lattice-sum  --preset golden --kappa 0.01

Exit codes: 0 success, 2 configuration error, 3 identity-suite failure,
4 precision exhausted.  Output is sorted before it is written, so serial and
parallel runs give the same bytes.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import mpmath
import numpy as np

from .bernoulli import BernoulliEngine
from .counting import BoundaryAmbiguityError, error_report
from .diophantine import (PrecisionExhaustedError, continued_fraction, incline_profile,
                          incline_rows)
from .estimators import GrowthFitter
from .fourier import (fourier_coefficient_N, fourier_coefficient_decomposed, partial_fraction_check,
                      simplex_ft_closed, simplex_ft_decomposed, simplex_ft_quadrature,
                      symmetrization_identity)
from .latticesums import calibrate_constant, error_bound
from .surd import Surd
from .validation import ConfigError, check_delta, check_positive_int, check_weights
from .weights import PRESETS, Weights

EXIT_OK, EXIT_CONFIG, EXIT_IDENTITY, EXIT_PRECISION = 0, 2, 3, 4
GRIDS = ("geometric", "arithmetic", "jump-aligned")


@dataclass
class SweepConfig:
    subcommand: str = "count"
    weights: str = "golden"
    t_min: float = 10.0
    t_max: float = 1000.0
    grid: str = "geometric"
    points: int = 20
    delta: float = 0.1
    kappa: float = 0.0
    precision_bits: int = 128
    out: Optional[str] = None
    seed: int = 0
    jobs: int = 1
    format: str = "csv"
    kind: str = "both"
    M: int = 10 ** 5
    n_terms: int = 20
    bins: int = 8

    def validate(self) -> "SweepConfig":
        if not self.t_min > 0:
            raise ConfigError("t_min must be > 0")
        if self.t_max < self.t_min:
            raise ConfigError("t_max must be >= t_min")
        if self.grid not in GRIDS:
            raise ConfigError(f"grid must be one of {GRIDS}")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if self.kind not in ("open", "closed", "both"):
            raise ConfigError("kind must be open, closed or both")
        if self.kappa < 0:
            raise ConfigError("kappa must be >= 0")
        check_positive_int("points", self.points)
        check_positive_int("precision_bits", self.precision_bits, 64)
        check_positive_int("jobs", self.jobs)
        check_positive_int("M", self.M)
        check_positive_int("n_terms", self.n_terms)
        check_positive_int("bins", self.bins)
        check_delta(self.delta)
        check_weights(self.weights, self.precision_bits)
        return self


# output ----------------------------------------------------------------------

def _cell(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, (float, np.floating, mpmath.mpf)):
        return "%.17g" % float(v)
    if v is None:
        return ""
    return str(v)


def _jsonable(v):
    if isinstance(v, (mpmath.mpf, np.floating)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (Surd, Fraction)):
        return str(v)
    return v


def write_table(columns: Sequence[str], rows: Iterable[Sequence], cfg: SweepConfig,
                summary: Optional[dict] = None) -> str:
    rows = list(rows)
    if cfg.format == "json":
        doc = {"columns": list(columns),
               "rows": [[_jsonable(v) for v in r] for r in rows]}
        if summary is not None:
            doc["summary"] = summary
        text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(columns)
        for r in rows:
            wr.writerow([_cell(v) for v in r])
        text = buf.getvalue()
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        if summary is not None and cfg.format == "csv":
            print(json.dumps(summary, indent=1, sort_keys=True))
    else:
        sys.stdout.write(text)
        if summary is not None and cfg.format == "csv":
            print(json.dumps(summary, indent=1, sort_keys=True), file=sys.stderr)
    return text


# grids -----------------------------------------------------------------------

def _round_threshold(x: float) -> Fraction:
    # thresholds are kept to 6 significant digits so grid points print cleanly
    return Fraction(float("%.6g" % x)).limit_denominator(10 ** 6)


def t_grid(cfg: SweepConfig, w: Weights) -> List:
    n = cfg.points
    if cfg.grid == "arithmetic":
        targets = np.linspace(cfg.t_min, cfg.t_max, n)
    else:
        targets = np.geomspace(cfg.t_min, cfg.t_max, n)
    if cfg.grid != "jump-aligned":
        return sorted({_round_threshold(x) for x in targets})
    if not w.exact:
        raise ConfigError("jump-aligned grids need exact weights")
    rng = np.random.default_rng(cfg.seed)
    wf = w.floats
    out = set()
    for target in targets:
        m = [1] * w.d
        for j in range(w.d - 1):
            hi = max(1, int(target / (w.d * wf[j])))
            m[j] = int(rng.integers(1, hi + 1))
        rest = target - float(np.dot(wf[:-1], m[:-1]))
        m[-1] = max(1, int(rest / wf[-1]))
        out.add(w.dot(m))
    return sorted(out)


def _tkey(t):
    return float(t), str(t)


def _pmap(fn: Callable, items: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def _degenerate(w: Weights) -> bool:
    if not w.exact:
        return False
    return any(th.is_rational() for row in incline_rows(w) for th in row)


# subcommands -------------------------------------------------------------------

COUNT_COLUMNS = ("t", "t_exact", "kind", "exact", "leading", "err_left", "err_right", "rrr", "tau")


def _count_task(args):
    weights, prec, t, kind = args
    w = Weights.parse(weights, prec)
    rep = error_report(t, w, kind, BernoulliEngine(max(64, w.d), prec))
    return (float(t), str(t), kind, rep.exact_count, rep.leading, rep.error_left,
            rep.error_right, rep.rrr, rep.tau)


def cmd_count(cfg: SweepConfig) -> int:
    w = check_weights(cfg.weights, cfg.precision_bits)
    if _degenerate(w):
        warnings.warn("rational inclines: error terms are not in the Diophantine regime", RuntimeWarning)
    kinds = ("open", "closed") if cfg.kind == "both" else (cfg.kind,)
    ts = t_grid(cfg, w)
    tasks = [(cfg.weights, cfg.precision_bits, t, k) for t in ts for k in kinds]
    rows = _pmap(_count_task, tasks, cfg.jobs)
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    write_table(COUNT_COLUMNS, rows, cfg)
    return EXIT_OK


def _bin_maxima(ts: np.ndarray, rs: np.ndarray, bins: int):
    edges = np.geomspace(ts.min(), ts.max() * (1 + 1e-12), bins + 1)
    out_t, out_r = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        sel = (ts >= lo) & (ts < hi)
        if sel.any():
            i = np.flatnonzero(sel)[np.argmax(rs[sel])]
            out_t.append(ts[i])
            out_r.append(rs[i])
    return np.array(out_t), np.array(out_r)


def decade_ratios(ts: np.ndarray, rs: np.ndarray, power: int = 1) -> Dict[str, float]:
    """``max RRR / (log t)^power`` per decade ``[10^k, 10^{k+1})``."""
    out = {}
    for k in range(int(math.floor(math.log10(ts.min()))), int(math.floor(math.log10(ts.max()))) + 1):
        sel = (ts >= 10 ** k) & (ts < 10 ** (k + 1))
        if sel.any():
            out[f"1e{k}"] = float(np.max(rs[sel] / np.log(ts[sel]) ** power))
    return out


def sweep_summary(ts: np.ndarray, rs: np.ndarray, d: int, bins: int) -> dict:
    bt, br = _bin_maxima(ts, rs, bins)
    summary = {"d": d, "points": int(ts.size), "bins": int(bt.size),
               "max_rrr_over_log_d": float(np.max(rs / np.log(ts) ** d)),
               "max_rrr_over_log": float(np.max(rs / np.log(ts))),
               "decade_max_rrr_over_log": decade_ratios(ts, rs)}
    for model in ("power", "polylog"):
        try:
            summary[model] = GrowthFitter(model, min_points=min(8, bt.size)).fit(bt, br).result_.as_dict()
        except ConfigError as exc:
            summary[model] = {"error": str(exc)}
    return summary


SWEEP_COLUMNS = ("t", "t_exact", "exact", "leading", "err_left", "err_right", "rrr", "tau")


def cmd_error_sweep(cfg: SweepConfig) -> int:
    w = check_weights(cfg.weights, cfg.precision_bits)
    if _degenerate(w):
        raise ConfigError("error sweeps need irrational inclines; the weights are rationally dependent")
    ts = t_grid(cfg, w)
    rows = _pmap(_count_task, [(cfg.weights, cfg.precision_bits, t, "open") for t in ts], cfg.jobs)
    rows = sorted(((r[0], r[1]) + tuple(r[3:]) for r in rows), key=lambda r: (r[0], r[1]))
    t_arr = np.array([r[0] for r in rows])
    r_arr = np.array([float(r[6]) for r in rows])
    summary = sweep_summary(t_arr, r_arr, w.d, cfg.bins) if t_arr.size >= 2 else None
    write_table(SWEEP_COLUMNS, rows, cfg, summary)
    return EXIT_OK


DIOPH_COLUMNS = ("row", "theta", "m", "v_m", "is_record")


def cmd_dioph(cfg: SweepConfig) -> int:
    w = check_weights(cfg.weights, cfg.precision_bits)
    prof = incline_profile(w, cfg.M, cfg.kappa, fit=cfg.M >= 100)
    rows = []
    summary = {"c_kappa": prof.c_kappa, "kappa": cfg.kappa, "degenerate": prof.degenerate,
               "M": cfg.M, "rows": []}
    for j, (p, mn) in enumerate(zip(prof.rows, prof.minima)):
        theta = " ".join(str(x) for x in p.theta)
        keep = set(p.records.tolist()) | {2 ** k for k in range(int(math.log2(cfg.M)) + 1)}
        recs = set(p.records.tolist())
        for m in sorted(keep):
            rows.append((j, theta, m, float(p.values[m - 1]), m in recs))
        entry = {"row": j, "theta": theta, "min": mn.value, "argmin": mn.argmin,
                 "kappa_hat": p.kappa_hat}
        if len(p.theta) == 1:
            entry["continued_fraction"] = str(continued_fraction(p.theta[0], cfg.n_terms))
        summary["rows"].append(entry)
    write_table(DIOPH_COLUMNS, rows, cfg, summary)
    return EXIT_OK


FOURIER_COLUMNS = ("suite", "point", "lhs", "rhs", "abs_err", "rel_err", "ok")


def _rand_nondiag(rng, d: int, scale: float = 3.0) -> List[float]:
    while True:
        y = [float(v) for v in rng.uniform(-scale, scale, d)]
        if all(abs(a - b) > 0.1 for i, a in enumerate(y) for b in y[i + 1:]) and all(abs(v) > 0.1 for v in y):
            return y


def _rand_frac(rng, lo: int = -9, hi: int = 9) -> Fraction:
    while True:
        f = Fraction(int(rng.integers(lo, hi + 1)), int(rng.integers(1, 8)))
        if f:
            return f


def fourier_suite(seed: int = 0, prec: int = 128) -> List[tuple]:
    """All identity checks; one row per check."""
    rng = np.random.default_rng(seed)
    rows = []

    def add(suite, point, lhs, rhs, tol):
        lhs_c, rhs_c = complex(lhs), complex(rhs)
        err = abs(lhs_c - rhs_c)
        rel = err / abs(rhs_c) if rhs_c else (0.0 if not err else math.inf)
        rows.append((suite, " ".join("%.12g" % v for v in point), repr(lhs_c), repr(rhs_c), err, rel, rel <= tol))

    for d in (1, 2, 3):
        for _ in range(20):
            y = _rand_nondiag(rng, d)
            closed = simplex_ft_closed(y, prec)
            quad = simplex_ft_quadrature(y)
            add(f"closed-vs-quadrature-d{d}", y, closed, quad, 1e-6)
            x1, x2 = simplex_ft_decomposed(y, prec)
            add(f"decomposed-vs-quadrature-d{d}", y, x1 + x2, quad, 1e-6)
    for _ in range(50):
        k = int(rng.integers(1, 5))
        vals = set()
        while len(vals) < k:
            vals.add(_rand_frac(rng))
        y = sorted(vals)
        n = k + int(rng.integers(0, 5))
        chk = symmetrization_identity(y, n)
        rows.append(("symmetrization", " ".join(map(str, y)) + f" n={n}", str(chk.lhs), str(chk.rhs),
                     chk.abs_err, chk.rel_err, chk.ok))
    for _ in range(50):
        k = int(rng.integers(1, 5))
        vals = set()
        while len(vals) < k + 1:
            vals.add(_rand_frac(rng))
        vals = sorted(vals)
        z, y = vals[0], vals[1:]
        chk = partial_fraction_check(z, y)
        rows.append(("partial-fraction", " ".join(map(str, (z, *y))), str(chk.lhs), str(chk.rhs),
                     chk.abs_err, chk.rel_err, chk.ok))
    presets = {1: "1", 2: "1,sqrt2", 3: "1,sqrt2,sqrt3"}
    for _ in range(30):
        d = int(rng.integers(1, 4))
        w = Weights.parse(presets[d], prec)
        m = [0] * d
        while not any(m):
            m = [int(v) for v in rng.integers(-4, 5, d)]
        t = Fraction(int(rng.integers(20, 400)), 10)
        with mpmath.workprec(prec):
            q, r = fourier_coefficient_decomposed(m, t, w, prec)
            full = fourier_coefficient_N(m, t, w, prec)
            err = abs(q + r - full)
            # N_m vanishes when m t / w is an integer vector; then Q and R cancel
            rel = float(err / max(abs(full), abs(q) + abs(r)))
        rows.append(("coefficient", f"m={m} t={t} w={w}", repr(complex(q + r)), repr(complex(full)),
                     float(err), rel, rel <= 1e-9))
    return rows


def cmd_fourier_check(cfg: SweepConfig) -> int:
    rows = fourier_suite(cfg.seed, cfg.precision_bits)
    write_table(FOURIER_COLUMNS, rows, cfg)
    failed = [r for r in rows if not r[-1]]
    if failed:
        print(f"{len(failed)} identity check(s) failed; first: {failed[0][:2]}", file=sys.stderr)
        return EXIT_IDENTITY
    return EXIT_OK


LATTICE_COLUMNS = ("t", "T", "M", "s2", "tail", "smoothing", "rrr", "C", "balanced_bound")


def _lattice_task(args):
    weights, prec, t, kappa, c_kappa = args
    w = Weights.parse(weights, prec)
    rep = error_report(t, w, "open", BernoulliEngine(max(64, w.d), prec))
    eb = error_bound(float(t), w, kappa, c_kappa)
    return float(t), eb, float(rep.rrr)


def cmd_lattice_sum(cfg: SweepConfig) -> int:
    w = check_weights(cfg.weights, cfg.precision_bits)
    if _degenerate(w):
        raise ConfigError("lattice sums need irrational inclines")
    c_kappa = incline_profile(w, min(cfg.M, 10 ** 5), cfg.kappa).c_kappa
    ts = t_grid(cfg, w)
    res = _pmap(_lattice_task, [(cfg.weights, cfg.precision_bits, t, cfg.kappa, c_kappa) for t in ts], cfg.jobs)
    res.sort(key=lambda r: r[0])
    first_decade = [r for r in res if r[0] < 10 * res[0][0]]
    C = calibrate_constant([r[1] for r in first_decade], [r[2] for r in first_decade])
    rows = []
    for t, eb, rrr in res:
        total = eb.s2 + eb.tail + C * eb.smoothing
        rows.append((t, eb.T, eb.M, eb.s2, eb.tail, eb.smoothing, rrr, C, total))
    summary = {"C": C, "c_kappa": c_kappa, "kappa": cfg.kappa,
               "bound_holds": all(r[-1] >= r[6] for r in rows)}
    write_table(LATTICE_COLUMNS, rows, cfg, summary)
    return EXIT_OK


COMMANDS = {
    "count": cmd_count,
    "error-sweep": cmd_error_sweep,
    "dioph": cmd_dioph,
    "fourier-check": cmd_fourier_check,
    "lattice-sum": cmd_lattice_sum,
}


# parsing -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_mutually_exclusive_group()
    g.add_argument("--preset", choices=sorted(PRESETS), help="named weight vector")
    g.add_argument("--weights", help='comma separated surds, e.g. "1,sqrt2,sqrt3"')
    common.add_argument("--t-min", type=float)
    common.add_argument("--t-max", type=float)
    common.add_argument("--grid", choices=GRIDS)
    common.add_argument("--points", type=int)
    common.add_argument("--delta", type=float)
    common.add_argument("--kappa", type=float)
    common.add_argument("--precision-bits", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--jobs", type=int)
    common.add_argument("--out")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--config", help="JSON file with SweepConfig fields")
    common.add_argument("--kind", choices=("open", "closed", "both"))
    common.add_argument("--M", type=int, help="scan bound for approximability profiles")
    common.add_argument("--n-terms", type=int, help="continued fraction length")
    common.add_argument("--bins", type=int, help="bins for envelope fits in error-sweep")

    parser = argparse.ArgumentParser(prog="latticesimplex", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def config_from_args(argv: Optional[Sequence[str]] = None) -> SweepConfig:
    args = build_parser().parse_args(argv)
    data = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        known = {f.name for f in fields(SweepConfig)}
        unknown = set(data) - known - {"preset"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "preset" in data:
            data["weights"] = data.pop("preset")
    cli = vars(args)
    if cli.get("preset"):
        cli["weights"] = cli["preset"]
    for f in fields(SweepConfig):
        if cli.get(f.name) is not None:
            data[f.name] = cli[f.name]
    data["subcommand"] = args.subcommand
    try:
        cfg = SweepConfig(**data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg.validate()


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = config_from_args(argv)
        return COMMANDS[cfg.subcommand](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PrecisionExhaustedError, BoundaryAmbiguityError) as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION


if __name__ == "__main__":
    sys.exit(main())

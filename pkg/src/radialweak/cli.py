"""Batch certification front end.

    radialweak bound    --density gaussian --dims 2..32
    radialweak verify   --checks eq4,eq5_6 --dims 2..500
    radialweak mc-check --density exponential --dims 2,3,5,10 --samples 1000000

Exit codes: 0 every row passes, 1 bad configuration, 2 some check fails,
3 nothing fails but some check is inconclusive (misses by less than the
numerical slack).
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
from dataclasses import dataclass

import numpy as np

from .bounds import (
    CHECK_IDS,
    compare,
    lebesgue_ball_bound,
    scalar_checks,
    slack_for,
    verify_one_dim,
    verify_theorem_chain,
)
from .densities import PowerTail, parse_density
from .errors import DomainError, NumericalError, SearchError
from .montecarlo import mc_ball_measure, z_score
from .quadrature import QuadratureConfig
from .radial_measure import offset_ball_measure

EXIT_OK, EXIT_CONFIG, EXIT_FAIL, EXIT_INCONCLUSIVE = 0, 1, 2, 3
MC_MAX_DIM = 64
Z_LIMIT = 3.0

BOUND_COLUMNS = [
    "d", "density", "R1", "ratio_at_R1", "log_ratio_at_R1", "R_star", "ratio_star",
    "log_ratio_star", "theorem_bound", "log_theorem_bound", "margin", "pass",
]
VERIFY_COLUMNS = [
    "d", "density", "check", "lhs", "log_lhs", "relation", "rhs", "log_rhs", "margin", "status",
]
MC_COLUMNS = [
    "d", "density", "t", "r", "quad", "log_quad", "mc", "log_mc", "std_err", "z", "hits", "n", "pass",
]
CHAIN_IDS = {"eq3", "eq7", "eq8", "containment", "trivial_ge1"}


@dataclass(frozen=True)
class RunConfig:
    command: str
    density: str
    dims: tuple[int, ...]
    checks: tuple[str, ...] = CHECK_IDS
    rel_tol: float = 1e-10
    samples: int = 1_000_000
    seed: int = 12345
    pairs: int = 5
    fmt: str = "csv"
    cap_infinite: float | None = None
    jobs: int = 1

    @property
    def quad(self) -> QuadratureConfig:
        return QuadratureConfig(rel_tol=self.rel_tol)


def parse_dims(text: str) -> tuple[int, ...]:
    """``"2..5,8,10..12"`` -> ``(2, 3, 4, 5, 8, 10, 11, 12)``, sorted and unique."""
    dims = set()
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, _, hi = part.partition("..")
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise DomainError(f"empty dimension range {part!r}")
            dims.update(range(lo, hi + 1))
        else:
            dims.add(int(part))
    if not dims:
        raise DomainError("dimension list is empty")
    if min(dims) < 1:
        raise DomainError("dimensions must be >= 1")
    return tuple(sorted(dims))


def density_for(spec: str, d: int):
    """Profile for dimension ``d``; ``powertail:d+K`` means exponent ``d + K``."""
    name, _, arg = spec.partition(":")
    if name.strip().lower() == "powertail" and arg.strip().startswith("d"):
        extra = arg.strip()[1:] or "+0"
        return PowerTail(d + float(extra))
    return parse_density(spec)


# ---------------------------------------------------------------------------
# formatting


def _num(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.12g}"


def _linear(log_value, cap=None):
    """Linear value of a log, or ``None`` when it does not fit in a double."""
    if log_value is None:
        return None
    if log_value == math.inf:
        return cap if cap is not None else math.inf
    if log_value > 709.0:
        return None
    return math.exp(log_value)


def _capped_log(log_value, cap):
    if log_value == math.inf and cap is not None:
        return math.log(cap)
    return log_value


def _write_csv(columns, rows, out):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([row[c] if isinstance(row[c], str) else _num(row[c]) for c in columns])
    out.write(buf.getvalue())


def _json_safe(x):
    if isinstance(x, float) and not math.isfinite(x):
        return _num(x)
    if isinstance(x, dict):
        return {k: _json_safe(v) for k, v in x.items()}
    if isinstance(x, list):
        return [_json_safe(v) for v in x]
    return x


def _write_json(command, config, rows, out):
    doc = {"command": command, "density": config.density, "rel_tol": config.rel_tol, "rows": rows}
    out.write(json.dumps(_json_safe(doc), indent=2) + "\n")


def _exit_code(statuses) -> int:
    statuses = set(statuses)
    if "fail" in statuses:
        return EXIT_FAIL
    if "inconclusive" in statuses:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _run_ordered(fn, items, jobs):
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# bound


def _bound_row(args):
    config, d = args
    density = density_for(config.density, d)
    cfg = config.quad
    rep = verify_one_dim(density, cfg) if d == 1 else verify_theorem_chain(density, d, cfg)
    cap = config.cap_infinite
    lr1 = _capped_log(rep.log_ratio_at_R1, cap)
    lrs = _capped_log(rep.log_ratio_star, cap)
    best = max(lr1, lrs) if lrs is not None else lr1
    return {
        "d": d,
        "density": rep.density_id,
        "R1": rep.R1,
        "ratio_at_R1": _linear(lr1, cap),
        "log_ratio_at_R1": lr1,
        "R_star": rep.R_star,
        "ratio_star": _linear(lrs, cap),
        "log_ratio_star": lrs,
        "theorem_bound": _linear(rep.log_theorem_bound),
        "log_theorem_bound": rep.log_theorem_bound,
        "margin": best - rep.log_theorem_bound,
        "pass": rep.status,
        "checks": [_check_dict(c) for c in rep.checks],
        "notes": rep.notes,
    }


def cmd_bound(config: RunConfig, out=sys.stdout) -> int:
    rows = _run_ordered(_bound_row, [(config, d) for d in config.dims], config.jobs)
    if config.fmt == "json":
        _write_json("bound", config, rows, out)
    else:
        _write_csv(BOUND_COLUMNS, rows, out)
    return _exit_code(r["pass"] for r in rows)


# ---------------------------------------------------------------------------
# verify


def _check_dict(c):
    return {
        "check": c.id,
        "lhs": _linear(c.log_lhs),
        "log_lhs": c.log_lhs,
        "relation": c.relation,
        "rhs": _linear(c.log_rhs),
        "log_rhs": c.log_rhs,
        "margin": c.margin,
        "status": c.status,
    }


def run_checks(config: RunConfig, d: int):
    ids = set(config.checks)
    cfg = config.quad
    slack = slack_for(cfg)
    found = []
    if ids & (CHAIN_IDS | {"oned_ge2"}):
        density = density_for(config.density, d)
        if d == 1:
            found += verify_one_dim(density, cfg).checks
        elif ids & CHAIN_IDS:
            found += verify_theorem_chain(density, d, cfg, optimize="trivial_ge1" in ids).checks
    if ids & {"eq4", "eq5_6"} and not any(c.id in ("eq4", "eq5_6") for c in found):
        found += scalar_checks(d, slack)
    if "eq9" in ids and d >= 2:
        exact, bound = lebesgue_ball_bound(d)
        found.append(compare("eq9", exact, bound, ">=", slack))
    by_id = {c.id: c for c in found}
    return [by_id[i] for i in CHECK_IDS if i in ids and i in by_id]


def _verify_row(args):
    config, d = args
    checks = run_checks(config, d)
    return {"d": d, "checks": [_check_dict(c) for c in checks]}


def cmd_verify(config: RunConfig, out=sys.stdout) -> int:
    rows = _run_ordered(_verify_row, [(config, d) for d in config.dims], config.jobs)
    statuses = [c["status"] for r in rows for c in r["checks"]]
    if config.fmt == "json":
        _write_json("verify", config, rows, out)
    else:
        flat = [{"d": r["d"], "density": config.density, **c} for r in rows for c in r["checks"]]
        _write_csv(VERIFY_COLUMNS, flat, out)
    return _exit_code(statuses)


# ---------------------------------------------------------------------------
# mc-check


def mc_configurations(density, d, pairs, seed):
    """Randomized ``(t, r)`` pairs whose balls meet the bulk of the measure.

    In high dimension the mass sits on a thin shell ``|x| ~ rho``, and a ball
    drawn independently of it usually carries almost none (a handful of hits
    in 10^6 draws, where standard errors mean nothing). So ``t`` is drawn and
    ``r`` is set so that the sphere ``S(0, rho)`` meets the ball in a cap of
    random cosine ``c``.
    """
    rng = np.random.default_rng([seed, d])
    rho = density.typical_radius(d)
    t = rng.uniform(0.1, 1.5, pairs) * rho
    c = rng.uniform(-0.5, 0.3, pairs)
    r = np.sqrt(rho * rho + t * t - 2.0 * rho * t * c)
    return list(zip(t.tolist(), r.tolist()))


def _mc_rows(args):
    config, d = args
    density = density_for(config.density, d)
    rows = []
    for k, (t, r) in enumerate(mc_configurations(density, d, config.pairs, config.seed)):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            mc = mc_ball_measure(density, d, t, r, config.samples, np.random.default_rng([config.seed, d, k]))
        quad = offset_ball_measure(density, d, t, r, config.quad)
        z = z_score(quad, mc)
        rows.append({
            "d": d, "density": density.label, "t": t, "r": r,
            "quad": _linear(quad.log_value), "log_quad": quad.log_value,
            "mc": _linear(mc.estimate.log_value), "log_mc": mc.estimate.log_value,
            "std_err": mc.std_err, "z": z, "hits": mc.hits, "n": mc.n,
            "pass": "pass" if abs(z) <= Z_LIMIT else "fail",
        })
    return rows


def cmd_mc_check(config: RunConfig, out=sys.stdout, err=None) -> int:
    err = err or sys.stderr
    if max(config.dims) > MC_MAX_DIM:
        raise DomainError(f"mc-check supports d <= {MC_MAX_DIM}")
    if config.samples < 1000:
        err.write(f"warning: {config.samples} samples gives the agreement test little power\n")
    rows = [row for chunk in _run_ordered(_mc_rows, [(config, d) for d in config.dims], config.jobs)
            for row in chunk]
    if config.fmt == "json":
        _write_json("mc-check", config, rows, out)
    else:
        _write_csv(MC_COLUMNS, rows, out)
    return EXIT_OK if all(r["pass"] == "pass" for r in rows) else EXIT_FAIL


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="radialweak", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, density_default="gaussian"):
        p.add_argument("--density", default=density_default,
                       help="gaussian[:scale], exponential[:scale], indicator:R0, powertail:p, "
                            "powertail:d+K, tabulated:PATH")
        p.add_argument("--dims", required=True, help="range lo..hi and/or comma list")
        p.add_argument("--rel-tol", type=float, default=1e-10)
        p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
        p.add_argument("--cap-infinite", type=float, default=None,
                       help="replace unbounded certificates by this value in the output")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("-o", "--output", default="-")

    common(sub.add_parser("bound", help="certificate table per dimension"))
    pv = sub.add_parser("verify", help="per-inequality report")
    common(pv)
    pv.add_argument("--checks", default=",".join(CHECK_IDS))
    pm = sub.add_parser("mc-check", aliases=["mc_check"], help="quadrature vs Monte Carlo")
    common(pm)
    pm.add_argument("--samples", type=int, default=1_000_000)
    pm.add_argument("--seed", type=int, default=12345)
    pm.add_argument("--pairs", type=int, default=5)
    return parser


def config_from_args(ns) -> RunConfig:
    command = "mc-check" if ns.command == "mc_check" else ns.command
    checks = CHECK_IDS
    if command == "verify":
        checks = tuple(c.strip() for c in ns.checks.split(",") if c.strip())
        unknown = [c for c in checks if c not in CHECK_IDS]
        if unknown or not checks:
            raise DomainError(f"unknown check id(s): {', '.join(unknown) or '(none given)'}")
    if not ns.rel_tol > 0:
        raise DomainError("--rel-tol must be positive")
    if ns.cap_infinite is not None and not ns.cap_infinite > 0:
        raise DomainError("--cap-infinite must be positive")
    config = RunConfig(
        command=command, density=ns.density, dims=parse_dims(ns.dims), checks=checks,
        rel_tol=ns.rel_tol, samples=getattr(ns, "samples", 1_000_000),
        seed=getattr(ns, "seed", 12345), pairs=getattr(ns, "pairs", 5),
        fmt=ns.fmt, cap_infinite=ns.cap_infinite, jobs=max(1, ns.jobs),
    )
    if command == "mc-check" and (config.samples < 1 or config.pairs < 1):
        raise DomainError("--samples and --pairs must be positive")
    needs_density = command != "verify" or set(checks) & (CHAIN_IDS | {"oned_ge2"})
    if needs_density:
        for d in config.dims:
            density_for(config.density, d).check_dimension(d)
    return config


COMMANDS = {"bound": cmd_bound, "verify": cmd_verify, "mc-check": cmd_mc_check}


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        config = config_from_args(ns)
    except (DomainError, ValueError, OSError) as exc:
        print(f"radialweak: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = sys.stdout if ns.output == "-" else open(ns.output, "w", newline="")
    try:
        return COMMANDS[config.command](config, out)
    except DomainError as exc:
        print(f"radialweak: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, SearchError) as exc:
        print(f"radialweak: numerical failure: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    finally:
        if out is not sys.stdout:
            out.close()


if __name__ == "__main__":
    sys.exit(main())

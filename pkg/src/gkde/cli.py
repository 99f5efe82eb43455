"""Command-line front end: every experiment and primitive behind one binary.

Output contract: CSV with a header row (RFC 4180, CRLF, '.' decimal
separator, 17 significant digits for reals) to stdout or --output; with
--output, a JSON sidecar <output>.meta.json records the full configuration,
the seed, wall time, and library version. Exit codes: 0 success, 2 invalid
parameters, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__, core
from .densities import TestDensity, density_from_json, sample
from .errors import NumericalError, ValidationError
from .estimator import EstimatorConfig, default_grid, estimate
from .experiments import (
    RateFit,
    bump_bias_experiment,
    endpoint_leakage,
    fluctuation_floor,
    linear_bias_experiment,
    oracle_bandwidth_grid,
    oracle_bandwidth_slope,
    rate_experiment,
    regime_map,
    regularity_scan,
    stagnant_bandwidth_check,
    stagnant_event_bound,
    variance_floor_scan,
)
from .kernel import (
    KernelPoint,
    chernoff_unit_tail,
    kernel_pdf,
    l2_envelope,
    l2_integral,
    l2_integral_ratio_form,
    sup_envelope,
    tail_envelope,
    tail_prob,
)
from .quadrature import adaptive_integral
from .risk import mc_risk, variance_floor_integral

__all__ = ["RunConfig", "main", "run"]

_SUBCOMMANDS = (
    "estimate",
    "density-eval",
    "sample",
    "risk",
    "rate",
    "oracle-rate",
    "endpoint",
    "lower-bounds",
    "regime-map",
    "regularity-scan",
    "bounds-check",
)


@dataclass(frozen=True)
class RunConfig:
    """Complete, serializable description of one CLI invocation."""

    command: str
    density: dict | None
    params: dict
    seed: int
    output: str | None
    threads: int

    def __post_init__(self) -> None:
        if self.command not in _SUBCOMMANDS:
            raise ValidationError(f"unknown command {self.command!r}")
        if not 0 <= self.seed < 2**64:
            raise ValidationError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if not isinstance(self.threads, int) or self.threads < 0:
            raise ValidationError(f"threads must be a nonnegative integer, got {self.threads!r}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, obj: dict) -> "RunConfig":
        return cls(
            command=obj["command"],
            density=obj.get("density"),
            params=dict(obj.get("params", {})),
            seed=int(obj["seed"]),
            output=obj.get("output"),
            threads=int(obj.get("threads", 0)),
        )


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % float(v)
    return str(v)


def _write_csv(rows: list[dict], config: RunConfig, t0: float) -> None:
    if not rows:
        raise NumericalError("no rows produced")
    fieldnames = list(rows[0].keys())
    if config.output is None:
        out = sys.stdout
        close = False
    else:
        out = open(config.output, "w", newline="")
        close = True
    try:
        w = csv.writer(out)
        w.writerow(fieldnames)
        for row in rows:
            w.writerow([_fmt(row[k]) for k in fieldnames])
    finally:
        if close:
            out.close()
    if config.output is not None:
        meta = {
            "config": config.to_dict(),
            "seed": config.seed,
            "wall_time_s": time.perf_counter() - t0,
            "version": __version__,
        }
        with open(config.output + ".meta.json", "w") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _fit_rows(fit: RateFit) -> list[dict]:
    rows = []
    for r in fit.rows:
        row = dict(r)
        row["slope"] = fit.slope
        row["intercept"] = fit.intercept
        row["r_squared"] = fit.r_squared
        row["theoretical"] = fit.theoretical
        rows.append(row)
    return rows


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ValidationError(f"cannot parse float list {text!r}") from exc


def _parse_ints(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ValidationError(f"cannot parse integer list {text!r}") from exc


def _density_arg(text: str | None) -> dict | None:
    """Parse a ``--density`` JSON spec into the config dict, or pass None through."""
    if text is None:
        return None
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"density spec is not valid JSON: {exc}") from exc
    if not isinstance(spec, dict):
        raise ValidationError("density spec must be a JSON object")
    return spec


def _read_sample_file(path: str) -> np.ndarray:
    try:
        with open(path) as fh:
            rows = [line.strip() for line in fh if line.strip()]
    except OSError as exc:
        raise ValidationError(f"cannot read input file {path!r}: {exc}") from exc
    if rows:
        try:
            float(rows[0])
        except ValueError:
            rows = rows[1:]  # column-header line, as written by `sample --output`
    try:
        vals = [float(tok) for tok in rows]
    except ValueError as exc:
        raise ValidationError(f"input file {path!r} must hold one decimal per line") from exc
    if not vals:
        raise ValidationError(f"input file {path!r} is empty")
    return np.asarray(vals, dtype=np.float64)


def _cmd_estimate(cfg: RunConfig) -> list[dict]:
    p = cfg.params
    data = _read_sample_file(p["input"])
    b = float(p["b"])
    if p.get("grid"):
        lo, hi, num = p["grid"]
        xs = np.linspace(lo, hi, int(num))
    else:
        xs = default_grid(b)
    fh = estimate(data, EstimatorConfig(b=b, eval_grid=xs, threads=cfg.threads))
    return [{"x": x, "fhat": y} for x, y in zip(xs, fh)]


def _cmd_density_eval(cfg: RunConfig, d: TestDensity | None) -> list[dict]:
    if d is None:
        raise ValidationError("density-eval requires --density")
    p = cfg.params
    xs = np.linspace(float(p["lo"]), float(p["hi"]), int(p["num"]))
    ys = d.pdf(xs)
    return [{"x": x, "f": y} for x, y in zip(xs, ys)]


def _cmd_sample(cfg: RunConfig, d: TestDensity | None) -> list[dict]:
    if d is None:
        raise ValidationError("sample requires --density")
    n = int(cfg.params["n"])
    gen = np.random.default_rng(np.random.SeedSequence(cfg.seed))
    xs = sample(d, n, gen)
    return [{"x": x} for x in xs]


def _cmd_risk(cfg: RunConfig, d: TestDensity | None) -> list[dict]:
    if d is None:
        raise ValidationError("risk requires --density")
    p = cfg.params
    rep = mc_risk(
        d,
        int(p["n"]),
        float(p["b"]),
        float(p["p"]),
        reps=int(p["reps"]),
        rng=cfg.seed,
        threads=cfg.threads,
    )
    return [
        {
            "p": rep.p,
            "n": rep.n,
            "b": rep.b,
            "risk_p": rep.risk_p,
            "risk_root": rep.risk_root,
            "stderr": rep.stderr,
            "bias_term": rep.bias_term,
            "stoch_term": rep.stoch_term,
            "replications": rep.replications,
            "tail_bound": rep.tail_bound,
        }
    ]


def _cmd_rate(cfg: RunConfig, d: TestDensity | None) -> list[dict]:
    if d is None:
        raise ValidationError("rate requires --density")
    p = cfg.params
    fit = rate_experiment(
        d,
        float(p["beta"]),
        float(p["p"]),
        float(p["c"]),
        p["n_grid"],
        reps=int(p["reps"]),
        rng=cfg.seed,
        threads=cfg.threads,
    )
    return _fit_rows(fit)


def _cmd_oracle_rate(cfg: RunConfig, d: TestDensity | None) -> list[dict]:
    if d is None:
        raise ValidationError("oracle-rate requires --density")
    p = cfg.params
    n_grid = p["n_grid"]
    if p.get("b_grid"):
        b_grid = np.asarray(p["b_grid"], dtype=np.float64)
    else:
        b_grid = oracle_bandwidth_grid(min(n_grid), max(n_grid), beta=float(p["beta"]))
    fit = oracle_bandwidth_slope(
        d,
        float(p["p"]),
        n_grid,
        b_grid,
        reps=int(p["reps"]),
        rng=cfg.seed,
        beta=float(p["beta"]),
        threads=cfg.threads,
    )
    return _fit_rows(fit)


def _cmd_endpoint(cfg: RunConfig, d: TestDensity | None) -> list[dict]:
    p = cfg.params
    fit = endpoint_leakage(float(p["p"]), p["b_grid"], rng=cfg.seed, d=d)
    return _fit_rows(fit)


def _cmd_lower_bounds(cfg: RunConfig, d: TestDensity | None) -> list[dict]:
    p = cfg.params
    which = p["which"]
    if which == "linear":
        return _fit_rows(linear_bias_experiment(p["b_grid"], rng=cfg.seed))
    if which == "bump":
        return _fit_rows(bump_bias_experiment(float(p["beta"]), p["b_grid"], rng=cfg.seed))
    if which == "stagnant":
        fit = stagnant_bandwidth_check(
            float(p["b"]), p["n_grid"], reps=int(p["reps"]), rng=cfg.seed,
            d=d, p=float(p["p"]), threads=cfg.threads,
        )
        return _fit_rows(fit)
    if which == "fluctuation":
        return fluctuation_floor(
            p["n_grid"], p["b_grid"], reps=int(p["reps"]), rng=cfg.seed,
            d=d, threads=cfg.threads,
        )
    if which == "variance":
        return variance_floor_scan(p["b_grid"], d=d)
    if which == "event":
        eb = stagnant_event_bound(int(p["n"]), float(p["b"]), c0=float(p["c0"]))
        return [
            {
                "n": eb.n,
                "b": eb.b,
                "c0": eb.c0,
                "s_n": eb.s_n,
                "delta_n": eb.delta_n,
                "prob_bound": eb.prob_bound,
                "fhat_bound": eb.fhat_bound,
                "risk_bound": eb.risk_bound,
                "valid": eb.valid,
            }
        ]
    raise ValidationError(f"unknown lower-bounds target {which!r}")


def _cmd_regime_map(cfg: RunConfig) -> list[dict]:
    p = cfg.params
    cells = regime_map(
        p["p_grid"], p["beta_grid"], fit=bool(p.get("fit")),
        reps=int(p.get("reps", 16)), rng=cfg.seed, threads=cfg.threads,
    )
    return [
        {
            "p": c.p,
            "beta": c.beta,
            "predicted": c.predicted,
            "fitted_slope": c.fitted_slope,
            "oracle_b": c.oracle_b,
        }
        for c in cells
    ]


def _cmd_regularity_scan(cfg: RunConfig) -> list[dict]:
    p = cfg.params
    return regularity_scan(p["alphas"], p["betas"])


def _bounds_check_rows() -> list[dict]:
    rows = []
    xs = (0.0, 0.05, 0.25, 0.5, 1.0)
    bs = (0.2, 0.05, 0.02, 0.005)
    for x in xs:
        for b in bs:
            kp = KernelPoint(x, b)
            hi = x + b + 40.0 * math.sqrt(x * b + b * b) + 40.0 * b
            quad = adaptive_integral(
                lambda ts: core.kernel_pdf_values(x, b, ts) ** 2, 0.0, hi, 1e-12 / b
            )
            closed = l2_integral(kp)
            rel = abs(quad - closed) / closed
            rows.append(
                {"check": "l2_identity", "x": x, "b": b,
                 "value": closed, "reference": quad, "gap": rel, "ok": rel <= 1e-6}
            )
            sup_val = kernel_pdf(kp, min(x, 1.0)) if x > 0 else kernel_pdf(kp, 0.0)
            env = sup_envelope(kp)
            rows.append(
                {"check": "sup_envelope", "x": x, "b": b,
                 "value": sup_val, "reference": env, "gap": env - sup_val,
                 "ok": sup_val <= env * (1.0 + 1e-12)}
            )
            env2 = l2_envelope(kp)
            rows.append(
                {"check": "l2_envelope", "x": x, "b": b,
                 "value": closed, "reference": env2, "gap": env2 - closed,
                 "ok": closed <= env2 * (1.0 + 1e-12)}
            )
    for x in (0.25, 0.5, 1.0):
        for b in (0.2, 0.05, 0.02, 0.005):
            kp = KernelPoint(x, b)
            ratio_form = l2_integral_ratio_form(kp)
            closed = l2_integral(kp)
            rel = abs(ratio_form - closed) / closed
            rows.append(
                {"check": "l2_ratio_identity", "x": x, "b": b,
                 "value": closed, "reference": ratio_form, "gap": rel,
                 "ok": rel <= 1e-10}
            )
    for b in (0.2, 0.1, 0.05, 0.02):
        bound = chernoff_unit_tail(b)
        worst = max(tail_prob(KernelPoint(x, b), 1.0) for x in np.linspace(0.0, 0.5, 11))
        rows.append(
            {"check": "chernoff_tail", "x": 0.5, "b": b,
             "value": worst, "reference": bound, "gap": bound - worst,
             "ok": worst <= bound}
        )
    for b in (0.05, 0.02, 0.01):
        val = variance_floor_integral(b, 4.0)
        ref = math.log(1.0 / (2.0 * b))
        rows.append(
            {"check": "i_integral_p4", "x": 0.0, "b": b,
             "value": val, "reference": ref, "gap": abs(val - ref),
             "ok": abs(val - ref) <= 1e-12}
        )
    for x in (3.0, 4.0, 6.0):
        for b in (0.2, 0.05):
            kp = KernelPoint(x, b)
            val = kernel_pdf(kp, 1.0)
            env = tail_envelope(kp)
            rows.append(
                {"check": "tail_envelope", "x": x, "b": b,
                 "value": val, "reference": env, "gap": env - val,
                 "ok": val <= env * (1.0 + 1e-12)}
            )
    return rows


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gkde",
        description="Gamma kernel density estimation: primitives, risk, and rate experiments.",
    )
    ap.add_argument("--version", action="version", version=f"gkde {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, density=False):
        sp.add_argument("--seed", type=int, default=None,
                        help="RNG seed (beats GKDE_SEED; default 0)")
        sp.add_argument("--threads", type=int, default=0,
                        help="worker threads for kernel sums (0 = hardware)")
        sp.add_argument("--output", default=None,
                        help="CSV path (default stdout); writes <output>.meta.json")
        if density:
            sp.add_argument("--density", default=None,
                            help='density spec, e.g. \'{"kind":"MirroredGamma","params":{"alpha":4,"theta":0.2}}\'')

    sp = sub.add_parser("estimate", help="evaluate the estimator on a grid")
    common(sp)
    sp.add_argument("--b", type=float, required=True)
    sp.add_argument("--input", required=True,
                    help="newline-delimited sample file (a leading header row is skipped)")
    sp.add_argument("--grid", default=None, help="lo,hi,num (default: graded mesh nodes)")

    sp = sub.add_parser("density-eval", help="evaluate a test density on a grid")
    common(sp, density=True)
    sp.add_argument("--lo", type=float, default=0.0)
    sp.add_argument("--hi", type=float, default=1.0)
    sp.add_argument("--num", type=int, default=201)

    sp = sub.add_parser("sample", help="draw a sample from a test density")
    common(sp, density=True)
    sp.add_argument("--n", type=int, required=True)

    sp = sub.add_parser("risk", help="Monte Carlo L^p risk at one (n, b)")
    common(sp, density=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--b", type=float, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--reps", type=int, default=200)

    sp = sub.add_parser("rate", help="risk decay under the bandwidth rule")
    common(sp, density=True)
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--c", type=float, default=1.0)
    sp.add_argument("--n-grid", default="256,512,1024,2048,4096,8192,16384")
    sp.add_argument("--reps", type=int, default=200)

    sp = sub.add_parser("oracle-rate", help="decay of the per-n best-bandwidth risk")
    common(sp, density=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--beta", type=float, default=2.0)
    sp.add_argument("--n-grid", default="256,512,1024,2048,4096,8192")
    sp.add_argument("--b-grid", default=None, help="comma list (default: auto window)")
    sp.add_argument("--reps", type=int, default=64)

    sp = sub.add_parser("endpoint", help="endpoint-leakage bias growth")
    common(sp, density=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--b-grid", default="0.05,0.02,0.01,0.005,0.002")

    sp = sub.add_parser("lower-bounds", help="bias/fluctuation/variance floor checks")
    common(sp, density=True)
    sp.add_argument("--which", required=True,
                    choices=["linear", "bump", "stagnant", "fluctuation", "variance", "event"])
    sp.add_argument("--beta", type=float, default=2.0)
    sp.add_argument("--b", type=float, default=0.1)
    sp.add_argument("--p", type=float, default=1.0)
    sp.add_argument("--c0", type=float, default=8.0)
    sp.add_argument("--n", type=int, default=4096)
    sp.add_argument("--b-grid", default=None)
    sp.add_argument("--n-grid", default="128,256,512,1024,2048,4096")
    sp.add_argument("--reps", type=int, default=60)

    sp = sub.add_parser("regime-map", help="analytic (p, beta) regime labels")
    common(sp)
    sp.add_argument("--analytic", action="store_true", default=True,
                    help="emit analytic labels (default)")
    sp.add_argument("--fit", action="store_true",
                    help="attach low-resolution fitted slopes")
    sp.add_argument("--p-grid", default="1,2,3,3.5,4,5,6,8")
    sp.add_argument("--beta-grid", default="0.25,0.5,1,1.5,2,2.5,3,4")
    sp.add_argument("--reps", type=int, default=16)

    sp = sub.add_parser("regularity-scan", help="Holder membership of mirrored gammas")
    common(sp)
    sp.add_argument("--alphas", default="1.5,2,3,4")
    sp.add_argument("--betas", default="0.5,1,2")

    sp = sub.add_parser("bounds-check", help="closed-form identity and envelope checks")
    common(sp)

    return ap


_DEFAULT_BUMP_B_GRID = "1e-4,5.6e-5,3.2e-5,1.8e-5,1e-5"
_DEFAULT_LINEAR_B_GRID = "0.02,0.01,0.005,0.003,0.002"


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.seed is not None:
        seed = args.seed
    else:
        env = os.environ.get("GKDE_SEED")
        if env is not None:
            try:
                seed = int(env)
            except ValueError as exc:
                raise ValidationError(f"GKDE_SEED must be an integer, got {env!r}") from exc
        else:
            seed = 0
    params: dict = {}
    cmd = args.command
    if cmd == "estimate":
        params["b"] = args.b
        params["input"] = args.input
        if args.grid is not None:
            g = _parse_floats(args.grid)
            if len(g) != 3:
                raise ValidationError("--grid needs lo,hi,num")
            params["grid"] = g
    elif cmd == "density-eval":
        params.update(lo=args.lo, hi=args.hi, num=args.num)
    elif cmd == "sample":
        params["n"] = args.n
    elif cmd == "risk":
        params.update(n=args.n, b=args.b, p=args.p, reps=args.reps)
    elif cmd == "rate":
        params.update(beta=args.beta, p=args.p, c=args.c,
                      n_grid=_parse_ints(args.n_grid), reps=args.reps)
    elif cmd == "oracle-rate":
        params.update(p=args.p, beta=args.beta,
                      n_grid=_parse_ints(args.n_grid), reps=args.reps)
        if args.b_grid is not None:
            params["b_grid"] = _parse_floats(args.b_grid)
    elif cmd == "endpoint":
        params.update(p=args.p, b_grid=_parse_floats(args.b_grid))
    elif cmd == "lower-bounds":
        params["which"] = args.which
        params.update(beta=args.beta, b=args.b, p=args.p, c0=args.c0,
                      n=args.n, reps=args.reps, n_grid=_parse_ints(args.n_grid))
        if args.b_grid is not None:
            params["b_grid"] = _parse_floats(args.b_grid)
        elif args.which == "bump":
            params["b_grid"] = _parse_floats(_DEFAULT_BUMP_B_GRID)
        else:
            params["b_grid"] = _parse_floats(_DEFAULT_LINEAR_B_GRID)
    elif cmd == "regime-map":
        params.update(p_grid=_parse_floats(args.p_grid),
                      beta_grid=_parse_floats(args.beta_grid),
                      fit=bool(args.fit), reps=args.reps)
    elif cmd == "regularity-scan":
        params.update(alphas=_parse_floats(args.alphas), betas=_parse_floats(args.betas))
    return RunConfig(
        command=cmd,
        density=_density_arg(getattr(args, "density", None)),
        params=params,
        seed=seed,
        output=args.output,
        threads=args.threads,
    )


def run(config: RunConfig) -> int:
    """Execute one configuration; returns the exit status."""
    t0 = time.perf_counter()
    d = density_from_json(config.density) if config.density else None
    cmd = config.command
    if cmd == "estimate":
        rows = _cmd_estimate(config)
    elif cmd == "density-eval":
        rows = _cmd_density_eval(config, d)
    elif cmd == "sample":
        rows = _cmd_sample(config, d)
    elif cmd == "risk":
        rows = _cmd_risk(config, d)
    elif cmd == "rate":
        rows = _cmd_rate(config, d)
    elif cmd == "oracle-rate":
        rows = _cmd_oracle_rate(config, d)
    elif cmd == "endpoint":
        rows = _cmd_endpoint(config, d)
    elif cmd == "lower-bounds":
        rows = _cmd_lower_bounds(config, d)
    elif cmd == "regime-map":
        rows = _cmd_regime_map(config)
    elif cmd == "regularity-scan":
        rows = _cmd_regularity_scan(config)
    elif cmd == "bounds-check":
        rows = _bounds_check_rows()
    else:  # pragma: no cover - argparse restricts choices
        raise ValidationError(f"unknown command {cmd!r}")
    _write_csv(rows, config, t0)
    return 0


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        config = _config_from_args(args)
        return run(config)
    except ValidationError as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

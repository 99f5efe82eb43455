"""Experiment harness: rate fits, regime maps, and bound verification.

Every experiment is a pure function of (configuration, seed): replication
streams are derived from a counter-based seed tree, Monte Carlo reductions
run in replication order, and rate statements are checked by least-squares
slopes in log-log coordinates against the attached theoretical exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .densities import (
    MirroredGamma,
    TestDensity,
    holder_member_mirrored,
    holder_quotient_scan,
    mirrored_gamma,
    molli_bump,
    molli_linear,
    raw_uniform,
)
from .errors import ValidationError
from .estimator import bandwidth_rule
from .kernel import KernelPoint, kernel_pdf
from .quadrature import graded_mesh, mesh_nodes_weights
from .risk import bias_term, exact_mean_curve, fluctuation_l1, mc_risk, pointwise_variance

__all__ = [
    "RateFit",
    "RegimeCell",
    "StagnantEventBound",
    "fit_loglog",
    "rate_experiment",
    "oracle_bandwidth_grid",
    "oracle_bandwidth_slope",
    "endpoint_leakage",
    "linear_bias_experiment",
    "bump_bias_experiment",
    "predicted_regime",
    "regime_map",
    "stagnant_bandwidth_check",
    "stagnant_event_bound",
    "regularity_scan",
    "fluctuation_floor",
    "variance_floor_scan",
]


@dataclass(frozen=True)
class RateFit:
    """Least-squares slope of log y vs log x with its theoretical exponent."""

    slope: float
    intercept: float
    r_squared: float
    theoretical: float
    points: tuple[tuple[float, float], ...]
    rows: tuple[dict, ...] = ()

    def __post_init__(self) -> None:
        if len(self.points) < 4:
            raise ValidationError(
                f"a rate fit needs at least 4 points, got {len(self.points)}"
            )

    @property
    def constant(self) -> float:
        """exp(intercept): the fitted multiplicative constant."""
        return math.exp(self.intercept)


@dataclass(frozen=True)
class RegimeCell:
    """Analytic (p, beta) regime label, optionally with a fitted slope."""

    p: float
    beta: float
    predicted: str
    fitted_slope: float = math.nan
    oracle_b: float = math.nan


def fit_loglog(
    xs, ys, theoretical: float, rows: tuple[dict, ...] = ()
) -> RateFit:
    """Fit log(y) = slope*log(x) + intercept by least squares."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise ValidationError("fit_loglog requires 1-d arrays of equal length")
    if xs.size < 4:
        raise ValidationError(f"fit_loglog requires at least 4 points, got {xs.size}")
    if not (np.all(xs > 0.0) and np.all(ys > 0.0)):
        raise ValidationError("fit_loglog requires strictly positive coordinates")
    lx = np.log(xs)
    ly = np.log(ys)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_res = float(resid @ resid)
    dy = ly - ly.mean()
    ss_tot = float(dy @ dy)
    if ss_tot <= 0.0:
        r2 = 1.0 if ss_res <= 1e-28 else 0.0
    else:
        r2 = max(0.0, 1.0 - ss_res / ss_tot)
    points = tuple((float(a), float(c)) for a, c in zip(lx, ly))
    return RateFit(
        slope=float(slope),
        intercept=float(intercept),
        r_squared=r2,
        theoretical=float(theoretical),
        points=points,
        rows=tuple(rows),
    )


def _check_n_grid(n_grid) -> list[int]:
    ns = [int(n) for n in n_grid]
    if len(ns) < 4:
        raise ValidationError(f"n_grid needs at least 4 values, got {len(ns)}")
    if any(n < 1 for n in ns) or any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValidationError("n_grid must be strictly increasing positive integers")
    return ns


def _root_sequence(rng) -> np.random.SeedSequence:
    if isinstance(rng, np.random.SeedSequence):
        return np.random.SeedSequence(entropy=rng.entropy, spawn_key=rng.spawn_key)
    if isinstance(rng, (int, np.integer)):
        return np.random.SeedSequence(int(rng))
    raise ValidationError(
        "rng must be an integer seed or a numpy SeedSequence for reproducibility"
    )


def rate_experiment(
    d: TestDensity,
    beta: float,
    p: float,
    c: float,
    n_grid,
    reps: int = 200,
    rng: int | np.random.SeedSequence = 0,
    threads: int = 0,
) -> RateFit:
    """Risk decay under the deterministic bandwidth rule b = c * n^(-2/(2beta+1)).

    Fits log(risk_p^(1/p)) against log(n); the theoretical exponent is the
    minimax -beta/(2beta+1).
    """
    ns = _check_n_grid(n_grid)
    children = _root_sequence(rng).spawn(len(ns))
    rows = []
    ys = []
    for n, child in zip(ns, children):
        b = bandwidth_rule(n, beta, c)
        rep = mc_risk(d, n, b, p, reps=reps, rng=child, threads=threads)
        ys.append(rep.risk_root)
        rows.append(
            {
                "n": n,
                "b": b,
                "risk_root": rep.risk_root,
                "risk_p": rep.risk_p,
                "stderr": rep.stderr,
                "bias_term": rep.bias_term,
                "stoch_term": rep.stoch_term,
            }
        )
    return fit_loglog(ns, ys, theoretical=-beta / (2.0 * beta + 1.0), rows=tuple(rows))


def oracle_bandwidth_grid(
    n_lo: int,
    n_hi: int,
    beta: float = 2.0,
    c: float = 1.0,
    per_decade: int = 12,
    pad: float = 1.6,
) -> np.ndarray:
    """Log-spaced bandwidth grid bracketing c*n^(-2/(2beta+1)) over [n_lo, n_hi]."""
    if not (1 <= n_lo < n_hi):
        raise ValidationError("oracle_bandwidth_grid requires 1 <= n_lo < n_hi")
    b_hi = min(0.9, pad * c * n_lo ** (-2.0 / (2.0 * beta + 1.0)))
    b_lo = c * n_hi ** (-2.0 / (2.0 * beta + 1.0)) / pad
    num = max(8, int(math.ceil(per_decade * math.log10(b_hi / b_lo))) + 1)
    return np.geomspace(b_lo, b_hi, num)


def oracle_bandwidth_slope(
    d: TestDensity,
    p: float,
    n_grid,
    b_grid,
    reps: int = 64,
    rng: int | np.random.SeedSequence = 0,
    beta: float = 2.0,
    threads: int = 0,
) -> RateFit:
    """Decay of the per-n minimum risk over a bandwidth grid.

    The same replication streams are reused for every bandwidth at a given n
    (common random numbers), so the minimum over b is not noise-dominated.
    Theoretical exponent: -beta/(2beta+2-4/p) for p >= 4, else the minimax
    -beta/(2beta+1).
    """
    ns = _check_n_grid(n_grid)
    bs = np.asarray(b_grid, dtype=np.float64)
    if bs.size < 8:
        raise ValidationError(f"b_grid needs at least 8 values, got {bs.size}")
    if not (np.all(bs > 0.0) and np.all(bs <= 1.0)):
        raise ValidationError("b_grid values must lie in (0, 1]")
    children = _root_sequence(rng).spawn(len(ns))
    rows = []
    ys = []
    oracle_bs = []
    for n, child in zip(ns, children):
        risks = np.empty(bs.size, dtype=np.float64)
        for j, b in enumerate(bs):
            risks[j] = mc_risk(
                d, n, float(b), p, reps=reps, rng=child, threads=threads
            ).risk_root
        k = int(np.argmin(risks))
        ys.append(float(risks[k]))
        oracle_bs.append(float(bs[k]))
        for j, b in enumerate(bs):
            rows.append(
                {
                    "n": n,
                    "b": float(b),
                    "risk_root": float(risks[j]),
                    "is_min": int(j == k),
                }
            )
    if p >= 4.0:
        theo = -beta / (2.0 * beta + 2.0 - 4.0 / p)
    else:
        theo = -beta / (2.0 * beta + 1.0)
    fit = fit_loglog(ns, ys, theoretical=theo, rows=tuple(rows))
    return fit


def _unit_interval_breaks(
    b: float, fine: tuple[float, float, float] | None = None, hi: float = 1.0
) -> np.ndarray:
    """Quadrature breaks on [0, hi]: graded near the origin, optional
    uniform refinement (lo, hi, step) in the interior."""
    breaks = graded_mesh(b, 0.0, 2.0)
    breaks = breaks[breaks <= hi + 1e-9]
    if abs(breaks[-1] - hi) > 1e-9:
        breaks = np.append(breaks, hi)
    breaks[-1] = hi
    if fine is not None:
        lo, hi, step = fine
        extra = np.arange(lo, hi, step)
        breaks = np.unique(np.concatenate([breaks, extra]))
        keep = np.concatenate([[True], np.diff(breaks) > 1e-12])
        keep[-1] = True
        if breaks.size >= 2 and breaks[-1] - breaks[-2] <= 1e-12:
            keep[-2] = False
        breaks = breaks[keep]
    return breaks


def _unit_l1_bias(d: TestDensity, b: float, fine=None, hi: float = 1.0) -> float:
    """L1([0, hi]) distance between the smoothed mean and the density."""
    nodes, wts = mesh_nodes_weights(_unit_interval_breaks(b, fine, hi))
    ef = exact_mean_curve(d, b, nodes)
    fv = np.asarray(d.pdf(nodes))
    return float(wts @ np.abs(ef - fv))


def _check_b_grid(b_grid) -> list[float]:
    bs = [float(b) for b in b_grid]
    if len(bs) < 4:
        raise ValidationError(f"b_grid needs at least 4 values, got {len(bs)}")
    if any(not 0.0 < b <= 1.0 for b in bs):
        raise ValidationError("b_grid values must lie in (0, 1]")
    return bs


def endpoint_leakage(
    p: float, b_grid, rng: int | np.random.SeedSequence = 0, d: TestDensity | None = None
) -> RateFit:
    """Deterministic bias growth when the density does not vanish at 1.

    Uses the unmollified uniform density by default; entirely quadrature
    based (rng is accepted for interface uniformity and unused). Theoretical
    slope of log(bias_term) vs log(b): 1/(2p).
    """
    bs = _check_b_grid(b_grid)
    if d is None:
        d = raw_uniform()
    ys = [bias_term(d, b, p) for b in bs]
    rows = tuple({"b": b, "bias_term": y} for b, y in zip(bs, ys))
    return fit_loglog(bs, ys, theoretical=1.0 / (2.0 * p), rows=rows)


def linear_bias_experiment(
    b_grid, rng: int | np.random.SeedSequence = 0, L: float = 2.0
) -> RateFit:
    """Bias floor of the smoothed linear-tilt density: slope 1 in b.

    Measures the L1([0, 1/2]) distance between the smoothed mean and the
    density — the window where the kernel's mean shift x -> x + b forces a
    pointwise bias of 2*eps*b, clear of both support endpoints. (Over all of
    [0,1] the lower bound still holds, but the fixed-width compensation bump
    near 1 adds a slowly-decaying smoothing error that masks the slope until
    b is far below this grid.) The expected ratio l1_bias / b is eps."""
    bs = _check_b_grid(b_grid)
    d = molli_linear(L)
    ys = [_unit_l1_bias(d, b, hi=0.5) for b in bs]
    rows = tuple(
        {"b": b, "l1_bias": y, "ratio": y / b} for b, y in zip(bs, ys)
    )
    return fit_loglog(bs, ys, theoretical=1.0, rows=rows)


def bump_bias_experiment(
    beta: float, b_grid, rng: int | np.random.SeedSequence = 0, L: float = 2.0
) -> RateFit:
    """L1([0, 3/4]) bias of the bandwidth-matched bump density: slope beta/2.

    For each b the bump density is rebuilt with half-width 3*sqrt(b), and the
    interior mesh is refined to step sqrt(b)/2 so the oscillation is resolved.
    The window [0, 3/4] is always fully tiled by the bumps beyond 1/4 and sits
    clear of the endpoint fade above 7/8 by at least ten kernel widths, so the
    measured bias is exactly the bump contribution: the kernel width to bump
    width ratio sqrt(x*b)/(3*sqrt(b)) is independent of b, which makes the
    attenuated amplitude scale as b^(beta/2) with no competing term.  (Over
    all of [0,1] the fixed-width endpoint fade adds a beta-independent
    smoothing error that buries this signal at every usable b.)
    """
    bs = _check_b_grid(b_grid)
    ys = []
    rows = []
    for b in bs:
        d = molli_bump(beta, b, L)
        step = math.sqrt(b) / 2.0
        y = _unit_l1_bias(d, b, fine=(0.2, 0.75, step), hi=0.75)
        ys.append(y)
        rows.append({"b": b, "l1_bias": y, "ratio": y / b ** (beta / 2.0)})
    return fit_loglog(bs, ys, theoretical=beta / 2.0, rows=tuple(rows))


def predicted_regime(p: float, beta: float) -> str:
    """Analytic regime label for exponent p and smoothness beta.

    Minimax iff (p < 3 and beta <= 2) or (3 <= p < 4 and
    (p-3)/(p-2) < beta <= 2); NonMinimaxBeta iff beta > 2; NonMinimaxP iff
    p >= 4 and beta <= 2. The leftover sliver (3 <= p < 4 with
    beta <= (p-3)/(p-2)) is labeled Open: no statement covers it.
    """
    if not p >= 1.0:
        raise ValidationError(f"predicted_regime requires p >= 1, got {p!r}")
    if not 0.0 < beta <= 4.0:
        raise ValidationError(f"predicted_regime requires beta in (0, 4], got {beta!r}")
    if beta > 2.0:
        return "NonMinimaxBeta"
    if p >= 4.0:
        return "NonMinimaxP"
    if p < 3.0:
        return "Minimax"
    if beta > (p - 3.0) / (p - 2.0):
        return "Minimax"
    return "Open"


def regime_map(
    p_grid,
    beta_grid,
    fit: bool = False,
    reps: int = 16,
    rng: int | np.random.SeedSequence = 0,
    threads: int = 0,
) -> list[RegimeCell]:
    """Analytic regime label per (p, beta) cell; optional low-resolution fit."""
    ps = [float(p) for p in p_grid]
    betas = [float(t) for t in beta_grid]
    if any(not 1.0 <= p <= 8.0 for p in ps):
        raise ValidationError("regime_map requires p values in [1, 8]")
    if any(not 0.0 < t <= 4.0 for t in betas):
        raise ValidationError("regime_map requires beta values in (0, 4]")
    cells = []
    root = _root_sequence(rng)
    children = root.spawn(len(ps) * len(betas)) if fit else [None] * (len(ps) * len(betas))
    idx = 0
    for p in ps:
        for beta in betas:
            label = predicted_regime(p, beta)
            slope = math.nan
            oracle_b = math.nan
            if fit:
                beta_eff = min(beta, 2.0)
                d = mirrored_gamma(beta_eff + 1.0, 0.2)
                ns = [256, 512, 1024, 2048]
                bs = oracle_bandwidth_grid(ns[0], ns[-1], beta=beta_eff, per_decade=8)
                f = oracle_bandwidth_slope(
                    d, p, ns, bs, reps=reps, rng=children[idx],
                    beta=beta_eff, threads=threads,
                )
                slope = f.slope
                oracle_b = next(r["b"] for r in f.rows if r["is_min"] and r["n"] == ns[-1])
            cells.append(RegimeCell(p=p, beta=beta, predicted=label,
                                    fitted_slope=slope, oracle_b=oracle_b))
            idx += 1
    return cells


def stagnant_bandwidth_check(
    b_fixed: float,
    n_grid,
    reps: int = 60,
    rng: int | np.random.SeedSequence = 0,
    d: TestDensity | None = None,
    p: float = 1.0,
    threads: int = 0,
) -> RateFit:
    """Risk at a bandwidth that does not shrink with n.

    The risk plateaus at the deterministic bias floor (fitted slope near 0)
    and the ratio risk / n^(-2/5) diverges; rows carry both diagnostics.
    """
    if not 0.0 < b_fixed <= 1.0:
        raise ValidationError(f"b_fixed must lie in (0, 1], got {b_fixed!r}")
    ns = _check_n_grid(n_grid)
    if d is None:
        d = molli_linear(2.0)
    floor = bias_term(d, b_fixed, p)
    children = _root_sequence(rng).spawn(len(ns))
    ys = []
    rows = []
    for n, child in zip(ns, children):
        rep = mc_risk(d, n, b_fixed, p, reps=reps, rng=child, threads=threads)
        ys.append(rep.risk_root)
        rows.append(
            {
                "n": n,
                "b": b_fixed,
                "risk_root": rep.risk_root,
                "bias_floor": floor,
                "plateau_ratio": rep.risk_root / floor,
                "rate_ratio": rep.risk_root / n ** (-0.4),
            }
        )
    return fit_loglog(ns, ys, theoretical=0.0, rows=tuple(rows))


@dataclass(frozen=True)
class StagnantEventBound:
    """Analytic pieces of the empty-window event bound for b -> 0, n*sqrt(b) bounded.

    prob_bound = exp(-4*delta*s) lower-bounds the probability that no data
    point lands within delta*sqrt(b) of x; fhat_bound is the exact maximum the
    estimator can then take on x in [1/4, 1/2]; when fhat_bound <= 1/2 the
    L^p risk over that window is at least risk_bound.
    """

    n: int
    b: float
    c0: float
    p: float
    s_n: float
    delta_n: float
    prob_bound: float
    fhat_bound: float
    risk_bound: float
    valid: bool


def stagnant_event_bound(
    n: int, b: float, c0: float = 8.0, p: float = 1.0
) -> StagnantEventBound:
    """Evaluate the empty-window lower bound analytically (not simulated).

    c0 sets delta = sqrt(c0 * ln(1/b)); the default is large enough that the
    kernel sup over the punctured window drops below 1/2 once b is small.
    """
    if not 0.0 < b < 1.0:
        raise ValidationError(f"stagnant_event_bound requires 0 < b < 1, got {b!r}")
    if not c0 > 0.0:
        raise ValidationError(f"stagnant_event_bound requires c0 > 0, got {c0!r}")
    s_n = n * math.sqrt(b)
    delta = math.sqrt(c0 * math.log(1.0 / b))
    shift = delta * math.sqrt(b)
    fhat = 0.0
    window_ok = shift < 0.25 and 0.5 + shift <= 0.875
    if window_ok:
        for x in np.linspace(0.25, 0.5, 9):
            kp = KernelPoint(float(x), b)
            fhat = max(
                fhat,
                kernel_pdf(kp, float(x - shift)),
                kernel_pdf(kp, float(x + shift)),
            )
    prob = math.exp(-4.0 * delta * s_n)
    valid = window_ok and fhat <= 0.5
    risk = 0.25 * 0.5**p * prob if valid else 0.0
    return StagnantEventBound(
        n=int(n), b=float(b), c0=float(c0), p=float(p), s_n=s_n, delta_n=delta,
        prob_bound=prob, fhat_bound=fhat, risk_bound=risk, valid=valid,
    )


def regularity_scan(
    alphas=(1.5, 2.0, 3.0, 4.0), betas=(0.5, 1.0, 2.0), theta: float = 0.2
) -> list[dict]:
    """Empirical Holder-quotient classification vs the analytic predicate.

    For each (alpha, beta) the mirrored-gamma quotient |f^(m)(1-h)| / h^(beta-m)
    is scanned over dyadic h; a bounded sequence (mean dyadic log-growth below
    0.25) marks empirical membership, compared against beta <= alpha - 1.
    """
    rows = []
    for alpha in alphas:
        d = mirrored_gamma(float(alpha), theta)
        for beta in betas:
            hs, quotients, growth = holder_quotient_scan(d, float(beta))
            empirical = bool(growth < 0.25)
            predicted = holder_member_mirrored(float(alpha), float(beta))
            rows.append(
                {
                    "alpha": float(alpha),
                    "beta": float(beta),
                    "growth": float(growth),
                    "max_quotient": float(np.max(quotients)),
                    "empirical_member": int(empirical),
                    "predicted_member": int(predicted),
                    "agree": int(empirical == predicted),
                }
            )
    return rows


def fluctuation_floor(
    n_grid=(1024, 4096),
    b_grid=(0.02, 0.01, 0.005),
    reps: int = 100,
    rng: int | np.random.SeedSequence = 0,
    d: TestDensity | None = None,
    threads: int = 0,
) -> list[dict]:
    """Scaled mean absolute fluctuation c = fluct * sqrt(n) * b^(1/4) per cell.

    The scaling removes the theoretical n^(-1/2) b^(-1/4) decay, so a positive
    floor on c across the grid witnesses the fluctuation lower bound. Cells
    must satisfy n*sqrt(b) >= 10.
    """
    if d is None:
        d = molli_linear(2.0)
    root = _root_sequence(rng)
    cells = [(int(n), float(b)) for n in n_grid for b in b_grid]
    for n, b in cells:
        if n * math.sqrt(b) < 10.0:
            raise ValidationError(
                f"fluctuation_floor requires n*sqrt(b) >= 10, got n={n}, b={b}"
            )
    children = root.spawn(len(cells))
    rows = []
    for (n, b), child in zip(cells, children):
        fl = fluctuation_l1(d, n, b, reps=reps, rng=child, threads=threads)
        rows.append(
            {
                "n": n,
                "b": b,
                "fluctuation_l1": fl,
                "scaled_c": fl * math.sqrt(n) * b**0.25,
            }
        )
    return rows


def variance_floor_scan(
    b_grid=(0.02, 0.01, 0.005),
    x_per_b: int = 9,
    d: TestDensity | None = None,
) -> list[dict]:
    """Exact n*Var(fhat(x)) * sqrt(x*b) over x in [b, 1/2], by quadrature.

    The scaled value removes the theoretical b^(-1/2) x^(-1/2) growth; a
    positive floor across the scan witnesses the variance lower bound.
    """
    if d is None:
        d = molli_linear(2.0)
    rows = []
    for b in b_grid:
        b = float(b)
        if not 0.0 < b < 0.5:
            raise ValidationError(f"variance_floor_scan requires b in (0, 1/2), got {b!r}")
        for x in np.geomspace(b, 0.5, x_per_b):
            x = float(x)
            v = pointwise_variance(d, b, x)
            rows.append(
                {
                    "b": b,
                    "x": x,
                    "n_var": v,
                    "scaled": v * math.sqrt(x * b),
                }
            )
    return rows

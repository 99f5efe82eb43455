"""Test densities on [0,1]: uniform, linear tilt, oscillating bumps, and a
mirrored truncated gamma, plus a C-infinity mollifier that flattens every
density at the right endpoint without changing it on [0, 7/8].

The mollified pdf is raw(x) * w(x) + m * phi(x) where

* w = 1 on [0, 7/8], w = S(8(1-x)) on (7/8, 1), w = 0 beyond 1, with
  S(t) = B(t) / (B(t) + B(1-t)) and B(t) = exp(-1/t) for t > 0 (else 0);
* phi is a smooth bump supported on [7/8, 15/16] (center 29/32, half-width
  1/32) normalized to unit mass;
* m = integral of raw * (1 - w), the mass removed by the fade-out.

All kinds share a rejection sampler with uniform proposal on [0,1] and
envelope 1.01 * sup_norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BandwidthTooLarge,
    EnvelopeViolation,
    NegativeMass,
    NumericalError,
    ValidationError,
)
from .quadrature import adaptive_integral
from .specfun import log_gamma, reg_gamma_upper

__all__ = [
    "HolderClass",
    "TestDensity",
    "gamma_pdf",
    "raw_uniform",
    "linear_tilt",
    "bump_density",
    "mirrored_gamma",
    "mollify",
    "molli_uniform",
    "molli_linear",
    "molli_bump",
    "sample",
    "holder_member_mirrored",
    "holder_quotient_scan",
    "density_from_json",
    "endpoint_weight",
    "compensation_bump",
]

_FADE_START = 7.0 / 8.0
_BUMP_CENTER = 29.0 / 32.0
_BUMP_HALFWIDTH = 1.0 / 32.0


@dataclass(frozen=True)
class HolderClass:
    """Smoothness class parameters (exponent beta, constant L) with the
    derived derivative order m = sup{integer l : l < beta}."""

    beta: float
    L: float
    m: int = field(init=False)

    def __post_init__(self) -> None:
        if not self.beta > 0.0:
            raise ValidationError(f"HolderClass requires beta > 0, got {self.beta!r}")
        if not self.L > 0.0:
            raise ValidationError(f"HolderClass requires L > 0, got {self.L!r}")
        object.__setattr__(self, "m", math.ceil(self.beta) - 1)


def gamma_pdf(alpha: float, theta: float, s) -> np.ndarray | float:
    """Density of Gamma(shape alpha, scale theta) at s (0 for s < 0)."""
    if not alpha > 0.0 or not theta > 0.0:
        raise ValidationError("gamma_pdf requires alpha > 0 and theta > 0")
    arr = np.asarray(s, dtype=np.float64)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    out = np.zeros_like(arr)
    pos = arr > 0.0
    lg = log_gamma(alpha)
    sp = arr[pos]
    out[pos] = np.exp(
        (alpha - 1.0) * np.log(sp) - sp / theta - alpha * math.log(theta) - lg
    )
    at_zero = arr == 0.0
    if at_zero.any():
        if alpha == 1.0:
            out[at_zero] = 1.0 / theta
        elif alpha < 1.0:
            out[at_zero] = np.inf
    return float(out[0]) if scalar else out


def _smooth_step(t: np.ndarray) -> np.ndarray:
    """S(t) = B(t)/(B(t)+B(1-t)), clamped where exp(-1/t) underflows."""
    t = np.asarray(t, dtype=np.float64)
    out = np.empty_like(t)
    lo = t <= 1e-3
    hi = t >= 1.0 - 1e-3
    mid = ~(lo | hi)
    out[lo] = 0.0
    out[hi] = 1.0
    tm = t[mid]
    b0 = np.exp(-1.0 / tm)
    b1 = np.exp(-1.0 / (1.0 - tm))
    out[mid] = b0 / (b0 + b1)
    return out


def endpoint_weight(x) -> np.ndarray | float:
    """The fade-out weight w: 1 on [0, 7/8], 0 beyond 1, smooth between."""
    arr = np.asarray(x, dtype=np.float64)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    out = np.ones_like(arr)
    out[arr >= 1.0] = 0.0
    ramp = (arr > _FADE_START) & (arr < 1.0)
    out[ramp] = _smooth_step(8.0 * (1.0 - arr[ramp]))
    return float(out[0]) if scalar else out


def _bump_shape(v: np.ndarray) -> np.ndarray:
    out = np.zeros_like(v)
    inside = np.abs(v) < 1.0
    vi = v[inside]
    out[inside] = np.exp(-1.0 / (1.0 - vi * vi))
    return out


def _bump_shape_integral() -> float:
    return adaptive_integral(
        lambda v: _bump_shape(np.asarray(v)), -1.0, 1.0, 1e-14
    )


_BUMP_NORM = _BUMP_HALFWIDTH * _bump_shape_integral()


def compensation_bump(x) -> np.ndarray | float:
    """Unit-mass smooth bump supported on [7/8, 15/16]."""
    arr = np.asarray(x, dtype=np.float64)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    v = (arr - _BUMP_CENTER) / _BUMP_HALFWIDTH
    out = _bump_shape(v) / _BUMP_NORM
    return float(out[0]) if scalar else out


class TestDensity:
    """Base class: a density on [0,1] with a known sup and a sampler."""

    kind: str = "abstract"
    support_end: float = 1.0

    @property
    def sup_norm(self) -> float:
        raise NotImplementedError

    def pdf(self, x) -> np.ndarray | float:
        raise NotImplementedError

    def params(self) -> dict:
        raise NotImplementedError

    def to_json(self) -> dict:
        return {"kind": self.kind, "params": self.params()}

    def _pdf_frame(self, x):
        arr = np.asarray(x, dtype=np.float64)
        scalar = arr.ndim == 0
        arr = np.atleast_1d(arr)
        inside = (arr >= 0.0) & (arr <= 1.0)
        return arr, scalar, inside

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        args = ", ".join(f"{k}={v!r}" for k, v in self.params().items())
        return f"{self.kind}({args})"


class RawUniform(TestDensity):
    kind = "RawUniform"

    @property
    def sup_norm(self) -> float:
        return 1.0

    def pdf(self, x):
        arr, scalar, inside = self._pdf_frame(x)
        out = np.where(inside, 1.0, 0.0)
        return float(out[0]) if scalar else out

    def params(self) -> dict:
        return {}


class RawLinear(TestDensity):
    """Tilted uniform 1 + eps (2x - 1) with eps = min(1/2, (L-1)/2)."""

    kind = "RawLinear"

    def __init__(self, L: float):
        if not L > 1.0:
            raise ValidationError(f"linear tilt requires L > 1, got {L!r}")
        self.L = float(L)
        self.eps = min(0.5, (self.L - 1.0) / 2.0)

    @property
    def sup_norm(self) -> float:
        return 1.0 + self.eps

    def pdf(self, x):
        arr, scalar, inside = self._pdf_frame(x)
        out = np.where(inside, 1.0 + self.eps * (2.0 * arr - 1.0), 0.0)
        return float(out[0]) if scalar else out

    def params(self) -> dict:
        return {"L": self.L}


class RawBump(TestDensity):
    """1 plus 2N alternating sixth-power bumps of half-width 3 sqrt(b),
    amplitude (L/16)(3 sqrt(b))^beta, tiling [1/4, 1/4 + 12 N sqrt(b)]."""

    kind = "RawBump"

    def __init__(self, beta: float, b: float, L: float):
        if not 0.0 < beta <= 2.0:
            raise ValidationError(f"bump density requires beta in (0,2], got {beta!r}")
        if not 0.0 < b < 1.0:
            raise ValidationError(f"bump density requires b in (0,1), got {b!r}")
        if not L > 1.0:
            raise ValidationError(f"bump density requires L > 1, got {L!r}")
        self.beta = float(beta)
        self.b = float(b)
        self.L = float(L)
        self.half_width = 3.0 * math.sqrt(b)
        self.amplitude = (self.L / 16.0) * self.half_width**self.beta
        self.n_pairs = math.ceil(1.0 / (24.0 * math.sqrt(b)))
        edge = 0.25 + 4.0 * self.n_pairs * self.half_width
        if self.amplitude > 0.5:
            raise BandwidthTooLarge(
                f"bump amplitude {self.amplitude:.4g} > 1/2 at b={b!r}; shrink b"
            )
        if edge > _FADE_START:
            raise BandwidthTooLarge(
                f"bump support reaches {edge:.4g} > 7/8 at b={b!r}; shrink b"
            )
        self.edge = edge

    @property
    def sup_norm(self) -> float:
        return 1.0 + self.amplitude

    def pdf(self, x):
        arr, scalar, inside = self._pdf_frame(x)
        out = np.where(inside, 1.0, 0.0)
        zone = inside & (arr >= 0.25) & (arr <= self.edge)
        if zone.any():
            xz = arr[zone]
            j = np.floor((xz - 0.25) / (2.0 * self.half_width)).astype(np.int64)
            np.clip(j, 0, 2 * self.n_pairs - 1, out=j)
            centers = 0.25 + (2.0 * j + 1.0) * self.half_width
            sign = np.where(j % 2 == 0, -1.0, 1.0)  # k = j + 1, sign (-1)^k
            u = (xz - centers) / self.half_width
            psi = np.clip(1.0 - u * u, 0.0, None) ** 3
            out[zone] += self.amplitude * sign * psi
        return float(out[0]) if scalar else out

    def params(self) -> dict:
        return {"beta": self.beta, "b": self.b, "L": self.L}


class MirroredGamma(TestDensity):
    """c * g_{alpha,theta}(1 - x) on [0,1]: the gamma density mirrored about
    x = 1 and renormalized after truncation to unit mass."""

    kind = "MirroredGamma"

    def __init__(self, alpha: float, theta: float):
        if not alpha > 0.0 or not theta > 0.0:
            raise ValidationError("mirrored gamma requires alpha > 0 and theta > 0")
        self.alpha = float(alpha)
        self.theta = float(theta)
        self.c_norm = 1.0 / (1.0 - reg_gamma_upper(self.alpha, 1.0 / self.theta))
        if self.alpha >= 1.0:
            mass = adaptive_integral(
                lambda s: np.asarray(gamma_pdf(self.alpha, self.theta, np.asarray(s))),
                0.0,
                1.0,
                1e-12,
                breakpoints=[min(1.0, self.theta), min(1.0, 5.0 * self.theta)],
            )
        else:
            # Substitute s = y^(1/alpha): removes the s^(alpha-1)
            # singularity, leaving a smooth bounded integrand.
            k = 1.0 / self.alpha
            front = k / (self.theta**self.alpha * math.exp(log_gamma(self.alpha)))
            mass = adaptive_integral(
                lambda y: front * np.exp(-np.asarray(y) ** k / self.theta),
                0.0,
                1.0,
                1e-12,
            )
        if abs(self.c_norm * mass - 1.0) > 1e-9:
            raise NumericalError(
                f"mirrored gamma normalizer cross-check failed: "
                f"c={self.c_norm!r}, quadrature mass={mass!r}"
            )

    @property
    def sup_norm(self) -> float:
        if self.alpha < 1.0:
            return math.inf
        mode = min(max((self.alpha - 1.0) * self.theta, 0.0), 1.0)
        return self.c_norm * float(gamma_pdf(self.alpha, self.theta, mode))

    def pdf(self, x):
        arr, scalar, inside = self._pdf_frame(x)
        out = np.zeros_like(arr)
        out[inside] = self.c_norm * np.asarray(
            gamma_pdf(self.alpha, self.theta, 1.0 - arr[inside])
        )
        return float(out[0]) if scalar else out

    def derivative(self, x, order: int = 1) -> np.ndarray | float:
        """Analytic k-th derivative of the pdf on (0,1), k in {0,1,2}."""
        if order not in (0, 1, 2):
            raise ValidationError("derivative implemented for orders 0..2")
        arr = np.asarray(x, dtype=np.float64)
        scalar = arr.ndim == 0
        arr = np.atleast_1d(arr)
        if np.any((arr < 0.0) | (arr >= 1.0)):
            raise ValidationError("derivative defined on [0, 1)")
        s = 1.0 - arr
        g = np.asarray(gamma_pdf(self.alpha, self.theta, s))
        a1 = self.alpha - 1.0
        if order == 0:
            out = self.c_norm * g
        elif order == 1:
            out = -self.c_norm * g * (a1 / s - 1.0 / self.theta)
        else:
            bracket = a1 / s - 1.0 / self.theta
            out = self.c_norm * g * (bracket * bracket - a1 / (s * s))
        return float(out[0]) if scalar else out

    def params(self) -> dict:
        return {"alpha": self.alpha, "theta": self.theta}


_MOLLIFIED_KIND = {"RawUniform": "MolliUniform", "RawLinear": "MolliLinear", "RawBump": "Bump"}


class Mollified(TestDensity):
    """raw * w + m * phi: equals raw on [0, 7/8], all derivatives 0 at 1."""

    def __init__(self, raw: TestDensity):
        if raw.kind not in _MOLLIFIED_KIND:
            raise ValidationError(f"mollify is not defined for kind {raw.kind!r}")
        self.raw = raw
        self.kind = _MOLLIFIED_KIND[raw.kind]
        removed = adaptive_integral(
            lambda t: np.asarray(raw.pdf(t)) * (1.0 - np.asarray(endpoint_weight(t))),
            _FADE_START,
            1.0,
            1e-13,
        )
        if removed < -1e-12:
            raise NegativeMass(f"compensation mass {removed!r} negative")
        self.mass = max(removed, 0.0)
        grid = np.linspace(_FADE_START - 1e-3, 0.94, 6501)
        self._sup = max(raw.sup_norm, float(np.max(self.pdf(grid))))

    @property
    def sup_norm(self) -> float:
        return self._sup

    def pdf(self, x):
        arr, scalar, _ = self._pdf_frame(x)
        out = np.asarray(self.raw.pdf(arr)) * np.asarray(endpoint_weight(arr))
        out = out + self.mass * np.asarray(compensation_bump(arr))
        return float(out[0]) if scalar else out

    def params(self) -> dict:
        return self.raw.params()


def raw_uniform() -> TestDensity:
    return RawUniform()


def linear_tilt(L: float) -> TestDensity:
    """Raw tilted-uniform density 1 + eps (2x - 1); mollify() for the
    endpoint-flattened variant."""
    return RawLinear(L)


def bump_density(beta: float, b: float, L: float) -> TestDensity:
    """Raw oscillating-bump density; raises BandwidthTooLarge unless the
    amplitude is <= 1/2 and all bumps fit inside [0, 7/8]."""
    return RawBump(beta, b, L)


def mirrored_gamma(alpha: float, theta: float) -> TestDensity:
    return MirroredGamma(alpha, theta)


def mollify(raw: TestDensity) -> TestDensity:
    return Mollified(raw)


def molli_uniform() -> TestDensity:
    return mollify(RawUniform())


def molli_linear(L: float) -> TestDensity:
    return mollify(RawLinear(L))


def molli_bump(beta: float, b: float, L: float) -> TestDensity:
    return mollify(RawBump(beta, b, L))


_SAMPLE_BATCH = 8192


def sample(d: TestDensity, n: int, rng: np.random.Generator) -> np.ndarray:
    """n iid draws from d: rejection sampling, uniform proposal on [0,1],
    envelope 1.01 * sup_norm. Deterministic given the generator state."""
    if not n >= 1:
        raise ValidationError(f"sample requires n >= 1, got {n!r}")
    env = 1.01 * d.sup_norm
    if not math.isfinite(env):
        raise ValidationError(f"cannot rejection-sample {d.kind}: unbounded density")
    out = np.empty(n, dtype=np.float64)
    filled = 0
    while filled < n:
        u = rng.random(_SAMPLE_BATCH)
        y = rng.random(_SAMPLE_BATCH)
        p = np.asarray(d.pdf(u))
        if np.any(p > env):
            worst = float(np.max(p))
            raise EnvelopeViolation(
                f"pdf value {worst!r} exceeds envelope {env!r} for {d.kind}"
            )
        acc = u[y * env <= p]
        take = min(n - filled, acc.size)
        out[filled : filled + take] = acc[:take]
        filled += take
    return out


def holder_member_mirrored(alpha: float, beta: float) -> bool:
    """Membership of the mirrored gamma in the beta-smoothness class
    (for some finite constant): true iff beta <= alpha - 1."""
    if not alpha > 0.0 or not beta > 0.0:
        raise ValidationError("holder_member_mirrored requires alpha, beta > 0")
    return beta <= alpha - 1.0


def holder_quotient_scan(
    d: MirroredGamma,
    beta: float,
    j_lo: int = 6,
    j_hi: int = 16,
) -> tuple[np.ndarray, np.ndarray, float]:
    """Dyadic scan of |f^(m)(1 - h)| / h^(beta - m) for h = 2^-j.

    Returns (h values, quotients, growth rate), where the growth rate is
    the mean of log2(q_{j+1}/q_j) over the finer half of the scan: near 0
    for a member at the boundary, clearly positive for a non-member.
    """
    if not isinstance(d, MirroredGamma):
        raise ValidationError("holder_quotient_scan expects a MirroredGamma density")
    m = HolderClass(beta=beta, L=1.0).m
    if m > 2:
        raise ValidationError("quotient scan supports beta <= 3 (derivatives 0..2)")
    js = np.arange(j_lo, j_hi + 1)
    hs = 2.0 ** (-js.astype(np.float64))
    deriv = np.abs(np.asarray(d.derivative(1.0 - hs, order=m)))
    quotients = np.maximum(deriv, 1e-300) / hs ** (beta - m)
    logq = np.log2(quotients)
    steps = np.diff(logq)
    tail = steps[steps.size // 2 :]
    growth = float(np.mean(tail))
    return hs, quotients, growth


_JSON_BUILDERS = {
    "RawUniform": lambda p: RawUniform(),
    "RawLinear": lambda p: RawLinear(L=float(p["L"])),
    "RawBump": lambda p: RawBump(beta=float(p["beta"]), b=float(p["b"]), L=float(p["L"])),
    "MirroredGamma": lambda p: MirroredGamma(
        alpha=float(p["alpha"]), theta=float(p["theta"])
    ),
    "MolliUniform": lambda p: mollify(RawUniform()),
    "MolliLinear": lambda p: mollify(RawLinear(L=float(p["L"]))),
    "Bump": lambda p: mollify(
        RawBump(beta=float(p["beta"]), b=float(p["b"]), L=float(p["L"]))
    ),
}


def density_from_json(spec: dict) -> TestDensity:
    """Build a density from {"kind": ..., "params": {...}}."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValidationError("density spec must be an object with a 'kind' field")
    kind = spec["kind"]
    params = spec.get("params", {}) or {}
    if kind not in _JSON_BUILDERS:
        raise ValidationError(
            f"unknown density kind {kind!r}; expected one of {sorted(_JSON_BUILDERS)}"
        )
    try:
        return _JSON_BUILDERS[kind](params)
    except KeyError as exc:
        raise ValidationError(f"density kind {kind!r} missing parameter {exc}") from exc

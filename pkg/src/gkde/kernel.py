"""The gamma smoothing kernel and its bound functionals.

For an evaluation point x and bandwidth b the kernel in t is the gamma
density with shape x/b + 1 and scale b. This module exposes the pdf (in
log-space), exact moments, tail probabilities, the L2 norm functional and
its Stirling-ratio form, the sup over [0,1], the local two-point ratio used
in small-bandwidth lower bounds, and envelope bounds with explicit
constants:

* sup envelope:   K_b(x, x) <= 1 * b^(-1/2) (x + b)^(-1/2)
* L2 envelope:    B_b(x)    <= 1/2 * b^(-1/2) (x + b)^(-1/2)
* tail envelope:  sup_[0,1] K_b(x, .) <= (2 pi x b)^(-1/2) exp(-c x / b)
                  for x >= 3, with decay rate c = ln 3 - 1 + 1/3.

The envelope constants are exact suprema (attained or approached at x = 0,
x = 0, and (x, b) -> (3, 0) respectively), verified on grids in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import core
from .errors import ValidationError
from .specfun import log_gamma, reg_gamma_upper, stirling_ratio

__all__ = [
    "KernelPoint",
    "KernelBounds",
    "kernel_pdf",
    "kernel_pdf_grid",
    "kernel_mean_var",
    "tail_prob",
    "l2_integral",
    "l2_integral_ratio_form",
    "sup_on_unit_interval",
    "local_ratio",
    "sample_kernel",
    "kernel_bounds",
    "sup_envelope",
    "l2_envelope",
    "tail_envelope",
    "chernoff_unit_tail",
    "UNIT_TAIL_DECAY",
    "SUP_ENVELOPE_C",
    "L2_ENVELOPE_C",
    "TAIL_ENVELOPE_C",
]

LN2 = math.log(2.0)

# Decay rate of the kernel sup over [0,1] for x >= 3: the positive root of
# 3 ln 3 - 3 + 1 = 3c, i.e. ln 3 - 1 + 1/3.
UNIT_TAIL_DECAY = math.log(3.0) - 1.0 + 1.0 / 3.0

SUP_ENVELOPE_C = 1.0
L2_ENVELOPE_C = 0.5
TAIL_ENVELOPE_C = 1.0 / math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class KernelPoint:
    """Evaluation point x >= 0 and bandwidth b in (0, 1]."""

    x: float
    b: float

    def __post_init__(self) -> None:
        if not (isinstance(self.x, (int, float)) and math.isfinite(self.x) and self.x >= 0.0):
            raise ValidationError(f"KernelPoint requires x >= 0, got {self.x!r}")
        if not (isinstance(self.b, (int, float)) and 0.0 < self.b <= 1.0):
            raise ValidationError(f"KernelPoint requires 0 < b <= 1, got {self.b!r}")

    @property
    def shape(self) -> float:
        return self.x / self.b + 1.0

    @property
    def scale(self) -> float:
        return self.b


def kernel_pdf(kp: KernelPoint, t: float) -> float:
    """Kernel density t^(x/b) e^(-t/b) / (b^(x/b+1) Gamma(x/b+1)) at t >= 0."""
    if not t >= 0.0:
        raise ValidationError(f"kernel_pdf requires t >= 0, got {t!r}")
    return float(core.kernel_pdf_values(kp.x, kp.b, np.array([float(t)]))[0])


def kernel_pdf_grid(kp: KernelPoint, ts: np.ndarray) -> np.ndarray:
    """Vectorized kernel density over an array of nonnegative t values."""
    ts = np.asarray(ts, dtype=np.float64)
    if ts.size and ts.min() < 0.0:
        raise ValidationError("kernel_pdf_grid requires all t >= 0")
    return core.kernel_pdf_values(kp.x, kp.b, ts)


def kernel_mean_var(kp: KernelPoint) -> tuple[float, float]:
    """Exact mean and variance of the kernel variable: (x + b, x b + b^2)."""
    return kp.x + kp.b, kp.x * kp.b + kp.b * kp.b


def tail_prob(kp: KernelPoint, s: float) -> float:
    """P(xi_x > s) for the kernel variable xi_x ~ Gamma(x/b + 1, b)."""
    if not s >= 0.0:
        raise ValidationError(f"tail_prob requires s >= 0, got {s!r}")
    return reg_gamma_upper(kp.x / kp.b + 1.0, s / kp.b)


def l2_integral(kp: KernelPoint) -> float:
    """Integral of the squared kernel over [0, inf), in log-space."""
    u = kp.x / kp.b
    return math.exp(
        -math.log(kp.b)
        + log_gamma(2.0 * u + 1.0)
        - (2.0 * u + 1.0) * LN2
        - 2.0 * log_gamma(u + 1.0)
    )


def l2_integral_ratio_form(kp: KernelPoint) -> float:
    """Stirling-ratio form of l2_integral, valid for x > 0:
    (1 / (2 sqrt(pi))) b^(-1/2) x^(-1/2) R(x/b)^2 / R(2x/b)."""
    if not kp.x > 0.0:
        raise ValidationError("ratio form requires x > 0")
    u = kp.x / kp.b
    return (
        0.5
        / math.sqrt(math.pi)
        / math.sqrt(kp.b)
        / math.sqrt(kp.x)
        * stirling_ratio(u) ** 2
        / stirling_ratio(2.0 * u)
    )


def sup_on_unit_interval(kp: KernelPoint) -> float:
    """Max of the kernel density over t in [0,1]: attained at t = min(x, 1)."""
    return kernel_pdf(kp, min(kp.x, 1.0))


def local_ratio(kp: KernelPoint, delta: float) -> float:
    """K_b(x, x + delta sqrt(b)) / K_b(x, x) for x > 0:
    exp{(x/b) ln(1 + delta sqrt(b)/x) - delta/sqrt(b)}; tends to
    exp{-delta^2/(2x)} as b -> 0."""
    sb = math.sqrt(kp.b)
    if not kp.x + delta * sb > 0.0:
        raise ValidationError("local_ratio requires x + delta*sqrt(b) > 0")
    if kp.x == 0.0:
        raise ValidationError("local_ratio requires x > 0")
    return math.exp((kp.x / kp.b) * math.log1p(delta * sb / kp.x) - delta / sb)


def sample_kernel(kp: KernelPoint, n: int, rng: np.random.Generator) -> np.ndarray:
    """n draws of the kernel variable xi_x ~ Gamma(x/b + 1, b)."""
    if not n >= 1:
        raise ValidationError(f"sample_kernel requires n >= 1, got {n!r}")
    return rng.gamma(shape=kp.x / kp.b + 1.0, scale=kp.b, size=n)


def sup_envelope(kp: KernelPoint) -> float:
    """Envelope for the kernel's peak value: C b^(-1/2) (x + b)^(-1/2)."""
    return SUP_ENVELOPE_C / math.sqrt(kp.b) / math.sqrt(kp.x + kp.b)


def l2_envelope(kp: KernelPoint) -> float:
    """Envelope for l2_integral: C b^(-1/2) (x + b)^(-1/2)."""
    return L2_ENVELOPE_C / math.sqrt(kp.b) / math.sqrt(kp.x + kp.b)


def tail_envelope(kp: KernelPoint) -> float:
    """Envelope for sup_on_unit_interval when x >= 3:
    (2 pi x b)^(-1/2) exp(-UNIT_TAIL_DECAY * x / b)."""
    if not kp.x >= 3.0:
        raise ValidationError("tail_envelope applies for x >= 3")
    return (
        TAIL_ENVELOPE_C
        / math.sqrt(kp.x * kp.b)
        * math.exp(-UNIT_TAIL_DECAY * kp.x / kp.b)
    )


def chernoff_unit_tail(b: float) -> float:
    """Chernoff bound on P(xi_x > 1) uniform over x in [0, 1/2]:
    2 exp(-(1 - ln 2) / (2b))."""
    if not 0.0 < b <= 1.0:
        raise ValidationError(f"chernoff_unit_tail requires 0 < b <= 1, got {b!r}")
    return 2.0 * math.exp(-(1.0 - LN2) / (2.0 * b))


@dataclass(frozen=True)
class KernelBounds:
    """Envelope values for one kernel point (all positive and finite)."""

    sup_bound: float
    l2_value: float
    tail_bound: float


def kernel_bounds(kp: KernelPoint) -> KernelBounds:
    """Sup envelope, exact L2 integral, and unit-interval tail envelope.

    For x < 3 (where the exponential tail envelope does not apply) the
    tail_bound field falls back to the sup envelope, which always bounds
    the kernel on [0,1].
    """
    tail = tail_envelope(kp) if kp.x >= 3.0 else sup_envelope(kp)
    return KernelBounds(
        sup_bound=sup_envelope(kp), l2_value=l2_integral(kp), tail_bound=tail
    )

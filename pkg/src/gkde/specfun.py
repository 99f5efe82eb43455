"""Scalar special functions underlying the gamma kernel.

Everything here is deterministic, dependency-free float64 arithmetic:

* ``log_gamma`` -- Lanczos approximation (g = 7, 9 coefficients), relative
  error below 1e-13 on [1e-3, 1e8].
* ``reg_gamma_upper`` -- regularized upper incomplete gamma Q(a, z), series
  for z < a + 1 and Lentz continued fraction otherwise, absolute error
  below 1e-12.
* ``stirling_ratio`` -- the ratio of the Stirling approximation of
  Gamma(u + 1) to its exact value; increasing in u, tends to 1, and by
  continuity equals 0 at u = 0.
"""

from __future__ import annotations

import math

from .errors import NumericalError, ValidationError

__all__ = ["log_gamma", "reg_gamma_upper", "stirling_ratio"]

HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)

# Lanczos coefficients for g = 7 (Godfrey's set, also used by GSL).
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_MAX_ITER = 500
_REL_TOL = 1e-15
_TINY = 1e-300


def log_gamma(u: float) -> float:
    """Natural log of Gamma(u) for u > 0."""
    u = float(u)
    if not u > 0.0 or math.isinf(u) or math.isnan(u):
        raise ValidationError(f"log_gamma requires u > 0, got {u!r}")
    if u < 0.5:
        # Recurrence lifts small arguments into the Lanczos sweet spot
        # without the cancellation a direct evaluation would suffer.
        return _lanczos(u + 1.0) - math.log(u)
    return _lanczos(u)


def _lanczos(z: float) -> float:
    acc = _LANCZOS_COEF[0]
    for k in range(1, 9):
        acc += _LANCZOS_COEF[k] / (z - 1.0 + k)
    t = z + _LANCZOS_G - 0.5
    return HALF_LOG_TWO_PI + (z - 0.5) * math.log(t) - t + math.log(acc)


def reg_gamma_upper(a: float, z: float) -> float:
    """Regularized upper incomplete gamma Q(a, z) = Gamma(a, z) / Gamma(a)."""
    a = float(a)
    z = float(z)
    if not a > 0.0:
        raise ValidationError(f"reg_gamma_upper requires a > 0, got {a!r}")
    if not z >= 0.0:
        raise ValidationError(f"reg_gamma_upper requires z >= 0, got {z!r}")
    if z == 0.0:
        return 1.0
    log_front = -z + a * math.log(z) - log_gamma(a)
    if z < a + 1.0:
        return 1.0 - math.exp(log_front) * _lower_series(a, z)
    return math.exp(log_front) * _upper_cf(a, z)


def _lower_series(a: float, z: float) -> float:
    # P(a, z) = front * sum_k z^k / (a (a+1) ... (a+k)).
    term = 1.0 / a
    total = term
    for k in range(1, _MAX_ITER + 1):
        term *= z / (a + k)
        total += term
        if abs(term) < abs(total) * _REL_TOL:
            return total
    raise NumericalError(
        f"incomplete gamma series failed to converge for a={a!r}, z={z!r}"
    )


def _upper_cf(a: float, z: float) -> float:
    # Modified Lentz evaluation of the classical continued fraction for
    # Gamma(a, z); valid and fast for z >= a + 1.
    b = z + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _REL_TOL:
            return h
    raise NumericalError(
        f"incomplete gamma continued fraction failed to converge for a={a!r}, z={z!r}"
    )


# Coefficients of the Stirling correction series delta(u) = sum c_k / u^(2k-1),
# where Gamma(u+1) = sqrt(2 pi u) (u/e)^u exp(delta(u)).
_STIRLING_SERIES = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
)


def stirling_ratio(u: float) -> float:
    """sqrt(2 pi) e^-u u^(u + 1/2) / Gamma(u + 1), with the u = 0 limit 0."""
    u = float(u)
    if not u >= 0.0:
        raise ValidationError(f"stirling_ratio requires u >= 0, got {u!r}")
    if u == 0.0:
        return 0.0
    if u >= 10.0:
        # the direct log-space formula subtracts exponents of size u*log(u)
        # and loses ~u*log(u)*eps of absolute precision, so use the
        # asymptotic correction series (truncation error < 1e-15 for u >= 10)
        v = 1.0 / (u * u)
        s = 0.0
        for c in reversed(_STIRLING_SERIES):
            s = s * v + c
        return math.exp(-s / u)
    return math.exp(
        HALF_LOG_TWO_PI - u + (u + 0.5) * math.log(u) - log_gamma(u + 1.0)
    )

"""Pure-numpy implementation of the hot kernel evaluations.

Used when the compiled extension is unavailable (or forced via
GKDE_BACKEND=python). Signatures and results match ``gkde._corex``; the
``num_threads`` argument is accepted for interface parity and ignored.
"""

from __future__ import annotations

import math

import numpy as np

from .specfun import HALF_LOG_TWO_PI, _LANCZOS_COEF, _LANCZOS_G

BACKEND_NAME = "python"

_CHUNK = 256


def _lgamma_vec(z: np.ndarray) -> np.ndarray:
    """Vectorized Lanczos log-gamma for z > 0 (same coefficients as specfun)."""
    z = np.asarray(z, dtype=np.float64)
    small = z < 0.5
    zz = np.where(small, z + 1.0, z)
    acc = np.full_like(zz, _LANCZOS_COEF[0])
    for k in range(1, 9):
        acc += _LANCZOS_COEF[k] / (zz - 1.0 + k)
    t = zz + _LANCZOS_G - 0.5
    out = HALF_LOG_TWO_PI + (zz - 0.5) * np.log(t) - t + np.log(acc)
    return np.where(small, out - np.log(np.where(small, z, 1.0)), out)


def kernel_sum(
    xs: np.ndarray, b: float, data: np.ndarray, num_threads: int = 0
) -> np.ndarray:
    """Mean over the sample of the gamma kernel: (1/n) sum_i K_b(x_j, X_i)."""
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    data = np.ascontiguousarray(data, dtype=np.float64)
    n = data.shape[0]
    a = xs / b
    const = -(a + 1.0) * math.log(b) - _lgamma_vec(a + 1.0)
    zero = data == 0.0
    safe = np.where(zero, 1.0, data)
    lnt = np.log(safe)
    tb = data / b
    out = np.empty(xs.shape[0], dtype=np.float64)
    any_zero = bool(zero.any())
    for lo in range(0, xs.shape[0], _CHUNK):
        hi = min(lo + _CHUNK, xs.shape[0])
        logm = a[lo:hi, None] * lnt[None, :] - tb[None, :] + const[lo:hi, None]
        m = np.exp(logm)
        if any_zero:
            # t = 0: the kernel density is 1/b when x = 0 and 0 when x > 0.
            col = np.where(a[lo:hi] == 0.0, 1.0 / b, 0.0)
            m[:, zero] = col[:, None]
        out[lo:hi] = m.sum(axis=1)
    out /= n
    return out


def kernel_pdf_values(x: float, b: float, ts: np.ndarray) -> np.ndarray:
    """Gamma kernel density K_b(x, t) evaluated over an array of t values."""
    ts = np.ascontiguousarray(ts, dtype=np.float64)
    a = x / b
    const = -(a + 1.0) * math.log(b) - float(_lgamma_vec(np.array([a + 1.0]))[0])
    zero = ts == 0.0
    safe = np.where(zero, 1.0, ts)
    out = np.exp(a * np.log(safe) - ts / b + const)
    if zero.any():
        out[zero] = 1.0 / b if a == 0.0 else 0.0
    return out

# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled kernel evaluations (gamma kernel sums over sample x grid).

Numerically equivalent to gkde._core_np; the grid loop is OpenMP-parallel.
Each grid point's sum over the sample runs sequentially inside one thread,
so results are bitwise independent of the thread count.
"""

import numpy as np

cimport numpy as cnp
cimport openmp
from cython.parallel cimport prange
from libc.math cimport exp, lgamma, log

cnp.import_array()

BACKEND_NAME = "compiled"


def kernel_sum(xs, double b, data, int num_threads=0):
    """Mean over the sample of the gamma kernel: (1/n) sum_i K_b(x_j, X_i)."""
    cdef double[::1] xv = np.ascontiguousarray(xs, dtype=np.float64)
    cdef double[::1] tv = np.ascontiguousarray(data, dtype=np.float64)
    cdef Py_ssize_t m = xv.shape[0]
    cdef Py_ssize_t n = tv.shape[0]
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] ov = out
    lnt_arr = np.empty(n, dtype=np.float64)
    tb_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] lnt = lnt_arr
    cdef double[::1] tb = tb_arr
    cdef double lb = log(b)
    cdef Py_ssize_t i, j
    cdef double a, c, s, t
    cdef int nt = num_threads
    if nt <= 0:
        nt = openmp.omp_get_max_threads()
    for i in range(n):
        t = tv[i]
        tb[i] = t / b
        lnt[i] = log(t) if t > 0.0 else 0.0
    for j in prange(m, nogil=True, schedule="static", num_threads=nt):
        a = xv[j] / b
        c = -(a + 1.0) * lb - lgamma(a + 1.0)
        s = 0.0
        for i in range(n):
            if tv[i] > 0.0:
                s = s + exp(a * lnt[i] - tb[i] + c)
            elif a == 0.0:
                # t = 0: the kernel density is 1/b when x = 0, else 0.
                s = s + 1.0 / b
        ov[j] = s / n
    return out


def kernel_pdf_values(double x, double b, ts):
    """Gamma kernel density K_b(x, t) evaluated over an array of t values."""
    cdef double[::1] tv = np.ascontiguousarray(ts, dtype=np.float64)
    cdef Py_ssize_t n = tv.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    cdef double a = x / b
    cdef double c = -(a + 1.0) * log(b) - lgamma(a + 1.0)
    cdef Py_ssize_t i
    cdef double t
    for i in range(n):
        t = tv[i]
        if t > 0.0:
            ov[i] = exp(a * log(t) - t / b + c)
        else:
            ov[i] = 1.0 / b if a == 0.0 else 0.0
    return out

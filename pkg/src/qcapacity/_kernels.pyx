# cython: language_level=3
"""Compiled hot kernels: complex Jacobi eigensolver and Walsh-Hadamard butterfly.

Same interface and rotation schedule as ``_pykernels``. Complex arrays are
handled through float64 views (real and imaginary parts interleaved), so
all arithmetic is plain real arithmetic.
"""
import numpy as np

from libc.math cimport sqrt, fabs, hypot

NAME = "compiled"

# after LATE_SWEEP sweeps, entries this much smaller than both diagonals are zeroed
cdef double NEGLIGIBLE = 100.0
cdef int LATE_SWEEP = 4


cdef double _offnorm(double[:, ::1] a) noexcept nogil:
    cdef Py_ssize_t n = a.shape[0], i, j
    cdef double total = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                total += a[i, 2 * j] * a[i, 2 * j] + a[i, 2 * j + 1] * a[i, 2 * j + 1]
    return sqrt(total)


cdef inline void _mix(double* x, double* y, double c, double s,
                      double wr, double wi) noexcept nogil:
    # (x, y) <- (c x - s w y, s x + c w y) for complex x, y stored as (re, im)
    cdef double xr = x[0], xi = x[1], yr = y[0], yi = y[1]
    cdef double twr = yr * wr - yi * wi
    cdef double twi = yr * wi + yi * wr
    x[0] = c * xr - s * twr
    x[1] = c * xi - s * twi
    y[0] = s * xr + c * twr
    y[1] = s * xi + c * twi


cdef void _rotate(double[:, ::1] a, double[:, ::1] v,
                  Py_ssize_t p, Py_ssize_t q, bint late) noexcept nogil:
    cdef Py_ssize_t n = a.shape[0], r
    cdef double ar = a[p, 2 * q], ai = a[p, 2 * q + 1]
    cdef double mag = hypot(ar, ai)
    cdef double app = fabs(a[p, 2 * p]), aqq = fabs(a[q, 2 * q])
    cdef double tau, t, c, s, er, ei
    if mag == 0.0:
        return
    if late and app + NEGLIGIBLE * mag == app and aqq + NEGLIGIBLE * mag == aqq:
        a[p, 2 * q] = 0.0
        a[p, 2 * q + 1] = 0.0
        a[q, 2 * p] = 0.0
        a[q, 2 * p + 1] = 0.0
        return
    er = ar / mag
    ei = ai / mag
    tau = (a[q, 2 * q] - a[p, 2 * p]) / (2.0 * mag)
    if fabs(tau) > 1e150:
        t = 0.5 / tau
    elif tau >= 0.0:
        t = 1.0 / (tau + sqrt(1.0 + tau * tau))
    else:
        t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
    c = 1.0 / sqrt(1.0 + t * t)
    s = t * c

    # columns take conj(phase), rows take phase
    for r in range(n):
        _mix(&a[r, 2 * p], &a[r, 2 * q], c, s, er, -ei)
        _mix(&v[r, 2 * p], &v[r, 2 * q], c, s, er, -ei)
    for r in range(n):
        _mix(&a[p, 2 * r], &a[q, 2 * r], c, s, er, ei)
    a[p, 2 * q] = 0.0
    a[p, 2 * q + 1] = 0.0
    a[q, 2 * p] = 0.0
    a[q, 2 * p + 1] = 0.0
    a[p, 2 * p + 1] = 0.0
    a[q, 2 * q + 1] = 0.0


def jacobi_eigh(a_in, schedule, double tol, int max_sweeps):
    """Cyclic complex Jacobi diagonalization of a Hermitian matrix.

    Returns ``(diag, vectors, sweeps, residual, converged)``.
    """
    a_arr = np.array(a_in, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = a_arr.shape[0]
    v_arr = np.eye(n, dtype=np.complex128)
    sched_arr = np.ascontiguousarray(schedule, dtype=np.intp)
    cdef double[:, ::1] a = a_arr.view(np.float64)
    cdef double[:, ::1] v = v_arr.view(np.float64)
    cdef const Py_ssize_t[:, :, ::1] sched = sched_arr
    cdef Py_ssize_t n_rounds = sched.shape[0], n_pairs = sched.shape[1]
    cdef Py_ssize_t r, k, p
    cdef int sweeps = 0
    cdef double off
    with nogil:
        off = _offnorm(a)
        while off >= tol and sweeps < max_sweeps:
            for r in range(n_rounds):
                for k in range(n_pairs):
                    p = sched[r, k, 0]
                    if p >= 0:
                        _rotate(a, v, p, sched[r, k, 1], sweeps >= LATE_SWEEP)
            sweeps += 1
            off = _offnorm(a)
    return a_arr.diagonal().real.copy(), v_arr, sweeps, off, off < tol


def fwht_rows(x_in):
    """In-place unitary Walsh-Hadamard transform of every row of ``x_in``."""
    if not x_in.flags.c_contiguous:
        raise ValueError("fwht_rows needs a C-contiguous array")
    cdef double[:, ::1] x = x_in.view(np.float64)
    cdef Py_ssize_t rows = x.shape[0], n = x.shape[1] // 2
    cdef Py_ssize_t row, h, i, j
    cdef double scale = 1.0 / sqrt(2.0)
    cdef double ur, ui, wr, wi
    with nogil:
        for row in range(rows):
            h = 1
            while h < n:
                i = 0
                while i < n:
                    for j in range(i, i + h):
                        ur = x[row, 2 * j]
                        ui = x[row, 2 * j + 1]
                        wr = x[row, 2 * (j + h)]
                        wi = x[row, 2 * (j + h) + 1]
                        x[row, 2 * j] = (ur + wr) * scale
                        x[row, 2 * j + 1] = (ui + wi) * scale
                        x[row, 2 * (j + h)] = (ur - wr) * scale
                        x[row, 2 * (j + h) + 1] = (ui - wi) * scale
                    i += 2 * h
                h *= 2
    return x_in

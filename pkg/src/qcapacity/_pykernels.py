"""NumPy implementations of the hot kernels.

These mirror ``_kernels.pyx`` operation for operation and are used whenever
the compiled extension is unavailable. Within one round of the Jacobi
schedule all index pairs are disjoint, so the rotations of a round are
applied together as vectorized column and row updates.
"""
import numpy as np

NAME = "python"

# after LATE_SWEEP sweeps, entries this much smaller than both diagonals are zeroed
NEGLIGIBLE = 100.0
LATE_SWEEP = 4


def jacobi_eigh(a, schedule, tol, max_sweeps):
    """Cyclic complex Jacobi diagonalization of a Hermitian matrix.

    Returns ``(diag, vectors, sweeps, residual, converged)`` where ``diag``
    holds the unsorted eigenvalues and ``residual`` the off-diagonal
    Frobenius norm at exit.
    """
    a = np.array(a, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    rounds = [r[r[:, 0] >= 0] for r in schedule]
    off = _offnorm(a)
    sweeps = 0
    while off >= tol:
        if sweeps == max_sweeps:
            return a.diagonal().real.copy(), v, sweeps, off, False
        for pairs in rounds:
            _rotate_round(a, v, pairs[:, 0], pairs[:, 1], sweeps >= LATE_SWEEP)
        sweeps += 1
        off = _offnorm(a)
    return a.diagonal().real.copy(), v, sweeps, off, True


def _offnorm(a):
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def _rotate_round(a, v, p, q, late):
    app = a[p, p].real
    aqq = a[q, q].real
    apq = a[p, q]
    mag = np.abs(apq)
    active = mag > 0.0
    if late:
        negligible = (np.abs(app) + NEGLIGIBLE * mag == np.abs(app)) & (np.abs(aqq) + NEGLIGIBLE * mag == np.abs(aqq))
        active &= ~negligible
    safe = np.where(active, mag, 1.0)
    phase = np.where(active, apq / safe, 1.0)
    tau = np.where(active, (aqq - app) / (2.0 * safe), 0.0)
    big = np.abs(tau) > 1e150
    tau_c = np.where(big, 1.0, tau)
    sgn = np.where(tau >= 0.0, 1.0, -1.0)
    t = np.where(big, 0.5 / np.where(big, tau, 1.0), sgn / (np.abs(tau_c) + np.sqrt(1.0 + tau_c * tau_c)))
    t = np.where(active, t, 0.0)
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    left = s * phase.conjugate()
    right = c * phase.conjugate()

    for m in (a, v):
        col_p = m[:, p]
        col_q = m[:, q]
        m[:, p] = col_p * c - col_q * left
        m[:, q] = col_p * s + col_q * right

    row_p = a[p, :]
    row_q = a[q, :]
    a[p, :] = c[:, None] * row_p - (s * phase)[:, None] * row_q
    a[q, :] = s[:, None] * row_p + (c * phase)[:, None] * row_q
    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real


def fwht_rows(x):
    """In-place unitary Walsh-Hadamard transform of every row of ``x``."""
    if not x.flags.c_contiguous:
        raise ValueError("fwht_rows needs a C-contiguous array")
    rows, n = x.shape
    scale = 1.0 / np.sqrt(2.0)
    h = 1
    while h < n:
        blocks = x.reshape(rows, n // (2 * h), 2, h)
        lo = blocks[:, :, 0, :].copy()
        hi = blocks[:, :, 1, :]
        blocks[:, :, 0, :] = (lo + hi) * scale
        blocks[:, :, 1, :] = (lo - hi) * scale
        h *= 2
    return x

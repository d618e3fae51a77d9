"""Dense Hermitian eigendecomposition and spectral matrix functions.

Matrices are ``numpy`` complex128 arrays. The eigensolver is a cyclic
complex Jacobi method run in a round-robin (tournament) pair order, so a
sweep visits every off-diagonal pair exactly once in a fixed order and
output is bit-for-bit reproducible for a given backend.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from . import _backend
from .errors import DomainError, InvalidArgumentError, NumericalFailureError

HERMITIAN_TOL = 1e-9
CLIP_EPS = 1e-12
CONVERGENCE_RTOL = 1e-12
MAX_SWEEPS = 100


@dataclass(frozen=True)
class HermitianEigen:
    """Eigenvalues in non-decreasing order; eigenvectors as matching columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(m) -> np.ndarray:
    """Coerce to a square complex128 array, rejecting empty or non-square input."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidArgumentError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        raise InvalidArgumentError("matrix dimension must be at least 1")
    return a


def hermiticity_error(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


@lru_cache(maxsize=None)
def round_robin_schedule(n: int) -> np.ndarray:
    """Pair schedule of shape ``(rounds, pairs, 2)`` covering all ``p < q``.

    Circle method: player 0 is fixed and the rest rotate. For odd ``n`` a
    dummy player is added and its pairs are marked ``(-1, -1)``.
    """
    m = n + (n % 2)
    if m < 2:
        return np.zeros((0, 0, 2), dtype=np.intp)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = []
        for k in range(m // 2):
            p, q = players[k], players[m - 1 - k]
            if p >= n or q >= n:
                pairs.append((-1, -1))
            else:
                pairs.append((min(p, q), max(p, q)))
        rounds.append(pairs)
        players = [players[0], players[-1]] + players[1:-1]
    sched = np.array(rounds, dtype=np.intp)
    sched.setflags(write=False)
    return sched


def hermitian_eigen(m) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix.

    The input is symmetrized as ``(m + m^H) / 2`` first. Iteration stops
    once the off-diagonal Frobenius norm drops below
    ``1e-12 * (1 + ||m||_F)``.

    Raises:
        InvalidArgumentError: non-square, empty or non-Hermitian input.
        NumericalFailureError: no convergence within 100 sweeps.
    """
    a = as_matrix(m)
    herm_err = hermiticity_error(a)
    if not herm_err <= HERMITIAN_TOL:
        raise InvalidArgumentError(f"matrix is not Hermitian (max |m - m^H| = {herm_err:.3g})")
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    tol = CONVERGENCE_RTOL * (1.0 + float(np.linalg.norm(a)))
    diag, vecs, sweeps, residual, converged = _backend.kernels.jacobi_eigh(
        a, round_robin_schedule(n), tol, MAX_SWEEPS
    )
    if not converged:
        raise NumericalFailureError(
            f"Jacobi iteration did not converge in {MAX_SWEEPS} sweeps (off-diagonal norm {residual:.3g})",
            residual,
        )
    order = np.argsort(diag, kind="stable")
    return HermitianEigen(diag[order], np.ascontiguousarray(vecs[:, order]), int(sweeps))


def clip_spectrum(values: np.ndarray, eps: float = CLIP_EPS) -> np.ndarray:
    """Zero out eigenvalues in ``[-eps, 0)``; anything lower is left alone."""
    values = np.array(values, dtype=float)
    values[(values < 0.0) & (values >= -eps)] = 0.0
    return values


def apply_spectral_function(
    m,
    f: Callable[[np.ndarray], np.ndarray],
    eigen: HermitianEigen | None = None,
) -> np.ndarray:
    """Return ``V diag(f(lambda)) V^H`` for Hermitian ``m``.

    ``f`` is called on the array of clipped eigenvalues. A precomputed
    decomposition of ``m`` may be passed to skip the eigensolve.

    Raises:
        DomainError: ``f`` fails or returns NaN at some eigenvalue.
    """
    if eigen is None:
        eigen = hermitian_eigen(m)
    lam = clip_spectrum(eigen.eigenvalues)
    fl = _evaluate(f, lam)
    v = eigen.eigenvectors
    return (v * fl) @ v.conj().T


def _evaluate(f, lam):
    # vectorized call first; scalar-only callables (math.sqrt) fall back per element
    try:
        with np.errstate(invalid="ignore"):
            fl = np.asarray(f(lam), dtype=np.complex128)
        if fl.shape == lam.shape and not np.any(np.isnan(fl)):
            return fl
    except (TypeError, ValueError, FloatingPointError, ArithmeticError):
        pass
    out = np.empty(lam.shape, dtype=np.complex128)
    for k, x in enumerate(lam):
        try:
            with np.errstate(invalid="ignore"):
                y = complex(f(float(x)))
        except (TypeError, ValueError, FloatingPointError, ArithmeticError):
            y = complex("nan")
        if np.isnan(y):
            raise DomainError(f"spectral function undefined at eigenvalue {x:.6g}", float(x))
        out[k] = y
    return out

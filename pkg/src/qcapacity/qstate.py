"""Computational-register states and the information measures on them.

Entropies are in bits. ``DensityMatrix`` caches its eigendecomposition, so
repeated entropy and fidelity evaluations on one state cost one eigensolve.
Qubit 0 is the most significant bit of a basis index.
"""
from __future__ import annotations

import math
from functools import cached_property, reduce
from typing import Union

import numpy as np

from .errors import InvalidArgumentError
from .linalg import (
    HERMITIAN_TOL,
    HermitianEigen,
    apply_spectral_function,
    as_matrix,
    hermitian_eigen,
    hermiticity_error,
)

NORM_TOL = 1e-10
TRACE_TOL = 1e-9
NEGATIVE_TOL = 1e-9
ZERO_EIGENVALUE = 1e-12
MAX_QUBITS_MIXED = 10
MAX_QUBITS_PURE = 12


class StateVector:
    """Unit-norm pure state; ``amplitudes`` is a read-only complex array."""

    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes, *, check: bool = True):
        amps = np.array(amplitudes, dtype=np.complex128)
        if check:
            if amps.ndim != 1 or amps.size == 0:
                raise InvalidArgumentError(f"state vector must be a non-empty 1-d array, got shape {amps.shape}")
            norm_sq = float(np.vdot(amps, amps).real)
            if abs(norm_sq - 1.0) > NORM_TOL:
                raise InvalidArgumentError(f"state vector is not normalized (norm^2 = {norm_sq:.12g})")
        amps.setflags(write=False)
        self.amplitudes = amps

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def __repr__(self):
        return f"StateVector(dim={self.dim})"


class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite state.

    Hermiticity and trace are checked on construction. Positivity needs the
    spectrum and is checked when it is first computed (``spectrum``,
    ``validate``).
    """

    def __init__(self, matrix, *, check: bool = True):
        m = np.array(as_matrix(matrix), dtype=np.complex128)
        if check:
            herm = hermiticity_error(m)
            if not herm <= HERMITIAN_TOL:
                raise InvalidArgumentError(f"density matrix is not Hermitian (max |m - m^H| = {herm:.3g})")
            tr = complex(np.trace(m))
            if abs(tr - 1.0) > TRACE_TOL:
                raise InvalidArgumentError(f"density matrix trace is {tr:.12g}, expected 1")
        m.setflags(write=False)
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def eigen(self) -> HermitianEigen:
        return hermitian_eigen(self.matrix)

    @cached_property
    def spectrum(self) -> np.ndarray:
        """Eigenvalues with round-off negatives and values below 1e-12 set to 0."""
        lam = self.eigen.eigenvalues
        if lam[0] < -NEGATIVE_TOL:
            raise InvalidArgumentError(f"density matrix has negative eigenvalue {lam[0]:.3g}")
        lam = lam.copy()
        lam[lam < ZERO_EIGENVALUE] = 0.0
        lam.setflags(write=False)
        return lam

    def validate(self) -> "DensityMatrix":
        self.spectrum
        return self

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


State = Union[StateVector, DensityMatrix]


def as_density(state: State) -> DensityMatrix:
    if isinstance(state, DensityMatrix):
        return state
    if isinstance(state, StateVector):
        return pure_density(state)
    raise InvalidArgumentError(f"expected a StateVector or DensityMatrix, got {type(state).__name__}")


def pure_density(psi: StateVector) -> DensityMatrix:
    """``|psi><psi|``."""
    if not isinstance(psi, StateVector):
        psi = StateVector(psi)
    a = psi.amplitudes
    return DensityMatrix(np.outer(a, a.conj()))


def single_qubit_mixed(p: float) -> DensityMatrix:
    """``p|0><0| + (1-p)|1><1|``."""
    p = _probability(p)
    return DensityMatrix(np.diag([p, 1.0 - p]))


def tensor(a: State, b: State) -> DensityMatrix:
    """Kronecker product with ``a``'s index as the more significant one."""
    return DensityMatrix(np.kron(as_density(a).matrix, as_density(b).matrix), check=False)


def initial_register_state(n_qubits: int, p: float) -> State:
    """Each of ``n_qubits`` qubits in ``p|0><0| + (1-p)|1><1|``.

    For ``p == 1`` the pure ``|00...0>`` is returned as a ``StateVector``
    (up to 12 qubits); mixed states are limited to 10 qubits.
    """
    p = _probability(p)
    n_qubits = _qubit_count(n_qubits, MAX_QUBITS_PURE if p == 1.0 else MAX_QUBITS_MIXED)
    dim = 1 << n_qubits
    if p == 1.0:
        amps = np.zeros(dim, dtype=np.complex128)
        amps[0] = 1.0
        return StateVector(amps, check=False)
    qubit = single_qubit_mixed(p)
    return reduce(tensor, [qubit] * n_qubits)


def von_neumann_entropy(rho: State) -> float:
    """``-Tr rho log2 rho`` in bits, with ``0 log 0 = 0``."""
    if isinstance(rho, StateVector):
        return 0.0
    lam = as_density(rho).spectrum
    return entropy_of_spectrum(lam)


def entropy_of_spectrum(lam) -> float:
    lam = np.asarray(lam, dtype=float)
    lam = lam[lam > 0.0]
    # + 0.0 turns -0.0 (a single unit eigenvalue) into 0.0
    return float(-np.sum(lam * np.log2(lam))) + 0.0


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def _sqrt_psd(x):
    return np.sqrt(np.where(x < ZERO_EIGENVALUE, 0.0, x))


def fidelity(sigma: State, rho: State) -> float:
    """``Tr sqrt(sqrt(rho) sigma sqrt(rho))``, clamped to [0, 1].

    If either argument is a ``StateVector`` the pure-state form
    ``sqrt(<psi|rho|psi>)`` (or ``|<psi|phi>|``) is used.
    """
    if sigma.dim != rho.dim:
        raise InvalidArgumentError(f"dimension mismatch: {sigma.dim} vs {rho.dim}")
    if isinstance(sigma, StateVector) and isinstance(rho, StateVector):
        f = abs(np.vdot(sigma.amplitudes, rho.amplitudes))
    elif isinstance(sigma, StateVector) or isinstance(rho, StateVector):
        psi, other = (sigma, rho) if isinstance(sigma, StateVector) else (rho, sigma)
        a = psi.amplitudes
        overlap = float(np.vdot(a, other.matrix @ a).real)
        f = math.sqrt(max(overlap, 0.0))
    else:
        rho.spectrum  # positivity check
        root = apply_spectral_function(rho.matrix, _sqrt_psd, eigen=rho.eigen)
        inner = root @ sigma.matrix @ root
        inner = 0.5 * (inner + inner.conj().T)
        mu = hermitian_eigen(inner).eigenvalues
        # round-off zeros would otherwise contribute ~sqrt(1e-16) each
        f = float(np.sum(np.sqrt(mu[mu >= ZERO_EIGENVALUE])))
    return min(max(float(f), 0.0), 1.0)


def bures_distance(sigma: State, rho: State) -> float:
    """``sqrt(1 - F^2)``."""
    f = fidelity(sigma, rho)
    return math.sqrt(max(0.0, 1.0 - f * f))


def _probability(p) -> float:
    try:
        p = float(p)
    except (TypeError, ValueError):
        raise InvalidArgumentError(f"probability must be a number, got {p!r}") from None
    if not 0.0 <= p <= 1.0:
        raise InvalidArgumentError(f"probability must lie in [0, 1], got {p}")
    return p


def _qubit_count(n, max_qubits) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise InvalidArgumentError(f"qubit count must be an integer, got {n!r}")
    if not 1 <= n <= max_qubits:
        raise InvalidArgumentError(f"qubit count must lie in [1, {max_qubits}], got {n}")
    return int(n)

"""Classical-quantum ensembles of the memory and computational registers.

The joint state ``sum_i p_i |i><i| (x) rho(i)`` is block diagonal in the
memory basis, so it is stored as priors plus one branch state per memory
value and never expanded into an ``N * N_C`` matrix. Branch states are kept
stacked in one array: shape ``(N, N_C)`` in pure mode, ``(N, N_C, N_C)`` in
mixed mode.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import InvalidArgumentError
from .qstate import (
    HERMITIAN_TOL,
    NORM_TOL,
    TRACE_TOL,
    DensityMatrix,
    StateVector,
    entropy_of_spectrum,
    initial_register_state,
    von_neumann_entropy,
)

PRIOR_TOL = 1e-10
UNITARY_TOL = 1e-9

PURE = "pure"
MIXED = "mixed"


class CqEnsemble:
    """Priors ``p_i`` with one computational-register state per memory value.

    ``branch_entropies`` optionally caches ``S(rho(i))`` so unitary evolution
    can carry it forward instead of re-diagonalizing every branch.
    """

    def __init__(self, priors, states, *, branch_entropies=None, check: bool = True):
        priors = np.array(priors, dtype=float)
        states = np.array(states, dtype=np.complex128)
        if states.ndim == 2:
            mode = PURE
        elif states.ndim == 3 and states.shape[1] == states.shape[2]:
            mode = MIXED
        else:
            raise InvalidArgumentError(f"branch array must have shape (N, d) or (N, d, d), got {states.shape}")
        if check:
            _check_priors(priors, states.shape[0])
            _check_branches(states, mode)
        if branch_entropies is not None:
            branch_entropies = np.array(branch_entropies, dtype=float)
            branch_entropies.setflags(write=False)
        priors.setflags(write=False)
        states.setflags(write=False)
        self.priors = priors
        self.states = states
        self.mode = mode
        self.cached_entropies = branch_entropies

    @classmethod
    def from_branches(cls, priors: Sequence[float], branches: Sequence) -> "CqEnsemble":
        """Build from a list of ``StateVector`` or ``DensityMatrix`` branches of one kind."""
        if len(branches) == 0:
            raise InvalidArgumentError("ensemble needs at least one branch")
        kinds = {type(b) for b in branches}
        if kinds == {StateVector}:
            states = np.stack([b.amplitudes for b in branches])
        elif kinds == {DensityMatrix}:
            states = np.stack([b.matrix for b in branches])
        else:
            raise InvalidArgumentError("branches must all be StateVector or all be DensityMatrix")
        if len({b.dim for b in branches}) != 1:
            raise InvalidArgumentError("branches must share one dimension")
        return cls(priors, states)

    @property
    def n_branches(self) -> int:
        return self.states.shape[0]

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    @property
    def branches(self) -> tuple:
        if self.mode == PURE:
            return tuple(StateVector(s, check=False) for s in self.states)
        return tuple(DensityMatrix(s, check=False) for s in self.states)

    def evolved(self, states: np.ndarray) -> "CqEnsemble":
        """Same priors and cached entropies, new (unitarily evolved) branch states."""
        return CqEnsemble(self.priors, states, branch_entropies=self.cached_entropies, check=False)

    def __repr__(self):
        return f"CqEnsemble(mode={self.mode!r}, n_branches={self.n_branches}, dim={self.dim})"


def _check_priors(priors, n):
    if priors.ndim != 1 or priors.shape[0] != n:
        raise InvalidArgumentError(f"expected {n} priors, got shape {priors.shape}")
    if np.any(priors < 0) or not np.all(np.isfinite(priors)):
        raise InvalidArgumentError("priors must be finite and nonnegative")
    if abs(math.fsum(priors) - 1.0) > PRIOR_TOL:
        raise InvalidArgumentError(f"priors sum to {math.fsum(priors):.12g}, expected 1")


def _check_branches(states, mode):
    if states.shape[0] == 0 or states.shape[1] == 0:
        raise InvalidArgumentError("ensemble needs at least one non-empty branch")
    if mode == PURE:
        norms = np.einsum("ij,ij->i", states.conj(), states).real
        bad = np.abs(norms - 1.0) > NORM_TOL
        if np.any(bad):
            raise InvalidArgumentError(f"branch {int(np.argmax(bad))} is not normalized")
    else:
        herm = np.max(np.abs(states - states.conj().transpose(0, 2, 1)), axis=(1, 2))
        traces = np.trace(states, axis1=1, axis2=2)
        bad = (herm > HERMITIAN_TOL) | (np.abs(traces - 1.0) > TRACE_TOL)
        if np.any(bad):
            raise InvalidArgumentError(f"branch {int(np.argmax(bad))} is not a Hermitian unit-trace matrix")


def uniform_ensemble(n_qubits: int, p: float) -> CqEnsemble:
    """``2^n`` branches with equal priors, each in the initial register state."""
    start = initial_register_state(n_qubits, p)
    n = start.dim
    priors = np.full(n, 1.0 / n)
    if isinstance(start, StateVector):
        states = np.broadcast_to(start.amplitudes, (n, n))
        entropy = 0.0
    else:
        states = np.broadcast_to(start.matrix, (n, n, n))
        entropy = von_neumann_entropy(start)
    return CqEnsemble(priors, states, branch_entropies=np.full(n, entropy), check=False)


def with_priors(e: CqEnsemble, priors) -> CqEnsemble:
    return CqEnsemble(priors, e.states, branch_entropies=e.cached_entropies)


def average_state(e: CqEnsemble) -> DensityMatrix:
    """``rho_C = sum_i p_i rho(i)``, summed in ascending branch order."""
    first = e.states[0]
    if np.array_equal(e.states, np.broadcast_to(first, e.states.shape)):
        # identical branches: the convex combination is the branch itself, exactly
        rho = np.outer(first, first.conj()) if e.mode == PURE else first
        return DensityMatrix(rho)
    acc = np.zeros((e.dim, e.dim), dtype=np.complex128)
    for p, s in zip(e.priors, e.states):
        if p == 0.0:
            continue
        if e.mode == PURE:
            acc += p * np.outer(s, s.conj())
        else:
            acc += p * s
    return DensityMatrix(acc)


def branch_entropies(e: CqEnsemble, *, recompute: bool = False) -> np.ndarray:
    """``S(rho(i))`` per branch; exactly 0 in pure mode."""
    if e.mode == PURE:
        return np.zeros(e.n_branches)
    if e.cached_entropies is not None and not recompute:
        return e.cached_entropies
    return np.array([von_neumann_entropy(b) for b in e.branches])


def mean_branch_entropy(e: CqEnsemble, *, recompute: bool = False) -> float:
    return math.fsum(e.priors * branch_entropies(e, recompute=recompute))


def holevo_mutual_information(e: CqEnsemble, *, recompute: bool = False) -> float:
    """``S(rho_C) - sum_i p_i S(rho(i))`` in bits."""
    return von_neumann_entropy(average_state(e)) - mean_branch_entropy(e, recompute=recompute)


def cq_marginal_and_joint_entropies(e: CqEnsemble) -> tuple[float, float, float]:
    """``(S_M, S_C, S_MC)`` for the block-diagonal joint state.

    ``S_MC`` is evaluated from the joint spectrum ``{p_i * mu_ik}`` where
    ``mu_ik`` are the eigenvalues of branch ``i``; branch spectra are always
    computed afresh here.
    """
    s_m = entropy_of_spectrum(e.priors)
    s_c = von_neumann_entropy(average_state(e))
    if e.mode == PURE:
        joint = e.priors
    else:
        joint = np.concatenate([p * b.spectrum for p, b in zip(e.priors, e.branches)])
    return s_m, s_c, entropy_of_spectrum(joint)


def check_unitary(u, dim: int) -> np.ndarray:
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (dim, dim):
        raise InvalidArgumentError(f"unitary must have shape {(dim, dim)}, got {u.shape}")
    err = float(np.max(np.abs(u.conj().T @ u - np.eye(dim))))
    if err > UNITARY_TOL:
        raise InvalidArgumentError(f"matrix is not unitary (max |u^H u - I| = {err:.3g})")
    return u


def apply_common_unitary(e: CqEnsemble, u) -> CqEnsemble:
    """Apply the same unitary to every branch; priors and cached entropies carry over."""
    u = check_unitary(u, e.dim)
    if e.mode == PURE:
        return e.evolved(e.states @ u.T)
    return e.evolved(u @ e.states @ u.conj().T)

"""Grover iteration on a cq-ensemble and per-block capacity traces.

One block applies, in order: a Hadamard on every computational qubit, the
oracle (branch ``i`` marks basis state ``i``), another Hadamard layer, and
a sign flip of ``|00...0>``. Only the oracle correlates the registers, so
the trace measures the oracle's effect on the average state inside each
block and reports the mutual information after each complete block.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _backend
from .bounds import BOUND_SLACK, fannes_bound, step_bound
from .ensemble import (
    MIXED,
    PURE,
    CqEnsemble,
    average_state,
    mean_branch_entropy,
    uniform_ensemble,
    with_priors,
)
from .errors import InvalidArgumentError
from .qstate import (
    MAX_QUBITS_MIXED,
    MAX_QUBITS_PURE,
    DensityMatrix,
    StateVector,
    fidelity,
    von_neumann_entropy,
)

MAX_BLOCKS = 10000
SAMPLING = "after-each-block"


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def _fwht_vectors(states: np.ndarray) -> np.ndarray:
    out = np.array(states, dtype=np.complex128, order="C", copy=True)
    _backend.kernels.fwht_rows(out)
    return out


def _fwht_densities(states: np.ndarray) -> np.ndarray:
    b, n, _ = states.shape
    # right multiply by H on rows, then transpose and repeat: H rho H (H is real symmetric)
    out = np.array(states, dtype=np.complex128, order="C", copy=True)
    _backend.kernels.fwht_rows(out.reshape(b * n, n))
    out = np.ascontiguousarray(out.transpose(0, 2, 1))
    _backend.kernels.fwht_rows(out.reshape(b * n, n))
    return np.ascontiguousarray(out.transpose(0, 2, 1))


def _check_power_of_two(dim: int):
    if not _is_power_of_two(dim) or dim < 2:
        raise InvalidArgumentError(f"Hadamard layer needs a power-of-two dimension >= 2, got {dim}")


# --- single-state operations -------------------------------------------------


def oracle_apply(i: int, state):
    """Flip the sign of basis state ``i`` (``D_i rho D_i`` for a density matrix)."""
    if not 0 <= i < state.dim:
        raise InvalidArgumentError(f"oracle index {i} out of range for dimension {state.dim}")
    if isinstance(state, StateVector):
        amps = state.amplitudes.copy()
        amps[i] = -amps[i]
        return StateVector(amps, check=False)
    m = state.matrix.copy()
    m[i, :] = -m[i, :]
    m[:, i] = -m[:, i]
    return DensityMatrix(m, check=False)


def hadamard_layer(state):
    """``H^{(x)n}`` via the fast Walsh-Hadamard butterfly."""
    _check_power_of_two(state.dim)
    if isinstance(state, StateVector):
        return StateVector(_fwht_vectors(state.amplitudes[None, :])[0], check=False)
    return DensityMatrix(_fwht_densities(state.matrix[None, :, :])[0], check=False)


def zero_phase_flip(state):
    """Flip the sign of ``|00...0>``."""
    return oracle_apply(0, state)


# --- ensemble operations -----------------------------------------------------


def apply_hadamard(e: CqEnsemble) -> CqEnsemble:
    _check_power_of_two(e.dim)
    if e.mode == PURE:
        return e.evolved(_fwht_vectors(e.states))
    return e.evolved(_fwht_densities(e.states))


def apply_oracle(e: CqEnsemble) -> CqEnsemble:
    """Branch ``i`` gets the oracle marking basis state ``i``."""
    if e.n_branches != e.dim:
        raise InvalidArgumentError(
            f"oracle needs one marked item per branch: {e.n_branches} branches vs dimension {e.dim}"
        )
    s = np.array(e.states)
    idx = np.arange(e.n_branches)
    if e.mode == PURE:
        s[idx, idx] = -s[idx, idx]
    else:
        s[idx, idx, :] = -s[idx, idx, :]
        s[idx, :, idx] = -s[idx, :, idx]
    return e.evolved(s)


def apply_zero_flip(e: CqEnsemble) -> CqEnsemble:
    s = np.array(e.states)
    if e.mode == PURE:
        s[:, 0] = -s[:, 0]
    else:
        s[:, 0, :] = -s[:, 0, :]
        s[:, :, 0] = -s[:, :, 0]
    return e.evolved(s)


def block_stages(e: CqEnsemble) -> list[tuple[str, CqEnsemble]]:
    """The ensemble after each sub-step of one block, in time order."""
    if e.n_branches != e.dim:
        raise InvalidArgumentError(
            f"Grover block needs as many branches as basis states ({e.n_branches} vs {e.dim})"
        )
    stages = []
    for name, step in (("H", apply_hadamard), ("U_B", apply_oracle), ("H", apply_hadamard), ("f0", apply_zero_flip)):
        e = step(e)
        stages.append((name, e))
    return stages


def grover_block(e: CqEnsemble) -> CqEnsemble:
    return block_stages(e)[-1][1]


# --- traces --------------------------------------------------------------------


@dataclass(frozen=True)
class GroverConfig:
    n_qubits: int
    purity_p: float = 1.0
    n_blocks: int = 25
    priors: Optional[Sequence[float]] = None

    def __post_init__(self):
        if isinstance(self.n_qubits, bool) or not isinstance(self.n_qubits, (int, np.integer)):
            raise InvalidArgumentError(f"n_qubits must be an integer, got {self.n_qubits!r}")
        if not isinstance(self.purity_p, (int, float)) or not 0.0 <= self.purity_p <= 1.0:
            raise InvalidArgumentError(f"purity must lie in [0, 1], got {self.purity_p!r}")
        cap = MAX_QUBITS_PURE if self.purity_p == 1.0 else MAX_QUBITS_MIXED
        if not 1 <= self.n_qubits <= cap:
            raise InvalidArgumentError(f"n_qubits must lie in [1, {cap}] for purity {self.purity_p}, got {self.n_qubits}")
        if isinstance(self.n_blocks, bool) or not isinstance(self.n_blocks, (int, np.integer)):
            raise InvalidArgumentError(f"n_blocks must be an integer, got {self.n_blocks!r}")
        if not 0 <= self.n_blocks <= MAX_BLOCKS:
            raise InvalidArgumentError(f"n_blocks must lie in [0, {MAX_BLOCKS}], got {self.n_blocks}")
        if self.priors is not None and len(self.priors) != 1 << self.n_qubits:
            raise InvalidArgumentError(f"expected {1 << self.n_qubits} priors, got {len(self.priors)}")

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def initial_ensemble(self) -> CqEnsemble:
        e = uniform_ensemble(self.n_qubits, self.purity_p)
        if self.priors is not None:
            e = with_priors(e, self.priors)
        return e


@dataclass(frozen=True)
class TraceRecord:
    k: int
    mutual_information: float
    s_average: float
    s_branch: float
    delta_s_oracle: float
    fidelity_oracle: float
    bures_oracle: float
    fannes_bound: float
    step_bound: float
    fannes_ok: bool
    step_ok: bool
    fidelity_bound_ok: bool


@dataclass(frozen=True)
class OracleStep:
    """Average computational-register state just before and after one oracle call."""

    before: DensityMatrix
    after: DensityMatrix


def fidelity_floor(n: int) -> float:
    return (n - 2) / n


def iterate_blocks(cfg: GroverConfig):
    """Yield ``(k, ensemble, oracle_step)``; ``k = 0`` is the initial ensemble."""
    e = cfg.initial_ensemble()
    yield 0, e, None
    for k in range(1, cfg.n_blocks + 1):
        e = apply_hadamard(e)
        before = average_state(e)
        e = apply_oracle(e)
        after = average_state(e)
        e = apply_zero_flip(apply_hadamard(e))
        yield k, e, OracleStep(before, after)


def run_trace(cfg: GroverConfig, *, audit: bool = False) -> list[TraceRecord]:
    """Capacity and oracle-step diagnostics after every block.

    With ``audit`` the branch entropies are recomputed from scratch at every
    block instead of being carried forward through the unitary evolution.
    """
    n = cfg.dim
    sb = step_bound(n)
    records = []
    for k, e, step in iterate_blocks(cfg):
        s_avg = von_neumann_entropy(average_state(e))
        s_br = mean_branch_entropy(e, recompute=audit and e.mode == MIXED)
        if step is None:
            ds, f, d_b, fan = 0.0, 1.0, 0.0, 0.0
        else:
            ds = abs(von_neumann_entropy(step.after) - von_neumann_entropy(step.before))
            f = fidelity(step.before, step.after)
            d_b = math.sqrt(max(0.0, 1.0 - f * f))
            fan = fannes_bound(d_b, n)
        records.append(
            TraceRecord(
                k=k,
                mutual_information=s_avg - s_br,
                s_average=s_avg,
                s_branch=s_br,
                delta_s_oracle=ds,
                fidelity_oracle=f,
                bures_oracle=d_b,
                fannes_bound=fan,
                step_bound=sb,
                fannes_ok=ds <= fan + BOUND_SLACK,
                step_ok=ds <= sb + BOUND_SLACK,
                fidelity_bound_ok=f >= fidelity_floor(n) - BOUND_SLACK,
            )
        )
    return records

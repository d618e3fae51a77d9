"""Seeded property suite behind ``qcapacity verify``.

Each property is checked over random instances (explicit seed) or over
Grover traces for a range of register sizes and purities, and reports its
worst deviation plus the first violating instance for replay.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from .bounds import min_queries
from .ensemble import (
    MIXED,
    PURE,
    CqEnsemble,
    apply_common_unitary,
    average_state,
    cq_marginal_and_joint_entropies,
    holevo_mutual_information,
    mean_branch_entropy,
)
from .grover import GroverConfig, block_stages, fidelity_floor, iterate_blocks, run_trace
from .qstate import DensityMatrix, StateVector, fidelity, von_neumann_entropy

PURITIES = (1.0, 0.95, 0.7)


@dataclass
class PropertyResult:
    name: str
    cases: int = 0
    worst: float = 0.0
    violation: Optional[dict] = None
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.violation is None

    def record(self, deviation: float, tolerance: float, instance: dict):
        """Count one case; ``deviation > tolerance`` is a violation."""
        self.cases += 1
        if not deviation <= tolerance:
            if self.violation is None:
                self.violation = dict(instance, deviation=float(deviation), tolerance=tolerance)
        if deviation > self.worst or math.isnan(deviation):
            self.worst = float(deviation)


# --- random instances ------------------------------------------------------------


def random_pure(rng: np.random.Generator, dim: int) -> StateVector:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return StateVector(v / np.linalg.norm(v))


def random_density(rng: np.random.Generator, dim: int, rank: Optional[int] = None) -> DensityMatrix:
    rank = rank or int(rng.integers(1, dim + 1))
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    m = 0.5 * (m + m.conj().T)
    return DensityMatrix(m / np.trace(m).real)


def random_circuit_unitary(rng: np.random.Generator, n_qubits: int, n_gates: int = 12) -> np.ndarray:
    """Product of random Hadamards on single qubits and single-basis-state phase gates."""
    dim = 1 << n_qubits
    h = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)
    u = np.eye(dim, dtype=np.complex128)
    for _ in range(n_gates):
        if rng.random() < 0.5:
            q = int(rng.integers(n_qubits))
            gate = np.kron(np.kron(np.eye(1 << q), h), np.eye(1 << (n_qubits - q - 1)))
        else:
            phase = -1.0 if rng.random() < 0.5 else np.exp(1j * rng.uniform(0, 2 * math.pi))
            diag = np.ones(dim, dtype=np.complex128)
            diag[int(rng.integers(dim))] = phase
            gate = np.diag(diag)
        u = gate @ u
    return u


def random_ensemble(rng: np.random.Generator, n_branches: int, dim: int, mode: str) -> CqEnsemble:
    priors = rng.dirichlet(np.ones(n_branches))
    priors = priors / math.fsum(priors)
    if mode == PURE:
        branches = [random_pure(rng, dim) for _ in range(n_branches)]
    else:
        branches = [random_density(rng, dim) for _ in range(n_branches)]
    return CqEnsemble.from_branches(priors, branches)


# --- properties over random instances --------------------------------------------


def check_two_form_identity(rng, tol, cases=100) -> PropertyResult:
    res = PropertyResult("two_form_identity")
    for c in range(cases):
        dim = int(rng.integers(2, 17))
        n_br = int(rng.integers(1, 9))
        mode = MIXED if c % 2 else PURE
        e = random_ensemble(rng, n_br, dim, mode)
        s_m, s_c, s_mc = cq_marginal_and_joint_entropies(e)
        holevo = holevo_mutual_information(e, recompute=True)
        res.record(abs((s_m + s_c - s_mc) - holevo), tol, {"case": c, "dim": dim, "branches": n_br, "mode": mode})
    return res


def check_entropy_unitary_invariance(rng, tol, cases=40) -> PropertyResult:
    res = PropertyResult("entropy_unitary_invariance")
    for c in range(cases):
        n = int(rng.integers(1, 5))
        rho = random_density(rng, 1 << n)
        u = random_circuit_unitary(rng, n)
        moved = DensityMatrix(u @ rho.matrix @ u.conj().T)
        res.record(abs(von_neumann_entropy(moved) - von_neumann_entropy(rho)), tol, {"case": c, "n_qubits": n})
    return res


def check_fidelity_symmetry(rng, tol, cases=40) -> PropertyResult:
    res = PropertyResult("fidelity_symmetry")
    for c in range(cases):
        dim = int(rng.integers(2, 17))
        a, b = random_density(rng, dim), random_density(rng, dim)
        res.record(abs(fidelity(a, b) - fidelity(b, a)), tol, {"case": c, "dim": dim})
    return res


def check_fidelity_unitary_invariance(rng, tol, cases=30) -> PropertyResult:
    res = PropertyResult("fidelity_unitary_invariance")
    for c in range(cases):
        n = int(rng.integers(1, 5))
        a, b = random_density(rng, 1 << n), random_density(rng, 1 << n)
        u = random_circuit_unitary(rng, n)
        ua = DensityMatrix(u @ a.matrix @ u.conj().T)
        ub = DensityMatrix(u @ b.matrix @ u.conj().T)
        res.record(abs(fidelity(ua, ub) - fidelity(a, b)), tol, {"case": c, "n_qubits": n})
    return res


def check_common_unitary_invariance(rng, tol, cases=30) -> PropertyResult:
    res = PropertyResult("common_unitary_invariance")
    for c in range(cases):
        n = int(rng.integers(1, 5))
        mode = MIXED if c % 2 else PURE
        e = random_ensemble(rng, int(rng.integers(2, 9)), 1 << n, mode)
        u = random_circuit_unitary(rng, n)
        moved = apply_common_unitary(e, u)
        dev = abs(holevo_mutual_information(moved, recompute=True) - holevo_mutual_information(e, recompute=True))
        res.record(dev, tol, {"case": c, "n_qubits": n, "mode": mode})
    return res


# --- properties over Grover traces ----------------------------------------------------


def _trace_properties(configs: Iterable[tuple[int, float]], n_blocks: int, tol: float) -> list[PropertyResult]:
    ceiling = PropertyResult("capacity_ceiling")
    fannes = PropertyResult("fannes_per_step")
    per_query = PropertyResult("step_bound_per_query")
    fid = PropertyResult("fidelity_lower_bound")
    mq = PropertyResult("min_queries_consistency")
    for n, p in configs:
        cfg = GroverConfig(n, p, n_blocks)
        records = run_trace(cfg)
        n_dim = cfg.dim
        s0 = records[0].s_average
        for r in records:
            where = {"n_qubits": n, "purity": p, "block": r.k}
            ceiling.record(r.mutual_information - (math.log2(n_dim) - s0), tol, where)
            if r.k == 0:
                continue
            fannes.record(r.delta_s_oracle - r.fannes_bound, tol, dict(where, delta_s=r.delta_s_oracle, bures=r.bures_oracle, bound=r.fannes_bound))
            per_query.record(r.delta_s_oracle - r.step_bound, tol, dict(where, delta_s=r.delta_s_oracle, bound=r.step_bound))
            if p == 1.0:
                fid.record(fidelity_floor(n_dim) - r.fidelity_oracle, tol, dict(where, fidelity=r.fidelity_oracle))
        if p == 1.0:
            target = math.log2(n_dim) - 0.01
            first = next((r.k for r in records if r.mutual_information >= target), None)
            if first is None:
                mq.notes.append(f"n={n}: log2(N) - 0.01 not reached within {n_blocks} blocks")
            else:
                mq.record(min_queries(n_dim) - first, 0.0, {"n_qubits": n, "first_block": first, "min_queries": min_queries(n_dim)})
    return [ceiling, fannes, per_query, fid, mq]


def _stage_properties(configs, n_blocks: int, stage_blocks: int, tol: float) -> list[PropertyResult]:
    """Sub-step checks; branch entropies are recomputed from scratch around each oracle call."""
    substep = PropertyResult("substep_invariance")
    oracle_delta = PropertyResult("oracle_delta_identity")
    cache = PropertyResult("branch_entropy_cache")
    norms = PropertyResult("norm_trace_preservation")
    for n, p in configs:
        cfg = GroverConfig(n, p, n_blocks)
        for k, e, _ in iterate_blocks(cfg):
            norms.record(_norm_deviation(e), tol, {"n_qubits": n, "purity": p, "block": k})
            if k >= stage_blocks:
                continue
            info = holevo_mutual_information(e)
            fresh = None
            for name, stage in block_stages(e):
                where = {"n_qubits": n, "purity": p, "block": k + 1, "stage": name}
                s_avg = von_neumann_entropy(average_state(stage))
                if name == "U_B":
                    new_fresh = s_avg - mean_branch_entropy(stage, recompute=True)
                    oracle_delta.record(abs((new_fresh - fresh[0]) - (s_avg - fresh[1])), tol, where)
                    new_info = holevo_mutual_information(stage)
                    cache.record(abs(new_fresh - new_info), tol, where)
                else:
                    new_info = holevo_mutual_information(stage)
                    substep.record(abs(new_info - info), tol, where)
                    if fresh is None:
                        fresh = (s_avg - mean_branch_entropy(stage, recompute=True), s_avg)
                info = new_info
    return [substep, oracle_delta, cache, norms]


def _norm_deviation(e: CqEnsemble) -> float:
    if e.mode == PURE:
        return float(np.max(np.abs(np.einsum("ij,ij->i", e.states.conj(), e.states).real - 1.0)))
    return float(np.max(np.abs(np.trace(e.states, axis1=1, axis2=2) - 1.0)))


def run_suite(
    qubits_min: int = 2,
    qubits_max: int = 6,
    tolerance: float = 1e-9,
    seed: int = 42,
    n_blocks: int = 25,
    stage_blocks: int = 2,
    purities=PURITIES,
    progress: Optional[Callable[[str], None]] = None,
) -> list[PropertyResult]:
    rng = np.random.default_rng(seed)
    configs = [(n, p) for n in range(qubits_min, qubits_max + 1) for p in purities]
    results = []
    for check in (
        check_two_form_identity,
        check_entropy_unitary_invariance,
        check_fidelity_symmetry,
        check_fidelity_unitary_invariance,
        check_common_unitary_invariance,
    ):
        results.append(check(rng, tolerance))
        if progress:
            progress(results[-1].name)
    results.extend(_trace_properties(configs, n_blocks, tolerance))
    results.extend(_stage_properties(configs, n_blocks, stage_blocks, tolerance))
    return results

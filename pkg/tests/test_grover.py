import math
from functools import reduce

import numpy as np
import pytest

import qcapacity
from qcapacity import (
    DensityMatrix,
    GroverConfig,
    InvalidArgumentError,
    StateVector,
    grover_block,
    hadamard_layer,
    holevo_mutual_information,
    oracle_apply,
    run_trace,
    uniform_ensemble,
    zero_phase_flip,
)
from qcapacity.grover import block_stages, iterate_blocks
from qcapacity.verify import random_density, random_pure

H1 = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2)


def dense_hadamard(n):
    return reduce(np.kron, [H1] * n)


def dense_entropy(m):
    lam = np.linalg.eigvalsh(m)
    lam = lam[lam > 1e-14]
    return float(-np.sum(lam * np.log2(lam)))


def dense_trace(n, p, blocks):
    """Independent reference: full matrices for every operator, numpy eigvalsh for entropies."""
    dim = 1 << n
    h = dense_hadamard(n)
    f0 = np.eye(dim)
    f0[0, 0] = -1
    rho0 = reduce(np.kron, [np.diag([p, 1 - p])] * n)
    s_branch = dense_entropy(rho0)
    branches = [rho0.astype(complex) for _ in range(dim)]
    out = [0.0]
    for _ in range(blocks):
        new = []
        for i, rho in enumerate(branches):
            o = np.eye(dim)
            o[i, i] = -1
            g = f0 @ h @ o @ h
            new.append(g @ rho @ g.conj().T)
        branches = new
        out.append(dense_entropy(sum(branches) / dim) - s_branch)
    return out


def test_oracle_and_flip_known_values():
    s = StateVector(np.full(4, 0.5))
    assert np.allclose(oracle_apply(0, s).amplitudes, [-0.5, 0.5, 0.5, 0.5])
    assert np.allclose(zero_phase_flip(s).amplitudes, [-0.5, 0.5, 0.5, 0.5])
    assert np.array_equal(zero_phase_flip(StateVector([1, 0, 0, 0])).amplitudes, [-1, 0, 0, 0])
    with pytest.raises(InvalidArgumentError):
        oracle_apply(4, s)


def test_mixed_oracle_is_conjugation(rng):
    rho = random_density(rng, 4)
    for i in range(4):
        d = np.eye(4)
        d[i, i] = -1
        assert np.allclose(oracle_apply(i, rho).matrix, d @ rho.matrix @ d, atol=1e-15)


def test_hadamard_layer_matches_kronecker(backend, rng):
    for n in (1, 2, 3, 5):
        h = dense_hadamard(n)
        psi = random_pure(rng, 1 << n)
        assert np.allclose(hadamard_layer(psi).amplitudes, h @ psi.amplitudes, atol=1e-14)
        rho = random_density(rng, 1 << n)
        assert np.allclose(hadamard_layer(rho).matrix, h @ rho.matrix @ h, atol=1e-14)
    zero = np.zeros(8)
    zero[0] = 1
    assert np.allclose(hadamard_layer(StateVector(zero)).amplitudes, 1 / math.sqrt(8))
    with pytest.raises(InvalidArgumentError):
        hadamard_layer(StateVector(np.ones(3) / math.sqrt(3)))


@pytest.mark.parametrize("n, p", [(2, 1.0), (2, 0.8), (3, 1.0), (3, 0.95), (3, 0.7)])
def test_trace_matches_dense_reference(backend, n, p):
    records = run_trace(GroverConfig(n, p, 8))
    reference = dense_trace(n, p, 8)
    assert [r.k for r in records] == list(range(9))
    assert np.allclose([r.mutual_information for r in records], reference, atol=1e-10)


def test_two_qubits_one_block_is_perfect():
    e = grover_block(uniform_ensemble(2, 1.0))
    gram = e.states.conj() @ e.states.T
    assert np.allclose(gram, np.eye(4), atol=1e-15)
    assert holevo_mutual_information(e) == pytest.approx(2.0, abs=1e-12)


def test_zero_blocks_zero_information():
    (record,) = run_trace(GroverConfig(3, 0.9, 0))
    assert record.mutual_information == 0.0


def test_substeps_other_than_oracle_keep_information(rng):
    e = grover_block(uniform_ensemble(3, 0.9))
    info = holevo_mutual_information(e)
    for name, stage in block_stages(e):
        now = holevo_mutual_information(stage)
        if name != "U_B":
            assert now == pytest.approx(info, abs=1e-10)
        info = now


def test_oracle_needs_one_branch_per_item():
    e = qcapacity.CqEnsemble([0.5, 0.5], [[1, 0, 0, 0], [0, 1, 0, 0]])
    with pytest.raises(InvalidArgumentError):
        grover_block(e)


def test_config_validation():
    for bad in (dict(n_qubits=0), dict(n_qubits=2, purity_p=1.5), dict(n_qubits=11, purity_p=0.9),
                dict(n_qubits=2, n_blocks=-1), dict(n_qubits=2.0), dict(n_qubits=2, priors=[1.0])):
        with pytest.raises(InvalidArgumentError):
            GroverConfig(**bad)


def test_audit_mode_agrees():
    cfg = GroverConfig(3, 0.8, 6)
    fast, audited = run_trace(cfg), run_trace(cfg, audit=True)
    for a, b in zip(fast, audited):
        assert a.mutual_information == pytest.approx(b.mutual_information, abs=1e-10)


def test_trace_is_deterministic():
    cfg = GroverConfig(4, 0.95, 10)
    assert run_trace(cfg) == run_trace(cfg)


def test_norms_preserved_over_many_blocks():
    for k, e, _ in iterate_blocks(GroverConfig(3, 1.0, 200)):
        pass
    norms = np.einsum("ij,ij->i", e.states.conj(), e.states).real
    assert np.allclose(norms, 1.0, atol=1e-12)


def test_non_uniform_priors():
    priors = np.array([0.4, 0.3, 0.2, 0.1])
    records = run_trace(GroverConfig(2, 1.0, 1, priors=priors))
    # orthogonal branches: I equals the prior entropy
    assert records[-1].mutual_information == pytest.approx(float(-np.sum(priors * np.log2(priors))), abs=1e-12)

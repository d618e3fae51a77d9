import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qcapacity import (
    DensityMatrix,
    InvalidArgumentError,
    StateVector,
    bures_distance,
    fidelity,
    initial_register_state,
    pure_density,
    single_qubit_mixed,
    tensor,
    von_neumann_entropy,
)
from qcapacity.qstate import binary_entropy
from qcapacity.verify import random_density, random_pure


def h2(p):
    # independent binary entropy
    return -(p * math.log(p) + (1 - p) * math.log(1 - p)) / math.log(2)


def test_state_vector_validation():
    with pytest.raises(InvalidArgumentError):
        StateVector([1.0, 1.0])
    with pytest.raises(InvalidArgumentError):
        StateVector([[1.0, 0.0]])
    s = StateVector([1.0, 0.0])
    with pytest.raises(ValueError):
        s.amplitudes[0] = 2.0


def test_density_matrix_validation():
    with pytest.raises(InvalidArgumentError):
        DensityMatrix([[0.5, 0.1], [0.0, 0.5]])
    with pytest.raises(InvalidArgumentError):
        DensityMatrix(np.eye(2))
    with pytest.raises(InvalidArgumentError):
        DensityMatrix([[1.5, 0], [0, -0.5]]).validate()


def test_entropy_known_values():
    assert von_neumann_entropy(StateVector([0.6, 0.8j])) == 0.0
    assert von_neumann_entropy(pure_density(StateVector([0.6, 0.8j]))) == pytest.approx(0.0, abs=1e-12)
    assert von_neumann_entropy(DensityMatrix(np.eye(4) / 4)) == pytest.approx(2.0, abs=1e-14)
    assert von_neumann_entropy(single_qubit_mixed(0.95)) == pytest.approx(0.286397, abs=1e-6)
    assert binary_entropy(0.7) == pytest.approx(h2(0.7), abs=1e-15)


@pytest.mark.parametrize("p, expected", [(0.7, 3.525163), (0.95, 1.145588), (1.0, 0.0)])
def test_initial_register_entropy(p, expected):
    rho = initial_register_state(4, p)
    assert rho.dim == 16
    assert von_neumann_entropy(rho) == pytest.approx(expected, abs=1e-6)
    if p < 1:
        assert von_neumann_entropy(rho) == pytest.approx(4 * h2(p), abs=1e-12)


def test_initial_register_limits():
    with pytest.raises(InvalidArgumentError):
        initial_register_state(0, 1.0)
    with pytest.raises(InvalidArgumentError):
        initial_register_state(11, 0.9)
    with pytest.raises(InvalidArgumentError):
        initial_register_state(2, 1.2)
    assert isinstance(initial_register_state(12, 1.0), StateVector)


def test_tensor_ordering_and_additivity(rng):
    a, b = random_density(rng, 2), random_density(rng, 4)
    ab = tensor(a, b)
    assert np.allclose(ab.matrix, np.kron(a.matrix, b.matrix))
    assert von_neumann_entropy(ab) == pytest.approx(von_neumann_entropy(a) + von_neumann_entropy(b), abs=1e-12)
    zero_one = tensor(StateVector([1, 0]), StateVector([0, 1]))
    assert zero_one.matrix[1, 1] == 1.0


def test_fidelity_commuting_states_match_bhattacharyya(rng):
    for _ in range(20):
        p, q = rng.dirichlet(np.ones(6)), rng.dirichlet(np.ones(6))
        f = fidelity(DensityMatrix(np.diag(p)), DensityMatrix(np.diag(q)))
        assert f == pytest.approx(np.sum(np.sqrt(p * q)), abs=1e-12)


def test_fidelity_pure_shortcuts_match_general_path(rng):
    for dim in (2, 3, 8):
        psi, phi = random_pure(rng, dim), random_pure(rng, dim)
        rho = random_density(rng, dim)
        general = fidelity(pure_density(psi), rho)
        assert fidelity(psi, rho) == pytest.approx(general, abs=1e-9)
        assert fidelity(rho, psi) == pytest.approx(general, abs=1e-9)
        assert fidelity(psi, phi) == pytest.approx(abs(np.vdot(psi.amplitudes, phi.amplitudes)), abs=1e-15)
        assert fidelity(pure_density(psi), pure_density(phi)) == pytest.approx(fidelity(psi, phi), abs=1e-7)


def test_fidelity_edge_cases():
    zero, one = StateVector([1, 0]), StateVector([0, 1])
    assert fidelity(zero, one) == 0.0
    assert bures_distance(zero, one) == 1.0
    assert fidelity(zero, DensityMatrix(np.eye(2) / 2)) == pytest.approx(1 / math.sqrt(2))
    rho = DensityMatrix(np.diag([0.3, 0.7]))
    assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(InvalidArgumentError):
        fidelity(zero, DensityMatrix(np.eye(4) / 4))


def test_bures_at_worst_case_fidelity():
    # two commuting states with overlap F = 0.875
    a = DensityMatrix(np.diag([1.0, 0.0]))
    b = DensityMatrix(np.diag([0.875**2, 1 - 0.875**2]))
    assert fidelity(a, b) == pytest.approx(0.875, abs=1e-12)
    assert bures_distance(a, b) == pytest.approx(0.484123, abs=1e-6)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_property_fidelity_symmetric_and_bounded(n, seed):
    rng = np.random.default_rng(seed)
    a, b = random_density(rng, 1 << n), random_density(rng, 1 << n)
    f = fidelity(a, b)
    assert 0.0 <= f <= 1.0
    assert f == pytest.approx(fidelity(b, a), abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 12), st.integers(0, 2**32 - 1))
def test_property_entropy_bounds(dim, seed):
    rho = random_density(np.random.default_rng(seed), dim)
    s = von_neumann_entropy(rho)
    assert -1e-12 <= s <= math.log2(dim) + 1e-12

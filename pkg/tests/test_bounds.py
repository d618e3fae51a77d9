import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qcapacity import (
    DensityMatrix,
    InvalidArgumentError,
    StateVector,
    bound_report,
    fannes_bound,
    min_queries,
    no_speedup_threshold,
    step_bound,
    verify_step,
)


def test_fannes_known_values():
    assert fannes_bound(0.0, 16) == 0.0
    assert fannes_bound(0.5, 16) == pytest.approx(2.5, abs=1e-15)
    # worst-case Bures distance at N = 16, substituted by hand
    d = math.sqrt(1 - 0.875**2)
    assert fannes_bound(d, 16) == pytest.approx(4 * d - d * math.log(d) / math.log(2), abs=1e-14)
    assert fannes_bound(0.484123, 16) == pytest.approx(2.443153, abs=1e-6)
    assert fannes_bound(1.0, 2) == 1.0
    for bad in ((-0.1, 4), (1.1, 4), (0.5, 1)):
        with pytest.raises(InvalidArgumentError):
            fannes_bound(*bad)


@pytest.mark.parametrize("n, expected", [(16, 3.0), (4, 3.0), (256, 1.5), (2, 3 / math.sqrt(2))])
def test_step_bound(n, expected):
    assert step_bound(n) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("n, expected", [(16, 1.333333), (4, 0.666667), (9, 1.0)])
def test_min_queries(n, expected):
    assert min_queries(n) == pytest.approx(expected, abs=1e-6)
    assert min_queries(n) == pytest.approx(math.log2(n) / step_bound(n), rel=1e-15)


def test_database_size_validation():
    for bad in (1, 0, 2.5, True):
        with pytest.raises(InvalidArgumentError):
            step_bound(bad)


@pytest.mark.parametrize("p, expected", [(0.7, True), (0.95, False), (1.0, False)])
def test_threshold_classifier(p, expected):
    report = bound_report(4, p)
    assert report.threshold_entropy == 2.0
    assert report.no_speedup_sufficient is expected


def test_threshold_edges():
    assert no_speedup_threshold(2.0, 16)
    assert not no_speedup_threshold(1.999, 16)
    with pytest.raises(InvalidArgumentError):
        no_speedup_threshold(-1.0, 16)


def test_verify_step_examples():
    rho = DensityMatrix(np.diag([0.3, 0.7]))
    assert tuple(verify_step(rho, rho)) == pytest.approx((0, 0, 0, True), abs=1e-7)
    ds, d_b, fan, ok = verify_step(StateVector([1, 0]), StateVector([0, 1]))
    assert (ds, d_b, fan, ok) == (0.0, 1.0, 1.0, True)
    check = verify_step(StateVector([1, 0]), DensityMatrix(np.eye(2) / 2))
    assert check.delta_s == pytest.approx(1.0, abs=1e-14)
    assert check.d_b == pytest.approx(0.707107, abs=1e-6)
    assert check.fannes == pytest.approx(1.060660, abs=1e-6)
    assert check.ok
    with pytest.raises(InvalidArgumentError):
        verify_step(rho, DensityMatrix(np.eye(4) / 4))


@settings(max_examples=80)
@given(st.floats(0.0, 1.0), st.integers(1, 12))
def test_property_fannes_monotone_in_dimension(d_b, n):
    assert fannes_bound(d_b, 1 << (n + 1)) >= fannes_bound(d_b, 1 << n)
    assert fannes_bound(d_b, 1 << n) >= 0.0

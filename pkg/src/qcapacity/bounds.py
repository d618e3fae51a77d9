"""Analytic limits on how fast an oracle query can build correlations.

All quantities are in bits. ``N`` is the database size, which equals the
computational register dimension for the search problem.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidArgumentError
from .qstate import State, bures_distance, initial_register_state, von_neumann_entropy

BOUND_SLACK = 1e-9
THRESHOLD_SLACK = 1e-12


def _xlog2x(x: float) -> float:
    return 0.0 if x == 0.0 else x * math.log2(x)


def fannes_bound(d_b: float, dim: int) -> float:
    """Continuity bound ``d_b log2(dim) - d_b log2(d_b)`` on an entropy change."""
    if not 0.0 <= d_b <= 1.0:
        raise InvalidArgumentError(f"Bures distance must lie in [0, 1], got {d_b}")
    if dim < 2:
        raise InvalidArgumentError(f"dimension must be at least 2, got {dim}")
    return d_b * math.log2(dim) - _xlog2x(d_b)


def _database_size(n) -> int:
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise InvalidArgumentError(f"N must be an integer >= 2, got {n!r}")
    return n


def step_bound(n: int) -> float:
    """Most entropy one oracle query can move: ``(3 / sqrt(N)) log2 N``."""
    n = _database_size(n)
    return 3.0 / math.sqrt(n) * math.log2(n)


def min_queries(n: int) -> float:
    """``log2 N / step_bound(N) = sqrt(N) / 3``; not rounded up."""
    n = _database_size(n)
    return math.sqrt(n) / 3.0


def threshold_entropy(n: int) -> float:
    return 0.5 * math.log2(_database_size(n))


def no_speedup_threshold(initial_entropy: float, n: int) -> bool:
    """True when ``S(rho_C^0) >= log2(N) / 2``.

    This is a sufficient condition for search to gain nothing over
    classical lookup, not a necessary one.
    """
    if initial_entropy < 0:
        raise InvalidArgumentError(f"entropy must be nonnegative, got {initial_entropy}")
    return initial_entropy >= threshold_entropy(n) - THRESHOLD_SLACK


@dataclass(frozen=True)
class StepCheck:
    delta_s: float
    d_b: float
    fannes: float
    ok: bool

    def __iter__(self):
        return iter((self.delta_s, self.d_b, self.fannes, self.ok))


def verify_step(rho_before: State, rho_after: State) -> StepCheck:
    """Compare the entropy change between two states with the continuity bound."""
    if rho_before.dim != rho_after.dim:
        raise InvalidArgumentError(f"dimension mismatch: {rho_before.dim} vs {rho_after.dim}")
    delta_s = abs(von_neumann_entropy(rho_after) - von_neumann_entropy(rho_before))
    d_b = bures_distance(rho_before, rho_after)
    fannes = fannes_bound(d_b, rho_before.dim)
    return StepCheck(delta_s, d_b, fannes, delta_s <= fannes + BOUND_SLACK)


@dataclass(frozen=True)
class BoundReport:
    n_qubits: int
    N: int
    step_bound: float
    min_queries: float
    threshold_entropy: float
    initial_entropy: float
    no_speedup_sufficient: bool


def bound_report(n_qubits: int, p: float) -> BoundReport:
    rho0 = initial_register_state(n_qubits, p)
    n = rho0.dim
    if n < 2:
        raise InvalidArgumentError("need at least one qubit")
    s0 = von_neumann_entropy(rho0)
    return BoundReport(
        n_qubits=n_qubits,
        N=n,
        step_bound=step_bound(n),
        min_queries=min_queries(n),
        threshold_entropy=threshold_entropy(n),
        initial_entropy=s0,
        no_speedup_sufficient=no_speedup_threshold(s0, n),
    )

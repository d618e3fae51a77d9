"""Communication capacity of Grover search between memory and computational registers."""
from ._backend import available as available_backends, name as backend_name, use_backend
from .bounds import (
    BoundReport,
    bound_report,
    fannes_bound,
    min_queries,
    no_speedup_threshold,
    step_bound,
    verify_step,
)
from .ensemble import (
    CqEnsemble,
    apply_common_unitary,
    average_state,
    cq_marginal_and_joint_entropies,
    holevo_mutual_information,
    uniform_ensemble,
)
from .errors import DomainError, InvalidArgumentError, NumericalFailureError
from .grover import (
    GroverConfig,
    TraceRecord,
    grover_block,
    hadamard_layer,
    oracle_apply,
    run_trace,
    zero_phase_flip,
)
from .linalg import HermitianEigen, apply_spectral_function, hermitian_eigen
from .qstate import (
    DensityMatrix,
    StateVector,
    bures_distance,
    fidelity,
    initial_register_state,
    pure_density,
    single_qubit_mixed,
    tensor,
    von_neumann_entropy,
)

__version__ = "0.1.0"

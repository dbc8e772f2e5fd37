"""Exact statevector laboratory for quantum matrix inversion."""

from .clock import (
    ClockCircuit,
    Gate,
    build_clock_unitary,
    build_first_qubit_embedding,
    build_inversion_matrix,
    hamiltonian_sim_cost,
    named_gate,
    simulate_via_inversion,
)
from .errors import (
    EmbeddingRequiredError,
    FilterSpecError,
    FormatError,
    HHLError,
    LayoutError,
    NoStableStateError,
    NormBoundError,
    SingularMatrixError,
    ZeroProbabilityError,
)
from .filters import FilterSpec, f_filter, flag_state, g_filter, lipschitz_margin, rotate_flag
from .linalg import (
    EigenDecomposition,
    SparseHermitianMatrix,
    condition_number,
    eig_hermitian,
    hermitian_embed,
    mat_exp_unitary,
)
from .observables import (
    ObservableSpec,
    apply_matrix_function,
    estimate_observable,
    estimate_poly2k,
    stable_state,
    swap_test,
)
from .phase_estimation import (
    PhaseEstConfig,
    alpha_closed_form,
    conditional_evolution,
    phase_estimate,
    prepare_psi0,
)
from .pipeline import (
    HHLConfig,
    SolveReport,
    amplitude_amplify,
    ill_conditioned_profile,
    postselect_well,
    solve,
    solve_general,
    u_invert,
)
from .qstate import (
    QuantumState,
    RegisterLayout,
    inverse_qft,
    postselect,
    prepare_amplitudes,
    qft,
    sample_measure,
    state_distance,
)

__version__ = "0.1.0"

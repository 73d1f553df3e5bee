"""Thermal entanglement, critical behaviour and gate dynamics of two qubits
with XYZ exchange, inhomogeneous fields and Dzyaloshinskii-Moriya coupling."""

__version__ = "0.1.0"

from .critical import (  # noqa: E402
    CriticalQuery,
    StepProfile,
    critical_closed,
    critical_solve,
    qpt_scan,
    zero_t_concurrence,
)
from .dynamics import (  # noqa: E402
    check_swap_equivalence,
    entangling_power_profile,
    evolution_operator,
    evolve_basis_closed_form,
)
from .entanglement import (  # noqa: E402
    MODELS,
    ConcurrenceReport,
    concurrence_general,
    concurrence_model,
    concurrence_numeric,
    lambdas_general,
    register_models,
    thermal_concurrence,
)
from .hamiltonian import ModelParams, Preset, analytic_spectrum, build_hamiltonian, preset_params  # noqa: E402
from .linalg import herm_eig, kron, pauli2, spectral_fn  # noqa: E402
from .thermal import (  # noqa: E402
    DensityMatrix,
    density_matrix_analytic,
    density_matrix_numeric,
    ground_state_mixture,
    partition_function,
)

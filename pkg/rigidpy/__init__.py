from rigidpy.core.field import (
    CycloElement,
    CycloPolynomial,
    FpScalar,
    complex_embed,
    cyclo_mul,
    fp_inverse,
    interpolate_f,
    interpolate_g,
    l1_norm,
)
from rigidpy.core.matrices import (
    FpMatrix,
    LowRankFp,
    SignMatrix,
    boolean_distance,
    boolean_preimage,
    booleanize,
    distance_matrix,
    fp_rank,
    kron_power,
    maj_power,
    named_matrix,
    read_matrix,
    sign_to_fp,
    walsh_hadamard,
    write_matrix,
)
from rigidpy.core.lift import (
    boolean_to_regular_rank,
    booleanize_lowrank_fp,
    build_F,
    entry_bound_base,
    lift_to_c,
)
from rigidpy.core.spectral import (
    distance_bound,
    distance_eigenvalues,
    hamming_sigma,
    kron_lb_constants,
    kron_sigma,
    largest_singular_value,
    sigma_lt_q_check,
    thm1_bound,
    walsh_hadamard_bound,
)
from rigidpy.core.solver import (
    RigidityResult,
    bruteforce_oracle,
    exact_boolean_rigidity,
    exact_regular_rigidity,
    rank1_search,
    trivial_rank1_bound,
)
from rigidpy.core.amplify import (
    Ensemble,
    binomial_tail,
    best_seed_search,
    build_kron_approximant,
    build_prefix_approximant,
    ensemble_max_error,
    entry_marginals,
    fit_majority_constant,
    flip_noise_ensemble,
    kron_error_enumerated,
    kron_error_exact,
    kron_error_expected,
    kron_theorem_bound,
    maj_amplified_error,
    majority_agreement_prob,
    pi_tilde_eval,
    prefix_ensemble_error,
    prefix_error_exact,
    seed_success_prob,
    simulate_kron_error,
)
from rigidpy.core.formulas import (
    circuit_exponent,
    obstruction_check,
    razborov_schedule_kron,
    razborov_schedule_maj,
)
from rigidpy.core.experiment import ExperimentConfig, run_experiment

from rigidpy.core.formatting import TOOL_VERSION as __version__

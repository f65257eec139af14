"""Linear Boolean circuits: synthesis, verification, exact optima and
lower-bound certificates over GF(2) and the OR semiring."""

from .matrices import (
    BitMatrix,
    BudgetExceededError,
    DimensionError,
    KFreeOutcome,
    RankFactorization,
    Submatrix,
    complement,
    det_int,
    example_a,
    example_b,
    find_allones_submatrix,
    gen_hadamard,
    gen_random,
    gen_setintersection,
    gen_sierpinski,
    identity,
    is_k_free_exact,
    kst_bound,
    mul_bool,
    mul_gf2,
    ones,
    popcount,
    rank_factorize_gf2,
    rank_gf2,
    setint_row_alignment,
    zeros,
)
from .circuits import (
    OR,
    XOR,
    Circuit,
    EliminationResult,
    LayeredCircuit,
    ParseError,
    compose,
    compose_layered,
    depth,
    depth_layered,
    eval_circuit,
    flatten,
    is_cancellation_free,
    matrix_of,
    restrict_zero,
    size_gates,
    size_wires,
    slp_dumps,
    slp_loads,
    supports_disjoint,
    value_vectors,
    verify,
)
from .synthesis import (
    SynthesisResult,
    boyar_peralta,
    complement_transform,
    hadamard_circuit,
    lupanov,
    lupanov_depth2,
    naive_rowwise,
    paar_greedy,
    product_circuit,
    setintersection_or_circuit,
    sierpinski_circuit,
)
from .exact import (
    CF_MODEL,
    MODELS,
    OR_MODEL,
    XOR_MODEL,
    CensusReport,
    SearchOutcome,
    census,
    optimal_size,
)
from .bounds import (
    BoundReport,
    KFreeStatus,
    bound_report,
    kfree_quantity,
    kst_cap,
    morgenstern,
    sierpinski_lb,
    trivial_bounds,
)
from .lab import (
    BiasReport,
    ExperimentConfig,
    RamseyOutcome,
    RankStats,
    SeparationReport,
    SweepReport,
    TrialReport,
    estimate_conditional_bias,
    exact_conditional_bias,
    ramsey_check,
    ratio_sweep,
    run_experiment,
    run_trial,
    submatrix_rank_stats,
    trial_matrices,
    wilson_interval,
)
from .rng import SplitMix64, derive_seed

__version__ = "0.1.0"

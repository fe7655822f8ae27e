"""oselab: subspace-embedding sketches, pass/fail oracles, and the Monte
Carlo experiments that map out their dimension/sparsity tradeoffs."""

from .bins import VirtualBinTable, alias_virtual_bins, sample_through_table, throw_balls, virtual_group_extraction
from .collisions import (
    CollisionStats,
    ColumnProfile,
    Group,
    GroupSet,
    collision_stats,
    extract_disjoint_pairs,
    extract_groups,
    inner_product_lemma_check,
    max_coordinate_profile,
    signed_class_fractions,
    stress_vector_norm,
)
from .embedding import EmbeddingReport, FailureEstimate, embedding_check, failure_probability, wilson_interval, witness_pair
from .instances import (
    SubspaceInstance,
    frobenius_concentration_check,
    projection_norm_trial,
    sample_basis_subspace,
    sample_random_subspace,
)
from .linalg import (
    DegenerateMatrixError,
    OrthonormalBasis,
    condition_number,
    gram_schmidt,
    interlacing_check,
    project_onto,
    singular_values,
)
from .regression import (
    RegressionInstance,
    RegressionResult,
    SketchFailureError,
    certificate_bound,
    error_ratio,
    exact_least_squares,
    sketch_and_solve,
)
from .sketches import (
    SketchMatrix,
    SketchSpec,
    apply_sketch,
    identity_sketch,
    sample_gaussian_sketch,
    sample_sketch,
    sample_sparse_sketch,
)
from .sweeps import ExperimentConfig, TrialRecord, run_dim_frontier, run_lemma_suite, run_regress_demo, run_sparsity_phase, run_sweep, write_csv

__version__ = "0.1.0"

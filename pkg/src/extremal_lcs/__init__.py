"""Extremal optimal alignments of longest common subsequences.

The highest and lowest optimal LCS alignments of two strings, distances
between them, common-ancestor sequence models and Monte Carlo growth
experiments.
"""
from .alignment import (
    CoOptimalCells,
    MemoryCapExceeded,
    Sequence,
    TooManyAlignments,
    co_optimal_cells,
    enumerate_optimal_alignments,
    extremal_alignments,
    highest_alignment,
    lcs_length,
    lowest_alignment,
    verify_extremal_properties,
)
from .bounds import (
    alignment_count_bound,
    binary_entropy,
    chvatal_sankoff_bounds,
    condition_threshold,
    entropy_max,
    independence_bound_lhs,
    relatedness_condition_lhs,
)
from .experiments import (
    ModelSpec,
    TrialRecord,
    estimate_gamma,
    fit_models,
    growth_sweep,
    run_trial,
    table1,
)
from .metrics import (
    AlignmentGraph,
    alignment_graph,
    default_alpha,
    hausdorff,
    max_horizontal_distance,
    max_vertical_distance,
    nonuniqueness_stretch,
    restricted_hausdorff,
)
from .models import (
    PRESETS,
    DerivedStats,
    GeneratedPair,
    ModelParams,
    derived_stats,
    gen_independent,
    gen_related_fixed,
    gen_related_random,
)

__version__ = "0.1.0"

"""Exact arithmetic for star-generator moments, pair-partition statistics,
and GUE trace moments, with a verification CLI."""

from .symgroup import NotInvariantError, Permutation, star_generator, symmetric_group
from .setpartitions import (
    PairPartition,
    SetPartition,
    enumerate_pair_partitions,
    enumerate_partitions,
    kernel,
    pairings_below,
    random_pair_partition,
)
from .partition_stats import (
    PairingStatistics,
    check_orbit_coverage,
    check_reentry_conjugation,
    exponents_agree,
    forward_cycle,
    pairing_permutation,
    pairing_statistics,
    star_exponent,
    star_product_permutation,
    wick_exponent,
    wick_partition_value,
)
from .group_algebra import (
    BudgetExceededError,
    GroupAlgebraElement,
    ScaledMoment,
    centered_generator,
    character_sum,
    count_factorizations,
    factorization_counts,
    gram_psd_check,
    length_character,
    scaled_moment,
    sum_moment,
    sum_moment_by_enumeration,
)
from .clt_engine import (
    CenteredStarGeneratorOracle,
    MomentTable,
    PartitionFunction,
    StarGeneratorOracle,
    check_exchangeable,
    check_singleton_factorization,
    check_translation_identity,
    clt_moment,
    limit_moment,
    multivariate_limit_moments,
    pairing_sum,
)
from .gue import (
    GueSampleConfig,
    draw_gue_matrices,
    gue_trace_moment,
    sample_joint_moment,
    wick_joint_moment,
)
from .analytic import (
    DensityPolynomial,
    TruncatedSeries,
    check_convolution_identity,
    check_multivariate_egf_identity,
    convolve_moments,
    density_polynomial,
    egf_moments,
    egf_polynomial,
    gaussian_moments,
    gue_egf,
    gue_moment_table,
    limit_law_egf,
    multivariate_egf,
)

__version__ = "0.1.0"

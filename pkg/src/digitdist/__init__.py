"""Distribution of digit-restricted integers via exact Markov chains."""

from .analyze import (
    NOT_UNIFORM,
    SUBGROUP,
    UNIFORM,
    UNSUPPORTED,
    ZERO_OR_DNE,
    AnalysisReport,
    analyze_general_pair,
    analyze_missing_digits,
    analyze_naturals,
    analyze_sft,
    analyze_spec,
    chain_direct,
)
from .chains import ChainError, ChainSystem, build_chain_system
from .dimension import (
    BlockSequence,
    DimensionEstimate,
    block_sequence_shift,
    empirical_dimension,
    entropy,
    mass_dimension,
    sgap_dimension_ladder,
    transversality_check,
)
from .oracle import (
    CensusTable,
    census,
    compare,
    convergence_table,
    enumerate_set,
)
from .shifts import (
    Cover,
    EmptyShiftError,
    FischerCover,
    NonTransitiveError,
    ShiftSpec,
    ShiftSpecError,
    build_cover,
    enumerate_words,
    fischer_cover,
    follower_class,
    is_mixing,
    is_transitive,
    language_count,
    regularity_k,
    restricted_count,
    restricted_enumerate,
    shortest_synchronizing_length,
)
from .words import (
    DomainError,
    EventualPeriod,
    GAdditiveFamily,
    GAdditiveFunction,
    Word,
    delta_gcd,
    euler_period,
    find_eventual_period,
    id_sum_family,
    identity_function,
    integer_to_word,
    sum_digits_function,
    word_to_integer,
)

__version__ = "0.1.0"

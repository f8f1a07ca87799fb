"""Exact monomial-ideal engine for epsilon-multiplicity experiments over
affine semigroup rings, with a session language, HTTP service, and CLI."""

from .errors import (
    ArityError,
    DimensionMismatch,
    EpsmultError,
    IterationCapExceeded,
    KNotPrimary,
    PairNotCofinal,
    RingMismatch,
    SessionError,
    SessionSyntaxError,
    StabilityFailure,
    UnknownName,
)
from .filtrations import (
    ArReport,
    Filtration,
    WeightValuation,
    check_ar,
    check_graded,
    check_weakly_graded,
    colon_family,
    custom_filtration,
    discrete_valued_filtration,
    explicit_filtration,
    find_min_ar,
    is_m_primary,
    power_filtration,
    sandwich_family,
    valuation_ideal,
    valuation_of_ideal,
)
from .ideals import (
    MonomialIdeal,
    SaturationResult,
    StabilityCertificate,
    colon,
    colon_power,
    equals,
    intersect,
    max_ideal_power,
    maximal_ideal,
    membership,
    minimalize,
    power,
    product,
    saturate,
    saturate_detailed,
    subset_of,
    sum_ideals,
    unit_ideal,
    window_bound,
    zero_ideal,
)
from .invariants import (
    LengthValue,
    MultiplicityEstimate,
    NoetherianReport,
    SpreadResult,
    VolumeTable,
    amao_pair_sequence,
    analytic_spread,
    analytic_spread_family,
    colength,
    epsilon_colon_sequence,
    epsilon_sequence,
    h0_length,
    noetherian_probe,
    positivity_report,
    volume_formula_table,
)
from .rings import (
    AffineSemigroupRing,
    WeightGrading,
    lattice_rank,
    polynomial_ring,
    semigroup_ring,
    unit_grading,
)
from .session import Session, format_session, parse_session

__version__ = "0.1.0"

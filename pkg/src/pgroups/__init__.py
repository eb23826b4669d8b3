"""Exact arithmetic and powerful-class analysis for finite p-groups (p odd)."""

from .errors import (
    BudgetExceeded,
    FormatError,
    GreedyOracleMismatch,
    InconsistentPresentation,
    InvalidWord,
    InvariantViolation,
    NoValidS,
    NotAbelian,
    NotAnEtaSeries,
    NotAutomorphism,
    NotNormal,
    NotOddPrime,
    OrderMismatch,
    ParamOutOfRange,
    PGroupError,
    SizeLimitExceeded,
    TheoremViolated,
    UnknownName,
    ValidationFailed,
)
from .groups import (
    ELEMENT_CAP,
    FiniteGroup,
    GroupHom,
    PcPresentation,
    build_abelian,
    build_from_pc,
    build_semidirect,
    build_unitriangular,
    element_order,
    exponent_of,
    validate_odd_prime,
)
from .subgroups import (
    Subgroup,
    SubgroupSeries,
    center,
    closure,
    coclass,
    commutator_subgroup,
    enumerate_normal_subgroups,
    frattini,
    is_maximal_class,
    is_normal,
    iterated_commutator,
    join,
    lower_central_series,
    minimal_generator_count,
    nilpotency_class,
    normal_closure,
    omega_subgroup,
    power_image,
    power_subgroup,
    pull_back,
    push_forward,
    quotient,
    subgroup_as_group,
    trivial_subgroup,
    upper_central_series,
    whole_subgroup,
)
from .eta_series import (
    EtaReport,
    UniserialReport,
    eta,
    eta_capability_obstruction,
    is_eta_series,
    is_powerful,
    is_powerfully_embedded,
    powerful_class,
    powerful_height,
    powerfully_embedded_normals,
    pwccoclass_bound_check,
    uniserial_report,
    upper_eta_series,
)
from .filtrations import (
    OmegaReport,
    PotentFiltration,
    is_pf_embedded,
    is_pf_group,
    is_potent,
    is_power_surjective,
    omega_exponent_check,
    pf_embedding_witness,
    small_height_filtration,
)
from .catalog import catalog_build, catalog_instances, catalog_list
from .report import analyze_group

__version__ = "0.1.0"

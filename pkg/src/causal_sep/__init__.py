"""Causal separability criterion, EC state family, and PPT cross-check."""

from .config_calculus import (
    ConfigCensus,
    Configuration,
    CouplingMode,
    EnumerationBudgetError,
    count_configurations,
    enumerate_configurations,
    is_completely_orthogonal,
    orthogonal_partners,
    partition_distinct,
)
from .criterion import (
    ConfigScore,
    CriterionReport,
    OverallVerdict,
    ScoreVerdict,
    causal_W,
    classify,
    ignorance_probability,
    transition_probability,
)
from .density import (
    DensityMatrix,
    MatrixFormatError,
    PartySubset,
    bell_state,
    basis_state,
    canonical_subsets,
    hermitian_eigenvalues,
    load_matrix,
    maximally_mixed,
    partial_transpose,
    save_matrix,
    tensor_product,
)
from .ec_family import (
    ECClass,
    ECParams,
    ECVerdict,
    Mixing,
    ThresholdKind,
    ThresholdResult,
    build_ec_matrix,
    classify_ec,
    closed_form_W,
    crossover_N,
    duality_residuals,
    renormalized_threshold,
    threshold,
)
from .ppt import PptOutcome, PptVerdict, ph_determinants_2x2, ppt_check, ppt_report

__version__ = "0.1.0"

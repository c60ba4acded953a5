"""Two-group linear discriminant toolkit for bank-distress early warning.

Pipeline: parse a bank-year ratio panel, average each bank over a training
window, z-score the averages, fit the canonical discriminant function, run
the diagnostic battery, derive classification zones (cut-off plus an
optional grey interval), and evaluate yearly panels against actual outcomes.
"""

from .classification import (
    BankScore,
    ClassificationZones,
    ConfusionMatrix,
    EvaluationReport,
    YearRow,
    ZoneLabel,
    classify_zone,
    confusion_matrix,
    cutoff_from_centroids,
    cutoff_point,
    derive_zones,
    evaluate_panel,
    grey_zone,
    infer_warning_years,
    report_to_dict,
    score_observation,
    zones_to_dict,
)
from .dataset import (
    VARIABLES,
    BankYearRecord,
    GroupLabel,
    LabeledSample,
    RatioVector,
    TrainingSet,
    average_ratios,
    build_training_set,
    case_processing_summary,
    panel_labels,
    parse_panel,
    serialize_panel,
    training_set_from_panel,
)
from .diagnostics import (
    ALPHA_DEFAULT,
    BoxMResult,
    CollinearityReport,
    WilksResult,
    box_homogeneous,
    box_m_from_model,
    box_m_test,
    box_verdict,
    canonical_summary,
    canonical_summary_from_eigenvalue,
    collinearity_check,
    eigenvalue_from_scores,
    wilks_from_eigenvalue,
    wilks_significant,
    wilks_test,
    wilks_verdict,
)
from .errors import (
    BindingError,
    ConfigError,
    DegenerateSeparationError,
    DistressLdaError,
    DomainError,
    DuplicateRecordError,
    EmptyWindowError,
    EvaluationError,
    InsufficientGroupError,
    MissingDataError,
    MissingLabelError,
    ModelFileError,
    PanelError,
    ParseError,
    SchemaError,
    SingularMatrixError,
    VariableCountError,
    ZeroVarianceError,
)
from .lda_fit import (
    DiscriminantModel,
    FisherDecision,
    FisherFunctions,
    GroupStatistics,
    compute_group_stats,
    fisher_classify,
    fisher_decision,
    fit,
    fit_from_matrices,
    group_stats_from_matrices,
    score,
    solve_spd,
)
from .model_io import load_model, load_zones, model_to_dict, save_model, save_zones
from .special_functions import (
    chi_square_sf,
    f_sf,
    ln_gamma,
    reg_inc_beta,
    reg_inc_gamma_p,
    reg_inc_gamma_q,
)
from .normalization import (
    NormalizationStats,
    apply,
    fit_normalizer,
    normalize_training_set,
)

__version__ = "0.1.0"

__all__ = [
    "ALPHA_DEFAULT",
    "VARIABLES",
    "BankScore",
    "BankYearRecord",
    "BindingError",
    "BoxMResult",
    "ClassificationZones",
    "CollinearityReport",
    "ConfigError",
    "ConfusionMatrix",
    "DegenerateSeparationError",
    "DiscriminantModel",
    "DistressLdaError",
    "DomainError",
    "DuplicateRecordError",
    "EmptyWindowError",
    "EvaluationError",
    "EvaluationReport",
    "FisherDecision",
    "FisherFunctions",
    "GroupLabel",
    "GroupStatistics",
    "InsufficientGroupError",
    "LabeledSample",
    "MissingDataError",
    "MissingLabelError",
    "ModelFileError",
    "NormalizationStats",
    "PanelError",
    "ParseError",
    "RatioVector",
    "SchemaError",
    "SingularMatrixError",
    "TrainingSet",
    "VariableCountError",
    "WilksResult",
    "YearRow",
    "ZeroVarianceError",
    "ZoneLabel",
    "apply",
    "average_ratios",
    "box_homogeneous",
    "box_m_from_model",
    "box_m_test",
    "box_verdict",
    "build_training_set",
    "canonical_summary",
    "canonical_summary_from_eigenvalue",
    "case_processing_summary",
    "chi_square_sf",
    "classify_zone",
    "collinearity_check",
    "compute_group_stats",
    "confusion_matrix",
    "cutoff_from_centroids",
    "cutoff_point",
    "derive_zones",
    "eigenvalue_from_scores",
    "evaluate_panel",
    "f_sf",
    "fisher_classify",
    "fisher_decision",
    "fit",
    "fit_from_matrices",
    "fit_normalizer",
    "grey_zone",
    "group_stats_from_matrices",
    "infer_warning_years",
    "ln_gamma",
    "load_model",
    "load_zones",
    "model_to_dict",
    "normalize_training_set",
    "panel_labels",
    "parse_panel",
    "reg_inc_beta",
    "reg_inc_gamma_p",
    "reg_inc_gamma_q",
    "report_to_dict",
    "save_model",
    "save_zones",
    "score",
    "score_observation",
    "serialize_panel",
    "solve_spd",
    "training_set_from_panel",
    "wilks_from_eigenvalue",
    "wilks_significant",
    "wilks_test",
    "wilks_verdict",
    "zones_to_dict",
]

"""Regularized fuzzy neural network classifier for SQL injection detection."""

from ._core import (
    BoundaryMode,
    Confusion,
    DataError,
    Dataset,
    FuzzyRule,
    Metrics,
    ModelConfig,
    NeuronKind,
    RuleAntecedent,
    StandardizationStats,
    TrainedModel,
    TrainError,
    TrainingReport,
    auc_rank,
    compute_metrics,
    extract_rules,
    featurize_sql,
    load_csv,
    load_model,
    model_from_json,
    render_rule,
    save_model,
    train,
)

__all__ = [
    "BoundaryMode",
    "Confusion",
    "DataError",
    "Dataset",
    "FuzzyRule",
    "Metrics",
    "ModelConfig",
    "NeuronKind",
    "RuleAntecedent",
    "StandardizationStats",
    "TrainedModel",
    "TrainError",
    "TrainingReport",
    "auc_rank",
    "compute_metrics",
    "extract_rules",
    "featurize_sql",
    "load_csv",
    "load_model",
    "model_from_json",
    "render_rule",
    "save_model",
    "train",
]

"""Regularized discriminant analysis for two-class Gaussian data.

Thin wrapper over the C++ core: R-LDA / R-QDA classifiers, deterministic
equivalents of their misclassification rates, consistent training-data-only
error estimators, baseline estimators, and regularization tuning.
"""

from ._core import (
    FittedDA,
    GaussianClassSpec,
    ProblemInstance,
    RdaError,
    SyntheticGeometry,
    TrainingSet,
    bootstrap_error,
    build_synthetic,
    cv_error,
    empirical_error,
    exact_error_rlda,
    fit_statistics,
    g_estimate,
    lda_deterministic_error,
    load_libsvm,
    plugin_error,
    qda_deterministic_error,
    sample_class,
    sample_training_set,
    score,
    two_stage_tune,
    write_libsvm,
)

__all__ = [
    "FittedDA",
    "GaussianClassSpec",
    "ProblemInstance",
    "RdaError",
    "SyntheticGeometry",
    "TrainingSet",
    "bootstrap_error",
    "build_synthetic",
    "cv_error",
    "empirical_error",
    "exact_error_rlda",
    "fit_statistics",
    "g_estimate",
    "lda_deterministic_error",
    "load_libsvm",
    "plugin_error",
    "qda_deterministic_error",
    "sample_class",
    "sample_training_set",
    "score",
    "two_stage_tune",
    "write_libsvm",
]

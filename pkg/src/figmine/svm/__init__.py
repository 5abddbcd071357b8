"""Kernel SVM with one-vs-rest multiclass, grid search, and k-fold CV."""

from figmine.svm.evaluate import (
    ConfusionMatrix,
    CvResult,
    cross_validate,
    grid_search,
    make_folds,
)
from figmine.svm.kernel import kernel_matrix
from figmine.svm.model import (
    FeatureScaler,
    SvmModel,
    SvmParams,
    predict,
    predict_batch,
    train,
)

__all__ = [
    "ConfusionMatrix",
    "CvResult",
    "cross_validate",
    "grid_search",
    "make_folds",
    "kernel_matrix",
    "FeatureScaler",
    "SvmModel",
    "SvmParams",
    "predict",
    "predict_batch",
    "train",
]

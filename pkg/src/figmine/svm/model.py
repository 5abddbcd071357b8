"""Soft-margin kernel SVM: one-vs-rest training, softmax probabilities."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from figmine import serialization
from figmine.errors import InvalidFeature, InvalidParameter, InvalidTrainingSet
from figmine.kernels import smo_solve
from figmine.svm.kernel import kernel_matrix

SMO_TOL = 1e-3
SMO_MAX_ITER = 100_000


@dataclass(frozen=True)
class SvmParams:
    kernel: str = "rbf"
    gamma: float = 0.001
    penalty_c: float = 1000.0

    def __post_init__(self):
        if self.kernel not in ("rbf", "linear"):
            raise InvalidParameter(f"unknown kernel {self.kernel!r}")
        if self.gamma <= 0:
            raise InvalidParameter("gamma must be positive")
        if self.penalty_c <= 0:
            raise InvalidParameter("penalty_c must be positive")

    def to_dict(self):
        return {"kernel": self.kernel, "gamma": self.gamma, "penalty_c": self.penalty_c}

    @classmethod
    def from_dict(cls, d):
        return cls(
            kernel=d["kernel"],
            gamma=float(d["gamma"]),
            penalty_c=float(d["penalty_c"]),
        )


@dataclass
class FeatureScaler:
    """Per-dimension standardization fitted on the training set."""

    mean: np.ndarray
    std: np.ndarray

    @classmethod
    def fit(cls, X):
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        std = X.std(axis=0)
        std = np.where(std < 1e-12, 1.0, std)
        return cls(mean=X.mean(axis=0), std=std)

    def transform(self, X):
        return (np.atleast_2d(np.asarray(X, dtype=np.float64)) - self.mean) / self.std


@dataclass
class SvmModel:
    classes: list
    params: SvmParams
    support_vectors: list = field(default_factory=list)  # per class, (m_c, d)
    coefs: list = field(default_factory=list)  # per class, alpha_i * y_i
    biases: list = field(default_factory=list)
    kkt_gaps: list = field(default_factory=list)
    scaler: FeatureScaler | None = None

    def decision_matrix(self, X):
        """Per-class decision values for a batch; shape (n, n_classes)."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if self.scaler is not None:
            X = self.scaler.transform(X)
        d = self.support_vectors[0].shape[1]
        if X.shape[1] != d:
            raise InvalidFeature(f"feature dim {X.shape[1]} != model dim {d}")
        out = np.empty((X.shape[0], len(self.classes)))
        for c, (sv, coef, b) in enumerate(
            zip(self.support_vectors, self.coefs, self.biases)
        ):
            if sv.shape[0] == 0:
                out[:, c] = b
                continue
            K = kernel_matrix(X, sv, self.params.kernel, self.params.gamma)
            out[:, c] = K @ coef + b
        return out

    def save(self, path, extra_meta=None):
        arrays = {"biases": np.asarray(self.biases), "kkt_gaps": np.asarray(self.kkt_gaps)}
        for c in range(len(self.classes)):
            arrays[f"sv_{c}"] = self.support_vectors[c]
            arrays[f"coef_{c}"] = self.coefs[c]
        if self.scaler is not None:
            arrays["scaler_mean"] = self.scaler.mean
            arrays["scaler_std"] = self.scaler.std
        meta = {"classes": list(self.classes), "params": self.params.to_dict()}
        if extra_meta:
            meta.update(extra_meta)
        serialization.write_arrays(path, serialization.MAGIC_SVM, arrays, meta=meta)

    @classmethod
    def load(cls, path):
        arrays, meta = serialization.read_arrays(path, serialization.MAGIC_SVM)
        classes = list(meta["classes"])
        scaler = None
        if "scaler_mean" in arrays:
            scaler = FeatureScaler(mean=arrays["scaler_mean"], std=arrays["scaler_std"])
        return cls(
            classes=classes,
            params=SvmParams.from_dict(meta["params"]),
            support_vectors=[arrays[f"sv_{c}"] for c in range(len(classes))],
            coefs=[arrays[f"coef_{c}"] for c in range(len(classes))],
            biases=list(arrays["biases"]),
            kkt_gaps=list(arrays["kkt_gaps"]),
            scaler=scaler,
        )


def _check_training_input(X, labels):
    if X.size == 0 or len(labels) == 0:
        raise InvalidTrainingSet("empty training set")
    if X.shape[0] != len(labels):
        raise InvalidTrainingSet("feature and label counts differ")
    if np.isnan(X).any() or np.isinf(X).any():
        raise InvalidFeature("NaN or inf in features")
    classes = sorted(set(labels))
    if len(classes) < 2:
        raise InvalidTrainingSet("need at least 2 classes")
    return classes


def train(features, labels, params=SvmParams(), scale=False):
    """Fit a one-vs-rest SVM. Class list is the sorted label set; ties in
    prediction go to the lowest class index."""
    X = np.atleast_2d(np.asarray(features, dtype=np.float64))
    labels = list(labels)
    classes = _check_training_input(X, labels)
    scaler = None
    if scale:
        scaler = FeatureScaler.fit(X)
        X = scaler.transform(X)
    K = kernel_matrix(X, X, params.kernel, params.gamma)
    K = np.ascontiguousarray(K)
    model = SvmModel(classes=classes, params=params, scaler=scaler)
    for c in classes:
        y = np.where(np.asarray(labels, dtype=object) == c, 1.0, -1.0)
        alpha, bias, _, gap = smo_solve(K, y, params.penalty_c, SMO_TOL, SMO_MAX_ITER)
        alpha = np.asarray(alpha)
        sv = alpha > 0
        model.support_vectors.append(np.ascontiguousarray(X[sv]))
        model.coefs.append(alpha[sv] * y[sv])
        model.biases.append(float(bias))
        model.kkt_gaps.append(float(gap))
    return model


def predict_batch(model, X):
    """Labels and softmax probabilities for a batch; probs align with
    model.classes."""
    decisions = model.decision_matrix(X)
    shifted = decisions - decisions.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    probs = e / e.sum(axis=1, keepdims=True)
    idx = np.argmax(probs, axis=1)
    labels = [model.classes[i] for i in idx]
    return labels, probs


def predict(model, feature):
    """(label, class_probs) for one feature vector."""
    labels, probs = predict_batch(model, np.atleast_2d(feature))
    return labels[0], probs[0]

"""Stratified k-fold evaluation: grid search, cross-validation, confusion."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from figmine.errors import InvalidTrainingSet
from figmine.svm.model import predict_batch, train


@dataclass
class ConfusionMatrix:
    classes: list
    counts: np.ndarray

    @classmethod
    def empty(cls, classes):
        n = len(classes)
        return cls(classes=list(classes), counts=np.zeros((n, n), dtype=np.int64))

    @classmethod
    def from_pairs(cls, true_labels, pred_labels, classes=None):
        if classes is None:
            classes = sorted(set(true_labels) | set(pred_labels))
        cm = cls.empty(classes)
        index = {c: i for i, c in enumerate(cm.classes)}
        for t, p in zip(true_labels, pred_labels):
            cm.counts[index[t], index[p]] += 1
        return cm

    def add(self, other):
        self.counts += other.counts

    @property
    def total(self):
        return int(self.counts.sum())

    def accuracy(self):
        t = self.total
        return float(np.trace(self.counts)) / t if t else 0.0

    def precision(self, cls_name):
        i = self.classes.index(cls_name)
        col = int(self.counts[:, i].sum())
        return float(self.counts[i, i]) / col if col else 0.0

    def recall(self, cls_name):
        i = self.classes.index(cls_name)
        row = int(self.counts[i].sum())
        return float(self.counts[i, i]) / row if row else 0.0

    def to_dict(self):
        return {"classes": list(self.classes), "counts": self.counts.tolist()}


@dataclass
class CvResult:
    confusion: ConfusionMatrix
    accuracy: float
    fold_accuracies: list
    precision: dict = field(default_factory=dict)
    recall: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "accuracy": self.accuracy,
            "fold_accuracies": list(self.fold_accuracies),
            "precision": dict(self.precision),
            "recall": dict(self.recall),
            "confusion": self.confusion.to_dict(),
        }


def make_folds(labels, folds, seed=0):
    """Stratified fold assignment, deterministic under seed.

    Returns an int array mapping each sample to a fold. Classes with fewer
    samples than folds degrade to one sample per fold (leave-one-out for
    that class) with a warning.
    """
    if folds < 2:
        raise InvalidTrainingSet("folds must be >= 2")
    labels = np.asarray(labels, dtype=object)
    rng = np.random.default_rng(seed)
    assignment = np.zeros(len(labels), dtype=np.int64)
    for c in sorted(set(labels)):
        idx = np.flatnonzero(labels == c)
        if len(idx) < folds:
            warnings.warn(
                f"class {c!r} has {len(idx)} samples for {folds} folds; "
                "using one sample per fold"
            )
        idx = rng.permutation(idx)
        assignment[idx] = np.arange(len(idx)) % folds
    return assignment


def cross_validate(features, labels, params, folds=10, seed=0, scale=False):
    """k-fold CV: per-class precision/recall and the pooled confusion matrix."""
    X = np.atleast_2d(np.asarray(features, dtype=np.float64))
    labels = list(labels)
    classes = sorted(set(labels))
    fold_of = make_folds(labels, folds, seed=seed)
    confusion = ConfusionMatrix.empty(classes)
    fold_accs = []
    label_arr = np.asarray(labels, dtype=object)
    for f in range(folds):
        test = fold_of == f
        if not test.any():
            continue
        model = train(X[~test], list(label_arr[~test]), params, scale=scale)
        pred, _ = predict_batch(model, X[test])
        part = ConfusionMatrix.from_pairs(list(label_arr[test]), pred, classes)
        confusion.add(part)
        fold_accs.append(part.accuracy())
    result = CvResult(
        confusion=confusion,
        accuracy=confusion.accuracy(),
        fold_accuracies=fold_accs,
    )
    for c in classes:
        result.precision[c] = confusion.precision(c)
        result.recall[c] = confusion.recall(c)
    return result


def grid_search(features, labels, grid, folds=10, seed=0, scale=False):
    """Mean CV accuracy per grid cell; returns (best params, accuracies).

    Ties go to the first cell in grid order.
    """
    if not grid:
        raise InvalidTrainingSet("empty parameter grid")
    accuracies = []
    for params in grid:
        r = cross_validate(features, labels, params, folds=folds, seed=seed, scale=scale)
        accuracies.append(float(np.mean(r.fold_accuracies)))
    best = max(range(len(grid)), key=lambda i: (accuracies[i], -i))
    return grid[best], accuracies

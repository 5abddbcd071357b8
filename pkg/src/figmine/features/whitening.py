"""ZCA whitening of patch sets."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from figmine.errors import InsufficientData, InvalidParameter

EPS_ZCA = 0.01


@dataclass
class WhiteningTransform:
    mean: np.ndarray
    transform: np.ndarray
    eps_zca: float

    def apply(self, X):
        return (np.atleast_2d(X) - self.mean) @ self.transform.T


def fit_whitening(patches, eps_zca=EPS_ZCA):
    """Fit a ZCA transform: W = U diag(1/sqrt(max(lambda, eps))) U^T.

    The eigenvalue floor keeps the transform bounded on degenerate
    directions; when every eigenvalue clears the floor, the whitened
    training set has exactly identity (population) covariance.
    """
    if eps_zca <= 0:
        raise InvalidParameter(f"eps_zca must be positive, got {eps_zca}")
    X = np.atleast_2d(np.asarray(patches, dtype=np.float64))
    n, d = X.shape
    if n <= d:
        raise InsufficientData(f"need more than {d} patches, got {n}")
    mean = X.mean(axis=0)
    Xc = X - mean
    cov = (Xc.T @ Xc) / n
    lam, U = np.linalg.eigh(cov)
    scale = 1.0 / np.sqrt(np.maximum(lam, eps_zca))
    W = (U * scale) @ U.T
    return WhiteningTransform(mean=mean, transform=W, eps_zca=eps_zca)

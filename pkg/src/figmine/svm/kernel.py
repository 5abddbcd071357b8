"""Kernel matrix computation for the SVM."""

from __future__ import annotations

import numpy as np

from figmine.errors import InvalidParameter


def kernel_matrix(X, Z, kernel, gamma):
    """Gram matrix K[i, j] = k(X[i], Z[j]) for kernel in {rbf, linear}."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    Z = np.atleast_2d(np.asarray(Z, dtype=np.float64))
    if kernel == "linear":
        return X @ Z.T
    if kernel == "rbf":
        xn = (X * X).sum(axis=1)[:, None]
        zn = (Z * Z).sum(axis=1)[None, :]
        d2 = xn + zn - 2.0 * (X @ Z.T)
        np.maximum(d2, 0.0, out=d2)
        return np.exp(-gamma * d2)
    raise InvalidParameter(f"unknown kernel {kernel!r}")

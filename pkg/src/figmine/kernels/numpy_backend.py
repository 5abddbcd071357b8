"""Pure-numpy implementations of the hot kernels.

Mirrors the algorithms in the compiled figmine._ckernels module; used when
the extension is unavailable (or forced via FIGMINE_BACKEND=numpy).
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

_TAU = 1e-12


def smo_solve(K, y, C, tol, max_iter):
    """Solve the soft-margin SVM dual over a precomputed kernel matrix.

    Same pair-selection and update rules as the compiled kernel: maximal
    violating pair with second-order gain for the second index, ties to the
    lowest index. Returns (alpha, bias, iterations, kkt_gap).
    """
    K = np.ascontiguousarray(K, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = K.shape[0]
    alpha = np.zeros(n)
    grad = np.full(n, -1.0)
    Kd = np.ascontiguousarray(np.diag(K))
    pos = y > 0
    it = 0
    gap = np.inf
    m = -np.inf
    M = np.inf

    while it < max_iter:
        v = -y * grad
        up = (pos & (alpha < C)) | (~pos & (alpha > 0))
        low = (pos & (alpha > 0)) | (~pos & (alpha < C))
        if not up.any():
            gap = -np.inf
            break
        vu = np.where(up, v, -np.inf)
        i = int(np.argmax(vu))
        m = vu[i]
        M = np.where(low, v, np.inf).min()
        gap = m - M
        if gap <= tol:
            break

        bt = m - v
        eta = Kd[i] + Kd - 2.0 * K[i]
        eta = np.where(eta <= 0, _TAU, eta)
        gain = np.where(low & (bt > 0), bt * bt / eta, -np.inf)
        j = int(np.argmax(gain))
        if not np.isfinite(gain[j]):
            break

        quad = Kd[i] + Kd[j] - 2.0 * K[i, j]
        if quad <= 0:
            quad = _TAU
        old_ai = alpha[i]
        old_aj = alpha[j]
        if y[i] * y[j] < 0:
            delta = (-grad[i] - grad[j]) / quad
            diff = alpha[i] - alpha[j]
            alpha[i] += delta
            alpha[j] += delta
            if diff > 0:
                if alpha[j] < 0:
                    alpha[j] = 0.0
                    alpha[i] = diff
            elif alpha[i] < 0:
                alpha[i] = 0.0
                alpha[j] = -diff
            if diff > 0:
                if alpha[i] > C:
                    alpha[i] = C
                    alpha[j] = C - diff
            elif alpha[j] > C:
                alpha[j] = C
                alpha[i] = C + diff
        else:
            delta = (grad[i] - grad[j]) / quad
            s = alpha[i] + alpha[j]
            alpha[i] -= delta
            alpha[j] += delta
            if s > C:
                if alpha[i] > C:
                    alpha[i] = C
                    alpha[j] = s - C
            elif alpha[j] < 0:
                alpha[j] = 0.0
                alpha[i] = s
            if s > C:
                if alpha[j] > C:
                    alpha[j] = C
                    alpha[i] = s - C
            elif alpha[i] < 0:
                alpha[i] = 0.0
                alpha[j] = s

        dai = alpha[i] - old_ai
        daj = alpha[j] - old_aj
        grad += y * (y[i] * K[i] * dai + y[j] * K[j] * daj)
        it += 1

    free = (alpha > 0) & (alpha < C)
    if free.any():
        bias = float(np.mean(-y[free] * grad[free]))
    elif np.isfinite(m) and np.isfinite(M):
        bias = (m + M) / 2.0
    else:
        bias = 0.0
    return alpha, bias, it, gap


def assign_nearest(X, C):
    """Index of the nearest row of C for each row of X (squared Euclidean).

    Ties resolve to the lowest centroid index.
    """
    X = np.asarray(X, dtype=np.float64)
    C = np.asarray(C, dtype=np.float64)
    # chunked ||x||^2 - 2 x.c + ||c||^2 to bound the distance-matrix size
    cn = (C * C).sum(axis=1)
    out = np.empty(X.shape[0], dtype=np.int64)
    step = max(1, 8_000_000 // max(1, C.shape[0]))
    for lo in range(0, X.shape[0], step):
        hi = min(lo + step, X.shape[0])
        d2 = -2.0 * (X[lo:hi] @ C.T)
        d2 += cn[None, :]
        out[lo:hi] = np.argmin(d2, axis=1)
    return out


def contrast_normalize_rows(X, eps_c):
    """Zero-mean unit-variance rows; near-constant rows map to zeros."""
    X = np.asarray(X, dtype=np.float64)
    mu = X.mean(axis=1, keepdims=True)
    Xc = X - mu
    var = (Xc * Xc).mean(axis=1, keepdims=True)
    scale = np.where(var < eps_c, 0.0, 1.0 / np.sqrt(np.where(var > 0, var, 1.0)))
    return Xc * scale


def encode_histogram(img, mean, whiten, centroids, patch, eps_c):
    """Quadrant histogram of codebook assignments over all sliding windows.

    Same semantics as the compiled kernel: window (r, c) is counted in the
    quadrant of its center pixel (r + (patch-1)//2, c + (patch-1)//2), with
    quadrant boundaries at half the image height/width.
    """
    img = np.asarray(img, dtype=np.float64)
    H, W = img.shape
    k = centroids.shape[0]
    nr = H - patch + 1
    nc = W - patch + 1
    windows = sliding_window_view(img, (patch, patch)).reshape(nr * nc, patch * patch)
    Xn = contrast_normalize_rows(windows, eps_c)
    Z = (Xn - mean) @ whiten.T
    idx = assign_nearest(Z, centroids)

    off = (patch - 1) // 2
    qr = (np.arange(nr) + off >= H // 2).astype(np.int64)
    qc = (np.arange(nc) + off >= W // 2).astype(np.int64)
    quad = 2 * qr[:, None] + qc[None, :]
    bins = quad.reshape(-1) * k + idx
    return np.bincount(bins, minlength=4 * k).astype(np.int64)

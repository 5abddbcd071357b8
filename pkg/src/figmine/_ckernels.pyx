# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops: SMO dual solver, nearest-centroid assignment,
and the windowed patch-histogram encoder.

figmine.kernels selects this module when it built, and falls back to the
numpy implementations in figmine.kernels.numpy_backend otherwise. Both
backends implement the same algorithms; see benchmarks/bench_kernels.py.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, sqrt

cnp.import_array()

DEF TAU = 1e-12


def smo_solve(double[:, ::1] K, double[::1] y, double C, double tol,
              long max_iter):
    """Solve the soft-margin SVM dual over a precomputed kernel matrix.

    minimize 0.5 * a' Q a - sum(a)  with Q_ij = y_i y_j K_ij,
    subject to 0 <= a_i <= C and sum(a_i y_i) = 0.

    Pair selection is the maximal-violating-pair rule with a second-order
    gain criterion for the second index; ties resolve to the lowest index.

    Returns (alpha, bias, iterations, kkt_gap).
    """
    cdef Py_ssize_t n = K.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] alpha_arr = np.zeros(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] grad_arr = np.full(n, -1.0)
    cdef double[::1] alpha = alpha_arr
    cdef double[::1] grad = grad_arr
    cdef Py_ssize_t i, j, t
    cdef long it = 0
    cdef double m, M, v, bt, at, gain, best
    cdef double quad, delta, diff, s
    cdef double kii, kjj, kij, old_ai, old_aj, dai, daj, yi, yj
    cdef double gap = INFINITY

    while it < max_iter:
        # first index: maximal violation over the "up" set
        i = -1
        m = -INFINITY
        M = INFINITY
        for t in range(n):
            v = -y[t] * grad[t]
            if (y[t] > 0 and alpha[t] < C) or (y[t] < 0 and alpha[t] > 0):
                if v > m:
                    m = v
                    i = t
            if (y[t] > 0 and alpha[t] > 0) or (y[t] < 0 and alpha[t] < C):
                if v < M:
                    M = v
        gap = m - M
        if i < 0 or gap <= tol:
            break

        # second index: best second-order gain over the "low" set
        j = -1
        best = -INFINITY
        kii = K[i, i]
        for t in range(n):
            if (y[t] > 0 and alpha[t] > 0) or (y[t] < 0 and alpha[t] < C):
                v = -y[t] * grad[t]
                bt = m - v
                if bt > 0:
                    at = kii + K[t, t] - 2.0 * K[i, t]
                    if at <= 0:
                        at = TAU
                    gain = bt * bt / at
                    if gain > best:
                        best = gain
                        j = t
        if j < 0:
            break

        yi = y[i]
        yj = y[j]
        kjj = K[j, j]
        kij = K[i, j]
        quad = kii + kjj - 2.0 * kij
        if quad <= 0:
            quad = TAU
        old_ai = alpha[i]
        old_aj = alpha[j]

        if yi * yj < 0:
            delta = (-grad[i] - grad[j]) / quad
            diff = alpha[i] - alpha[j]
            alpha[i] += delta
            alpha[j] += delta
            if diff > 0:
                if alpha[j] < 0:
                    alpha[j] = 0
                    alpha[i] = diff
            else:
                if alpha[i] < 0:
                    alpha[i] = 0
                    alpha[j] = -diff
            if diff > 0:
                if alpha[i] > C:
                    alpha[i] = C
                    alpha[j] = C - diff
            else:
                if alpha[j] > C:
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
            else:
                if alpha[j] < 0:
                    alpha[j] = 0
                    alpha[i] = s
            if s > C:
                if alpha[j] > C:
                    alpha[j] = C
                    alpha[i] = s - C
            else:
                if alpha[i] < 0:
                    alpha[i] = 0
                    alpha[j] = s

        dai = alpha[i] - old_ai
        daj = alpha[j] - old_aj
        for t in range(n):
            grad[t] += y[t] * (yi * K[i, t] * dai + yj * K[j, t] * daj)
        it += 1

    # bias from free support vectors, else midpoint of the violation bracket
    cdef double acc = 0.0
    cdef Py_ssize_t nfree = 0
    for t in range(n):
        if 0 < alpha[t] < C:
            acc += -y[t] * grad[t]
            nfree += 1
    cdef double bias
    if nfree > 0:
        bias = acc / nfree
    elif m > -INFINITY and M < INFINITY:
        bias = (m + M) / 2.0
    else:
        bias = 0.0
    return alpha_arr, bias, it, gap


def assign_nearest(double[:, ::1] X, double[:, ::1] C):
    """Index of the nearest row of C for each row of X (squared Euclidean).

    Ties resolve to the lowest centroid index.
    """
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t d = X.shape[1]
    cdef Py_ssize_t k = C.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out_arr = np.empty(n, dtype=np.int64)
    cdef long[::1] out = out_arr
    cdef Py_ssize_t r, c, p
    cdef double dist, best, diff
    for r in range(n):
        best = INFINITY
        out[r] = 0
        for c in range(k):
            dist = 0.0
            for p in range(d):
                diff = X[r, p] - C[c, p]
                dist += diff * diff
            if dist < best:
                best = dist
                out[r] = c
    return out_arr


def encode_histogram(double[:, ::1] img, double[::1] mean,
                     double[:, ::1] whiten, double[:, ::1] centroids,
                     long patch, double eps_c):
    """Quadrant histogram of codebook assignments over all sliding windows.

    Every patch x patch window is contrast-normalized (near-constant windows
    map to the zero vector), whitened, assigned to its nearest centroid, and
    counted in the histogram of the quadrant holding the window's center
    pixel. Returns an int64 vector of length 4 * k.
    """
    cdef Py_ssize_t H = img.shape[0]
    cdef Py_ssize_t W = img.shape[1]
    cdef Py_ssize_t d = patch * patch
    cdef Py_ssize_t k = centroids.shape[0]
    cdef Py_ssize_t nr = H - patch + 1
    cdef Py_ssize_t nc = W - patch + 1
    cdef Py_ssize_t half_r = H // 2
    cdef Py_ssize_t half_c = W // 2
    cdef Py_ssize_t off = (patch - 1) // 2
    cdef cnp.ndarray[cnp.int64_t, ndim=1] hist_arr = np.zeros(4 * k, dtype=np.int64)
    cdef long[::1] hist = hist_arr
    cdef cnp.ndarray[cnp.float64_t, ndim=1] buf_arr = np.empty(d)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] z_arr = np.empty(d)
    cdef double[::1] buf = buf_arr
    cdef double[::1] z = z_arr
    cdef Py_ssize_t r, c, pr, pc, p, q, ci, quad
    cdef double mu, var, val, scale, dist, best, diff, acc

    for r in range(nr):
        for c in range(nc):
            mu = 0.0
            p = 0
            for pr in range(patch):
                for pc in range(patch):
                    buf[p] = img[r + pr, c + pc]
                    mu += buf[p]
                    p += 1
            mu /= d
            var = 0.0
            for p in range(d):
                val = buf[p] - mu
                buf[p] = val
                var += val * val
            var /= d
            if var < eps_c:
                for p in range(d):
                    buf[p] = 0.0
            else:
                scale = 1.0 / sqrt(var)
                for p in range(d):
                    buf[p] *= scale
            # whiten: z = whiten @ (buf - mean)
            for p in range(d):
                buf[p] -= mean[p]
            for q in range(d):
                acc = 0.0
                for p in range(d):
                    acc += whiten[q, p] * buf[p]
                z[q] = acc
            # nearest centroid, lowest index on ties
            best = INFINITY
            ci = 0
            for q in range(k):
                dist = 0.0
                for p in range(d):
                    diff = z[p] - centroids[q, p]
                    dist += diff * diff
                if dist < best:
                    best = dist
                    ci = q
            quad = 0
            if r + off >= half_r:
                quad += 2
            if c + off >= half_c:
                quad += 1
            hist[quad * k + ci] += 1
    return hist_arr

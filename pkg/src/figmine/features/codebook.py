"""Patch codebook: k-means over whitened patches, plus binary persistence."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from figmine import serialization
from figmine.errors import InsufficientData
from figmine.features.image import NORM_SIZE
from figmine.features.patches import PATCH_SIZE
from figmine.features.whitening import WhiteningTransform
from figmine.kernels import assign_nearest

DEFAULT_K = 200
MAX_ITER = 100
SHIFT_TOL = 1e-6


@dataclass
class Codebook:
    k: int
    centroids: np.ndarray
    whitening: WhiteningTransform
    patch_size: int = PATCH_SIZE
    image_size: int = NORM_SIZE

    def save(self, path, extra_meta=None):
        meta = {
            "k": self.k,
            "patch_size": self.patch_size,
            "image_size": self.image_size,
            "eps_zca": self.whitening.eps_zca,
        }
        if extra_meta:
            meta.update(extra_meta)
        serialization.write_arrays(
            path,
            serialization.MAGIC_CODEBOOK,
            {
                "centroids": self.centroids,
                "whitening_mean": self.whitening.mean,
                "whitening_transform": self.whitening.transform,
            },
            meta=meta,
        )

    @classmethod
    def load(cls, path):
        arrays, meta = serialization.read_arrays(path, serialization.MAGIC_CODEBOOK)
        wt = WhiteningTransform(
            mean=arrays["whitening_mean"],
            transform=arrays["whitening_transform"],
            eps_zca=float(meta["eps_zca"]),
        )
        return cls(
            k=int(meta["k"]),
            centroids=arrays["centroids"],
            whitening=wt,
            patch_size=int(meta["patch_size"]),
            image_size=int(meta["image_size"]),
        )


def _kmeans_pp_init(X, k, rng):
    n = X.shape[0]
    centroids = np.empty((k, X.shape[1]))
    idx = rng.integers(0, n)
    centroids[0] = X[idx]
    d2 = ((X - centroids[0]) ** 2).sum(axis=1)
    for i in range(1, k):
        total = d2.sum()
        if total <= 0:
            idx = rng.integers(0, n)
        else:
            idx = rng.choice(n, p=d2 / total)
        centroids[i] = X[idx]
        d2 = np.minimum(d2, ((X - centroids[i]) ** 2).sum(axis=1))
    return centroids


def kmeans(X, k, seed=0, max_iter=MAX_ITER, shift_tol=SHIFT_TOL):
    """Lloyd's algorithm with k-means++ seeding.

    Empty clusters are re-seeded from the point farthest from its centroid.
    Returns (centroids, assignments, objective_history).
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    n = X.shape[0]
    if n < k:
        raise InsufficientData(f"need at least {k} points, got {n}")
    rng = np.random.default_rng(seed)
    centroids = _kmeans_pp_init(X, k, rng)
    history = []
    assign = None
    for _ in range(max_iter):
        assign = np.asarray(assign_nearest(X, np.ascontiguousarray(centroids)))
        sq = ((X - centroids[assign]) ** 2).sum(axis=1)
        history.append(float(sq.sum()))
        new_centroids = np.zeros_like(centroids)
        counts = np.bincount(assign, minlength=k).astype(np.float64)
        np.add.at(new_centroids, assign, X)
        empty = counts == 0
        nonzero = np.where(~empty, counts, 1.0)
        new_centroids /= nonzero[:, None]
        if empty.any():
            # steal the currently worst-fit points as fresh centroids
            order = np.argsort(-sq)
            for slot, pt in zip(np.flatnonzero(empty), order):
                new_centroids[slot] = X[pt]
        shift = np.abs(new_centroids - centroids).max()
        centroids = new_centroids
        if shift < shift_tol:
            break
    assign = np.asarray(assign_nearest(X, np.ascontiguousarray(centroids)))
    return centroids, assign, history


def build_codebook(patches, whitening, k=DEFAULT_K, seed=0,
                   patch_size=PATCH_SIZE, image_size=NORM_SIZE):
    """Cluster whitened patches into a k-centroid codebook."""
    patches = np.atleast_2d(np.asarray(patches, dtype=np.float64))
    if patches.shape[0] < k:
        raise InsufficientData(f"need at least {k} patches, got {patches.shape[0]}")
    Z = whitening.apply(patches)
    centroids, _, _ = kmeans(Z, k, seed=seed)
    return Codebook(
        k=k,
        centroids=centroids,
        whitening=whitening,
        patch_size=patch_size,
        image_size=image_size,
    )

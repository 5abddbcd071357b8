"""Random patch extraction and contrast normalization."""

from __future__ import annotations

import numpy as np

from figmine.errors import InvalidParameter
from figmine.kernels.numpy_backend import contrast_normalize_rows

PATCH_SIZE = 6

# variance cutoff below which a patch counts as constant and maps to zeros
EPS_CONTRAST = 10.0 / 255.0**2


def contrast_normalize(patches, eps_c=EPS_CONTRAST):
    """Zero-mean unit-variance rows; rows with variance < eps_c become zero."""
    return contrast_normalize_rows(np.atleast_2d(patches), eps_c)


def sample_patches(images, per_image=100, seed=0, patch_size=PATCH_SIZE, normalize=True):
    """Extract `per_image` random patch vectors from each normalized image.

    Returns an (n_images * per_image, patch_size**2) float array. Sampling is
    uniform over window origins, with replacement, deterministic under seed.
    """
    if per_image < 1:
        raise InvalidParameter(f"per_image must be >= 1, got {per_image}")
    rng = np.random.default_rng(seed)
    out = []
    for img in images:
        a = np.asarray(img, dtype=np.float64)
        h, w = a.shape
        if h < patch_size or w < patch_size:
            raise InvalidParameter(f"image {h}x{w} smaller than patch {patch_size}")
        rows = rng.integers(0, h - patch_size + 1, size=per_image)
        cols = rng.integers(0, w - patch_size + 1, size=per_image)
        for r, c in zip(rows, cols):
            out.append(a[r : r + patch_size, c : c + patch_size].reshape(-1))
    patches = np.array(out)
    if normalize:
        patches = contrast_normalize(patches)
    return patches

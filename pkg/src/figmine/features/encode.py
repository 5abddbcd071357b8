"""Encode a normalized image as a quadrant histogram over the codebook."""

from __future__ import annotations

import numpy as np

from figmine.errors import InvalidImage
from figmine.features.patches import EPS_CONTRAST
from figmine.kernels import encode_histogram


def encode(img, codebook):
    """Feature vector of length 4k: per-quadrant counts of nearest-centroid
    assignments over every sliding patch window. The total count equals
    (size - patch + 1)**2; for the production 128/6 geometry that is 15,129.
    """
    a = np.ascontiguousarray(img, dtype=np.float64)
    s = codebook.image_size
    if a.shape != (s, s):
        raise InvalidImage(f"expected {s}x{s} image, got {a.shape}")
    return np.asarray(
        encode_histogram(
            a,
            np.ascontiguousarray(codebook.whitening.mean, dtype=np.float64),
            np.ascontiguousarray(codebook.whitening.transform, dtype=np.float64),
            np.ascontiguousarray(codebook.centroids, dtype=np.float64),
            codebook.patch_size,
            EPS_CONTRAST,
        )
    )

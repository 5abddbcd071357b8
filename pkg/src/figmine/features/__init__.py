"""Image feature pipeline: normalize, sample patches, whiten, cluster, encode."""

from figmine.features.codebook import Codebook, build_codebook, kmeans
from figmine.features.encode import encode
from figmine.features.image import NORM_SIZE, normalize_image, to_gray_array
from figmine.features.patches import (
    EPS_CONTRAST,
    PATCH_SIZE,
    contrast_normalize,
    sample_patches,
)
from figmine.features.whitening import EPS_ZCA, WhiteningTransform, fit_whitening

__all__ = [
    "Codebook",
    "build_codebook",
    "kmeans",
    "encode",
    "NORM_SIZE",
    "normalize_image",
    "to_gray_array",
    "EPS_CONTRAST",
    "PATCH_SIZE",
    "contrast_normalize",
    "sample_patches",
    "EPS_ZCA",
    "WhiteningTransform",
    "fit_whitening",
]

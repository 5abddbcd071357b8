"""Image loading and size normalization for the feature pipeline."""

from __future__ import annotations

import numpy as np
from PIL import Image

from figmine.errors import InvalidImage

NORM_SIZE = 128


def to_gray_array(img):
    """Coerce a PIL image or numpy array to a float64 luminance array in [0,1]."""
    if isinstance(img, Image.Image):
        if img.mode != "L":
            img = img.convert("L")
        return np.asarray(img, dtype=np.float64) / 255.0
    a = np.asarray(img)
    if a.ndim == 3:
        a = np.asarray(Image.fromarray(a.astype(np.uint8)).convert("L"))
    if a.dtype == np.uint8:
        return a.astype(np.float64) / 255.0
    return np.clip(a.astype(np.float64), 0.0, 1.0)


def normalize_image(img, size=NORM_SIZE):
    """Scale so the longer edge equals `size` (aspect preserved) and center
    the content on a white size x size canvas. Returns float64 in [0,1]."""
    a = to_gray_array(img)
    if a.ndim != 2 or a.shape[0] == 0 or a.shape[1] == 0:
        raise InvalidImage(f"zero-area or non-2D image: shape {a.shape}")
    h, w = a.shape
    if (h, w) == (size, size):
        return a
    scale = size / max(h, w)
    nh = max(1, round(h * scale))
    nw = max(1, round(w * scale))
    resized = Image.fromarray(a.astype(np.float32), mode="F").resize(
        (nw, nh), Image.BILINEAR
    )
    content = np.clip(np.asarray(resized, dtype=np.float64), 0.0, 1.0)
    canvas = np.ones((size, size))
    y0 = (size - nh) // 2
    x0 = (size - nw) // 2
    canvas[y0 : y0 + nh, x0 : x0 + nw] = content
    return canvas


def downscale_cap(pil_img, cap=1280):
    """Downscale a PIL image so its longer edge is at most `cap` pixels.
    Returns (image, was_resized). Never upscales."""
    w, h = pil_img.size
    longer = max(w, h)
    if longer <= cap:
        return pil_img, False
    scale = cap / longer
    nw = max(1, round(w * scale))
    nh = max(1, round(h * scale))
    if longer == w:
        nw = cap
    else:
        nh = cap
    return pil_img.resize((nw, nh), Image.BILINEAR), True

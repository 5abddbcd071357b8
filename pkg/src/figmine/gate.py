"""Multi-panel routing gate: density-map features over effective figure
regions, fed to a binary SVM that separates multichart from singleton images.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from figmine import serialization
from figmine.dismantler import DismantleConfig, split
from figmine.errors import InsufficientData, InvalidRegion
from figmine.records import Rect
from figmine.svm.model import SvmModel, SvmParams, predict, train

DENSITY_N = 10
CONTENT_THRESHOLD = 0.95  # luminance below this counts as content


@dataclass
class EfrDensityMap:
    n: int
    densities: np.ndarray  # n x n, entries in [0, 1]

    def flatten(self):
        return self.densities.reshape(-1)


@dataclass
class CorpusStats:
    height_avg: float
    width_avg: float

    @classmethod
    def from_shapes(cls, shapes):
        shapes = list(shapes)
        if not shapes:
            raise InsufficientData("no images for corpus stats")
        return cls(
            height_avg=float(np.mean([s[0] for s in shapes])),
            width_avg=float(np.mean([s[1] for s in shapes])),
        )


def compute_efr_mask(img, config=DismantleConfig(), threshold=CONTENT_THRESHOLD):
    """Minimal content rectangles, one per non-blank split block."""
    gray = np.asarray(img, dtype=np.float64)
    regions = []
    for leaf in split(gray, config).leaves():
        b = leaf.bbox
        sub = gray[b.y0 : b.y1, b.x0 : b.x1] < threshold
        rows = np.flatnonzero(sub.any(axis=1))
        if rows.size == 0:
            continue
        cols = np.flatnonzero(sub.any(axis=0))
        regions.append(
            Rect(
                b.x0 + int(cols[0]),
                b.y0 + int(rows[0]),
                b.x0 + int(cols[-1]) + 1,
                b.y0 + int(rows[-1]) + 1,
            )
        )
    return regions


def efr_density_map(regions, image_dims, n=DENSITY_N):
    """Fraction of each n x n block covered by the region union.

    image_dims is (height, width); remainder pixels go to the last
    row/column of blocks.
    """
    h, w = image_dims
    bounds = Rect(0, 0, w, h)
    mask = np.zeros((h, w), dtype=bool)
    for r in regions:
        if not bounds.contains(r):
            raise InvalidRegion(f"region {r} outside {h}x{w}")
        mask[r.y0 : r.y1, r.x0 : r.x1] = True
    bh, bw = h // n, w // n
    densities = np.zeros((n, n))
    for i in range(n):
        y0 = i * bh
        y1 = (i + 1) * bh if i < n - 1 else h
        for j in range(n):
            x0 = j * bw
            x1 = (j + 1) * bw if j < n - 1 else w
            block = mask[y0:y1, x0:x1]
            densities[i, j] = block.mean() if block.size else 0.0
    return EfrDensityMap(n=n, densities=densities)


def gate_feature(img, corpus_stats, config=DismantleConfig(), n=DENSITY_N,
                 threshold=CONTENT_THRESHOLD):
    """Feature vector [height ratio, width ratio, n*n densities]; 102 dims
    at the default n."""
    gray = np.asarray(img, dtype=np.float64)
    regions = compute_efr_mask(gray, config, threshold)
    dmap = efr_density_map(regions, gray.shape, n)
    return np.concatenate(
        [
            [gray.shape[0] / corpus_stats.height_avg, gray.shape[1] / corpus_stats.width_avg],
            dmap.flatten(),
        ]
    )


@dataclass
class GateModel:
    model: SvmModel
    stats: CorpusStats
    n: int = DENSITY_N
    threshold: float = CONTENT_THRESHOLD

    def save(self, path):
        self.model.save(
            path,
            extra_meta={
                "gate_height_avg": self.stats.height_avg,
                "gate_width_avg": self.stats.width_avg,
                "gate_n": self.n,
                "gate_threshold": self.threshold,
            },
        )

    @classmethod
    def load(cls, path):
        model = SvmModel.load(path)
        _, meta = serialization.read_arrays(path, serialization.MAGIC_SVM)
        return cls(
            model=model,
            stats=CorpusStats(
                height_avg=float(meta["gate_height_avg"]),
                width_avg=float(meta["gate_width_avg"]),
            ),
            n=int(meta["gate_n"]),
            threshold=float(meta["gate_threshold"]),
        )


def train_gate(images, labels, params=SvmParams(), config=DismantleConfig(),
               scale=True):
    """Fit a binary gate-style model; corpus stats freeze at training time.

    Works for the multichart/singleton gate and for the dismantler's
    standalone/auxiliary fragment model alike.
    """
    shapes = [np.asarray(im).shape for im in images]
    stats = CorpusStats.from_shapes(shapes)
    feats = np.array([gate_feature(im, stats, config) for im in images])
    model = train(feats, list(labels), params, scale=scale)
    return GateModel(model=model, stats=stats)


def classify_gate(img, corpus_stats, model, config=DismantleConfig(),
                  n=DENSITY_N, threshold=CONTENT_THRESHOLD):
    """(label, probability of that label) for one image."""
    feat = gate_feature(img, corpus_stats, config, n, threshold)
    label, probs = predict(model, feat)
    return label, float(np.max(probs))


def classify_with(gate_model, img, config=DismantleConfig()):
    return classify_gate(
        img, gate_model.stats, gate_model.model, config,
        gate_model.n, gate_model.threshold,
    )

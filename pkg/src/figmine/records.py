"""Core record types and the on-disk manifest.

A manifest directory holds papers.jsonl, figures.jsonl, and a
content-addressed image store under images/<sha256>.png. All downstream
stages read the manifest; only ingest and the dismantler write to it.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from figmine.errors import InvalidRegion, NotFound

SINGLETON_CLASSES = ("diagram", "equation", "photo", "plot", "table")
ALL_LABELS = SINGLETON_CLASSES + ("multichart", "unclassified")


@dataclass(frozen=True)
class Rect:
    """Axis-aligned pixel rectangle, half-open: [x0, x1) x [y0, y1)."""

    x0: int
    y0: int
    x1: int
    y1: int

    @property
    def width(self):
        return self.x1 - self.x0

    @property
    def height(self):
        return self.y1 - self.y0

    @property
    def area(self):
        return max(0, self.width) * max(0, self.height)

    def is_empty(self):
        return self.x1 <= self.x0 or self.y1 <= self.y0

    def contains(self, other):
        return (
            self.x0 <= other.x0
            and self.y0 <= other.y0
            and other.x1 <= self.x1
            and other.y1 <= self.y1
        )

    def intersect(self, other):
        return Rect(
            max(self.x0, other.x0),
            max(self.y0, other.y0),
            min(self.x1, other.x1),
            min(self.y1, other.y1),
        )

    def union_bbox(self, other):
        return Rect(
            min(self.x0, other.x0),
            min(self.y0, other.y0),
            max(self.x1, other.x1),
            max(self.y1, other.y1),
        )

    def overlaps(self, other):
        return not self.intersect(other).is_empty()

    def iou(self, other):
        inter = self.intersect(other).area
        if inter == 0:
            return 0.0
        return inter / (self.area + other.area - inter)

    def to_list(self):
        return [self.x0, self.y0, self.x1, self.y1]

    @classmethod
    def from_list(cls, xs):
        return cls(int(xs[0]), int(xs[1]), int(xs[2]), int(xs[3]))


@dataclass
class PaperRecord:
    paper_id: str
    title: str = ""
    abstract: str = ""
    journal: str = ""
    topic: str | None = None
    year: int = 1900
    page_count: int = 1
    alef_score: float | None = None
    source_uri: str = ""

    def validate(self, current_year=2100):
        if not self.paper_id:
            raise ValueError("paper_id must be nonempty")
        if self.page_count < 1:
            raise ValueError(f"page_count must be >= 1, got {self.page_count}")
        if not 1900 <= self.year <= current_year:
            raise ValueError(f"year {self.year} outside [1900, {current_year}]")
        if self.alef_score is not None and self.alef_score < 0:
            raise ValueError("alef_score must be nonnegative")

    def to_dict(self):
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d):
        known = {f.name for f in dataclasses.fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in known})


@dataclass
class FigureRecord:
    figure_id: str
    paper_id: str
    image_key: str
    caption: str = ""
    width: int = 0
    height: int = 0
    label: str = "unclassified"
    class_probs: list[float] | None = None
    gate_prob: float | None = None  # probability of the routing decision
    parent_figure_id: str | None = None
    bbox_in_parent: Rect | None = None

    def validate(self):
        if self.label not in ALL_LABELS:
            raise ValueError(f"unknown label {self.label!r}")
        if self.label in SINGLETON_CLASSES:
            if self.class_probs is None or len(self.class_probs) != len(SINGLETON_CLASSES):
                raise ValueError("class_probs must hold one probability per class")
            if min(self.class_probs) < 0 or abs(sum(self.class_probs) - 1.0) > 1e-9:
                raise ValueError("class_probs must be nonnegative and sum to 1")
        if (self.parent_figure_id is None) != (self.bbox_in_parent is None):
            raise ValueError("parent_figure_id and bbox_in_parent must be set together")

    def validate_against_parent(self, parent_width, parent_height):
        if self.bbox_in_parent is None:
            return
        bounds = Rect(0, 0, parent_width, parent_height)
        if not bounds.contains(self.bbox_in_parent):
            raise InvalidRegion(
                f"bbox {self.bbox_in_parent} outside parent {parent_width}x{parent_height}"
            )

    def to_dict(self):
        d = dataclasses.asdict(self)
        if self.bbox_in_parent is not None:
            d["bbox_in_parent"] = self.bbox_in_parent.to_list()
        return d

    @classmethod
    def from_dict(cls, d):
        known = {f.name for f in dataclasses.fields(cls)}
        d = {k: v for k, v in d.items() if k in known}
        if d.get("bbox_in_parent") is not None:
            d["bbox_in_parent"] = Rect.from_list(d["bbox_in_parent"])
        return cls(**d)


@dataclass
class IngestReport:
    seen: int = 0
    dropped: dict = field(default_factory=dict)
    resized: int = 0
    retained: int = 0
    warnings: list = field(default_factory=list)

    @property
    def total_dropped(self):
        return sum(self.dropped.values())

    def check_balance(self):
        if self.seen != self.total_dropped + self.retained:
            raise ValueError(
                f"report does not balance: seen={self.seen} "
                f"dropped={self.total_dropped} retained={self.retained}"
            )

    def to_dict(self):
        return {
            "seen": self.seen,
            "dropped": dict(sorted(self.dropped.items())),
            "resized": self.resized,
            "retained": self.retained,
            "warnings": list(self.warnings),
        }


def _dump_line(d):
    return json.dumps(d, sort_keys=True, separators=(",", ":"))


class Manifest:
    """Reader/writer for a manifest directory."""

    def __init__(self, root):
        self.root = Path(root)

    @property
    def papers_path(self):
        return self.root / "papers.jsonl"

    @property
    def figures_path(self):
        return self.root / "figures.jsonl"

    @property
    def images_dir(self):
        return self.root / "images"

    def exists(self):
        return self.papers_path.exists() and self.figures_path.exists()

    def write(self, papers, figures):
        """Write the full manifest; records sorted by id for determinism."""
        self.root.mkdir(parents=True, exist_ok=True)
        self.images_dir.mkdir(exist_ok=True)
        with open(self.papers_path, "w") as f:
            for p in sorted(papers, key=lambda p: p.paper_id):
                f.write(_dump_line(p.to_dict()) + "\n")
        with open(self.figures_path, "w") as f:
            for g in sorted(figures, key=lambda g: g.figure_id):
                f.write(_dump_line(g.to_dict()) + "\n")

    def load_papers(self):
        with open(self.papers_path) as f:
            return [PaperRecord.from_dict(json.loads(line)) for line in f if line.strip()]

    def load_figures(self):
        with open(self.figures_path) as f:
            return [FigureRecord.from_dict(json.loads(line)) for line in f if line.strip()]

    def store_image(self, png_bytes):
        """Save PNG bytes under their content hash; return the image key."""
        key = hashlib.sha256(png_bytes).hexdigest() + ".png"
        path = self.images_dir / key
        if not path.exists():
            self.images_dir.mkdir(parents=True, exist_ok=True)
            path.write_bytes(png_bytes)
        return key

    def image_path(self, image_key):
        path = self.images_dir / image_key
        if not path.exists():
            raise NotFound(f"image {image_key} not in store")
        return path

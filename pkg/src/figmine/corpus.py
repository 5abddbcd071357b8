"""Corpus ingestion: image filtering rules and manifest assembly."""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from figmine.errors import DecodeError, NotFound, UnsupportedFormat
from figmine.features.image import downscale_cap
from figmine.records import FigureRecord, IngestReport, Manifest, PaperRecord

ACCEPTED_FORMATS = {"GIF", "JPEG", "TIFF", "PNG"}
MAX_EDGE = 1280

# full-paper print heuristic: portrait page aspect + dense text rows
PAGE_ASPECT = (0.70, 0.80)
TEXT_ROW_DARK_RANGE = (0.05, 0.5)
TEXT_ROW_COVERAGE = 0.6
DARK_LUMINANCE = 0.5


@dataclass
class FilterDecision:
    action: str  # "keep" or "drop"
    reason: str | None = None
    image: Image.Image | None = None
    resized: bool = False

    @property
    def kept(self):
        return self.action == "keep"


def _looks_like_page_print(gray):
    h, w = gray.shape
    aspect = w / h
    if not PAGE_ASPECT[0] <= aspect <= PAGE_ASPECT[1]:
        return False
    dark = (gray < DARK_LUMINANCE).mean(axis=1)
    lo, hi = TEXT_ROW_DARK_RANGE
    coverage = ((dark >= lo) & (dark <= hi)).mean()
    return coverage > TEXT_ROW_COVERAGE


def filter_image(data, filename=""):
    """Apply the corpus filtering rules to one image file.

    Drops GIFs and page-print scans, converts everything else to grayscale,
    and caps the longer edge at 1280 px. Returns a FilterDecision whose
    image (when kept) is a PIL "L" image ready for PNG storage.
    """
    try:
        img = Image.open(io.BytesIO(data))
        img.load()
    except (UnidentifiedImageError, OSError) as e:
        raise DecodeError(f"cannot decode {filename or 'image bytes'}: {e}") from None
    fmt = img.format or ""
    if fmt not in ACCEPTED_FORMATS:
        raise UnsupportedFormat(f"{filename or 'image'}: format {fmt or 'unknown'}")
    if fmt == "GIF":
        return FilterDecision(action="drop", reason="gif")
    if img.mode != "L":
        img = img.convert("L")
    gray = np.asarray(img, dtype=np.float64) / 255.0
    if _looks_like_page_print(gray):
        return FilterDecision(action="drop", reason="full_paper_print")
    img, resized = downscale_cap(img, MAX_EDGE)
    return FilterDecision(action="keep", image=img, resized=resized)


def _encode_png(img):
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


REQUIRED_PAPER_FIELDS = ("paper_id", "year", "page_count")


def ingest(image_dir, metadata_file, out_dir):
    """Build a manifest from an image directory and JSONL paper metadata.

    Each metadata line describes one paper and lists its figure files:
    {"paper_id": ..., "title": ..., "year": ..., "page_count": ...,
     "figures": [{"file": name, "caption": text}, ...]}.
    Re-running on identical input rewrites an identical manifest.
    """
    image_dir = Path(image_dir)
    manifest = Manifest(out_dir)
    report = IngestReport()
    papers = []
    figures = []
    seen_hashes = set()

    with open(metadata_file) as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            rec = json.loads(line)
            missing = [k for k in REQUIRED_PAPER_FIELDS if k not in rec]
            if missing:
                report.warnings.append(
                    f"line {lineno}: missing fields {missing}, record skipped"
                )
                continue
            paper = PaperRecord.from_dict(rec)
            paper.source_uri = str(metadata_file)
            paper.validate()
            papers.append(paper)
            for i, fig in enumerate(rec.get("figures", [])):
                path = image_dir / fig["file"]
                if not path.exists():
                    raise NotFound(f"line {lineno}: image file {path} not found")
                report.seen += 1
                decision = filter_image(path.read_bytes(), fig["file"])
                if not decision.kept:
                    report.dropped[decision.reason] = (
                        report.dropped.get(decision.reason, 0) + 1
                    )
                    continue
                png = _encode_png(decision.image)
                key = manifest.store_image(png)
                if key in seen_hashes:
                    report.dropped["duplicate"] = report.dropped.get("duplicate", 0) + 1
                    continue
                seen_hashes.add(key)
                if decision.resized:
                    report.resized += 1
                w, h = decision.image.size
                figures.append(
                    FigureRecord(
                        figure_id=f"{paper.paper_id}/fig{i}",
                        paper_id=paper.paper_id,
                        image_key=key,
                        caption=fig.get("caption", ""),
                        width=w,
                        height=h,
                    )
                )
                report.retained += 1

    manifest.write(papers, figures)
    report.check_balance()
    with open(manifest.root / "ingest_report.json", "w") as f:
        json.dump(report.to_dict(), f, sort_keys=True, indent=2)
        f.write("\n")
    return report


def load_image(manifest, image_key):
    """Stored PNG as a float64 grayscale array in [0,1]."""
    with Image.open(manifest.image_path(image_key)) as img:
        return np.asarray(img.convert("L"), dtype=np.float64) / 255.0

"""Decompose multi-panel figures into standalone sub-figures.

Pipeline: recursive background-gutter splitting into a fragment tree,
standalone/auxiliary classification of the leaves, then score-driven
merging of auxiliary fragments into neighboring standalone groups.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from figmine.records import Rect

BG_TOLERANCE = 0.05
BG_ROW_FRACTION = 0.99
MIN_GUTTER = 8
MIN_FRAGMENT = 24
MERGE_WEIGHTS = (1.0, 1.0, 0.5)


@dataclass(frozen=True)
class DismantleConfig:
    min_gutter: int = MIN_GUTTER
    min_fragment: int = MIN_FRAGMENT
    bg_tolerance: float = BG_TOLERANCE
    bg_row_fraction: float = BG_ROW_FRACTION
    merge_weights: tuple = MERGE_WEIGHTS


@dataclass
class FragmentNode:
    bbox: Rect
    children: list = field(default_factory=list)
    split_axis: str = "leaf"  # gutter orientation; children stack across it

    def leaves(self):
        if not self.children:
            yield self
        else:
            for c in self.children:
                yield from c.leaves()


@dataclass
class SubFigure:
    bbox: Rect
    members: list
    kind: str  # "standalone-derived" or "merged"
    flag: str | None = None


def estimate_background(gray):
    """Modal border luminance from the 1-px frame histogram (256 levels)."""
    frame = np.concatenate([gray[0], gray[-1], gray[1:-1, 0], gray[1:-1, -1]])
    counts = np.bincount(np.clip(np.round(frame * 255).astype(int), 0, 255), minlength=256)
    return int(np.argmax(counts)) / 255.0


def _background_mask(gray, bg, tol):
    return np.abs(gray - bg) <= tol


def _content_bbox(is_bg, region):
    """Minimal rect of non-background pixels inside region; None if blank."""
    sub = is_bg[region.y0 : region.y1, region.x0 : region.x1]
    content = ~sub
    rows = np.flatnonzero(content.any(axis=1))
    if rows.size == 0:
        return None
    cols = np.flatnonzero(content.any(axis=0))
    return Rect(
        region.x0 + int(cols[0]),
        region.y0 + int(rows[0]),
        region.x0 + int(cols[-1]) + 1,
        region.y0 + int(rows[-1]) + 1,
    )


def _gutter_cuts(is_bg, region, axis, config):
    """Centers of interior background bands >= min_gutter thick along axis.

    axis "horizontal": bands of full-width background rows (cut positions are
    y coordinates); "vertical": background columns (x coordinates).
    """
    sub = is_bg[region.y0 : region.y1, region.x0 : region.x1]
    line_is_bg = sub.mean(axis=1 if axis == "horizontal" else 0) >= config.bg_row_fraction
    n = line_is_bg.size
    cuts = []
    start = None
    for i in range(n + 1):
        bg = line_is_bg[i] if i < n else False
        if bg and start is None:
            start = i
        elif not bg and start is not None:
            # interior band only: content must exist on both sides
            if start > 0 and i < n and (i - start) >= config.min_gutter:
                cuts.append(start + (i - start) // 2)
            start = None
    base = region.y0 if axis == "horizontal" else region.x0
    return [base + c for c in cuts]


def split(img, config=DismantleConfig()):
    """Recursive gutter split; returns the FragmentNode tree.

    At each level both gutter orientations are tried and the one yielding
    more cuts wins (ties alternate by depth). Leaves are trimmed to their
    content bounding box; a blank image yields one leaf covering it all.
    """
    gray = np.asarray(img, dtype=np.float64)
    bg = estimate_background(gray)
    is_bg = _background_mask(gray, bg, config.bg_tolerance)
    full = Rect(0, 0, gray.shape[1], gray.shape[0])

    def build(region, depth):
        node = FragmentNode(bbox=region)
        content = _content_bbox(is_bg, region)
        if content is None:
            return node  # blank: keep the region as-is
        if (
            min(content.width, content.height) < config.min_fragment
            and region != full
        ):
            node.bbox = content
            return node
        h_cuts = _gutter_cuts(is_bg, content, "horizontal", config)
        v_cuts = _gutter_cuts(is_bg, content, "vertical", config)
        if len(h_cuts) == len(v_cuts) == 0:
            node.bbox = content
            return node
        if len(h_cuts) > len(v_cuts):
            axis = "horizontal"
        elif len(v_cuts) > len(h_cuts):
            axis = "vertical"
        else:
            axis = "horizontal" if depth % 2 == 0 else "vertical"
        cuts = h_cuts if axis == "horizontal" else v_cuts
        node.split_axis = axis
        if axis == "horizontal":
            edges = [content.y0] + cuts + [content.y1]
            parts = [
                Rect(content.x0, edges[i], content.x1, edges[i + 1])
                for i in range(len(edges) - 1)
            ]
        else:
            edges = [content.x0] + cuts + [content.x1]
            parts = [
                Rect(edges[i], content.y0, edges[i + 1], content.y1)
                for i in range(len(edges) - 1)
            ]
        node.children = [build(p, depth + 1) for p in parts]
        return node

    return build(full, 0)


def classify_fragment(fragment_img, model, config=DismantleConfig()):
    """Label a leaf crop standalone or auxiliary.

    Fragments under min_fragment on either side are auxiliary by rule;
    otherwise the gate-style feature goes through the fragment SVM.
    """
    from figmine import gate  # local import; gate depends on split()

    a = np.asarray(fragment_img, dtype=np.float64)
    h, w = a.shape
    if min(h, w) < config.min_fragment:
        return "auxiliary", 1.0
    label, prob = gate.classify_with(model, a)
    return label, prob


def _gap(a, b):
    dx = max(0, max(a.x0, b.x0) - min(a.x1, b.x1))
    dy = max(0, max(a.y0, b.y0) - min(a.y1, b.y1))
    return max(dx, dy)


def _alignment_overlap(a, b):
    ox = min(a.x1, b.x1) - max(a.x0, b.x0)
    oy = min(a.y1, b.y1) - max(a.y0, b.y0)
    nx = ox / min(a.width, b.width) if ox > 0 else 0.0
    ny = oy / min(a.height, b.height) if oy > 0 else 0.0
    return max(nx, ny)


def _aspect_penalty(r):
    long_side = max(r.width, r.height)
    short_side = max(1, min(r.width, r.height))
    return long_side / short_side - 1.0


def merge_score(aux, group_bbox, weights=MERGE_WEIGHTS):
    w1, w2, w3 = weights
    union = aux.union_bbox(group_bbox)
    return (
        w1 / max(1.0, _gap(aux, group_bbox))
        + w2 * _alignment_overlap(aux, group_bbox)
        - w3 * _aspect_penalty(union)
    )


def merge(tree, fragment_labels, config=DismantleConfig()):
    """Attach auxiliary leaves to standalone groups; returns SubFigures.

    fragment_labels runs parallel to list(tree.leaves()). Each auxiliary
    joins the group maximizing the merge score; ties prefer the top/left
    group. Overlapping groups collapse so the output stays disjoint.
    """
    leaves = list(tree.leaves())
    if len(fragment_labels) != len(leaves):
        raise ValueError("one label per leaf required")
    groups = []
    auxics = []
    for leaf, label in zip(leaves, fragment_labels):
        if label == "standalone":
            groups.append(SubFigure(bbox=leaf.bbox, members=[leaf.bbox], kind="standalone-derived"))
        else:
            auxics.append(leaf.bbox)
    if not groups:
        whole = leaves[0].bbox
        for leaf in leaves[1:]:
            whole = whole.union_bbox(leaf.bbox)
        return [
            SubFigure(
                bbox=whole,
                members=[l.bbox for l in leaves],
                kind="merged",
                flag="all-auxiliary",
            )
        ]

    for aux in sorted(auxics, key=lambda r: (r.y0, r.x0)):
        best = max(
            groups,
            key=lambda g: (merge_score(aux, g.bbox, config.merge_weights), -g.bbox.y0, -g.bbox.x0),
        )
        best.bbox = best.bbox.union_bbox(aux)
        best.members.append(aux)
        best.kind = "merged"

    # collapse any group bboxes the unions made overlap
    changed = True
    while changed:
        changed = False
        groups.sort(key=lambda g: (g.bbox.y0, g.bbox.x0))
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                if groups[i].bbox.overlaps(groups[j].bbox):
                    groups[i].bbox = groups[i].bbox.union_bbox(groups[j].bbox)
                    groups[i].members.extend(groups[j].members)
                    groups[i].kind = "merged"
                    del groups[j]
                    changed = True
                    break
            if changed:
                break
    groups.sort(key=lambda g: (g.bbox.y0, g.bbox.x0))
    return groups


def dismantle(img, fragment_model, config=DismantleConfig()):
    """split -> classify -> merge -> crop. Returns (crops, sub_figures)."""
    gray = np.asarray(img, dtype=np.float64)
    tree = split(gray, config)
    leaves = list(tree.leaves())
    labels = []
    for leaf in leaves:
        b = leaf.bbox
        crop = gray[b.y0 : b.y1, b.x0 : b.x1]
        label, _ = classify_fragment(crop, fragment_model, config)
        labels.append(label)
    subs = merge(tree, labels, config)
    crops = [gray[s.bbox.y0 : s.bbox.y1, s.bbox.x0 : s.bbox.x1] for s in subs]
    return crops, subs

"""Synthetic figure generators for training and property tests.

Five visually distinct singleton families (equation strips, box-arrow
diagrams, noise-texture photos, axis-and-marks plots, ruled tables), plus
montage builders with known panel geometry and auxiliary fragments for the
dismantler. All functions are deterministic given a numpy Generator.

Panels meant for montages keep their strokes thick enough (>= 2% of the
span) that no full-width background band crosses them, so gutter splitting
recovers exactly the panel layout.
"""

from __future__ import annotations

import numpy as np
from PIL import Image, ImageDraw

from figmine.records import Rect

MONTAGE_KINDS = ("diagram", "photo", "plot", "table")


def _canvas(w, h):
    img = Image.new("L", (int(w), int(h)), 255)
    return img, ImageDraw.Draw(img)


def _to_array(img):
    return np.asarray(img, dtype=np.float64) / 255.0


def _stroke(span):
    return max(2, int(0.02 * span) + 1)


def gen_equation(rng, w=None, h=None):
    """Single line of glyph-like marks: strokes, dots, bars, superscripts."""
    w = w or int(rng.integers(220, 380))
    h = h or int(rng.integers(40, 90))
    img, draw = _canvas(w, h)
    base = h // 2 + int(rng.integers(-4, 5))
    x = 8
    while x < w - 16:
        kind = rng.integers(0, 5)
        if kind == 0:  # tall stroke
            lh = int(rng.integers(8, min(22, h - 6)))
            draw.line((x, base - lh, x, base), fill=0, width=2)
        elif kind == 1:  # dot
            draw.ellipse((x, base - 3, x + 3, base), fill=0)
        elif kind == 2:  # horizontal bar (minus / fraction)
            lw = int(rng.integers(8, 20))
            draw.line((x, base - 6, x + lw, base - 6), fill=0, width=2)
            x += lw
        elif kind == 3:  # small box glyph
            s = int(rng.integers(4, 9))
            draw.rectangle((x, base - s, x + s, base), outline=0, width=1)
            x += s
        else:  # superscript stroke
            draw.line((x, base - 16, x, base - 9), fill=0, width=1)
        x += int(rng.integers(6, 15))
    return _to_array(img)


def gen_diagram(rng, w=None, h=None):
    """Outlined boxes joined by a thick connector chain."""
    w = w or int(rng.integers(200, 360))
    h = h or int(rng.integers(180, 340))
    img, draw = _canvas(w, h)
    n = int(rng.integers(3, 7))
    boxes = []
    for _ in range(n):
        bw = int(rng.integers(30, min(75, w // 2)))
        bh = int(rng.integers(24, min(60, h // 2)))
        for _try in range(25):
            x0 = int(rng.integers(2, max(3, w - bw - 2)))
            y0 = int(rng.integers(2, max(3, h - bh - 2)))
            cand = Rect(x0, y0, x0 + bw, y0 + bh)
            if all(not cand.overlaps(b) for b in boxes):
                boxes.append(cand)
                break
    boxes.sort(key=lambda b: (b.y0, b.x0))
    t = _stroke(max(w, h))
    for a, b in zip(boxes, boxes[1:]):
        draw.line(
            ((a.x0 + a.x1) // 2, (a.y0 + a.y1) // 2,
             (b.x0 + b.x1) // 2, (b.y0 + b.y1) // 2),
            fill=0, width=t,
        )
    for b in boxes:
        draw.rectangle((b.x0, b.y0, b.x1 - 1, b.y1 - 1), fill=255, outline=0, width=2)
    return _to_array(img)


def gen_photo(rng, w=None, h=None):
    """Smooth mid-gray noise texture filling the whole frame."""
    w = w or int(rng.integers(150, 350))
    h = h or int(rng.integers(150, 350))
    base = rng.uniform(0.05, 0.85, size=(h // 8 + 2, w // 8 + 2))
    img = Image.fromarray(base.astype(np.float32), mode="F").resize((w, h), Image.BILINEAR)
    a = np.asarray(img, dtype=np.float64)
    return np.clip(a, 0.0, 0.90)


def gen_plot(rng, w=None, h=None):
    """Full-span axes with ticks plus scatter, line, or bar marks."""
    w = w or int(rng.integers(160, 340))
    h = h or int(rng.integers(140, 320))
    img, draw = _canvas(w, h)
    t = _stroke(max(w, h))
    draw.rectangle((0, 0, t - 1, h - 1), fill=0)  # y axis
    draw.rectangle((0, h - t, w - 1, h - 1), fill=0)  # x axis
    for i in range(1, 8):
        x = t + i * (w - t) // 8
        draw.line((x, h - t - 5, x, h - t - 1), fill=0, width=1)
        y = i * (h - t) // 8
        draw.line((t, y, t + 4, y), fill=0, width=1)
    variant = rng.integers(0, 3)
    if variant == 0:  # scatter
        for _ in range(int(rng.integers(15, 40))):
            x = int(rng.integers(t + 6, w - 6))
            y = int(rng.integers(6, h - t - 6))
            r = int(rng.integers(2, 4))
            draw.ellipse((x - r, y - r, x + r, y + r), fill=0)
    elif variant == 1:  # polyline
        xs = np.sort(rng.integers(t + 6, w - 6, size=12))
        ys = np.clip(
            h - t - 10 - np.cumsum(rng.integers(-20, 21, size=12)), 6, h - t - 6
        )
        draw.line(list(zip(xs.tolist(), ys.tolist())), fill=0, width=2)
    else:  # bars
        nb = int(rng.integers(4, 9))
        bw = (w - t - 10) // nb
        for i in range(nb):
            x0 = t + 5 + i * bw
            bh = int(rng.integers(h // 6, h - t - 8))
            draw.rectangle((x0, h - t - bh, x0 + bw - 4, h - t - 1), fill=0)
    return _to_array(img)


def gen_table(rng, w=None, h=None):
    """Full grid of rules with dash marks in the cells."""
    w = w or int(rng.integers(200, 360))
    h = h or int(rng.integers(140, 320))
    img, draw = _canvas(w, h)
    rows = int(rng.integers(3, 7))
    cols = int(rng.integers(3, 6))
    draw.rectangle((0, 0, w - 1, h - 1), outline=0, width=2)
    for i in range(1, rows):
        y = i * (h - 1) // rows
        draw.line((0, y, w - 1, y), fill=0, width=2)
    for j in range(1, cols):
        x = j * (w - 1) // cols
        draw.line((x, 0, x, h - 1), fill=0, width=2)
    for i in range(rows):
        for j in range(cols):
            if rng.random() < 0.12:
                continue
            cx0 = j * (w - 1) // cols
            cx1 = (j + 1) * (w - 1) // cols
            cy0 = i * (h - 1) // rows
            cy1 = (i + 1) * (h - 1) // rows
            dw = int((cx1 - cx0) * rng.uniform(0.3, 0.7))
            x0 = cx0 + (cx1 - cx0 - dw) // 2
            y = (cy0 + cy1) // 2
            draw.line((x0, y, x0 + dw, y), fill=0, width=2)
    return _to_array(img)


GENERATORS = {
    "equation": gen_equation,
    "diagram": gen_diagram,
    "photo": gen_photo,
    "plot": gen_plot,
    "table": gen_table,
}


def generate_figure(kind, rng, w=None, h=None):
    return GENERATORS[kind](rng, w, h)


def generate_labeled_corpus(per_class, seed=0, classes=tuple(sorted(GENERATORS))):
    """per_class figures of each class; returns (images, labels)."""
    rng = np.random.default_rng(seed)
    images, labels = [], []
    for cls in classes:
        for _ in range(per_class):
            images.append(generate_figure(cls, rng))
            labels.append(cls)
    return images, labels


def content_bbox(a, threshold=0.95):
    """Tight rect of pixels darker than threshold; None if blank."""
    mask = np.asarray(a) < threshold
    rows = np.flatnonzero(mask.any(axis=1))
    if rows.size == 0:
        return None
    cols = np.flatnonzero(mask.any(axis=0))
    return Rect(int(cols[0]), int(rows[0]), int(cols[-1]) + 1, int(rows[-1]) + 1)


def generate_montage(rng, rows=None, cols=None, gutter=None, kinds=None):
    """Grid montage with white gutters.

    Returns (image, ground-truth content rects, panel kinds). Grid shapes
    run 1x2 through 3x3; panel content is flush enough that each ground
    truth rect is the panel's own content bounding box.
    """
    if rows is None or cols is None:
        while True:
            rows = int(rng.integers(1, 4))
            cols = int(rng.integers(1, 4))
            if rows * cols > 1:
                break
    gutter = int(gutter if gutter is not None else rng.integers(8, 25))
    if kinds is None:
        kinds = [
            MONTAGE_KINDS[int(rng.integers(0, len(MONTAGE_KINDS)))]
            for _ in range(rows * cols)
        ]
    panels = []
    for kind in kinds:
        pw = int(rng.integers(110, 240))
        ph = int(rng.integers(100, 220))
        panels.append(generate_figure(kind, rng, pw, ph))
    col_w = [max(panels[i * cols + j].shape[1] for i in range(rows)) for j in range(cols)]
    row_h = [max(panels[i * cols + j].shape[0] for j in range(cols)) for i in range(rows)]
    margin = int(rng.integers(10, 31))
    W = 2 * margin + sum(col_w) + gutter * (cols - 1)
    H = 2 * margin + sum(row_h) + gutter * (rows - 1)
    canvas = np.ones((H, W))
    gt = []
    y = margin
    for i in range(rows):
        x = margin
        for j in range(cols):
            p = panels[i * cols + j]
            ph, pw = p.shape
            oy = y + (row_h[i] - ph) // 2
            ox = x + (col_w[j] - pw) // 2
            canvas[oy : oy + ph, ox : ox + pw] = p
            cb = content_bbox(p)
            gt.append(Rect(ox + cb.x0, oy + cb.y0, ox + cb.x1, oy + cb.y1))
            x += col_w[j] + gutter
        y += row_h[i] + gutter
    return canvas, gt, list(kinds)


def gen_tick_strip(rng):
    """Thin strip of tick-label dashes (auxiliary by the size rule)."""
    w = int(rng.integers(60, 200))
    h = int(rng.integers(8, 21))
    img, draw = _canvas(w, h)
    x = 4
    while x < w - 8:
        draw.line((x, h // 2, x + int(rng.integers(3, 7)), h // 2), fill=0, width=1)
        x += int(rng.integers(8, 18))
    return _to_array(img)


def gen_caption_strip(rng):
    """Wide shallow strip of text-like dashes."""
    w = int(rng.integers(150, 320))
    h = int(rng.integers(24, 36))
    img, draw = _canvas(w, h)
    for row in (h // 3, 2 * h // 3):
        x = 6
        while x < w - 12:
            seg = int(rng.integers(6, 16))
            draw.line((x, row, x + seg, row), fill=0, width=2)
            x += seg + int(rng.integers(4, 9))
    return _to_array(img)


def gen_legend_box(rng):
    """Small outlined legend with marker-and-label rows."""
    w = int(rng.integers(46, 90))
    h = int(rng.integers(26, 60))
    img, draw = _canvas(w, h)
    draw.rectangle((0, 0, w - 1, h - 1), outline=0, width=1)
    n = max(1, (h - 8) // 14)
    for i in range(n):
        y = 7 + i * 14
        draw.ellipse((5, y - 2, 9, y + 2), fill=0)
        draw.line((13, y, w - 6, y), fill=0, width=1)
    return _to_array(img)


AUX_GENERATORS = (gen_tick_strip, gen_caption_strip, gen_legend_box)


def generate_fragment_set(per_label, seed=0):
    """Balanced standalone vs auxiliary fragments for the fragment model.

    A third of the standalone examples are partial panels (one edge cropped
    off), matching the remnants the splitter produces around thin axes.
    """
    rng = np.random.default_rng(seed)
    images, labels = [], []
    for i in range(per_label):
        kind = MONTAGE_KINDS[i % len(MONTAGE_KINDS)]
        panel = generate_figure(
            kind, rng, int(rng.integers(110, 240)), int(rng.integers(100, 220))
        )
        if i % 3 == 0:
            h, w = panel.shape
            cut = int(rng.integers(5, max(6, int(0.15 * min(h, w)))))
            side = int(rng.integers(0, 4))
            if side == 0:
                panel = panel[cut:]
            elif side == 1:
                panel = panel[:-cut]
            elif side == 2:
                panel = panel[:, cut:]
            else:
                panel = panel[:, :-cut]
        images.append(panel)
        labels.append("standalone")
    for i in range(per_label):
        images.append(AUX_GENERATORS[i % len(AUX_GENERATORS)](rng))
        labels.append("auxiliary")
    return images, labels


def generate_gate_set(n_singleton, n_multichart, seed=0):
    """Labeled singleton figures and montages for gate training."""
    rng = np.random.default_rng(seed)
    images, labels = [], []
    kinds = tuple(sorted(GENERATORS))
    for i in range(n_singleton):
        images.append(generate_figure(kinds[i % len(kinds)], rng))
        labels.append("singleton")
    for _ in range(n_multichart):
        img, _, _ = generate_montage(rng)
        images.append(img)
        labels.append("multichart")
    return images, labels

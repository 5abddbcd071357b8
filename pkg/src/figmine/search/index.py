"""Inverted index over paper titles, abstracts, and figure captions.

Documents are figures; each inherits its paper's title and abstract fields.
Results rank by influence score (descending), figure id breaking ties.
"""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass, field

from figmine.errors import EmptyQuery, NotFound

FIELDS = ("title", "abstract", "caption")


def fold(text):
    """Lowercase and strip diacritics; non-ASCII symbols become spaces."""
    out = []
    for ch in unicodedata.normalize("NFKD", text):
        if unicodedata.combining(ch):
            continue
        enc = ch.encode("ascii", "ignore").decode("ascii")
        out.append(enc if enc else " ")
    return "".join(out).lower()


def tokenize(text):
    out = []
    cur = []
    for ch in fold(text):
        if ch.isalnum():
            cur.append(ch)
        elif cur:
            out.append("".join(cur))
            cur = []
    if cur:
        out.append("".join(cur))
    return out


@dataclass
class SearchIndex:
    postings: dict = field(default_factory=dict)  # token -> {fig_id: {field: tf}}
    figures: dict = field(default_factory=dict)  # fig_id -> display record
    papers: dict = field(default_factory=dict)  # paper_id -> summary

    def serialize(self):
        """Canonical byte serialization; identical inputs give identical bytes."""
        return json.dumps(
            {"postings": self.postings, "figures": self.figures, "papers": self.papers},
            sort_keys=True,
            separators=(",", ":"),
        ).encode()


def build_index(papers, figures, scores=None):
    """Index figure documents over title/abstract/caption.

    scores (paper_id -> influence) overrides any score already on the
    paper records; unscored papers index at 0.
    """
    idx = SearchIndex()
    by_paper = {}
    for p in papers:
        s = None
        if scores is not None:
            s = scores.get(p.paper_id)
        if s is None:
            s = p.alef_score
        idx.papers[p.paper_id] = {
            "paper_id": p.paper_id,
            "title": p.title,
            "abstract": p.abstract,
            "journal": p.journal,
            "year": p.year,
            "alef_score": float(s) if s is not None else 0.0,
        }
        by_paper[p.paper_id] = p
    for f in figures:
        paper = idx.papers.get(f.paper_id)
        alef = paper["alef_score"] if paper else 0.0
        idx.figures[f.figure_id] = {
            "figure_id": f.figure_id,
            "paper_id": f.paper_id,
            "label": f.label,
            "caption": f.caption,
            "alef_score": alef,
            "width": f.width,
            "height": f.height,
        }
        p = by_paper.get(f.paper_id)
        texts = {
            "title": p.title if p else "",
            "abstract": p.abstract if p else "",
            "caption": f.caption,
        }
        for fieldname, text in texts.items():
            for tok in tokenize(text):
                per_fig = idx.postings.setdefault(tok, {})
                per_field = per_fig.setdefault(f.figure_id, {})
                per_field[fieldname] = per_field.get(fieldname, 0) + 1
    return idx


@dataclass
class SearchResult:
    figure_id: str
    snippet: str
    label: str
    alef_score: float
    paper: dict

    def to_dict(self):
        return {
            "figure_id": self.figure_id,
            "snippet": self.snippet,
            "label": self.label,
            "alef_score": self.alef_score,
            "paper": dict(self.paper),
        }


def _snippet(caption, terms, window=6):
    toks = caption.split()
    lowered = [fold(t) for t in toks]
    hit = None
    for i, t in enumerate(lowered):
        if any(term in t for term in terms):
            hit = i
            break
    if hit is None:
        return " ".join(toks[: 2 * window + 1])
    lo = max(0, hit - window)
    return " ".join(toks[lo : hit + window + 1])


def query(index, q, type_filter=None, page=0, page_size=20, mode="and"):
    """Token match across the three fields, label filter, influence order.

    mode "and" requires every term (the default contract); "or" accepts any.
    """
    terms = tokenize(q)
    if not terms:
        raise EmptyQuery("query has no tokens")
    sets = [set(index.postings.get(t, ())) for t in terms]
    if mode == "or":
        ids = set().union(*sets)
    else:
        ids = set.intersection(*sets) if sets else set()
    if type_filter:
        allowed = set(type_filter)
        ids = {i for i in ids if index.figures[i]["label"] in allowed}
    ordered = sorted(ids, key=lambda i: (-index.figures[i]["alef_score"], i))
    start = page * page_size
    results = []
    for fid in ordered[start : start + page_size]:
        fig = index.figures[fid]
        paper = index.papers.get(fig["paper_id"], {})
        results.append(
            SearchResult(
                figure_id=fid,
                snippet=_snippet(fig["caption"], terms),
                label=fig["label"],
                alef_score=fig["alef_score"],
                paper=paper,
            )
        )
    return results, len(ordered)


def figure_detail(index, figures_by_id, figure_id):
    """Figure record, its paper, same-paper siblings, and parent/child links."""
    if figure_id not in index.figures:
        raise NotFound(f"figure {figure_id} not found")
    rec = figures_by_id[figure_id]
    fig = dict(index.figures[figure_id])
    fig["class_probs"] = rec.class_probs
    fig["parent_figure_id"] = rec.parent_figure_id
    fig["bbox_in_parent"] = (
        rec.bbox_in_parent.to_list() if rec.bbox_in_parent else None
    )
    siblings = sorted(
        fid
        for fid, f in index.figures.items()
        if f["paper_id"] == rec.paper_id and fid != figure_id
    )
    children = sorted(
        fid for fid, f in figures_by_id.items() if f.parent_figure_id == figure_id
    )
    return {
        "figure": fig,
        "paper": index.papers.get(rec.paper_id, {}),
        "siblings": siblings,
        "children": children,
    }

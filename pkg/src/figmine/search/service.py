"""HTTP JSON API over the search index and figure store."""

from __future__ import annotations

import datetime
import json
import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import FileResponse
from pydantic import BaseModel

from figmine.errors import EmptyQuery, NotFound
from figmine.records import SINGLETON_CLASSES, Manifest
from figmine.search.index import build_index, figure_detail, query

VALID_VERIFICATION_LABELS = SINGLETON_CLASSES + ("multichart",)
DEDUPE_WINDOW_H = 24


class VerificationIn(BaseModel):
    figure_id: str
    proposed_label: str
    client_token: str = ""


class VerificationLog:
    """Append-only JSONL log with a (figure, token, label) 24h dedupe."""

    def __init__(self, path):
        self.path = Path(path)
        self._lock = threading.Lock()

    def _iter_rows(self):
        if not self.path.exists():
            return
        with open(self.path) as f:
            for line in f:
                if line.strip():
                    yield json.loads(line)

    def append(self, figure_id, label, client_token, now=None):
        """Returns True if a row was written, False when deduplicated."""
        now = now or datetime.datetime.now(datetime.timezone.utc)
        cutoff = now - datetime.timedelta(hours=DEDUPE_WINDOW_H)
        with self._lock:
            for row in self._iter_rows():
                if (
                    row["figure_id"] == figure_id
                    and row["client_token"] == client_token
                    and row["proposed_label"] == label
                    and datetime.datetime.fromisoformat(row["timestamp"]) > cutoff
                ):
                    return False
            row = {
                "figure_id": figure_id,
                "proposed_label": label,
                "client_token": client_token,
                "timestamp": now.isoformat(),
            }
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a") as f:
                f.write(json.dumps(row, sort_keys=True) + "\n")
            return True

    def count(self):
        return sum(1 for _ in self._iter_rows())


def load_scores(path):
    scores = {}
    with open(path) as f:
        for line in f:
            if line.strip():
                row = json.loads(line)
                scores[row["paper_id"]] = float(row["alef"])
    return scores


def create_app(manifest_dir, scores_path=None, verification_log=None,
               cors_origins=()):
    manifest = Manifest(manifest_dir)
    papers = manifest.load_papers()
    figures = manifest.load_figures()
    scores = load_scores(scores_path) if scores_path else None
    index = build_index(papers, figures, scores)
    figures_by_id = {f.figure_id: f for f in figures}
    log = VerificationLog(
        verification_log or Path(manifest_dir) / "verifications.jsonl"
    )

    app = FastAPI(title="figmine search")
    if cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(cors_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )
    app.state.index = index
    app.state.log = log

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "figures": len(index.figures)}

    @app.get("/search")
    def search(q: str = Query(""), types: str = Query(""), page: int = 0,
               size: int = 20):
        type_filter = {t for t in types.split(",") if t} or None
        try:
            results, total = query(index, q, type_filter, page, size)
        except EmptyQuery:
            raise HTTPException(status_code=400, detail="empty query")
        return {
            "total": total,
            "page": page,
            "size": size,
            "results": [r.to_dict() for r in results],
        }

    @app.get("/figures/{figure_id:path}/image")
    def figure_image(figure_id: str):
        rec = figures_by_id.get(figure_id)
        if rec is None:
            raise HTTPException(status_code=404, detail="unknown figure")
        try:
            path = manifest.image_path(rec.image_key)
        except NotFound:
            raise HTTPException(status_code=404, detail="image missing")
        return FileResponse(path, media_type="image/png")

    @app.get("/figures/{figure_id:path}")
    def figure(figure_id: str):
        try:
            return figure_detail(index, figures_by_id, figure_id)
        except NotFound:
            raise HTTPException(status_code=404, detail="unknown figure")

    @app.post("/verifications")
    def verify(event: VerificationIn):
        if event.proposed_label not in VALID_VERIFICATION_LABELS:
            raise HTTPException(
                status_code=400, detail=f"invalid label {event.proposed_label!r}"
            )
        if event.figure_id not in figures_by_id:
            raise HTTPException(status_code=404, detail="unknown figure")
        written = log.append(event.figure_id, event.proposed_label, event.client_token)
        return {"accepted": True, "written": written}

    return app

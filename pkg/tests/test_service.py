"""HTTP API contract: search, detail, images, verifications."""

import datetime
import json

import pytest
from fastapi.testclient import TestClient

from figmine.search.service import VerificationLog, create_app, load_scores

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


@pytest.fixture(scope="module")
def service(ingested_manifest, tmp_path_factory):
    root = tmp_path_factory.mktemp("service")
    scores = root / "scores.jsonl"
    with open(scores, "w") as f:
        f.write(json.dumps({"paper_id": "paper0", "alef": 0.4}) + "\n")
        f.write(json.dumps({"paper_id": "paper1", "alef": 0.1}) + "\n")
    log_path = root / "verifications.jsonl"
    app = create_app(ingested_manifest, scores_path=scores,
                     verification_log=log_path, cors_origins=["http://x"])
    return TestClient(app), log_path


class TestHealth:
    def test_healthz(self, service):
        client, _ = service
        r = client.get("/healthz")
        assert r.status_code == 200
        body = r.json()
        assert body["status"] == "ok"
        assert body["figures"] > 0

    def test_cors_header(self, service):
        client, _ = service
        r = client.get("/healthz", headers={"Origin": "http://x"})
        assert r.headers.get("access-control-allow-origin") == "http://x"


class TestSearch:
    def test_contract_shape(self, service):
        client, _ = service
        r = client.get("/search", params={"q": "studying"})
        assert r.status_code == 200
        body = r.json()
        assert set(body) == {"total", "page", "size", "results"}
        assert body["total"] >= 1
        first = body["results"][0]
        assert {"figure_id", "snippet", "label", "alef_score", "paper"} <= set(first)

    def test_empty_query_is_400(self, service):
        client, _ = service
        assert client.get("/search", params={"q": "  "}).status_code == 400
        assert client.get("/search").status_code == 400

    def test_ordering_descends(self, service):
        client, _ = service
        body = client.get("/search", params={"q": "studying", "size": 50}).json()
        scores = [r["alef_score"] for r in body["results"]]
        assert scores == sorted(scores, reverse=True)

    def test_paging(self, service):
        client, _ = service
        full = client.get("/search", params={"q": "studying", "size": 50}).json()
        p0 = client.get("/search", params={"q": "studying", "size": 3}).json()
        p1 = client.get("/search", params={"q": "studying", "size": 3,
                                           "page": 1}).json()
        assert p0["total"] == full["total"]
        ids = [r["figure_id"] for r in p0["results"] + p1["results"]]
        assert ids == [r["figure_id"] for r in full["results"][:6]]

    def test_type_filter_param(self, service):
        client, _ = service
        body = client.get("/search", params={"q": "studying",
                                             "types": "unclassified"}).json()
        assert body["total"] >= 1
        assert all(r["label"] == "unclassified" for r in body["results"])
        none = client.get("/search", params={"q": "studying",
                                             "types": "plot,photo"}).json()
        assert none["total"] == 0

    def test_no_hits_is_200(self, service):
        client, _ = service
        body = client.get("/search", params={"q": "zzzqqq"}).json()
        assert body["total"] == 0 and body["results"] == []


class TestFigureDetail:
    def figure_id(self, client):
        body = client.get("/search", params={"q": "studying"}).json()
        return body["results"][0]["figure_id"]

    def test_detail(self, service):
        client, _ = service
        fid = self.figure_id(client)
        r = client.get(f"/figures/{fid}")
        assert r.status_code == 200
        body = r.json()
        assert set(body) == {"figure", "paper", "siblings", "children"}
        assert body["figure"]["figure_id"] == fid
        assert fid not in body["siblings"]

    def test_unknown_404(self, service):
        client, _ = service
        assert client.get("/figures/nope/fig9").status_code == 404

    def test_image_bytes(self, service):
        client, _ = service
        fid = self.figure_id(client)
        r = client.get(f"/figures/{fid}/image")
        assert r.status_code == 200
        assert r.headers["content-type"] == "image/png"
        assert r.content.startswith(PNG_MAGIC)

    def test_image_unknown_404(self, service):
        client, _ = service
        assert client.get("/figures/nope/fig9/image").status_code == 404


class TestVerifications:
    def post(self, client, fid, label="plot", token="t1"):
        return client.post("/verifications", json={
            "figure_id": fid, "proposed_label": label, "client_token": token})

    def figure_id(self, client):
        return client.get("/search", params={"q": "studying"}
                          ).json()["results"][0]["figure_id"]

    def test_accept_writes_one_row(self, service):
        client, log_path = service
        fid = self.figure_id(client)
        before = VerificationLog(log_path).count()
        r = self.post(client, fid, token="row-test")
        assert r.status_code == 200
        assert r.json() == {"accepted": True, "written": True}
        log = VerificationLog(log_path)
        assert log.count() == before + 1
        rows = [json.loads(l) for l in open(log_path)]
        mine = [r for r in rows if r["client_token"] == "row-test"]
        assert len(mine) == 1
        assert set(mine[0]) == {"figure_id", "proposed_label", "client_token",
                                "timestamp"}

    def test_duplicate_not_rewritten(self, service):
        client, log_path = service
        fid = self.figure_id(client)
        first = self.post(client, fid, token="dup-test").json()
        before = VerificationLog(log_path).count()
        again = self.post(client, fid, token="dup-test").json()
        assert first["written"] is True
        assert again == {"accepted": True, "written": False}
        assert VerificationLog(log_path).count() == before

    def test_different_label_writes(self, service):
        client, log_path = service
        fid = self.figure_id(client)
        self.post(client, fid, label="plot", token="lbl-test")
        r = self.post(client, fid, label="table", token="lbl-test").json()
        assert r["written"] is True

    def test_invalid_label_400(self, service):
        client, _ = service
        fid = self.figure_id(client)
        assert self.post(client, fid, label="sculpture").status_code == 400

    def test_unknown_figure_404(self, service):
        client, _ = service
        assert self.post(client, "ghost/fig0").status_code == 404

    def test_missing_field_422(self, service):
        client, _ = service
        r = client.post("/verifications", json={"figure_id": "x"})
        assert r.status_code == 422


class TestVerificationLog:
    def test_window_expiry(self, tmp_path):
        log = VerificationLog(tmp_path / "v.jsonl")
        t0 = datetime.datetime(2026, 1, 1, tzinfo=datetime.timezone.utc)
        hour = datetime.timedelta(hours=1)
        assert log.append("f", "plot", "tok", now=t0) is True
        assert log.append("f", "plot", "tok", now=t0 + hour) is False
        assert log.append("f", "plot", "tok", now=t0 + 25 * hour) is True
        assert log.count() == 2

    def test_append_only(self, tmp_path):
        path = tmp_path / "v.jsonl"
        log = VerificationLog(path)
        log.append("f1", "plot", "a")
        head = path.read_bytes()
        log.append("f2", "table", "b")
        assert path.read_bytes().startswith(head)
        assert log.count() == 2


def test_load_scores(tmp_path):
    p = tmp_path / "s.jsonl"
    p.write_text('{"paper_id": "a", "alef": 0.25}\n\n{"paper_id": "b", "alef": 1}\n')
    assert load_scores(p) == {"a": 0.25, "b": 1.0}

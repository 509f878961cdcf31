import json
import random

import pytest
from fastapi.testclient import TestClient

from arc_search.service import ServiceConfig, create_app

from conftest import HEATSTRESS_DOC


@pytest.fixture
def client(tmp_path):
    config = ServiceConfig(snapshot_dir=str(tmp_path / "snaps"), dimension=64, snapshot_every=0)
    return TestClient(create_app(config))


def ingest(client, doc):
    resp = client.post("/arcs", json=doc)
    assert resp.status_code == 200, resp.text
    return resp.json()


class TestIngest:
    def test_heatstress_ingest(self, client):
        out = ingest(client, HEATSTRESS_DOC)
        assert out == {"arc_id": "arc-heatstress", "chunks_indexed": 9}

    def test_schema_error_names_field(self, client):
        resp = client.post("/arcs", json={"title": "T"})
        assert resp.status_code == 400
        assert resp.json()["error"]["field"] == "arc_id"

    def test_malformed_body(self, client):
        resp = client.post("/arcs", content=b"{nope", headers={"content-type": "application/json"})
        assert resp.status_code == 400
        assert resp.json()["error"]["code"] == "parse_error"

    def test_reingest_higher_version_upserts(self, client):
        ingest(client, HEATSTRESS_DOC)
        updated = {**HEATSTRESS_DOC, "version": 2, "title": "Updated title"}
        ingest(client, updated)
        assert client.get("/health").json()["documents"] == 1
        doc = client.get("/arcs/arc-heatstress").json()
        assert doc["title"] == "Updated title"

    def test_stale_version_conflict(self, client):
        ingest(client, {**HEATSTRESS_DOC, "version": 3})
        resp = client.post("/arcs", json={**HEATSTRESS_DOC, "version": 3})
        assert resp.status_code == 409
        # state unchanged
        assert client.get("/arcs/arc-heatstress").json()["version"] == 3


class TestNotifications:
    def test_delete_then_search(self, client):
        ingest(client, HEATSTRESS_DOC)
        resp = client.post("/notifications", json={"arc_id": "arc-heatstress", "event": "deleted"})
        assert resp.json() == {"acknowledged": True, "arc_id": "arc-heatstress", "found": True}
        results = client.post("/search", json={"text": "heat stress"}).json()["results"]
        assert results == []

    def test_duplicate_delete_idempotent(self, client):
        ingest(client, HEATSTRESS_DOC)
        client.post("/notifications", json={"arc_id": "arc-heatstress", "event": "deleted"})
        resp = client.post("/notifications", json={"arc_id": "arc-heatstress", "event": "deleted"})
        assert resp.status_code == 200
        assert resp.json()["found"] is False

    def test_update_without_payload(self, client):
        resp = client.post("/notifications", json={"arc_id": "a", "event": "updated"})
        assert resp.status_code == 400
        assert resp.json()["error"]["field"] == "payload"

    def test_created_event_ingests(self, client):
        resp = client.post(
            "/notifications",
            json={"arc_id": "arc-heatstress", "event": "created", "payload": HEATSTRESS_DOC},
        )
        assert resp.json()["chunks_indexed"] == 9


class TestSearch:
    def test_single_document_search(self, client):
        ingest(client, HEATSTRESS_DOC)
        body = client.post("/search", json={"text": "heat stress algae", "k": 5}).json()
        assert len(body["results"]) == 1
        result = body["results"][0]
        assert result["arc_id"] == "arc-heatstress"
        assert result["title"].startswith("Systems-wide investigation")
        assert "final_score" in result and "document_score" in result
        assert result["best_chunk"]["field_type"] in {
            "title", "description", "study", "assay", "person", "publication", "parameter"
        }
        assert body["params"]["alpha"] == 0.5

    def test_filter_boost_flag(self, client):
        ingest(client, HEATSTRESS_DOC)
        body = client.post(
            "/search",
            json={
                "text": "heat stress algae",
                "filters": [{"field_type": "assay", "match": "proteomics"}],
            },
        ).json()
        assert body["results"][0]["boosted"] is True

    def test_empty_query_rejected(self, client):
        resp = client.post("/search", json={"text": ""})
        assert resp.status_code == 400
        assert resp.json()["error"]["code"] == "empty_query"

    def test_summary_present_in_stub_mode(self, client):
        ingest(client, HEATSTRESS_DOC)
        body = client.post("/search", json={"text": "heat stress"}).json()
        summary = body["results"][0]["summary"]
        assert summary.startswith("Systems-wide investigation")
        assert "Matched on" in summary

    def test_summarizer_never_changes_ranking(self, tmp_path):
        docs = [
            {"arc_id": f"d{i}", "title": f"heat stress experiment {i} topic{i}"} for i in range(8)
        ]
        bodies = []
        for mode in ("stub", "off"):
            config = ServiceConfig(
                snapshot_dir=str(tmp_path / mode), dimension=64, summarizer_mode=mode, snapshot_every=0
            )
            client = TestClient(create_app(config))
            for doc in docs:
                ingest(client, doc)
            body = client.post("/search", json={"text": "heat stress topic3", "k": 8}).json()
            for r in body["results"]:
                r.pop("summary", None)
            bodies.append(body)
        assert bodies[0] == bodies[1]


class TestDocumentRoundTrip:
    def test_get_round_trips(self, client):
        ingest(client, HEATSTRESS_DOC)
        doc = client.get("/arcs/arc-heatstress").json()
        for key, value in HEATSTRESS_DOC.items():
            assert doc[key] == value

    def test_get_unknown_404(self, client):
        resp = client.get("/arcs/nope")
        assert resp.status_code == 404
        assert resp.json()["error"]["code"] == "not_found"


class TestAuth:
    def test_mutations_require_token_when_configured(self, tmp_path):
        config = ServiceConfig(snapshot_dir=str(tmp_path), dimension=32, auth_token="sekrit")
        client = TestClient(create_app(config))
        assert client.post("/arcs", json=HEATSTRESS_DOC).status_code == 401
        resp = client.post(
            "/arcs", json=HEATSTRESS_DOC, headers={"Authorization": "Bearer sekrit"}
        )
        assert resp.status_code == 200
        # reads stay open
        assert client.get("/health").status_code == 200


class TestSnapshotRestart:
    def test_restart_preserves_search_results(self, tmp_path):
        config = ServiceConfig(snapshot_dir=str(tmp_path / "s"), dimension=64, snapshot_every=0)
        client = TestClient(create_app(config))
        rng = random.Random(5)
        words = ["heat", "cold", "drought", "algae", "tomato", "assay", "protein", "growth"]
        for i in range(30):
            ingest(
                client,
                {
                    "arc_id": f"arc{i:02d}",
                    "title": " ".join(rng.choices(words, k=5)),
                    "description": " ".join(rng.choices(words, k=10)),
                },
            )
        queries = [{"text": " ".join(rng.choices(words, k=3)), "k": 5} for _ in range(10)]
        before = [client.post("/search", json=q).content for q in queries]
        assert client.post("/admin/snapshot").status_code == 200

        client2 = TestClient(create_app(config))
        assert client2.get("/health").json()["documents"] == 30
        after = [client2.post("/search", json=q).content for q in queries]
        assert before == after

    def test_snapshot_lists_files(self, client):
        ingest(client, HEATSTRESS_DOC)
        body = client.post("/admin/snapshot").json()
        assert set(body["files"]) == {
            "manifest.json", "documents.json", "doc_index.bin", "chunk_index.bin"
        }


class TestConsistency:
    def test_zero_orphans_after_random_notifications(self, client):
        rng = random.Random(99)
        ids = [f"arc{i}" for i in range(12)]
        versions = {arc_id: 0 for arc_id in ids}
        for _ in range(300):
            arc_id = rng.choice(ids)
            event = rng.choice(["created", "updated", "deleted", "deleted"])
            if event == "deleted":
                client.post("/notifications", json={"arc_id": arc_id, "event": event})
            else:
                versions[arc_id] += 1
                payload = {
                    "arc_id": arc_id,
                    "title": f"doc {arc_id} rev {versions[arc_id]}",
                    "assays": ["Proteomics"] if rng.random() < 0.5 else [],
                    "version": versions[arc_id],
                }
                client.post("/notifications", json={"arc_id": arc_id, "event": event, "payload": payload})
        report = client.get("/consistency").json()
        assert report["orphans"] == 0

    def test_replay_with_duplicates_is_idempotent(self, tmp_path):
        events = []
        rng = random.Random(3)
        for v in range(1, 6):
            events.append({"arc_id": "a", "event": "updated", "version": v,
                           "payload": {"arc_id": "a", "title": f"rev {v}", "version": v}})
        events.append({"arc_id": "b", "event": "created",
                       "payload": {"arc_id": "b", "title": "b doc", "version": 1}})
        events.append({"arc_id": "a", "event": "deleted"})

        with_dupes = []
        for e in events:
            with_dupes.append(e)
            if rng.random() < 0.5:
                with_dupes.append(e)

        states = []
        for i, sequence in enumerate((events, with_dupes)):
            config = ServiceConfig(snapshot_dir=str(tmp_path / str(i)), dimension=32, snapshot_every=0)
            c = TestClient(create_app(config))
            for e in sequence:
                c.post("/notifications", json=e)
            states.append(
                (c.get("/health").json(), c.post("/search", json={"text": "doc rev"}).json())
            )
        assert states[0] == states[1]

"""Walkthrough: the HTTP service's ingest / notify / search / snapshot /
restart lifecycle, driven in-process through the test client.

For a real deployment: arc-search serve --config service.json

Run with: python3 demos/04_service_lifecycle.py
"""
import json
import tempfile

from fastapi.testclient import TestClient

from arc_search.service import ServiceConfig, create_app

with tempfile.TemporaryDirectory() as tmp:
    config = ServiceConfig(snapshot_dir=tmp, dimension=256)
    client = TestClient(create_app(config))

    doc = {
        "arc_id": "arc-demo",
        "title": "Salt stress proteomics in rice seedlings",
        "description": "Seedlings exposed to 150 mM NaCl; proteome profiled daily.",
        "studies": ["SaltTimecourse"],
        "assays": ["Proteomics"],
        "version": 1,
    }
    print("POST /arcs ->", client.post("/arcs", json=doc).json())

    # DataHUB-style update notification (higher version replaces the old one).
    notification = {
        "arc_id": "arc-demo",
        "event": "updated",
        "payload": {**doc, "version": 2, "assays": ["Proteomics", "Imaging"]},
    }
    print("POST /notifications ->", client.post("/notifications", json=notification).json())

    search = {
        "text": "salt stress rice",
        "k": 3,
        "filters": [{"field_type": "assay", "match": "imaging"}],
    }
    body = client.post("/search", json=search).json()
    print("\nPOST /search ->")
    print(json.dumps(body, indent=2)[:800])

    print("\nGET /consistency ->", client.get("/consistency").json()["orphans"], "orphans")
    snap = client.post("/admin/snapshot").json()
    print("POST /admin/snapshot ->", snap["files"])

    # A fresh app instance pointed at the same snapshot dir restores state.
    restarted = TestClient(create_app(config))
    print("after restart, GET /health ->", restarted.get("/health").json())

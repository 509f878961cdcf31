"""HTTP ingestion/search service over the hybrid engine.

Endpoints: POST /arcs, POST /notifications, POST /search, GET /arcs/{id},
GET /health, GET /consistency, POST /admin/snapshot. Errors are JSON
{"error": {"code", "message", "field"?}}. Mutations are serialized through
one lock; searches read a consistent view. State persists as a snapshot set
(two vector-index binaries plus a JSON sidecar of documents); the newest
consistent set is loaded on startup and lexical indices are rebuilt from it.
"""
from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .embedding import DeterministicHashEmbedder, RemoteEmbedder, RemoteEmbedderConfig
from .errors import (
    ArcSearchError,
    EmptyQueryError,
    ParameterError,
    ProviderError,
    SchemaError,
)
from .model import FieldType, arc_document_from_dict, flatten_search_text
from .scorer import SearchEngine, SearchQuery, StructureFilter
from .summary import (
    RemoteSummarizer,
    RemoteSummarizerConfig,
    StubSummarizer,
    SummaryRequest,
)

SNAPSHOT_EVERY_N_MUTATIONS = 100


class StaleVersionError(ArcSearchError):
    """Ingest carried a version not newer than the stored one."""


@dataclass
class ServiceConfig:
    snapshot_dir: str = "snapshots"
    dimension: int = 768
    embedding_provider: str = "deterministic-hash"  # or "remote-service"
    embedding_url: str | None = None
    embedding_auth_token: str | None = None
    embedding_timeout: float = 30.0
    alpha: float = 0.5
    beta: float = 0.7
    gamma: float = 0.1
    summarizer_mode: str = "stub"  # "stub" | "remote" | "off"
    summarizer_url: str | None = None
    summarizer_auth_token: str | None = None
    auth_token: str | None = None
    snapshot_every: int = SNAPSHOT_EVERY_N_MUTATIONS
    host: str = "127.0.0.1"
    port: int = 8000

    @classmethod
    def from_file(cls, path: str | Path) -> "ServiceConfig":
        with open(path, encoding="utf-8") as fh:
            return cls(**json.load(fh))


def _make_embedder(config: ServiceConfig):
    if config.embedding_provider == "remote-service":
        if not config.embedding_url:
            raise ParameterError("remote-service provider requires embedding_url")
        return RemoteEmbedder(
            RemoteEmbedderConfig(
                url=config.embedding_url,
                auth_token=config.embedding_auth_token,
                timeout=config.embedding_timeout,
            ),
            dimension=config.dimension,
        )
    return DeterministicHashEmbedder(dimension=config.dimension)


def _make_summarizer(config: ServiceConfig):
    if config.summarizer_mode == "off":
        return None
    if config.summarizer_mode == "remote":
        if not config.summarizer_url:
            raise ParameterError("remote summarizer requires summarizer_url")
        return RemoteSummarizer(
            RemoteSummarizerConfig(url=config.summarizer_url, auth_token=config.summarizer_auth_token)
        )
    return StubSummarizer()


class ServiceState:
    """Engine plus document versions, mutation lock, and snapshot plumbing."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        self.engine = SearchEngine(_make_embedder(config))
        self.summarizer = _make_summarizer(config)
        self.mutation_lock = threading.Lock()
        self.mutations_since_snapshot = 0
        self.snapshot_dir = Path(config.snapshot_dir)
        self._load_latest_snapshot()

    # -- persistence -------------------------------------------------------

    def _snapshot_sets(self) -> list[Path]:
        if not self.snapshot_dir.exists():
            return []
        return sorted(
            (p for p in self.snapshot_dir.iterdir() if p.is_dir() and p.name.startswith("snapshot-")),
            key=lambda p: p.name,
        )

    def _load_latest_snapshot(self) -> None:
        for snap in reversed(self._snapshot_sets()):
            manifest = snap / "manifest.json"
            if not manifest.exists():
                continue  # incomplete set; manifest is written last
            try:
                docs = json.loads((snap / "documents.json").read_text(encoding="utf-8"))
                for raw in docs:
                    self.engine.ingest(arc_document_from_dict(raw))
                return
            except (OSError, ValueError, ArcSearchError):
                self.engine = SearchEngine(self.engine.embedder)  # discard partial load
                continue

    def snapshot_now(self) -> dict:
        """Persist both vector indices plus a JSON sidecar of documents."""
        seq = len(self._snapshot_sets())
        snap = self.snapshot_dir / f"snapshot-{seq:06d}"
        snap.mkdir(parents=True, exist_ok=True)
        doc_path = snap / "documents.json"
        with open(doc_path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(
                [self.engine.documents[a].to_json_dict() for a in sorted(self.engine.documents)],
                fh,
                sort_keys=True,
            )
        doc_idx = snap / "doc_index.bin"
        chunk_idx = snap / "chunk_index.bin"
        self.engine.doc_vectors.snapshot_save(doc_idx)
        self.engine.chunk_vectors.snapshot_save(chunk_idx)
        manifest = {
            "documents": doc_path.name,
            "doc_index": doc_idx.name,
            "chunk_index": chunk_idx.name,
            "document_count": len(self.engine),
        }
        (snap / "manifest.json").write_text(json.dumps(manifest, sort_keys=True), encoding="utf-8")
        self.mutations_since_snapshot = 0
        return {"snapshot": str(snap), "files": sorted(p.name for p in snap.iterdir())}

    def _after_mutation(self) -> None:
        self.mutations_since_snapshot += 1
        if self.config.snapshot_every and self.mutations_since_snapshot >= self.config.snapshot_every:
            self.snapshot_now()

    # -- consistency -------------------------------------------------------

    def consistency_report(self) -> dict:
        engine = self.engine
        doc_ids = set(engine.documents)
        vec_ids = set(engine.doc_vectors.entry_ids())
        lex_ids = set(engine.doc_lexical._doc_terms)
        chunk_parents = {cid.split("\x1f", 1)[0] for cid in engine.chunk_vectors.entry_ids()}
        chunk_lex_parents = {cid.split("\x1f", 1)[0] for cid in engine.chunk_lexical._doc_terms}
        expected_chunk_ids = {c.chunk_id for chunks in engine.chunks.values() for c in chunks}
        orphans = {
            "doc_vectors_not_in_store": sorted(vec_ids - doc_ids),
            "store_not_in_doc_vectors": sorted(doc_ids - vec_ids),
            "doc_lexical_not_in_store": sorted(lex_ids - doc_ids),
            "store_not_in_doc_lexical": sorted(doc_ids - lex_ids),
            "chunk_vector_orphans": sorted(chunk_parents - doc_ids),
            "chunk_lexical_orphans": sorted(chunk_lex_parents - doc_ids),
            "chunk_vector_id_mismatch": sorted(
                set(engine.chunk_vectors.entry_ids()) ^ expected_chunk_ids
            ),
        }
        orphan_count = sum(len(v) for v in orphans.values())
        return {"orphans": orphan_count, "detail": orphans, "documents": len(doc_ids)}


def _error(status: int, code: str, message: str, field_name: str | None = None) -> JSONResponse:
    body: dict = {"error": {"code": code, "message": message}}
    if field_name:
        body["error"]["field"] = field_name
    return JSONResponse(status_code=status, content=body)


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    state = ServiceState(config)
    app = FastAPI(title="arc-search")
    app.state.service = state

    def check_auth(request: Request) -> JSONResponse | None:
        if not config.auth_token:
            return None
        header = request.headers.get("authorization", "")
        if header != f"Bearer {config.auth_token}":
            return _error(401, "unauthorized", "missing or invalid bearer token")
        return None

    def ingest_document(payload: dict) -> dict:
        doc = arc_document_from_dict(payload)
        with state.mutation_lock:
            stored = state.engine.documents.get(doc.arc_id)
            if stored is not None and doc.version <= stored.version:
                raise StaleVersionError(
                    f"version {doc.version} is not newer than stored {stored.version}"
                )
            chunks = state.engine.ingest(doc)
            state._after_mutation()
        return {"arc_id": doc.arc_id, "chunks_indexed": chunks}

    @app.post("/arcs")
    async def handle_ingest(request: Request):
        if (resp := check_auth(request)) is not None:
            return resp
        try:
            payload = await request.json()
        except Exception:
            return _error(400, "parse_error", "request body is not valid JSON")
        try:
            return ingest_document(payload)
        except SchemaError as exc:
            return _error(400, "schema_error", str(exc), exc.field)
        except StaleVersionError as exc:
            return _error(409, "stale_version", str(exc))
        except ProviderError as exc:
            return _error(502, "provider_error", str(exc))

    @app.post("/notifications")
    async def handle_notification(request: Request):
        if (resp := check_auth(request)) is not None:
            return resp
        try:
            payload = await request.json()
        except Exception:
            return _error(400, "parse_error", "request body is not valid JSON")
        event = payload.get("event")
        arc_id = payload.get("arc_id")
        if event not in ("created", "updated", "deleted"):
            return _error(400, "schema_error", f"unknown event {event!r}", "event")
        if not arc_id:
            return _error(400, "schema_error", "missing arc_id", "arc_id")
        if event == "deleted":
            with state.mutation_lock:
                found = state.engine.remove(arc_id)
                if found:
                    state._after_mutation()
            return {"acknowledged": True, "arc_id": arc_id, "found": found}
        body = payload.get("payload")
        if body is None:
            return _error(400, "schema_error", f"{event} notification requires a payload", "payload")
        try:
            result = ingest_document(body)
        except SchemaError as exc:
            return _error(400, "schema_error", str(exc), exc.field)
        except StaleVersionError as exc:
            return _error(409, "stale_version", str(exc))
        except ProviderError as exc:
            return _error(502, "provider_error", str(exc))
        return {"acknowledged": True, **result}

    @app.post("/search")
    async def handle_search(request: Request):
        try:
            payload = await request.json()
        except Exception:
            return _error(400, "parse_error", "request body is not valid JSON")
        text = payload.get("text", "")
        try:
            filters = tuple(
                StructureFilter(field_type=FieldType(f["field_type"]), match=f["match"])
                for f in payload.get("filters", [])
            )
        except (ValueError, KeyError, TypeError):
            return _error(400, "parameter_error", "invalid filters", "filters")
        query = SearchQuery(
            text=text if isinstance(text, str) else "",
            k=payload.get("k", 5),
            alpha=payload.get("alpha", config.alpha),
            beta=payload.get("beta", config.beta),
            gamma=payload.get("gamma", config.gamma),
            filters=filters,
        )
        try:
            results = state.engine.search(query)
        except EmptyQueryError as exc:
            return _error(400, "empty_query", str(exc), "text")
        except ParameterError as exc:
            return _error(400, "parameter_error", str(exc))

        warning = None
        rendered = []
        for r in results:
            doc = state.engine.documents[r.arc_id]
            item = {
                "arc_id": r.arc_id,
                "title": doc.title,
                "final_score": r.final_score,
                "document_score": r.document_score,
                "chunk_max_score": r.chunk_max_score,
                "best_chunk": {
                    "field_type": r.best_chunk.field_type.value,
                    "chunk_index": r.best_chunk.chunk_index,
                    "chunk_text": r.best_chunk.chunk_text,
                },
                "boosted": r.boosted,
            }
            if state.summarizer is not None:
                req = SummaryRequest(
                    arc_id=r.arc_id,
                    search_text=flatten_search_text(doc),
                    best_chunk_text=r.best_chunk.chunk_text,
                    best_chunk_field=r.best_chunk.field_type.value,
                    query_text=query.text,
                    title=doc.title,
                    description=doc.description,
                )
                try:
                    item["summary"] = state.summarizer.summarize(req)
                except ProviderError as exc:
                    warning = f"summaries unavailable: {exc}"
            rendered.append(item)
        response = {
            "results": rendered,
            "params": {"alpha": query.alpha, "beta": query.beta, "gamma": query.gamma, "k": query.k},
        }
        if warning:
            response["warning"] = warning
        return response

    @app.get("/arcs/{arc_id}")
    async def handle_get_document(arc_id: str):
        doc = state.engine.documents.get(arc_id)
        if doc is None:
            return _error(404, "not_found", f"unknown arc_id {arc_id!r}", "arc_id")
        return doc.to_json_dict()

    @app.get("/health")
    async def health():
        return {"status": "ok", "documents": len(state.engine)}

    @app.get("/consistency")
    async def consistency():
        return state.consistency_report()

    @app.post("/admin/snapshot")
    async def snapshot_now(request: Request):
        if (resp := check_auth(request)) is not None:
            return resp
        try:
            with state.mutation_lock:
                return state.snapshot_now()
        except OSError as exc:
            return _error(500, "snapshot_error", str(exc))

    return app

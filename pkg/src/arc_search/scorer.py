"""Hybrid document/chunk scoring over dual vector and lexical indices.

The final relevance score blends a document-level score with the best
chunk-level score:

    S_final = alpha * S_D + (1 - alpha) * S_cmax

Each of S_D and per-chunk scores is itself a beta-blend of a semantic score
(cosine mapped to [0, 1] via (1 + cos) / 2) and a lexical score (BM25
min-max-normalized over the per-query candidate set). Structure filters act
as hard constraints; documents matching every filter get a multiplicative
(1 + gamma) boost.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .embedding import cosine_similarity
from .errors import EmptyQueryError, NotFoundError, ParameterError
from .lexical import LexicalIndex, min_max_normalize, tokenize
from .model import ArcDocument, Chunk, FieldType, extract_chunks, flatten_search_text
from .vector_index import VectorIndex

DEFAULT_ALPHA = 0.5
DEFAULT_BETA = 0.7
DEFAULT_GAMMA = 0.1
MIN_CANDIDATES = 50


@dataclass(frozen=True)
class StructureFilter:
    field_type: FieldType
    match: str


@dataclass(frozen=True)
class SearchQuery:
    text: str
    k: int = 5
    alpha: float = DEFAULT_ALPHA
    beta: float = DEFAULT_BETA
    gamma: float = DEFAULT_GAMMA
    filters: tuple[StructureFilter, ...] = ()

    def validate(self) -> None:
        if not self.text.strip():
            raise EmptyQueryError("query text is empty")
        if self.k < 1:
            raise ParameterError("k must be >= 1")
        for name, value in (("alpha", self.alpha), ("beta", self.beta)):
            if not 0.0 <= value <= 1.0:
                raise ParameterError(f"{name} must be in [0, 1], got {value}")
        if self.gamma < 0.0:
            raise ParameterError(f"gamma must be >= 0, got {self.gamma}")


@dataclass(frozen=True)
class BestChunk:
    field_type: FieldType
    chunk_index: int
    chunk_text: str
    score: float


@dataclass(frozen=True)
class RankedResult:
    arc_id: str
    final_score: float
    document_score: float
    chunk_max_score: float
    best_chunk: BestChunk
    boosted: bool = False


def final_score(s_d: float, s_cmax: float, alpha: float) -> float:
    """Linear blend of document and best-chunk scores."""
    if not 0.0 <= alpha <= 1.0:
        raise ParameterError(f"alpha must be in [0, 1], got {alpha}")
    return alpha * s_d + (1.0 - alpha) * s_cmax


def apply_filter_boost(
    result: RankedResult,
    filters: tuple[StructureFilter, ...],
    chunks: list[Chunk],
    gamma: float,
) -> RankedResult | None:
    """Boost a result matching every filter; exclude it if any filter fails.

    A filter matches when its text is a case-insensitive substring of any
    chunk_text with the filter's field_type. Returns None for excluded
    documents; no filters leaves the result unchanged.
    """
    if not filters:
        return result
    for f in filters:
        if not isinstance(f.field_type, FieldType):
            raise ParameterError(f"unknown field_type {f.field_type!r}")
        needle = f.match.lower()
        if not any(
            needle in c.chunk_text.lower() for c in chunks if c.field_type == f.field_type
        ):
            return None
    return replace(
        result,
        final_score=result.final_score * (1.0 + gamma),
        boosted=True,
        best_chunk=result.best_chunk,
    )


def _semantic_01(cos: float) -> float:
    # Affine, corpus-independent map of cosine into [0, 1].
    return (1.0 + cos) / 2.0


class SearchEngine:
    """In-memory corpus with dual vector/lexical indices and hybrid search."""

    def __init__(self, embedder, dimension: int | None = None):
        self.embedder = embedder
        self.dimension = dimension or embedder.dimension
        self.doc_vectors = VectorIndex(self.dimension, namespace="document")
        self.chunk_vectors = VectorIndex(self.dimension, namespace="chunk")
        self.doc_lexical = LexicalIndex()
        self.chunk_lexical = LexicalIndex()
        self.documents: dict[str, ArcDocument] = {}
        self.chunks: dict[str, list[Chunk]] = {}

    def __len__(self) -> int:
        return len(self.documents)

    # -- corpus mutation ---------------------------------------------------

    def ingest(self, doc: ArcDocument) -> int:
        """Index a document and all its chunks; upserts replace old state.

        Embeddings are computed before any structure is touched, so a
        provider failure leaves the engine unchanged. Returns the number of
        chunks indexed.
        """
        search_text = flatten_search_text(doc)
        chunks = extract_chunks(doc)
        vectors = self.embedder.embed_batch([search_text] + [c.chunk_text for c in chunks])
        self.remove(doc.arc_id)
        self.doc_vectors.add(doc.arc_id, vectors[0])
        self.doc_lexical.index_document(doc.arc_id, search_text)
        for chunk, vec in zip(chunks, vectors[1:]):
            self.chunk_vectors.add(chunk.chunk_id, vec)
            self.chunk_lexical.index_document(chunk.chunk_id, chunk.chunk_text)
        self.documents[doc.arc_id] = doc
        self.chunks[doc.arc_id] = chunks
        return len(chunks)

    def remove(self, arc_id: str) -> bool:
        """Drop a document and its chunks from every structure."""
        if arc_id not in self.documents:
            return False
        for chunk in self.chunks[arc_id]:
            self.chunk_vectors.remove(chunk.chunk_id)
            self.chunk_lexical.remove(chunk.chunk_id)
        self.doc_vectors.remove(arc_id)
        self.doc_lexical.remove(arc_id)
        del self.documents[arc_id]
        del self.chunks[arc_id]
        return True

    # -- scoring -----------------------------------------------------------

    def _doc_scores(
        self, q_vec: np.ndarray, q_tokens: list[str], candidates: list[str], beta: float
    ) -> dict[str, float]:
        raw_lex = [self.doc_lexical.score_document(a, q_tokens) for a in candidates]
        lex = min_max_normalize(raw_lex)
        out = {}
        for arc_id, lex_score in zip(candidates, lex):
            vec = self.doc_vectors.get(arc_id)
            if vec is None:
                raise NotFoundError(f"arc_id {arc_id!r} not in document index")
            sem = _semantic_01(cosine_similarity(q_vec, vec))
            out[arc_id] = beta * sem + (1.0 - beta) * lex_score
        return out

    def _chunk_best(
        self, q_vec: np.ndarray, q_tokens: list[str], candidates: list[str], beta: float
    ) -> dict[str, BestChunk]:
        all_chunks = [c for a in candidates for c in self.chunks[a]]
        raw_lex = [self.chunk_lexical.score_document(c.chunk_id, q_tokens) for c in all_chunks]
        lex = min_max_normalize(raw_lex) if all_chunks else []
        best: dict[str, BestChunk] = {}
        for chunk, lex_score in zip(all_chunks, lex):
            vec = self.chunk_vectors.get(chunk.chunk_id)
            if vec is None:
                raise NotFoundError(f"chunk {chunk.chunk_id!r} not in chunk index")
            sem = _semantic_01(cosine_similarity(q_vec, vec))
            score = beta * sem + (1.0 - beta) * lex_score
            current = best.get(chunk.arc_id)
            if (
                current is None
                or score > current.score
                or (
                    score == current.score
                    and (chunk.field_type.order, chunk.chunk_index)
                    < (current.field_type.order, current.chunk_index)
                )
            ):
                best[chunk.arc_id] = BestChunk(
                    field_type=chunk.field_type,
                    chunk_index=chunk.chunk_index,
                    chunk_text=chunk.chunk_text,
                    score=score,
                )
        return best

    def document_score(self, q: SearchQuery, arc_id: str, candidates: list[str] | None = None) -> float:
        """S_D for one document; lexical part normalized over `candidates`
        (whole corpus when omitted)."""
        q.validate()
        if arc_id not in self.documents:
            raise NotFoundError(f"unknown arc_id {arc_id!r}")
        candidates = candidates if candidates is not None else sorted(self.documents)
        q_vec = self.embedder.embed(q.text)
        scores = self._doc_scores(q_vec, tokenize(q.text), candidates, q.beta)
        return scores[arc_id]

    def chunk_max_score(
        self, q: SearchQuery, arc_id: str, candidates: list[str] | None = None
    ) -> tuple[float, BestChunk]:
        """Max blended chunk score for one document, with its chunk."""
        q.validate()
        if arc_id not in self.documents:
            raise NotFoundError(f"unknown arc_id {arc_id!r}")
        candidates = candidates if candidates is not None else sorted(self.documents)
        q_vec = self.embedder.embed(q.text)
        best = self._chunk_best(q_vec, tokenize(q.text), candidates, q.beta)
        chunk = best[arc_id]
        return chunk.score, chunk

    def search(self, q: SearchQuery, candidate_limit: int | None = None) -> list[RankedResult]:
        """Hybrid top-k search.

        Candidates are the union of top-C vector document hits, parents of
        top-C vector chunk hits, and top-C BM25 documents, with
        C = max(5k, 50) unless `candidate_limit` overrides it.
        """
        q.validate()
        q_tokens = tokenize(q.text)
        if not q_tokens:
            raise EmptyQueryError("query text has no tokens")
        if not self.documents:
            return []
        limit = candidate_limit if candidate_limit is not None else max(5 * q.k, MIN_CANDIDATES)
        q_vec = self.embedder.embed(q.text)

        candidate_set: set[str] = set()
        for hit in self.doc_vectors.search_top_k(q_vec, limit):
            candidate_set.add(hit.entry_id)
        for hit in self.chunk_vectors.search_top_k(q_vec, limit):
            candidate_set.add(hit.entry_id.split("\x1f", 1)[0])
        for hit in self.doc_lexical.bm25_top_k(q_tokens, limit):
            candidate_set.add(hit.entry_id)
        candidates = sorted(candidate_set)

        doc_scores = self._doc_scores(q_vec, q_tokens, candidates, q.beta)
        best_chunks = self._chunk_best(q_vec, q_tokens, candidates, q.beta)

        results = []
        for arc_id in candidates:
            s_d = doc_scores[arc_id]
            best = best_chunks[arc_id]
            result = RankedResult(
                arc_id=arc_id,
                final_score=final_score(s_d, best.score, q.alpha),
                document_score=s_d,
                chunk_max_score=best.score,
                best_chunk=best,
            )
            result = apply_filter_boost(result, q.filters, self.chunks[arc_id], q.gamma)
            if result is not None:
                results.append(result)
        results.sort(key=lambda r: (-r.final_score, r.arc_id))
        return results[: q.k]

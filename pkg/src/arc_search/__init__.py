"""Hybrid semantic/lexical search over structured research metadata."""

from .embedding import (
    DeterministicHashEmbedder,
    RemoteEmbedder,
    RemoteEmbedderConfig,
    cosine_similarity,
    embed_text,
    normalize,
)
from .lexical import LexicalIndex, min_max_normalize, tokenize
from .model import (
    ArcDocument,
    Chunk,
    FieldType,
    Parameter,
    extract_chunks,
    flatten_search_text,
    parse_arc_document,
)
from .scorer import (
    BestChunk,
    RankedResult,
    SearchEngine,
    SearchQuery,
    StructureFilter,
    apply_filter_boost,
    final_score,
)
from .vector_index import ScoredHit, VectorIndex

__all__ = [
    "ArcDocument",
    "BestChunk",
    "Chunk",
    "DeterministicHashEmbedder",
    "FieldType",
    "LexicalIndex",
    "Parameter",
    "RankedResult",
    "RemoteEmbedder",
    "RemoteEmbedderConfig",
    "ScoredHit",
    "SearchEngine",
    "SearchQuery",
    "StructureFilter",
    "VectorIndex",
    "apply_filter_boost",
    "cosine_similarity",
    "embed_text",
    "extract_chunks",
    "final_score",
    "flatten_search_text",
    "min_max_normalize",
    "normalize",
    "parse_arc_document",
    "tokenize",
]

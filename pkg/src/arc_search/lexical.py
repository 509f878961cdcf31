"""BM25 inverted index plus min-max score normalization.

Tokenization is deliberately minimal (lowercase, split on non-alphanumeric):
no stemming or stop words, so scores are reproducible across platforms. IDF
uses the non-negative ln(1 + (N - n + 0.5)/(n + 0.5)) variant.
"""
from __future__ import annotations

import json
import math
import re
import threading
from collections import Counter

from .errors import EmptyInputError, EmptyQueryError
from .vector_index import ScoredHit

DEFAULT_K1 = 1.2
DEFAULT_B = 0.75

_TOKEN_RE = re.compile(r"[0-9a-z]+")


def tokenize(text: str) -> list[str]:
    """Lowercase and split on any non-alphanumeric character."""
    return _TOKEN_RE.findall(text.lower())


def min_max_normalize(scores: list[float]) -> list[float]:
    """Rescale scores to [0, 1] via (s - min) / (max - min).

    Order-preserving and invariant under positive affine transforms. A
    constant list maps to all zeros (uninformative scores should not be
    inflated to 1).
    """
    if not scores:
        raise EmptyInputError("cannot normalize an empty score list")
    lo, hi = min(scores), max(scores)
    if hi == lo:
        return [0.0] * len(scores)
    span = hi - lo
    return [(s - lo) / span for s in scores]


class LexicalIndex:
    """Inverted index with BM25 ranking and upsert/remove semantics."""

    def __init__(self, k1: float = DEFAULT_K1, b: float = DEFAULT_B):
        self.k1 = k1
        self.b = b
        self._postings: dict[str, dict[str, int]] = {}  # term -> entry_id -> tf
        self._doc_terms: dict[str, Counter] = {}        # entry_id -> term counts
        self._doc_lengths: dict[str, int] = {}
        self._lock = threading.RLock()

    def __len__(self) -> int:
        return len(self._doc_lengths)

    @property
    def total_docs(self) -> int:
        return len(self._doc_lengths)

    @property
    def avg_doc_length(self) -> float:
        if not self._doc_lengths:
            return 0.0
        return sum(self._doc_lengths.values()) / len(self._doc_lengths)

    def index_document(self, entry_id: str, text: str) -> None:
        """Add or replace a document's postings."""
        if not entry_id:
            raise ValueError("entry_id must be non-empty")
        tokens = tokenize(text)
        with self._lock:
            self.remove(entry_id)
            counts = Counter(tokens)
            self._doc_terms[entry_id] = counts
            self._doc_lengths[entry_id] = len(tokens)
            for term, tf in counts.items():
                self._postings.setdefault(term, {})[entry_id] = tf

    def remove(self, entry_id: str) -> bool:
        with self._lock:
            counts = self._doc_terms.pop(entry_id, None)
            if counts is None:
                return False
            del self._doc_lengths[entry_id]
            for term in counts:
                bucket = self._postings[term]
                del bucket[entry_id]
                if not bucket:
                    del self._postings[term]
            return True

    def _idf(self, term: str) -> float:
        n_t = len(self._postings.get(term, ()))
        n = self.total_docs
        return math.log(1.0 + (n - n_t + 0.5) / (n_t + 0.5))

    def score_document(self, entry_id: str, query_tokens: list[str]) -> float:
        """Raw BM25 score of one document (0.0 if it matches no query term)."""
        with self._lock:
            length = self._doc_lengths.get(entry_id)
            if length is None:
                return 0.0
            avgdl = self.avg_doc_length
            norm = self.k1 * (1.0 - self.b + self.b * length / avgdl) if avgdl else self.k1
            score = 0.0
            counts = self._doc_terms[entry_id]
            for term in query_tokens:
                tf = counts.get(term, 0)
                if tf:
                    score += self._idf(term) * tf * (self.k1 + 1.0) / (tf + norm)
            return score

    def bm25_top_k(self, query_tokens: list[str], k: int) -> list[ScoredHit]:
        """Top-k documents by BM25; zero-score documents are excluded.

        Ties broken by ascending entry_id.
        """
        if not query_tokens:
            raise EmptyQueryError("query token list is empty")
        if k < 1:
            raise ValueError("k must be >= 1")
        with self._lock:
            candidates: set[str] = set()
            for term in set(query_tokens):
                candidates.update(self._postings.get(term, ()))
            scored = [(eid, self.score_document(eid, query_tokens)) for eid in candidates]
        scored = [(eid, s) for eid, s in scored if s > 0.0]
        scored.sort(key=lambda pair: (-pair[1], pair[0]))
        return [ScoredHit(entry_id=eid, score=s) for eid, s in scored[:k]]

    def stats_json(self) -> str:
        with self._lock:
            return json.dumps(
                {
                    "term_count": len(self._postings),
                    "total_docs": self.total_docs,
                    "avg_doc_length": self.avg_doc_length,
                    "k1": self.k1,
                    "b": self.b,
                }
            )

"""Natural-language summaries of top-ranked results.

Two modes: a deterministic stub template for hermetic tests and a generic
HTTP generative endpoint (prompt in, text out) for production. Summaries are
presentation-only and never influence ranking.
"""
from __future__ import annotations

from dataclasses import dataclass

import httpx

from .errors import ProviderError

DEFAULT_MAX_CHARS = 400


@dataclass(frozen=True)
class SummaryRequest:
    arc_id: str
    search_text: str
    best_chunk_text: str
    best_chunk_field: str
    query_text: str
    title: str = ""
    description: str = ""
    max_chars: int = DEFAULT_MAX_CHARS


class SummaryUnavailable(ProviderError):
    """Remote summarizer failed; callers degrade gracefully."""


class StubSummarizer:
    """Deterministic template summarizer: no network, bit-stable output."""

    mode = "stub"

    def summarize(self, req: SummaryRequest) -> str:
        parts = [req.title or req.search_text.split(". ")[0]]
        if req.description:
            parts.append(req.description[:200])
        parts.append(f"Matched on {req.best_chunk_field}: {req.best_chunk_text}")
        return " ".join(p for p in parts if p)[: req.max_chars]


@dataclass
class RemoteSummarizerConfig:
    url: str
    auth_token: str | None = None
    timeout: float = 30.0
    max_fan_out: int = 5


class RemoteSummarizer:
    """Client for a generic generative endpoint.

    Protocol: POST {"prompt": string, "max_chars": int} -> {"text": string}.
    """

    mode = "remote"

    def __init__(self, config: RemoteSummarizerConfig):
        self.config = config
        headers = {}
        if config.auth_token:
            headers["Authorization"] = f"Bearer {config.auth_token}"
        self._client = httpx.Client(
            timeout=config.timeout,
            headers=headers,
            limits=httpx.Limits(max_connections=config.max_fan_out),
        )

    def summarize(self, req: SummaryRequest) -> str:
        prompt = (
            f"Summarize this research metadata for the query {req.query_text!r}. "
            f"Best matching section ({req.best_chunk_field}): {req.best_chunk_text}\n"
            f"{req.search_text}"
        )
        try:
            resp = self._client.post(
                self.config.url, json={"prompt": prompt, "max_chars": req.max_chars}
            )
            resp.raise_for_status()
            text = resp.json()["text"]
        except (httpx.HTTPError, KeyError, ValueError) as exc:
            raise SummaryUnavailable(f"summary endpoint failure: {exc}") from exc
        if not isinstance(text, str):
            raise SummaryUnavailable("summary endpoint returned non-text payload")
        return text[: req.max_chars]

    def close(self) -> None:
        self._client.close()


def summarize(req: SummaryRequest, summarizer) -> str:
    return summarizer.summarize(req)

"""Seeded generator for a synthetic benchmark corpus and query set.

The real 122-query benchmark behind the published evaluation is private, so
the repo ships a reproducible synthetic stand-in: 200 documents with
per-document distinctive vocabulary and 64 queries across the six named
categories. SEM queries share meaning-bearing unigrams with their gold
document but avoid exact phrases; KW queries are verbatim title substrings.
"""
from __future__ import annotations

import json
import random
from pathlib import Path

ORGANISMS = [
    "chlamydomonas", "arabidopsis", "tomato", "potato", "barley", "maize",
    "wheat", "rice", "soybean", "tobacco", "moss", "algae",
]
TREATMENTS = [
    "heat", "drought", "cold", "salt", "light", "nitrogen", "phosphate",
    "oxidative", "osmotic", "pathogen",
]
ASSAYS = ["Proteomics", "Transcriptomics", "Metabolomics", "Growth", "Imaging", "Phenotyping"]
PARAM_NAMES = ["temperature", "buffer", "duration", "medium", "replicates"]
PARAM_VALUES = ["35C", "TAP", "24h", "MS", "3", "40C", "48h", "TRIS", "5", "HEPES"]
FILLER = [
    "samples", "were", "collected", "and", "analyzed", "under", "controlled",
    "conditions", "for", "the", "study", "of", "responses", "in",
]


def _doc(rng: random.Random, i: int) -> dict:
    organism = rng.choice(ORGANISMS)
    treatment = rng.choice(TREATMENTS)
    marker = f"marker{i:03d}"  # distinctive per-document token
    title = f"Investigation of {treatment} stress responses in {organism} {marker}"
    description = " ".join(
        [treatment, "stress", organism]
        + rng.choices(FILLER, k=10)
        + [marker, rng.choice(TREATMENTS), rng.choice(ORGANISMS)]
    )
    return {
        "arc_id": f"arc-{i:03d}",
        "title": title,
        "description": description,
        "people": [f"Researcher {i % 17} (Institute {i % 5})"],
        "publications": [f"Findings on {treatment} stress in {organism} {marker}"],
        "studies": [f"{treatment.capitalize()}Experiment{i:03d}"],
        "assays": sorted(rng.sample(ASSAYS, k=rng.randint(1, 3))),
        "parameters": [
            {"name": rng.choice(PARAM_NAMES), "value": rng.choice(PARAM_VALUES)},
            {"name": "marker", "value": marker},
        ],
        "version": 1,
    }


def _queries(rng: random.Random, docs: list[dict]) -> list[dict]:
    queries: list[dict] = []

    def add(category: str, text: str, gold: str, filters: list | None = None):
        queries.append(
            {
                "query_id": f"q-{category.lower()}-{len(queries):03d}",
                "text": text,
                "category": category,
                "relevant": [gold],
                **({"filters": filters} if filters else {}),
            }
        )

    picks = rng.sample(docs, k=64)
    it = iter(picks)

    # KW: exact substring of the gold document's title; the tail window
    # includes the per-document marker so the substring is unique to it.
    for _ in range(12):
        doc = next(it)
        words = doc["title"].split()
        add("KW", " ".join(words[-4:]), doc["arc_id"])

    # KWPAR: parameter name-value pairs.
    for _ in range(10):
        doc = next(it)
        p = doc["parameters"][1]
        add("KWPAR", f"{p['name']} {p['value']}", doc["arc_id"])

    # KWSUD: study identifiers.
    for _ in range(10):
        doc = next(it)
        add("KWSUD", doc["studies"][0], doc["arc_id"])

    # KWA: assay names plus the distinguishing marker.
    for _ in range(10):
        doc = next(it)
        marker = doc["parameters"][1]["value"]
        add(
            "KWA",
            f"{doc['assays'][0]} {marker}",
            doc["arc_id"],
            filters=[{"field_type": "assay", "match": doc["assays"][0]}],
        )

    # SWK: sentence-with-keywords, natural phrasing around distinctive tokens.
    for _ in range(10):
        doc = next(it)
        marker = doc["parameters"][1]["value"]
        words = doc["title"].split()
        add("SWK", f"which experiments looked at {words[2]} effects {marker}", doc["arc_id"])

    # SEM: shared meaning-bearing unigrams with the gold doc, reordered and
    # wrapped in common words, with no exact phrase and no unique marker.
    for _ in range(12):
        doc = next(it)
        title_words = [w.lower() for w in doc["title"].split()]
        treatment, organism = title_words[2], title_words[-2]
        add(
            "SEM",
            f"studies about {organism} under {treatment} conditions and responses",
            doc["arc_id"],
        )

    return queries


def generate_benchmark(out_dir: str | Path, n_docs: int = 200, seed: int = 77) -> tuple[Path, Path]:
    """Write corpus.jsonl and queries.jsonl; fully determined by the seed."""
    if n_docs < 64:
        raise ValueError("need at least 64 documents (one gold per query)")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed)
    docs = [_doc(rng, i) for i in range(n_docs)]
    corpus_path = out_dir / "corpus.jsonl"
    queries_path = out_dir / "queries.jsonl"
    with open(corpus_path, "w", encoding="utf-8", newline="\n") as fh:
        for doc in docs:
            fh.write(json.dumps(doc, sort_keys=True) + "\n")
    with open(queries_path, "w", encoding="utf-8", newline="\n") as fh:
        for query in _queries(rng, docs):
            fh.write(json.dumps(query, sort_keys=True) + "\n")
    return corpus_path, queries_path

"""Walkthrough: parsing research-metadata JSON, flattening it into a single
search string, and decomposing it into typed chunks.

Run with: python3 demos/01_documents_and_chunks.py
"""
import json

from arc_search import extract_chunks, flatten_search_text, parse_arc_document

raw = json.dumps(
    {
        "arc_id": "arc-demo",
        "title": "Drought stress responses in barley roots",
        "description": "Plants were grown under water-limited conditions for 14 days.",
        "people": ["A. Researcher (Example Institute)"],
        "studies": ["DroughtTimecourse"],
        "assays": ["Transcriptomics", "Phenotyping"],
        "parameters": [{"name": "duration", "value": "14d"}],
    }
)

doc = parse_arc_document(raw)
print("parsed:", doc.arc_id, "version", doc.version)

# The flattened string is what gets embedded at whole-document level.
print("\nsearch_text:")
print(" ", flatten_search_text(doc))

# Chunks are the fine-grained retrieval units: one per metadata element.
print("\nchunks:")
for chunk in extract_chunks(doc):
    print(f"  [{chunk.field_type.value:11s} #{chunk.chunk_index}] {chunk.chunk_text}")

# Concatenating chunk texts in order reproduces the flattened string exactly.
joined = " ".join(c.chunk_text for c in extract_chunks(doc))
assert joined == flatten_search_text(doc)
print("\nround-trip: chunk concatenation equals search_text ✓")

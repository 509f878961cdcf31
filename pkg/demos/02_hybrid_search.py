"""Walkthrough: hybrid semantic + lexical ranking with chunk provenance.

Builds a small in-memory corpus, then shows how the alpha weight shifts the
ranking between whole-document and best-chunk scores, and how structure
filters constrain and boost results.

Run with: python3 demos/02_hybrid_search.py
"""
from arc_search import (
    ArcDocument,
    DeterministicHashEmbedder,
    FieldType,
    SearchEngine,
    SearchQuery,
    StructureFilter,
)

engine = SearchEngine(DeterministicHashEmbedder(dimension=256))

corpus = [
    ArcDocument(
        arc_id="arc-heat",
        title="Heat stress responses in green algae",
        description="Cultures shifted to 40 degrees; omics samples collected.",
        studies=("HeatstressExperiment",),
        assays=("Proteomics", "Transcriptomics"),
    ),
    ArcDocument(
        arc_id="arc-drought",
        title="Drought tolerance in barley cultivars",
        description="Water withheld for two weeks before phenotyping.",
        studies=("DroughtTrial",),
        assays=("Phenotyping",),
    ),
    ArcDocument(
        arc_id="arc-cold",
        title="Cold acclimation of winter wheat",
        description="Field-grown wheat sampled across winter months.",
        assays=("Transcriptomics", "Metabolomics"),
    ),
]
for doc in corpus:
    engine.ingest(doc)

query_text = "heat stress omics experiments"

print(f"query: {query_text!r}\n")
for alpha in (1.0, 0.5, 0.0):
    results = engine.search(SearchQuery(text=query_text, alpha=alpha, k=3))
    print(f"alpha={alpha} (1.0 = document-only, 0.0 = chunk-only):")
    for r in results:
        print(
            f"  {r.arc_id:12s} final={r.final_score:.3f} "
            f"doc={r.document_score:.3f} chunk_max={r.chunk_max_score:.3f} "
            f"best=[{r.best_chunk.field_type.value}] {r.best_chunk.chunk_text[:40]!r}"
        )
    print()

# Structure filters are hard constraints: non-matching documents drop out,
# matching ones get a (1 + gamma) boost.
filtered = engine.search(
    SearchQuery(
        text=query_text,
        filters=(StructureFilter(FieldType.ASSAY, "proteomics"),),
    )
)
print("with filter assay~'proteomics':")
for r in filtered:
    print(f"  {r.arc_id:12s} final={r.final_score:.3f} boosted={r.boosted}")

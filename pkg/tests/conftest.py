import json

import pytest

from arc_search import DeterministicHashEmbedder

# Fixture document mirroring the flattening example the model is built
# around: one person, one publication, one study, four assays.
HEATSTRESS_DOC = {
    "arc_id": "arc-heatstress",
    "title": (
        "Systems-wide investigation of responses to moderate and acute high "
        "temperatures in the green alga Chlamydomonas reinhardtii."
    ),
    "description": (
        "Algae cultures were grown mixotrophically (TAP). After 24h of 35/40 "
        "degree celsius, the cells were shifted back to room temperature for "
        "48h. 'omics samples were taken."
    ),
    "people": ["Ningning Zhang (Donald Danforth Plant Science Center)"],
    "publications": [
        "Systems-wide analysis revealed shared and unique responses to "
        "moderate and acute high temperatures in the green alga "
        "Chlamydomonas reinhardtii."
    ],
    "studies": ["HeatstressExperiment"],
    "assays": ["Proteomics", "Transcriptomics", "Metabolomics", "Growth"],
}

HEATSTRESS_SEARCH_TEXT = (
    "Systems-wide investigation of responses to moderate and acute high "
    "temperatures in the green alga Chlamydomonas reinhardtii. "
    "Algae cultures were grown mixotrophically (TAP). After 24h of 35/40 "
    "degree celsius, the cells were shifted back to room temperature for "
    "48h. 'omics samples were taken. "
    "Ningning Zhang (Donald Danforth Plant Science Center) "
    "Systems-wide analysis revealed shared and unique responses to moderate "
    "and acute high temperatures in the green alga Chlamydomonas "
    "reinhardtii. "
    "HeatstressExperiment Proteomics Transcriptomics Metabolomics Growth"
)


@pytest.fixture
def heatstress_json() -> str:
    return json.dumps(HEATSTRESS_DOC)


@pytest.fixture
def embedder16() -> DeterministicHashEmbedder:
    return DeterministicHashEmbedder(dimension=16)


@pytest.fixture
def embedder64() -> DeterministicHashEmbedder:
    return DeterministicHashEmbedder(dimension=64)

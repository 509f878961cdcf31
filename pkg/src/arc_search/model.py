"""ARC document schema: parsing, search-text flattening, and chunk extraction.

An ArcDocument is one Annotated Research Context's metadata layers. Documents
are flattened into a single ``search_text`` string for whole-document
embedding and decomposed into typed chunks for fine-grained matching.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum

from .errors import DocumentParseError, SchemaError

_WS_RUN = re.compile(r"\s+")


def collapse_whitespace(text: str) -> str:
    """Trim and collapse internal whitespace runs to single spaces."""
    return _WS_RUN.sub(" ", text).strip()


class FieldType(str, Enum):
    """Metadata layer a chunk was extracted from.

    Declaration order is the tie-break order used when two chunks score
    equally.
    """

    TITLE = "title"
    DESCRIPTION = "description"
    STUDY = "study"
    ASSAY = "assay"
    PERSON = "person"
    PUBLICATION = "publication"
    PARAMETER = "parameter"

    @property
    def order(self) -> int:
        return _FIELD_ORDER[self]


_FIELD_ORDER = {ft: i for i, ft in enumerate(FieldType)}


@dataclass(frozen=True)
class Parameter:
    name: str
    value: str

    def as_text(self) -> str:
        return f"{self.name} {self.value}".strip()


@dataclass(frozen=True)
class ArcDocument:
    """One ARC's metadata layers.

    ``version`` must strictly increase across updates of the same
    ``arc_id``; the ingestion service enforces that rule.
    """

    arc_id: str
    title: str
    description: str = ""
    people: tuple[str, ...] = ()
    publications: tuple[str, ...] = ()
    studies: tuple[str, ...] = ()
    assays: tuple[str, ...] = ()
    parameters: tuple[Parameter, ...] = ()
    source_hub: str | None = None
    version: int = 1

    def to_json_dict(self) -> dict:
        out: dict = {
            "arc_id": self.arc_id,
            "title": self.title,
            "description": self.description,
            "people": list(self.people),
            "publications": list(self.publications),
            "studies": list(self.studies),
            "assays": list(self.assays),
            "parameters": [{"name": p.name, "value": p.value} for p in self.parameters],
            "version": self.version,
        }
        if self.source_hub is not None:
            out["source_hub"] = self.source_hub
        return out


@dataclass(frozen=True)
class Chunk:
    """A typed fragment of one ARC's metadata.

    ``chunk_index`` is the fragment's position within its field; indices for
    a given (arc_id, field_type) are contiguous from 0.
    """

    chunk_text: str
    field_type: FieldType
    arc_id: str
    chunk_index: int

    @property
    def chunk_id(self) -> str:
        # \x1f cannot appear in collapsed text, so the id is unambiguous.
        return f"{self.arc_id}\x1f{self.field_type.value}\x1f{self.chunk_index}"


def _string_list(raw: object, key: str) -> tuple[str, ...]:
    if raw is None:
        return ()
    if isinstance(raw, str):
        # Lenient: some payloads carry a single string where a list belongs.
        raw = [raw]
    if not isinstance(raw, list) or not all(isinstance(x, str) for x in raw):
        raise SchemaError(f"field '{key}' must be an array of strings", field=key)
    return tuple(s.strip() for s in raw)


def parse_arc_document(raw: str) -> ArcDocument:
    """Parse ingested JSON text into an ArcDocument.

    Absent optional fields become empty; string fields are trimmed; unknown
    keys are ignored (real payloads carry extra keys).

    Raises DocumentParseError (with byte offset) on malformed JSON and
    SchemaError naming the field on a missing arc_id/title or a bad shape.
    """
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise DocumentParseError(f"malformed JSON: {exc.msg} at offset {exc.pos}", offset=exc.pos) from exc
    return arc_document_from_dict(obj)


def arc_document_from_dict(obj: object) -> ArcDocument:
    if not isinstance(obj, dict):
        raise SchemaError("document must be a JSON object")
    for required in ("arc_id", "title"):
        value = obj.get(required)
        if not isinstance(value, str) or not value.strip():
            raise SchemaError(f"missing or empty required field '{required}'", field=required)

    params_raw = obj.get("parameters") or []
    if not isinstance(params_raw, list):
        raise SchemaError("field 'parameters' must be an array", field="parameters")
    parameters = []
    for p in params_raw:
        if not isinstance(p, dict) or not isinstance(p.get("name"), str) or not isinstance(p.get("value"), str):
            raise SchemaError(
                'parameters entries must be {"name": string, "value": string}', field="parameters"
            )
        parameters.append(Parameter(name=p["name"].strip(), value=p["value"].strip()))

    version = obj.get("version", 1)
    if not isinstance(version, int) or version < 1:
        raise SchemaError("field 'version' must be an integer >= 1", field="version")

    source_hub = obj.get("source_hub")
    if source_hub is not None and not isinstance(source_hub, str):
        raise SchemaError("field 'source_hub' must be a string", field="source_hub")

    description = obj.get("description", "")
    if not isinstance(description, str):
        raise SchemaError("field 'description' must be a string", field="description")

    return ArcDocument(
        arc_id=obj["arc_id"].strip(),
        title=obj["title"].strip(),
        description=description.strip(),
        people=_string_list(obj.get("people"), "people"),
        publications=_string_list(obj.get("publications"), "publications"),
        studies=_string_list(obj.get("studies"), "studies"),
        assays=_string_list(obj.get("assays"), "assays"),
        parameters=tuple(parameters),
        source_hub=source_hub.strip() if isinstance(source_hub, str) else None,
        version=version,
    )


def _flat_parts(doc: ArcDocument) -> list[tuple[FieldType, str]]:
    """All (field_type, collapsed text) pairs in the fixed flattening order."""
    parts: list[tuple[FieldType, str]] = [(FieldType.TITLE, collapse_whitespace(doc.title))]
    if collapse_whitespace(doc.description):
        parts.append((FieldType.DESCRIPTION, collapse_whitespace(doc.description)))
    for ft, items in (
        (FieldType.PERSON, doc.people),
        (FieldType.PUBLICATION, doc.publications),
        (FieldType.STUDY, doc.studies),
        (FieldType.ASSAY, doc.assays),
    ):
        for item in items:
            text = collapse_whitespace(item)
            if text:
                parts.append((ft, text))
    for param in doc.parameters:
        text = collapse_whitespace(param.as_text())
        if text:
            parts.append((FieldType.PARAMETER, text))
    return parts


def flatten_search_text(doc: ArcDocument) -> str:
    """Join all metadata layers into one string, in fixed field order.

    Order: title, description, people, publications, studies, assays, then
    parameters rendered as "name value". Empty fields contribute nothing.
    """
    return " ".join(text for _, text in _flat_parts(doc))


def extract_chunks(doc: ArcDocument) -> list[Chunk]:
    """Decompose a document into typed chunks, one per metadata element.

    chunk_index is the element's position within its field. Concatenating
    chunk_text values in emission order reproduces flatten_search_text(doc).
    """
    chunks: list[Chunk] = []
    counters: dict[FieldType, int] = {}
    for ft, text in _flat_parts(doc):
        idx = counters.get(ft, 0)
        counters[ft] = idx + 1
        chunks.append(Chunk(chunk_text=text, field_type=ft, arc_id=doc.arc_id, chunk_index=idx))
    return chunks

"""Exact flat inner-product index over unit-norm vectors.

Search is an exact full scan (scores are true inner products, which equal
cosine for unit vectors); no approximation. Removal uses tombstones with
compaction once they exceed 25% of stored rows. Snapshots use a fixed binary
layout with a trailing CRC32 so files are portable across implementations.
"""
from __future__ import annotations

import struct
import threading
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionError, NormalizationError, SnapshotError

SNAPSHOT_MAGIC = b"ARCX"
SNAPSHOT_FORMAT_VERSION = 1
NORM_TOLERANCE = 1e-4
COMPACT_TOMBSTONE_RATIO = 0.25


@dataclass(frozen=True)
class ScoredHit:
    entry_id: str
    score: float


class VectorIndex:
    """Flat inner-product index with upsert/remove and binary persistence.

    Thread contract: many concurrent readers or one writer; all public
    methods take an internal RLock so readers never observe a partially
    applied mutation.
    """

    def __init__(self, dimension: int, namespace: str = "document", capacity: int = 64):
        if dimension <= 0:
            raise DimensionError("dimension must be positive")
        self.dimension = dimension
        self.namespace = namespace
        self._matrix = np.zeros((capacity, dimension), dtype=np.float32)
        self._ids: list[str] = []          # row -> entry_id (including tombstoned rows)
        self._row_of: dict[str, int] = {}  # live entry_id -> row
        self._tombstones: set[int] = set()
        self._lock = threading.RLock()

    def __len__(self) -> int:
        with self._lock:
            return len(self._row_of)

    def entry_ids(self) -> list[str]:
        with self._lock:
            return list(self._row_of)

    def get(self, entry_id: str) -> np.ndarray | None:
        """Stored vector for a live entry, or None."""
        with self._lock:
            row = self._row_of.get(entry_id)
            if row is None:
                return None
            return self._matrix[row].copy()

    def _check_vector(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.float32)
        if v.shape != (self.dimension,):
            raise DimensionError(f"expected dimension {self.dimension}, got {v.shape}")
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise NormalizationError(f"vector norm {norm:.6f} is not 1 within {NORM_TOLERANCE}")
        return v

    def add(self, entry_id: str, v: np.ndarray) -> None:
        """Insert or replace (upsert) an entry."""
        if not entry_id:
            raise ValueError("entry_id must be non-empty")
        v = self._check_vector(v)
        with self._lock:
            row = self._row_of.get(entry_id)
            if row is not None:
                self._matrix[row] = v
                return
            row = len(self._ids)
            if row == self._matrix.shape[0]:
                grown = np.zeros((max(64, row * 2), self.dimension), dtype=np.float32)
                grown[:row] = self._matrix[:row]
                self._matrix = grown
            self._matrix[row] = v
            self._ids.append(entry_id)
            self._row_of[entry_id] = row

    def remove(self, entry_id: str) -> bool:
        """Tombstone an entry. Returns False (no-op) if the id is unknown."""
        with self._lock:
            row = self._row_of.pop(entry_id, None)
            if row is None:
                return False
            self._tombstones.add(row)
            if self._ids and len(self._tombstones) > COMPACT_TOMBSTONE_RATIO * len(self._ids):
                self._compact()
            return True

    def _compact(self) -> None:
        live_rows = [r for r in range(len(self._ids)) if r not in self._tombstones]
        self._matrix[: len(live_rows)] = self._matrix[live_rows]
        self._ids = [self._ids[r] for r in live_rows]
        self._row_of = {eid: i for i, eid in enumerate(self._ids)}
        self._tombstones.clear()

    def search_top_k(self, q: np.ndarray, k: int) -> list[ScoredHit]:
        """Top-k by exact inner product; ties broken by ascending entry_id."""
        if k < 1:
            raise ValueError("k must be >= 1")
        q = self._check_vector(q)
        with self._lock:
            if not self._row_of:
                return []
            ids = list(self._row_of)
            rows = [self._row_of[eid] for eid in ids]
            # float64 accumulation: float32 noise is large enough to reorder
            # near-tied scores relative to a double-precision reference
            scores = self._matrix[rows].astype(np.float64) @ q.astype(np.float64)
        order = sorted(range(len(ids)), key=lambda i: (-scores[i], ids[i]))[:k]
        return [ScoredHit(entry_id=ids[i], score=float(scores[i])) for i in order]

    # -- persistence ------------------------------------------------------

    def snapshot_save(self, path: str | Path) -> int:
        """Write live entries to `path` in the fixed binary format.

        Layout: magic "ARCX", format version u32 LE, dimension u32 LE, live
        count u64 LE, then per entry: id length u16 LE, UTF-8 id bytes,
        d float32 LE values; finally CRC32 (u32 LE) of all preceding bytes.
        Returns the byte count written.
        """
        with self._lock:
            items = [(eid, self._matrix[row].copy()) for eid, row in self._row_of.items()]
        parts = [
            SNAPSHOT_MAGIC,
            struct.pack("<I", SNAPSHOT_FORMAT_VERSION),
            struct.pack("<I", self.dimension),
            struct.pack("<Q", len(items)),
        ]
        for eid, vec in items:
            id_bytes = eid.encode("utf-8")
            if len(id_bytes) > 0xFFFF:
                raise SnapshotError("entry_id longer than 65535 bytes", section="entry")
            parts.append(struct.pack("<H", len(id_bytes)))
            parts.append(id_bytes)
            parts.append(vec.astype("<f4").tobytes())
        body = b"".join(parts)
        data = body + struct.pack("<I", zlib.crc32(body) & 0xFFFFFFFF)
        Path(path).write_bytes(data)
        return len(data)

    @classmethod
    def snapshot_load(cls, path: str | Path, namespace: str = "document") -> "VectorIndex":
        """Load a snapshot written by snapshot_save; validates every section."""
        data = Path(path).read_bytes()
        if len(data) < 20 + 4:
            raise SnapshotError("file shorter than header + checksum", section="header")
        body, crc_bytes = data[:-4], data[-4:]
        if struct.unpack("<I", crc_bytes)[0] != (zlib.crc32(body) & 0xFFFFFFFF):
            raise SnapshotError("checksum mismatch", section="crc")
        if body[:4] != SNAPSHOT_MAGIC:
            raise SnapshotError(f"bad magic {body[:4]!r}", section="magic")
        version, dimension = struct.unpack_from("<II", body, 4)
        if version != SNAPSHOT_FORMAT_VERSION:
            raise SnapshotError(f"unsupported format version {version}", section="version")
        if dimension <= 0:
            raise SnapshotError("non-positive dimension", section="dimension")
        (count,) = struct.unpack_from("<Q", body, 12)
        index = cls(dimension=dimension, namespace=namespace, capacity=max(64, count))
        offset = 20
        vec_bytes = 4 * dimension
        for i in range(count):
            if offset + 2 > len(body):
                raise SnapshotError(f"truncated at entry {i} id length", section="entry")
            (id_len,) = struct.unpack_from("<H", body, offset)
            offset += 2
            if offset + id_len + vec_bytes > len(body):
                raise SnapshotError(f"truncated at entry {i} payload", section="entry")
            entry_id = body[offset : offset + id_len].decode("utf-8")
            offset += id_len
            vec = np.frombuffer(body, dtype="<f4", count=dimension, offset=offset).copy()
            offset += vec_bytes
            index.add(entry_id, vec)
        if offset != len(body):
            raise SnapshotError("trailing bytes after last entry", section="entry")
        return index

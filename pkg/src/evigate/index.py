"""Exact inner-product index over unit embeddings.

File layout (little-endian)::

    magic  b"EVIX"
    u32    version
    u32    dimension
    u64    count
    count x (u64 unit_id, dimension x f64)
    u32    crc32 of everything above
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ChecksumMismatch, DimensionMismatch, IndexFormatError, VersionMismatch

MAGIC = b"EVIX"
VERSION = 1
_HEADER = struct.Struct("<4sIIQ")
_CRC = struct.Struct("<I")


@dataclass
class VectorIndex:
    unit_ids: np.ndarray  # uint64, ascending
    vectors: np.ndarray  # (count, dimension) float64
    dimension: int

    def __len__(self) -> int:
        return len(self.unit_ids)

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorIndex):
            return NotImplemented
        return (
            self.dimension == other.dimension
            and np.array_equal(self.unit_ids, other.unit_ids)
            and self.vectors.tobytes() == other.vectors.tobytes()
        )

    def vector(self, unit_id: int) -> np.ndarray:
        # entries are stored in unit_id order, one per unit
        return self.vectors[int(np.searchsorted(self.unit_ids, unit_id))]

    def scores(self, query_vec: np.ndarray) -> np.ndarray:
        """Clamped cosine of the query against every entry, in entry order."""
        if query_vec.shape != (self.dimension,):
            raise DimensionMismatch(self.dimension, query_vec.shape[0])
        if not len(self):
            return np.zeros(0)
        return np.clip((self.vectors * query_vec).sum(axis=1), 0.0, 1.0)

    def top_candidates(self, query_vec: np.ndarray, cand_k: int) -> list[tuple[int, float]]:
        """Highest-similarity entries, ties broken by ascending unit id."""
        scores = self.scores(query_vec)
        if cand_k <= 0:
            return []
        # lexsort sorts by the last key first
        order = np.lexsort((self.unit_ids, -scores))[:cand_k]
        return [(int(self.unit_ids[i]), float(scores[i])) for i in order]

    def to_bytes(self) -> bytes:
        parts = [_HEADER.pack(MAGIC, VERSION, self.dimension, len(self))]
        rec = np.dtype([("id", "<u8"), ("vec", "<f8", (self.dimension,))])
        table = np.empty(len(self), dtype=rec)
        table["id"] = self.unit_ids
        table["vec"] = self.vectors
        parts.append(table.tobytes())
        body = b"".join(parts)
        return body + _CRC.pack(zlib.crc32(body))

    @classmethod
    def from_bytes(cls, data: bytes) -> "VectorIndex":
        if len(data) < _HEADER.size:
            raise ChecksumMismatch("index file truncated in header")
        magic, version, dimension, count = _HEADER.unpack_from(data)
        if magic != MAGIC:
            raise IndexFormatError("not an index file (bad magic)")
        if version != VERSION:
            raise VersionMismatch(f"index version {version}, expected {VERSION}")
        rec = np.dtype([("id", "<u8"), ("vec", "<f8", (dimension,))])
        expected = _HEADER.size + count * rec.itemsize + _CRC.size
        if len(data) != expected:
            raise ChecksumMismatch(f"index file is {len(data)} bytes, expected {expected}")
        body = data[:-_CRC.size]
        (crc,) = _CRC.unpack(data[-_CRC.size:])
        if zlib.crc32(body) != crc:
            raise ChecksumMismatch("index checksum does not match contents")
        table = np.frombuffer(body, dtype=rec, offset=_HEADER.size, count=count)
        vectors = np.array(table["vec"], dtype=np.float64).reshape(count, dimension)
        return cls(np.array(table["id"], dtype=np.uint64), vectors, dimension)


def build_index(corpus, embedder) -> VectorIndex:
    units = list(corpus)
    vecs = embedder.embed_many([u.text for u in units]) if units else []
    dimension = embedder.dimension
    for v in vecs:
        if v.shape != (dimension,):
            raise DimensionMismatch(dimension, v.shape[0])
    matrix = np.vstack(vecs) if vecs else np.zeros((0, dimension))
    ids = np.array([u.unit_id for u in units], dtype=np.uint64)
    return VectorIndex(ids, matrix.astype(np.float64), dimension)


def top_candidates(index: VectorIndex, query_vec: np.ndarray, cand_k: int) -> list[tuple[int, float]]:
    return index.top_candidates(query_vec, cand_k)


def save_index(index: VectorIndex, path: str | Path) -> None:
    Path(path).write_bytes(index.to_bytes())


def load_index(path: str | Path) -> VectorIndex:
    return VectorIndex.from_bytes(Path(path).read_bytes())

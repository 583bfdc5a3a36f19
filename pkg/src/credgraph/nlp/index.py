"""In-memory nearest-neighbor index over encoded signal sentences.

The index is an exhaustive scan: at the corpus scales this engine targets
(tens of thousands of sentences) approximation buys nothing, and exactness
lets the index be checked against a brute-force oracle. Similarities are
computed per candidate with the same primitive as :func:`..nlp.similarity`,
so index results and pairwise calls always agree bit-for-bit.

Index files are binary: magic, format version, backend id, dimension, count,
the signal ids, then the float32 matrix (little-endian). Loading verifies the
header and refuses indexes built by a different backend.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from ..model import ValidationError
from .baseline import SentenceVector

_MAGIC = b"CGVX"
_VERSION = 1


@dataclass(frozen=True)
class Match:
    signal_ref: str
    similarity: float

    def __post_init__(self):
        if not 0.0 <= self.similarity <= 1.0:
            raise ValidationError(f"similarity must be in [0, 1], got {self.similarity}")


class VectorIndex:
    """Immutable similarity index mapping signal ids to unit vectors."""

    def __init__(self, backend_id: str, dim: int, ids: Sequence[str], matrix: np.ndarray):
        if matrix.shape != (len(ids), dim):
            raise ValidationError(f"matrix shape {matrix.shape} does not match {len(ids)} ids x dim {dim}")
        self.backend_id = backend_id
        self.dim = int(dim)
        self._ids = list(ids)
        self._matrix = np.ascontiguousarray(matrix, dtype=np.float32)

    def __len__(self):
        return len(self._ids)

    def nearest(self, query: SentenceVector, k: int, sim_floor: float = 0.0) -> list:
        """Up to k matches with similarity >= sim_floor, best first.

        Ordering is deterministic: descending similarity, ties by signal id.
        """
        if k < 1:
            raise ValidationError(f"k must be >= 1, got {k}")
        if query.dim != self.dim:
            raise ValidationError(f"query dimension {query.dim} does not match index dimension {self.dim}")
        q = query.values
        candidates = []
        for i, signal_id in enumerate(self._ids):
            # Same arithmetic as similarity(), kept per-row for bit-stable results.
            cos = float(np.dot(self._matrix[i], q))
            sim = min(1.0, max(0.0, (cos + 1.0) / 2.0))
            if sim >= sim_floor:
                candidates.append((signal_id, sim))
        candidates.sort(key=lambda c: (-c[1], c[0]))
        return [Match(signal_ref=sid, similarity=sim) for sid, sim in candidates[:k]]

    # -- persistence ---------------------------------------------------------

    def save(self, path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        backend_bytes = self.backend_id.encode("utf-8")
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(struct.pack("<HH", _VERSION, len(backend_bytes)))
            fh.write(backend_bytes)
            fh.write(struct.pack("<IQ", self.dim, len(self._ids)))
            for signal_id in self._ids:
                raw = signal_id.encode("utf-8")
                fh.write(struct.pack("<I", len(raw)))
                fh.write(raw)
            fh.write(self._matrix.astype("<f4").tobytes())


def build_index(backend_id: str, dim: int, entries: Sequence[tuple]) -> VectorIndex:
    """Build an index from (signal id, SentenceVector) pairs.

    All vectors must share the backend's dimension; an empty entry list
    yields a valid empty index.
    """
    ids = []
    rows = []
    for signal_id, vector in entries:
        if vector.dim != dim:
            raise ValidationError(f"vector for {signal_id!r} has dimension {vector.dim}, expected {dim}")
        ids.append(signal_id)
        rows.append(vector.values)
    matrix = np.vstack(rows).astype(np.float32) if rows else np.zeros((0, dim), dtype=np.float32)
    return VectorIndex(backend_id=backend_id, dim=dim, ids=ids, matrix=matrix)


def load_index(path, expected_backend_id: Optional[str] = None) -> VectorIndex:
    """Load an index file, verifying magic, version and (optionally) backend id."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _MAGIC:
            raise ValidationError(f"{path}: not an index file (bad magic {magic!r})")
        version, backend_len = struct.unpack("<HH", fh.read(4))
        if version != _VERSION:
            raise ValidationError(f"{path}: unsupported index version {version}")
        backend_id = fh.read(backend_len).decode("utf-8")
        if expected_backend_id is not None and backend_id != expected_backend_id:
            raise ValidationError(
                f"{path}: index was built with backend {backend_id!r}, expected {expected_backend_id!r}"
            )
        dim, count = struct.unpack("<IQ", fh.read(12))
        ids = []
        for _ in range(count):
            (id_len,) = struct.unpack("<I", fh.read(4))
            ids.append(fh.read(id_len).decode("utf-8"))
        payload = fh.read(count * dim * 4)
        if len(payload) != count * dim * 4:
            raise ValidationError(f"{path}: truncated index payload")
        matrix = np.frombuffer(payload, dtype="<f4").reshape(count, dim)
    return VectorIndex(backend_id=backend_id, dim=dim, ids=ids, matrix=np.array(matrix, dtype=np.float32))

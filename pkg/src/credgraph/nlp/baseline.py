"""Deterministic built-in NLP baseline: no models, bit-reproducible anywhere.

Encoding hashes character 3-5-grams into a fixed 512-bucket vector; stance
uses token overlap and negation-marker parity. Both are intentionally crude:
they make the whole engine runnable and testable without any ML dependency,
while real quality comes from the remote backend.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass

import numpy as np

from .. import model
from ..algebra import StanceLabel

BASELINE_DIM = 512
BASELINE_ID = "baseline-cgram512-v1"

_NGRAM_SIZES = (3, 4, 5)
_UNIT_TOLERANCE = 1e-6

_TOKEN_RE = re.compile(r"[a-z0-9']+")
_NEGATION_MARKERS = frozenset({"not", "no", "never", "fake", "false"})

UNRELATED_OVERLAP_FLOOR = 0.15
AGREE_OVERLAP_FLOOR = 0.6


@dataclass(frozen=True)
class SentenceVector:
    """A unit-L2 embedding of one sentence, tied to the backend that made it."""

    values: np.ndarray
    backend_id: str

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float32)
        object.__setattr__(self, "values", arr)
        norm = float(np.linalg.norm(arr))
        if abs(norm - 1.0) > _UNIT_TOLERANCE:
            raise model.ValidationError(f"sentence vector must be unit norm, got {norm}")

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])


@dataclass(frozen=True)
class StanceJudgment:
    label: StanceLabel
    score: float

    def __post_init__(self):
        if not 0.0 <= self.score <= 1.0:
            raise model.ValidationError(f"stance score must be in [0, 1], got {self.score}")


def similarity(a: SentenceVector, b: SentenceVector) -> float:
    """Cosine similarity rescaled from [-1, 1] to [0, 1]; symmetric."""
    if a.dim != b.dim:
        raise model.ValidationError(f"vector dimension mismatch: {a.dim} vs {b.dim}")
    cos = float(np.dot(a.values, b.values))
    return min(1.0, max(0.0, (cos + 1.0) / 2.0))


def _bucket(gram: str) -> int:
    digest = hashlib.blake2b(gram.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big") % BASELINE_DIM


def _tokens(text: str) -> list:
    return _TOKEN_RE.findall(text.lower())


def _negation_count(tokens: list) -> int:
    return sum(1 for t in tokens if t in _NEGATION_MARKERS or t.endswith("n't"))


class BaselineBackend:
    """Pure-function encoder and stance heuristic; safe for concurrent use."""

    backend_id = BASELINE_ID
    dim = BASELINE_DIM

    def encode(self, sentence: str) -> SentenceVector:
        if not sentence or not sentence.strip():
            raise model.ValidationError("cannot encode an empty sentence")
        text = " ".join(sentence.lower().split())
        grams = [text[i:i + n] for n in _NGRAM_SIZES for i in range(len(text) - n + 1)]
        if not grams:
            grams = [text]  # very short input: hash it whole
        vec = np.zeros(BASELINE_DIM, dtype=np.float32)
        for gram in grams:
            vec[_bucket(gram)] += 1.0
        vec /= np.linalg.norm(vec)
        return SentenceVector(values=vec, backend_id=self.backend_id)

    def encode_batch(self, sentences) -> list:
        return [self.encode(s) for s in sentences]

    def stance(self, source: str, target: str) -> StanceJudgment:
        """Heuristic stance: overlap gates relatedness, negation parity flips.

        Token-set Jaccard below 0.15 means unrelated; differing parity of
        negation markers means disagree; overlap of 0.6 or more means agree;
        anything else merely discusses the same thing.
        """
        if not source.strip() or not target.strip():
            raise model.ValidationError("cannot judge stance of empty text")
        src, tgt = _tokens(source), _tokens(target)
        src_set, tgt_set = set(src), set(tgt)
        union = src_set | tgt_set
        overlap = len(src_set & tgt_set) / len(union) if union else 0.0
        if overlap < UNRELATED_OVERLAP_FLOOR:
            return StanceJudgment(StanceLabel.UNRELATED, round(min(1.0, 1.0 - overlap), 6))
        if _negation_count(src) % 2 != _negation_count(tgt) % 2:
            return StanceJudgment(StanceLabel.DISAGREE, 0.8)
        if overlap >= AGREE_OVERLAP_FLOOR:
            return StanceJudgment(StanceLabel.AGREE, round(min(1.0, overlap), 6))
        return StanceJudgment(StanceLabel.DISCUSS, 0.6)

    def stance_batch(self, pairs) -> list:
        return [self.stance(src, tgt) for src, tgt in pairs]

    def info(self) -> dict:
        return {"backend_id": self.backend_id, "dim": self.dim}

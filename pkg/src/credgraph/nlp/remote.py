"""HTTP client for a remote NLP backend.

Contract: POST /encode {"sentences": [...]} -> {"dim": d, "vectors": [[...]]},
POST /stance {"pairs": [{"source":, "target":}]} -> {"judgments": [{"label":,
"score":}]}, GET /info -> {"backend_id":, "dim":}. Any transport failure or
malformed response surfaces as BackendUnavailableError so callers can degrade
to the baseline.
"""

from __future__ import annotations

import numpy as np
import requests

from ..algebra import StanceLabel
from ..model import BackendUnavailableError, ValidationError
from .baseline import SentenceVector, StanceJudgment


class RemoteBackend:
    """Client for the /encode, /stance, /info backend contract.

    Safe for concurrent use (each call creates an independent request) and
    applies a per-request timeout. Backend identity and dimension are fetched
    lazily from /info and cached.
    """

    def __init__(self, base_url: str, timeout: float = 10.0):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self._info = None

    def _fetch(self, method: str, path: str, payload=None) -> dict:
        url = f"{self.base_url}{path}"
        try:
            if method == "GET":
                response = requests.get(url, timeout=self.timeout)
            else:
                response = requests.post(url, json=payload, timeout=self.timeout)
            response.raise_for_status()
            return response.json()
        except (requests.RequestException, ValueError) as exc:
            raise BackendUnavailableError(f"NLP backend at {self.base_url} unavailable: {exc}") from exc

    def info(self) -> dict:
        if self._info is None:
            data = self._fetch("GET", "/info")
            if "backend_id" not in data or "dim" not in data:
                raise BackendUnavailableError(f"malformed /info response from {self.base_url}: {data!r}")
            self._info = {"backend_id": str(data["backend_id"]), "dim": int(data["dim"])}
        return self._info

    @property
    def backend_id(self) -> str:
        return self.info()["backend_id"]

    @property
    def dim(self) -> int:
        return self.info()["dim"]

    def encode_batch(self, sentences) -> list:
        sentences = list(sentences)
        if not sentences:
            return []
        for s in sentences:
            if not s or not s.strip():
                raise ValidationError("cannot encode an empty sentence")
        data = self._fetch("POST", "/encode", {"sentences": sentences})
        vectors = data.get("vectors")
        if not isinstance(vectors, list) or len(vectors) != len(sentences):
            raise BackendUnavailableError(f"malformed /encode response from {self.base_url}")
        dim = int(data.get("dim", self.dim))
        out = []
        for vec in vectors:
            arr = np.asarray(vec, dtype=np.float32)
            if arr.shape != (dim,):
                raise BackendUnavailableError(f"/encode returned a vector of shape {arr.shape}, expected ({dim},)")
            norm = float(np.linalg.norm(arr))
            if norm == 0.0:
                raise BackendUnavailableError("/encode returned a zero vector")
            # Re-normalize defensively: the service guarantees unit norm only
            # within 1e-4, our vectors within 1e-6.
            out.append(SentenceVector(values=arr / norm, backend_id=self.backend_id))
        return out

    def encode(self, sentence: str) -> SentenceVector:
        return self.encode_batch([sentence])[0]

    def stance_batch(self, pairs) -> list:
        pairs = list(pairs)
        if not pairs:
            return []
        payload = {"pairs": [{"source": src, "target": tgt} for src, tgt in pairs]}
        data = self._fetch("POST", "/stance", payload)
        judgments = data.get("judgments")
        if not isinstance(judgments, list) or len(judgments) != len(pairs):
            raise BackendUnavailableError(f"malformed /stance response from {self.base_url}")
        out = []
        for judgment in judgments:
            try:
                label = StanceLabel(judgment["label"])
                score = float(judgment["score"])
            except (KeyError, TypeError, ValueError) as exc:
                raise BackendUnavailableError(f"malformed stance judgment {judgment!r}") from exc
            out.append(StanceJudgment(label=label, score=min(1.0, max(0.0, score))))
        return out

    def stance(self, source: str, target: str) -> StanceJudgment:
        return self.stance_batch([(source, target)])[0]

    def reachable(self) -> bool:
        try:
            self.info()
            return True
        except BackendUnavailableError:
            return False

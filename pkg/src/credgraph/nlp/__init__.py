"""Pluggable sentence-encoding and stance-detection backends.

Two backends share one interface: a deterministic built-in baseline (hashed
character n-grams plus a lexical stance heuristic) that needs no models, and
a client for a remote HTTP service exposing /encode, /stance and /info. The
similarity index works over whichever backend encoded it; index files record
the backend id and loading refuses a mismatch.
"""

from .baseline import BaselineBackend, SentenceVector, StanceJudgment, similarity
from .index import Match, VectorIndex, build_index, load_index
from .remote import RemoteBackend

__all__ = [
    "BaselineBackend",
    "RemoteBackend",
    "SentenceVector",
    "StanceJudgment",
    "similarity",
    "Match",
    "VectorIndex",
    "build_index",
    "load_index",
    "get_backend",
]


def get_backend(name: str, url: str = "", timeout: float = 10.0):
    """Instantiate a backend by configured name ("baseline" or "remote")."""
    if name == "baseline":
        return BaselineBackend()
    if name == "remote":
        if not url:
            raise ValueError("remote backend requires a base URL")
        return RemoteBackend(url, timeout=timeout)
    raise ValueError(f"unknown backend {name!r}")

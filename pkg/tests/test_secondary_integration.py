"""Integration against a live nlp-service instance (skipped when not built)."""

from __future__ import annotations

import shutil
import socket
import subprocess
import time
from pathlib import Path

import numpy as np
import pytest
import requests

from credgraph.bots import BotConfig, ReviewEngine
from credgraph.model import Sentence, ValidationError
from credgraph.nlp import RemoteBackend, build_index
from credgraph.stores import SignalStore

from conftest import FIXED_TIME, make_factcheck

SERVICE_DIR = Path(__file__).resolve().parents[1] / "nlp-service"
SERVER_JS = SERVICE_DIR / "dist" / "src" / "server.js"

pytestmark = pytest.mark.skipif(
    shutil.which("node") is None or not SERVER_JS.exists(),
    reason="nlp-service is not built (run `npm run build` in nlp-service/)",
)


def _free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


@pytest.fixture(scope="module")
def live_service():
    port = _free_port()
    process = subprocess.Popen(
        ["node", str(SERVER_JS)],
        env={"PORT": str(port), "HOST": "127.0.0.1", "PATH": "/usr/bin:/bin"},
        stdout=subprocess.PIPE, stderr=subprocess.PIPE,
    )
    url = f"http://127.0.0.1:{port}"
    try:
        deadline = time.monotonic() + 15
        while True:
            try:
                requests.get(url + "/info", timeout=1)
                break
            except requests.RequestException:
                if time.monotonic() > deadline:
                    process.kill()
                    raise RuntimeError("nlp-service did not come up")
                if process.poll() is not None:
                    raise RuntimeError(f"nlp-service exited: {process.stderr.read().decode()}")
                time.sleep(0.1)
        yield url
    finally:
        process.terminate()
        process.wait(timeout=10)


class TestContractConformance:
    def test_info_shape(self, live_service):
        info = requests.get(live_service + "/info", timeout=5).json()
        assert isinstance(info["backend_id"], str) and info["backend_id"]
        assert isinstance(info["dim"], int) and info["dim"] > 0

    def test_encode_shape_and_norm(self, live_service):
        response = requests.post(live_service + "/encode",
                                 json={"sentences": ["one sentence", "two sentences"]}, timeout=5)
        assert response.status_code == 200
        data = response.json()
        assert set(data) == {"dim", "vectors"}
        assert len(data["vectors"]) == 2
        for vector in data["vectors"]:
            assert len(vector) == data["dim"]
            assert abs(float(np.linalg.norm(np.asarray(vector))) - 1.0) < 1e-4

    def test_stance_shape(self, live_service):
        response = requests.post(live_service + "/stance",
                                 json={"pairs": [{"source": "a b c", "target": "a b c"}]}, timeout=5)
        assert response.status_code == 200
        (judgment,) = response.json()["judgments"]
        assert judgment["label"] in {"agree", "disagree", "discuss", "unrelated"}
        assert 0.0 <= judgment["score"] <= 1.0

    def test_client_consumes_service(self, live_service):
        backend = RemoteBackend(live_service, timeout=5)
        assert backend.dim == 384
        vec = backend.encode("the budget bill passed the senate")
        assert vec.dim == backend.dim
        judgment = backend.stance("the earth is flat", "the earth is not flat")
        assert judgment.label.value == "disagree"


class TestEngineAgainstLiveService:
    def test_review_through_remote_backend(self, live_service):
        store = SignalStore()
        store.add_signal(make_factcheck("The moon is made of green cheese tonight",
                                        label="false", url="http://factcheck.example/moon"))
        engine = ReviewEngine(store, BotConfig(timestamp=FIXED_TIME, backend="remote",
                                               backend_url=live_service, backend_timeout=5))
        graph = engine.review(Sentence(text="The moon is made of green cheese tonight"))
        root = graph.node(graph.root)
        assert root.rating.value == -1.0
        assert "built-in baseline" not in root.explanation
        assert engine.health()["backend"] == "remote"

    def test_index_mixing_refused(self, live_service):
        store = SignalStore()
        store.add_signal(make_factcheck("The moon is made of green cheese tonight"))
        remote = RemoteBackend(live_service, timeout=5)
        entries = sorted(store.iter_encodable())
        vectors = remote.encode_batch([text for _, text in entries])
        remote_index = build_index(remote.backend_id, remote.dim,
                                   list(zip([sid for sid, _ in entries], vectors)))
        engine = ReviewEngine(store, BotConfig(timestamp=FIXED_TIME), index=remote_index)
        with pytest.raises(ValidationError, match="backend"):
            engine.review_sentence_semsim(Sentence(text="The moon is made of green cheese tonight"))

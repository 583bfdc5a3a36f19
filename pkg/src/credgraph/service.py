"""HTTP service exposing the bots as composable JSON-LD endpoints.

POST /review takes a JSON-LD data item and returns the full review graph;
GET /bots lists the registered bot descriptors with their dependency links;
GET /health reports store counts, index presence and backend reachability.
The service is a thin adapter over the engine: a response body for an item
is byte-identical to serializing the in-process review of that item.
"""

from __future__ import annotations

import json
import logging
import os
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional

from .bots import BotConfig, ReviewEngine, UnsupportedItemError
from .jsonld import parse_item_document, serialize_jsonld, serialize_nodes
from .model import ParseError, ValidationError
from .nlp import load_index
from .nlp.baseline import BASELINE_ID
from .stores import SignalStore

log = logging.getLogger(__name__)

_ENV_PREFIX = "CREDGRAPH_"


@dataclass
class ServiceConfig:
    """Service settings from a JSON file plus CREDGRAPH_* env overrides."""

    host: str = "127.0.0.1"
    port: int = 8080
    store_path: Optional[str] = None
    index_path: Optional[str] = None
    backend: str = "baseline"
    backend_url: str = ""
    timeout: float = 30.0
    caution: bool = False
    registry: Optional[dict] = None
    bot_config: dict = field(default_factory=dict)

    @classmethod
    def load(cls, path=None) -> "ServiceConfig":
        """Build a config from an optional JSON file, then the environment.

        Recognized variables: CREDGRAPH_HOST, CREDGRAPH_PORT, CREDGRAPH_STORE,
        CREDGRAPH_INDEX, CREDGRAPH_BACKEND, CREDGRAPH_BACKEND_URL,
        CREDGRAPH_TIMEOUT, CREDGRAPH_CAUTION.
        """
        cfg = cls()
        if path is not None:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
            for key in ("host", "port", "store_path", "index_path", "backend",
                        "backend_url", "timeout", "caution", "registry", "bot_config"):
                if key in data:
                    setattr(cfg, key, data[key])
        env = os.environ
        cfg.host = env.get(_ENV_PREFIX + "HOST", cfg.host)
        cfg.port = int(env.get(_ENV_PREFIX + "PORT", cfg.port))
        cfg.store_path = env.get(_ENV_PREFIX + "STORE", cfg.store_path)
        cfg.index_path = env.get(_ENV_PREFIX + "INDEX", cfg.index_path)
        cfg.backend = env.get(_ENV_PREFIX + "BACKEND", cfg.backend)
        cfg.backend_url = env.get(_ENV_PREFIX + "BACKEND_URL", cfg.backend_url)
        cfg.timeout = float(env.get(_ENV_PREFIX + "TIMEOUT", cfg.timeout))
        if _ENV_PREFIX + "CAUTION" in env:
            cfg.caution = env[_ENV_PREFIX + "CAUTION"].lower() in ("1", "true", "yes", "on")
        cfg.validate()
        return cfg

    def validate(self):
        if self.timeout <= 0:
            raise ValidationError(f"timeout must be positive, got {self.timeout}")
        for label, p in (("store", self.store_path), ("index", self.index_path)):
            if p is not None and not Path(p).exists():
                raise ValidationError(f"{label} path does not exist: {p}")

    def build_engine(self) -> ReviewEngine:
        store = SignalStore(self.store_path)
        bot_config = BotConfig(
            backend=self.backend,
            backend_url=self.backend_url,
            backend_timeout=self.timeout,
            caution=self.caution,
            **self.bot_config,
        )
        index = None
        if self.index_path is not None:
            expected = BASELINE_ID if bot_config.backend == "baseline" else None
            index = load_index(self.index_path, expected_backend_id=expected)
        return ReviewEngine(store, bot_config, index=index, registry=self.registry)


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    engine: ReviewEngine = None  # set by make_server

    def log_message(self, fmt, *args):
        log.info("%s %s", self.address_string(), fmt % args)

    def _send(self, status: int, payload: str, content_type: str = "application/json"):
        body = payload.encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", content_type + "; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_error_json(self, status: int, error: str, **extra):
        self._send(status, json.dumps({"error": error, **extra}, sort_keys=True))

    def do_GET(self):
        if self.path == "/bots":
            self._send(200, serialize_nodes(self.engine.bots()), "application/ld+json")
        elif self.path == "/health":
            self._send(200, json.dumps(self.engine.health(), sort_keys=True))
        else:
            self._send_error_json(404, f"no such endpoint: {self.path}")

    def do_POST(self):
        if self.path != "/review":
            self._send_error_json(404, f"no such endpoint: {self.path}")
            return
        try:
            length = int(self.headers.get("Content-Length", 0))
            body = self.rfile.read(length).decode("utf-8")
        except (ValueError, UnicodeDecodeError) as exc:
            self._send_error_json(400, f"unreadable request body: {exc}")
            return
        try:
            item, extras = parse_item_document(body)
        except ParseError as exc:
            self._send_error_json(400, "invalid review request", violations=[str(exc)])
            return
        try:
            graph = self.engine.review(item, extras)
        except UnsupportedItemError as exc:
            self._send_error_json(422, str(exc))
            return
        except ValidationError as exc:
            self._send_error_json(400, "invalid review request", violations=[str(exc)])
            return
        except Exception as exc:  # backend failure after fallback, bugs
            log.exception("review failed")
            self._send_error_json(502, f"review failed: {exc}", partial=True)
            return
        self._send(200, serialize_jsonld(graph), "application/ld+json")


def make_server(engine: ReviewEngine, host: str = "127.0.0.1", port: int = 0) -> ThreadingHTTPServer:
    """A threading HTTP server bound to host:port (port 0 picks a free one)."""
    handler = type("BoundHandler", (_Handler,), {"engine": engine})
    return ThreadingHTTPServer((host, port), handler)


class ReviewService:
    """Owns a server thread around one engine; use as a context manager in tests."""

    def __init__(self, engine: ReviewEngine, host: str = "127.0.0.1", port: int = 0):
        self.server = make_server(engine, host, port)
        self._thread = threading.Thread(target=self.server.serve_forever, daemon=True)

    @property
    def url(self) -> str:
        host, port = self.server.server_address[:2]
        return f"http://{host}:{port}"

    def start(self):
        self._thread.start()
        return self

    def stop(self):
        self.server.shutdown()
        self.server.server_close()

    def __enter__(self):
        return self.start()

    def __exit__(self, *exc):
        self.stop()


def serve(config: ServiceConfig):
    """Run the service until interrupted."""
    engine = config.build_engine()
    server = make_server(engine, config.host, config.port)
    host, port = server.server_address[:2]
    log.info("serving on http://%s:%s (backend=%s, caution=%s)", host, port,
             config.backend, config.caution)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()

"""Command-line interface: ingestion, index building, serving, reviewing, eval."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .algebra import BUILTIN_SCHEMES, load_scheme
from .bots import BotConfig, ReviewEngine
from .evalkit import (
    DATASET_LABELS,
    ERROR_LABEL,
    compute_metrics,
    load_dataset,
    read_predictions,
    render_confusion,
    run_pipeline,
)
from .jsonld import parse_item_document, serialize_jsonld
from .nlp import get_backend, load_index
from .nlp.index import build_index
from .normalize import load_rule_table
from .service import ServiceConfig, serve
from .stores import SignalStore


def _add_store_arg(parser):
    parser.add_argument("--store", required=True, help="signal store file (JSONL append log)")


def _add_backend_args(parser):
    parser.add_argument("--backend", default="baseline", choices=["baseline", "remote"])
    parser.add_argument("--backend-url", default="", help="base URL of the remote NLP backend")


def _engine_from_args(args) -> ReviewEngine:
    store = SignalStore(args.store)
    config = BotConfig(
        backend=args.backend,
        backend_url=args.backend_url,
        caution=getattr(args, "caution", False),
    )
    index = load_index(args.index) if getattr(args, "index", None) else None
    return ReviewEngine(store, config, index=index)


def _cmd_ingest(args) -> int:
    rule_table = load_rule_table(args.rules) if args.rules else None
    store = SignalStore(args.store, rule_table=rule_table)
    if args.kind == "claims":
        ingested, rejected = store.ingest_claimreviews(args.path)
        print(f"ingested {ingested} claim review(s), rejected {rejected}")
    elif args.kind == "sentences":
        count = store.ingest_precrawled(args.path)
        print(f"ingested {count} sentence(s)")
    else:
        ingested, rejected = store.ingest_site_ratings(args.path)
        print(f"ingested {ingested} site rating(s), rejected {rejected}")
    return 0


def _cmd_stats(args) -> int:
    store = SignalStore(args.store)
    print(json.dumps(store.stats().as_dict(), indent=2, sort_keys=True))
    return 0


def _cmd_index_build(args) -> int:
    store = SignalStore(args.store)
    backend = get_backend(args.backend, args.backend_url)
    entries = sorted(store.iter_encodable())
    vectors = backend.encode_batch([text for _, text in entries])
    index = build_index(backend.backend_id, backend.dim, list(zip([sid for sid, _ in entries], vectors)))
    index.save(args.out)
    print(f"indexed {len(index)} sentence(s) with backend {backend.backend_id} -> {args.out}")
    return 0


def _cmd_serve(args) -> int:
    if args.config:
        config = ServiceConfig.load(args.config)
    else:
        config = ServiceConfig.load()
    if args.host:
        config.host = args.host
    if args.port is not None:
        config.port = args.port
    if args.store:
        config.store_path = args.store
    if args.index:
        config.index_path = args.index
    if args.backend:
        config.backend = args.backend
    if args.backend_url:
        config.backend_url = args.backend_url
    if args.caution:
        config.caution = True
    config.validate()
    serve(config)
    return 0


def _cmd_review(args) -> int:
    engine = _engine_from_args(args)
    document = Path(args.input).read_text("utf-8") if args.input != "-" else sys.stdin.read()
    item, extras = parse_item_document(document)
    graph = engine.review(item, extras)
    output = serialize_jsonld(graph)
    if args.out:
        Path(args.out).write_text(output, "utf-8")
    else:
        sys.stdout.write(output)
    return 0


def _resolve_scheme(name: str):
    if Path(name).is_file():
        return load_scheme(name)
    return BUILTIN_SCHEMES[name] if name in BUILTIN_SCHEMES else load_scheme(name)


def _cmd_eval_run(args) -> int:
    engine = _engine_from_args(args)
    items = load_dataset(args.dataset, args.path)
    scheme = _resolve_scheme(args.scheme)
    rows = run_pipeline(items, engine, scheme, args.out)
    errors = sum(1 for r in rows if r.predicted == ERROR_LABEL)
    print(f"evaluated {len(rows)} item(s) ({errors} error(s)) -> {args.out}/predictions.csv")
    valid = [(r.predicted, r.gold) for r in rows if r.predicted != ERROR_LABEL]
    if valid and all(p in DATASET_LABELS[args.dataset] for p, _ in valid):
        report = compute_metrics([p for p, _ in valid], [g for _, g in valid], args.dataset)
        print(json.dumps(report.as_dict(), indent=2, sort_keys=True))
    return 0


def _cmd_eval_metrics(args) -> int:
    rows = read_predictions(args.pred)
    valid = [r for r in rows if r.predicted != ERROR_LABEL]
    skipped = len(rows) - len(valid)
    if skipped:
        print(f"note: {skipped} error row(s) excluded", file=sys.stderr)
    report = compute_metrics([r.predicted for r in valid], [r.gold for r in valid], args.dataset)
    if args.format == "json":
        print(json.dumps(report.as_dict(), indent=2, sort_keys=True))
    else:
        print(json.dumps({k: v for k, v in report.as_dict().items()
                          if k not in ("confusion", "labels")}, indent=2, sort_keys=True))
        print(render_confusion(report, fmt=args.format), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="credgraph",
                                     description="Composable credibility-review engine")
    parser.add_argument("-v", "--verbose", action="store_true", help="log at INFO level")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="ingest signals into the store")
    p_ingest.add_argument("kind", choices=["claims", "sentences", "sites"])
    _add_store_arg(p_ingest)
    p_ingest.add_argument("--path", required=True, help="input file (JSONL; CSV for sites)")
    p_ingest.add_argument("--rules", help="custom verdict rule table (claims only)")
    p_ingest.set_defaults(func=_cmd_ingest)

    p_stats = sub.add_parser("stats", help="signal store statistics")
    _add_store_arg(p_stats)
    p_stats.set_defaults(func=_cmd_stats)

    p_index = sub.add_parser("index", help="similarity index operations")
    index_sub = p_index.add_subparsers(dest="index_command", required=True)
    p_build = index_sub.add_parser("build", help="encode store sentences into an index file")
    _add_store_arg(p_build)
    p_build.add_argument("--out", required=True, help="index file to write")
    _add_backend_args(p_build)
    p_build.set_defaults(func=_cmd_index_build)

    p_serve = sub.add_parser("serve", help="run the HTTP review service")
    p_serve.add_argument("--config", help="service config JSON file")
    p_serve.add_argument("--host", default="")
    p_serve.add_argument("--port", type=int)
    p_serve.add_argument("--store")
    p_serve.add_argument("--index")
    p_serve.add_argument("--backend", choices=["baseline", "remote"], default=None)
    p_serve.add_argument("--backend-url", default="")
    p_serve.add_argument("--caution", action="store_true", help="enable caution-mode damping")
    p_serve.set_defaults(func=_cmd_serve)

    p_review = sub.add_parser("review", help="review one JSON-LD data item")
    _add_store_arg(p_review)
    p_review.add_argument("--index", help="similarity index file")
    p_review.add_argument("--input", required=True, help="JSON-LD item file, or - for stdin")
    p_review.add_argument("--out", help="write the review graph here instead of stdout")
    p_review.add_argument("--caution", action="store_true")
    _add_backend_args(p_review)
    p_review.set_defaults(func=_cmd_review)

    p_eval = sub.add_parser("eval", help="dataset evaluation")
    eval_sub = p_eval.add_subparsers(dest="eval_command", required=True)
    p_run = eval_sub.add_parser("run", help="run the prediction pipeline over a dataset")
    p_run.add_argument("--dataset", required=True, choices=sorted(DATASET_LABELS))
    p_run.add_argument("--path", required=True, help="dataset file or directory")
    p_run.add_argument("--scheme", required=True, help="label scheme name or config file")
    p_run.add_argument("--caution", action="store_true")
    p_run.add_argument("--out", required=True, help="output directory for graphs and CSV")
    _add_store_arg(p_run)
    p_run.add_argument("--index", help="similarity index file")
    _add_backend_args(p_run)
    p_run.set_defaults(func=_cmd_eval_run)

    p_metrics = eval_sub.add_parser("metrics", help="compute metrics from a predictions CSV")
    p_metrics.add_argument("--pred", required=True, help="predictions CSV")
    p_metrics.add_argument("--dataset", required=True, choices=sorted(DATASET_LABELS))
    p_metrics.add_argument("--format", default="text", choices=["text", "csv", "json"])
    p_metrics.set_defaults(func=_cmd_eval_metrics)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())

"""Evaluation harness: dataset readers, prediction pipeline, metrics.

The pipeline reviews each labeled item, maps the root rating to the
dataset's label scheme, stores the provenance graph per item and writes a
predictions CSV; metrics cover ordinal MAE, macro MAE, accuracy, macro F1,
macro average recall and the confusion matrix. Runs are resumable: items
whose graph file already exists are re-labelled from the stored graph
instead of being re-reviewed.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .algebra import BINARY, CLEF18, COINFORM250, LabelScheme, map_to_label
from .jsonld import parse_jsonld, serialize_jsonld
from .model import (
    Article,
    CredGraphError,
    DataItem,
    Sentence,
    SocialMediaPost,
    ValidationError,
    WebSite,
    normalize_domain,
)

log = logging.getLogger(__name__)

# Ordinal encodings per dataset; MAE measures distance along these scales.
DATASET_LABELS = {
    "clef18": ["TRUE", "HALF-TRUE", "FALSE"],
    "fakenewsnet": ["real", "fake"],
    "coinform250": ["credible", "mostly credible", "uncertain",
                    "mostly not credible", "not credible", "not verifiable"],
}

DATASET_SCHEMES = {
    "clef18": CLEF18,
    "fakenewsnet": BINARY,
    "coinform250": COINFORM250,
}

ERROR_LABEL = "error"


@dataclass(frozen=True)
class LabeledItem:
    item: DataItem
    gold_label: str
    dataset: str
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        labels = DATASET_LABELS.get(self.dataset)
        if labels is None:
            raise ValidationError(f"unknown dataset {self.dataset!r}")
        if self.gold_label not in labels:
            raise ValidationError(f"label {self.gold_label!r} not in {self.dataset} label set")


@dataclass(frozen=True)
class PredictionRow:
    item_id: str
    gold: str
    predicted: str
    value: Optional[float]
    confidence: Optional[float]


# --- dataset loaders ----------------------------------------------------------


def load_dataset(name: str, path) -> list:
    """Load a dataset directory/file into labeled data items.

    Formats: clef18 is a TSV with columns id, label, claim text; fakenewsnet
    is a directory with fake/ and real/ subdirectories of article JSON files
    ({"url", "title", "text"}); coinform250 is a JSONL of tweets
    ({"tweet_id", "full_text", "label"}). Malformed rows are skipped with a
    warning; an unreadable path or zero parseable rows is an error.
    """
    loader = {
        "clef18": _load_clef18,
        "fakenewsnet": _load_fakenewsnet,
        "coinform250": _load_coinform250,
    }.get(name)
    if loader is None:
        raise ValidationError(f"unknown dataset {name!r}")
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"dataset path does not exist: {path}")
    items = loader(path)
    if not items:
        raise ValidationError(f"no parseable rows in {path}")
    return items


def _load_clef18(path: Path) -> list:
    items = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) < 3:
                log.warning("%s:%d: expected id<TAB>label<TAB>text", path, lineno)
                continue
            _, label, text = fields[0], fields[1].strip().upper(), "\t".join(fields[2:]).strip()
            try:
                items.append(LabeledItem(item=Sentence(text=text), gold_label=label, dataset="clef18"))
            except CredGraphError as exc:
                log.warning("%s:%d: skipped: %s", path, lineno, exc)
    return items


def _load_fakenewsnet(path: Path) -> list:
    items = []
    for gold in ("fake", "real"):
        subdir = path / gold
        if not subdir.is_dir():
            continue
        for json_path in sorted(subdir.rglob("*.json")):
            try:
                with open(json_path, "r", encoding="utf-8") as fh:
                    data = json.load(fh)
                url = data.get("url") or None
                extras = {}
                website_ref = None
                if url:
                    domain = normalize_domain(url)
                    if domain:
                        site = WebSite(domain=domain)
                        extras[site.id] = site
                        website_ref = site.id
                article = Article(
                    url=url,
                    title=data.get("title") or None,
                    body_text=data.get("text") or None,
                    website_ref=website_ref,
                )
                items.append(LabeledItem(item=article, gold_label=gold, dataset="fakenewsnet", extras=extras))
            except (json.JSONDecodeError, OSError, CredGraphError) as exc:
                log.warning("%s: skipped: %s", json_path, exc)
    return items


def _load_coinform250(path: Path) -> list:
    items = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                data = json.loads(line)
                text = data.get("full_text") or data.get("text")
                tweet_id = data.get("tweet_id") or data.get("id")
                url = f"https://twitter.com/i/web/status/{tweet_id}" if tweet_id else None
                post = SocialMediaPost(url=url, text=text)
                items.append(LabeledItem(item=post, gold_label=data["label"], dataset="coinform250"))
            except (json.JSONDecodeError, KeyError, CredGraphError) as exc:
                log.warning("%s:%d: skipped: %s", path, lineno, exc)
    return items


# --- pipeline -------------------------------------------------------------------


def _safe_filename(item_id: str) -> str:
    return item_id.replace(":", "_") + ".jsonld"


def run_pipeline(items: Sequence[LabeledItem], engine, scheme: LabelScheme, out_dir) -> list:
    """Review items, map ratings to labels, persist graphs and a predictions CSV.

    Per-item failures are recorded as "error" predictions and the run
    continues. Items whose graph file already exists in ``out_dir/graphs``
    are re-labelled from the stored graph rather than re-reviewed.
    """
    out_dir = Path(out_dir)
    graphs_dir = out_dir / "graphs"
    graphs_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for labeled in items:
        item = labeled.item
        graph_path = graphs_dir / _safe_filename(item.id)
        try:
            if graph_path.exists():
                graph = parse_jsonld(graph_path.read_text("utf-8"))
            else:
                graph = engine.review(item, labeled.extras)
                graph_path.write_text(serialize_jsonld(graph), "utf-8")
            rating = graph.node(graph.root).rating
            rows.append(PredictionRow(
                item_id=item.id,
                gold=labeled.gold_label,
                predicted=map_to_label(rating, scheme),
                value=rating.value,
                confidence=rating.confidence,
            ))
        except Exception as exc:
            log.warning("item %s failed: %s", item.id, exc)
            rows.append(PredictionRow(item_id=item.id, gold=labeled.gold_label,
                                      predicted=ERROR_LABEL, value=None, confidence=None))
    _write_predictions(rows, out_dir / "predictions.csv")
    return rows


def _write_predictions(rows, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["item_id", "gold", "predicted", "value", "confidence"])
        for row in rows:
            writer.writerow([
                row.item_id, row.gold, row.predicted,
                "" if row.value is None else repr(row.value),
                "" if row.confidence is None else repr(row.confidence),
            ])


def read_predictions(path) -> list:
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for record in csv.DictReader(fh):
            rows.append(PredictionRow(
                item_id=record["item_id"],
                gold=record["gold"],
                predicted=record["predicted"],
                value=float(record["value"]) if record["value"] else None,
                confidence=float(record["confidence"]) if record["confidence"] else None,
            ))
    return rows


# --- metrics ---------------------------------------------------------------------


@dataclass(frozen=True)
class MetricsReport:
    dataset: str
    labels: tuple
    confusion: tuple  # rows = gold, columns = predicted
    total: int
    mae: float
    macro_mae: float
    accuracy: float
    macro_f1: float
    macro_avg_recall: float

    def as_dict(self) -> dict:
        return {
            "dataset": self.dataset,
            "labels": list(self.labels),
            "confusion": [list(row) for row in self.confusion],
            "total": self.total,
            "MAE": self.mae,
            "macro_MAE": self.macro_mae,
            "accuracy": self.accuracy,
            "macro_F1": self.macro_f1,
            "macro_avg_recall": self.macro_avg_recall,
        }


def compute_metrics(predictions: Sequence[str], gold: Sequence[str], dataset: str) -> MetricsReport:
    """Metrics over parallel prediction/gold label lists.

    MAE uses the dataset's ordinal label encoding; macro metrics average
    over classes with gold support (per-class F1 counts a class as 0 when it
    was never predicted correctly). Unknown labels are an error.
    """
    labels = DATASET_LABELS.get(dataset)
    if labels is None:
        raise ValidationError(f"unknown dataset {dataset!r}")
    if len(predictions) != len(gold):
        raise ValidationError("predictions and gold must have equal length")
    if not predictions:
        raise ValidationError("cannot compute metrics over zero predictions")
    ordinal = {label: i for i, label in enumerate(labels)}
    for label in list(predictions) + list(gold):
        if label not in ordinal:
            raise ValidationError(f"label {label!r} not in {dataset} label set")

    n = len(labels)
    confusion = [[0] * n for _ in range(n)]
    for p, g in zip(predictions, gold):
        confusion[ordinal[g]][ordinal[p]] += 1

    total = len(gold)
    correct = sum(confusion[i][i] for i in range(n))
    accuracy = correct / total

    abs_err = [abs(ordinal[p] - ordinal[g]) for p, g in zip(predictions, gold)]
    mae = sum(abs_err) / total

    per_class_mae = []
    per_class_recall = []
    per_class_f1 = []
    for i in range(n):
        gold_count = sum(confusion[i])
        if gold_count == 0:
            continue
        errs = [e for e, g in zip(abs_err, gold) if ordinal[g] == i]
        per_class_mae.append(sum(errs) / gold_count)
        tp = confusion[i][i]
        recall = tp / gold_count
        per_class_recall.append(recall)
        predicted_count = sum(confusion[r][i] for r in range(n))
        precision = tp / predicted_count if predicted_count else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class_f1.append(f1)

    return MetricsReport(
        dataset=dataset,
        labels=tuple(labels),
        confusion=tuple(tuple(row) for row in confusion),
        total=total,
        mae=mae,
        macro_mae=sum(per_class_mae) / len(per_class_mae),
        accuracy=accuracy,
        macro_f1=sum(per_class_f1) / len(per_class_f1),
        macro_avg_recall=sum(per_class_recall) / len(per_class_recall),
    )


def render_confusion(report: MetricsReport, fmt: str = "text") -> str:
    """Deterministic confusion matrix rendering with per-class recall appended."""
    labels = list(report.labels)
    recalls = []
    for i in range(len(labels)):
        gold_count = sum(report.confusion[i])
        recalls.append(f"{report.confusion[i][i] / gold_count:.3f}" if gold_count else "n/a")

    if fmt == "csv":
        lines = ["gold\\pred," + ",".join(labels)]
        for label, row in zip(labels, report.confusion):
            lines.append(label + "," + ",".join(str(c) for c in row))
        lines.append("recall," + ",".join(recalls))
        return "\n".join(lines) + "\n"

    if fmt != "text":
        raise ValidationError(f"unknown confusion format {fmt!r}")
    width = max(len("gold\\pred"), *(len(l) for l in labels)) + 2
    col = max(8, *(len(l) for l in labels)) + 2
    lines = ["gold\\pred".ljust(width) + "".join(l.rjust(col) for l in labels)]
    for label, row in zip(labels, report.confusion):
        lines.append(label.ljust(width) + "".join(str(c).rjust(col) for c in row))
    lines.append("recall".ljust(width) + "".join(r.rjust(col) for r in recalls))
    return "\n".join(lines) + "\n"

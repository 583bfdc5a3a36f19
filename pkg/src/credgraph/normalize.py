"""Normalization of heterogeneous fact-checker verdicts into ratings.

Fact-checkers encode verdicts either as a numeric value within a declared
best/worst range or as a free-text label ("pants on fire", "this is
exaggerated", ...). Both are mapped onto the [-1, 1] credibility scale; the
textual mapping ships as a versioned rule table (exact labels plus ordered
regex patterns) that is validated when loaded.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources
from typing import Optional

from .model import ClaimReviewRecord, CredGraphError, FactCheck, Rating


class UnmappableRating(CredGraphError):
    """A verdict that cannot be converted to a credibility rating."""


def normalize_numeric(value: float, worst: float, best: float) -> Rating:
    """Map a numeric verdict within [worst, best] affinely onto [-1, 1].

    Endpoints map to exactly -1 and +1; confidence is full since the scale is
    explicit. Degenerate or out-of-range inputs are unmappable.
    """
    if best == worst:
        raise UnmappableRating(f"degenerate rating range [{worst}, {best}]")
    if best < worst:
        raise UnmappableRating(f"inverted rating range [{worst}, {best}]")
    if not worst <= value <= best:
        raise UnmappableRating(f"rating value {value} outside [{worst}, {best}]")
    scaled = 2.0 * (value - worst) / (best - worst) - 1.0
    return Rating(value=scaled, confidence=1.0)


def _normalize_label(label: str) -> str:
    return " ".join(label.split()).lower()


@dataclass(frozen=True)
class LabelRuleTable:
    """Exact-label table plus ordered fallback patterns, shipped as data."""

    version: int
    labels: dict
    patterns: tuple

    def lookup(self, label: str) -> Optional[Rating]:
        key = _normalize_label(label)
        hit = self.labels.get(key)
        if hit is not None:
            return hit
        for pattern, rating in self.patterns:
            if pattern.fullmatch(key):
                return rating
        return None


def load_rule_table(path=None) -> LabelRuleTable:
    """Load and validate a rule table; defaults to the shipped one."""
    if path is None:
        raw = resources.files("credgraph.data").joinpath("label_rules.json").read_text("utf-8")
    else:
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.read()
    cfg = json.loads(raw)
    labels = {}
    for label, (value, confidence) in cfg["labels"].items():
        labels[_normalize_label(label)] = Rating(value, confidence)  # range-checked on construction
    patterns = tuple(
        (re.compile(pattern, re.IGNORECASE), Rating(value, confidence))
        for pattern, value, confidence in cfg["patterns"]
    )
    return LabelRuleTable(version=int(cfg.get("version", 0)), labels=labels, patterns=patterns)


_DEFAULT_TABLE = None


def default_rule_table() -> LabelRuleTable:
    global _DEFAULT_TABLE
    if _DEFAULT_TABLE is None:
        _DEFAULT_TABLE = load_rule_table()
    return _DEFAULT_TABLE


def normalize_textual(label: str, table: Optional[LabelRuleTable] = None) -> Optional[Rating]:
    """Map a free-text verdict label to a rating, or None when unmappable.

    Exact (case-insensitive) table entries win over patterns; patterns apply
    in file order. Never raises: unknown labels simply return None.
    """
    table = table or default_rule_table()
    return table.lookup(label)


def claimreview_to_signal(record: ClaimReviewRecord, table: Optional[LabelRuleTable] = None) -> FactCheck:
    """Turn a claim-review record into a ground signal with a normalized rating.

    When the record carries both a numeric and a textual verdict, the numeric
    one wins unless the two disagree in sign, in which case the textual
    verdict (the fact-checker's headline judgment) takes precedence. Records
    with no mappable verdict yield a zero-confidence neutral rating rather
    than being dropped.
    """
    textual = normalize_textual(record.alternate_name, table) if record.alternate_name is not None else None
    numeric = None
    if record.rating_value is not None and record.best_rating is not None and record.worst_rating is not None:
        try:
            numeric = normalize_numeric(record.rating_value, record.worst_rating, record.best_rating)
        except UnmappableRating:
            numeric = None

    if textual is not None and numeric is not None:
        if textual.value * numeric.value < 0:
            rating, source = textual, "textual"
        else:
            rating, source = numeric, "numeric"
    elif numeric is not None:
        rating, source = numeric, "numeric"
    elif textual is not None:
        rating, source = textual, "textual"
    else:
        rating, source = Rating(0.0, 0.0), "none"

    return FactCheck(record=record, rating=rating, rating_source=source)

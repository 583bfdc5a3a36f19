"""Ground-credibility-signal storage: fact-checks, site reputations, crawled sentences.

The store is a single JSONL append log loaded into memory, with lookup
indexes over normalized claim text, normalized sentence text and domain.
Content-addressed signal ids make ingestion idempotent: re-ingesting a file
never grows the store. Ingestion is single-writer; lookups are read-only and
may run concurrently once loading is done.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .model import (
    ClaimReviewRecord,
    FactCheck,
    GroundSignal,
    PrecrawledSentence,
    Rating,
    ValidationError,
    WebSiteReputation,
    normalize_domain,
)
from .normalize import LabelRuleTable, claimreview_to_signal

log = logging.getLogger(__name__)

MIN_SENTENCE_TOKENS = 5

_TERMINAL_PUNCTUATION = ".!?…"


def normalize_claim_text(text: str) -> str:
    """Lowercase, collapse whitespace and strip terminal punctuation."""
    collapsed = " ".join(text.split()).lower()
    return collapsed.rstrip(_TERMINAL_PUNCTUATION).rstrip()


def registrable_candidates(domain: str) -> list:
    """The domain itself plus every parent with at least two labels."""
    labels = normalize_domain(domain).split(".")
    return [".".join(labels[i:]) for i in range(len(labels) - 1)]


@dataclass
class StoreStats:
    fact_checks: int = 0
    site_reputations: int = 0
    precrawled_sentences: int = 0
    fact_check_sources: dict = field(default_factory=dict)
    reputation_raters: dict = field(default_factory=dict)
    sentence_domains: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "fact_checks": self.fact_checks,
            "site_reputations": self.site_reputations,
            "precrawled_sentences": self.precrawled_sentences,
            "fact_check_sources": dict(sorted(self.fact_check_sources.items())),
            "reputation_raters": dict(sorted(self.reputation_raters.items())),
            "sentence_domains": dict(sorted(self.sentence_domains.items())),
        }


class SignalStore:
    """Embedded store for ground credibility signals.

    ``path`` may be None for a purely in-memory store (tests, fixtures);
    otherwise every accepted signal is appended to the JSONL log at that path
    and reloaded on open.
    """

    def __init__(self, path=None, rule_table: Optional[LabelRuleTable] = None):
        self.path = Path(path) if path is not None else None
        self.rule_table = rule_table
        self._signals = {}
        self._claims_by_text = {}
        self._sentences_by_text = {}
        self._reputation_by_domain = {}
        if self.path is not None and self.path.exists():
            self._load()

    # -- persistence ---------------------------------------------------------

    def _load(self):
        with open(self.path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    self._index(self._signal_from_record(json.loads(line)), persist=False)
                except (json.JSONDecodeError, KeyError, ValidationError) as exc:
                    log.warning("%s:%d: skipping corrupt store record: %s", self.path, lineno, exc)

    def _append(self, record: dict):
        if self.path is None:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")

    @staticmethod
    def _signal_to_record(signal: GroundSignal) -> dict:
        if isinstance(signal, FactCheck):
            rec = signal.record
            return {
                "kind": "fact_check",
                "claim": rec.claim_text,
                "url": rec.review_url,
                "checker": rec.fact_checker_name,
                "checker_url": rec.fact_checker_url,
                "rating_value": rec.rating_value,
                "best": rec.best_rating,
                "worst": rec.worst_rating,
                "alternate_name": rec.alternate_name,
                "value": signal.rating.value,
                "confidence": signal.rating.confidence,
                "source": signal.rating_source,
            }
        if isinstance(signal, WebSiteReputation):
            return {
                "kind": "site_reputation",
                "domain": signal.domain,
                "rater": signal.rater_name,
                "value": signal.rating.value,
                "confidence": signal.rating.confidence,
                "url": signal.review_url,
            }
        if isinstance(signal, PrecrawledSentence):
            return {
                "kind": "precrawled_sentence",
                "text": signal.text,
                "url": signal.source_url,
                "domain": signal.source_domain,
                "date": signal.crawl_date,
            }
        raise ValidationError(f"unknown signal type {type(signal).__name__}")

    @staticmethod
    def _signal_from_record(record: dict) -> GroundSignal:
        kind = record["kind"]
        if kind == "fact_check":
            return FactCheck(
                record=ClaimReviewRecord(
                    claim_text=record["claim"],
                    review_url=record["url"],
                    fact_checker_name=record.get("checker", "unknown"),
                    fact_checker_url=record.get("checker_url", ""),
                    rating_value=record.get("rating_value"),
                    best_rating=record.get("best"),
                    worst_rating=record.get("worst"),
                    alternate_name=record.get("alternate_name"),
                ),
                rating=Rating(record["value"], record["confidence"]),
                rating_source=record.get("source", "textual"),
            )
        if kind == "site_reputation":
            return WebSiteReputation(
                domain=record["domain"],
                rater_name=record["rater"],
                rating=Rating(record["value"], record["confidence"]),
                review_url=record.get("url", ""),
            )
        if kind == "precrawled_sentence":
            return PrecrawledSentence(
                text=record["text"],
                source_url=record["url"],
                source_domain=record["domain"],
                crawl_date=record.get("date", ""),
            )
        raise ValidationError(f"unknown signal kind {kind!r}")

    def _index(self, signal: GroundSignal, persist: bool) -> bool:
        """Register a signal; returns False when it was already present."""
        if signal.id in self._signals:
            return False
        self._signals[signal.id] = signal
        if isinstance(signal, FactCheck):
            key = normalize_claim_text(signal.record.claim_text)
            self._claims_by_text.setdefault(key, []).append(signal)
        elif isinstance(signal, WebSiteReputation):
            self._reputation_by_domain.setdefault(signal.domain, []).append(signal)
        elif isinstance(signal, PrecrawledSentence):
            key = normalize_claim_text(signal.text)
            self._sentences_by_text.setdefault(key, []).append(signal)
        if persist:
            self._append(self._signal_to_record(signal))
        return True

    # -- ingestion -----------------------------------------------------------

    def add_signal(self, signal: GroundSignal) -> bool:
        return self._index(signal, persist=True)

    def ingest_claimreviews(self, source) -> tuple:
        """Ingest a JSONL file of claim reviews; returns (ingested, rejected).

        Expected fields per line: ``claimReviewed`` (required), ``url``
        (required), ``reviewRating`` with ``alternateName`` and/or
        ``ratingValue``/``bestRating``/``worstRating``, optional ``author``
        with ``name``/``url``. Re-ingesting the same file is a no-op.
        """
        ingested = rejected = 0
        for lineno, raw in self._read_lines(source):
            try:
                obj = json.loads(raw)
                rating = obj.get("reviewRating") or {}
                author = obj.get("author") or {}
                record = ClaimReviewRecord(
                    claim_text=obj["claimReviewed"],
                    review_url=obj["url"],
                    fact_checker_name=author.get("name", "unknown"),
                    fact_checker_url=author.get("url", ""),
                    rating_value=rating.get("ratingValue"),
                    best_rating=rating.get("bestRating"),
                    worst_rating=rating.get("worstRating"),
                    alternate_name=rating.get("alternateName"),
                )
                self.add_signal(claimreview_to_signal(record, self.rule_table))
                ingested += 1
            except (json.JSONDecodeError, KeyError, TypeError, AttributeError, ValidationError) as exc:
                rejected += 1
                log.warning("%s:%d: rejected claim review: %s", source, lineno, exc)
        return ingested, rejected

    def ingest_precrawled(self, source) -> int:
        """Ingest a JSONL file of crawled sentences; returns count accepted.

        Expected fields: ``text``, ``url``, optional ``date``. Sentences
        shorter than five tokens are rejected.
        """
        count = 0
        for lineno, raw in self._read_lines(source):
            try:
                obj = json.loads(raw)
                text = obj["text"]
                if len(text.split()) < MIN_SENTENCE_TOKENS:
                    log.warning("%s:%d: sentence below %d-token floor", source, lineno, MIN_SENTENCE_TOKENS)
                    continue
                signal = PrecrawledSentence(
                    text=text,
                    source_url=obj["url"],
                    source_domain=normalize_domain(obj["url"]),
                    crawl_date=obj.get("date", ""),
                )
                self.add_signal(signal)
                count += 1
            except (json.JSONDecodeError, KeyError, TypeError, AttributeError, ValidationError) as exc:
                log.warning("%s:%d: rejected sentence: %s", source, lineno, exc)
        return count

    def ingest_site_ratings(self, source) -> tuple:
        """Ingest site reputation records from JSONL or CSV; returns (ingested, rejected).

        JSONL fields / CSV columns: ``domain``, ``rater``, ``value`` in
        [-1, 1], ``confidence`` in [0, 1], optional ``url``.
        """
        ingested = rejected = 0
        source = Path(source)
        rows: Iterable
        if source.suffix.lower() == ".csv":
            with open(source, "r", encoding="utf-8", newline="") as fh:
                rows = list(enumerate(csv.DictReader(fh), 2))
        else:
            rows = []
            for lineno, raw in self._read_lines(source):
                try:
                    rows.append((lineno, json.loads(raw)))
                except json.JSONDecodeError as exc:
                    rejected += 1
                    log.warning("%s:%d: rejected site rating: %s", source, lineno, exc)
        for lineno, obj in rows:
            try:
                signal = WebSiteReputation(
                    domain=normalize_domain(obj["domain"]),
                    rater_name=obj["rater"],
                    rating=Rating(float(obj["value"]), float(obj["confidence"])),
                    review_url=obj.get("url", "") or "",
                )
                self.add_signal(signal)
                ingested += 1
            except (KeyError, TypeError, ValueError, ValidationError) as exc:
                rejected += 1
                log.warning("%s:%d: rejected site rating: %s", source, lineno, exc)
        return ingested, rejected

    @staticmethod
    def _read_lines(source):
        with open(source, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if line:
                    yield lineno, line

    # -- lookups ---------------------------------------------------------------

    def get_signal(self, signal_id: str) -> Optional[GroundSignal]:
        return self._signals.get(signal_id)

    def lookup_claim(self, text: str) -> list:
        """Fact-check signals whose normalized claim text equals the query's."""
        return list(self._claims_by_text.get(normalize_claim_text(text), ()))

    def lookup_precrawled(self, text: str) -> list:
        """Crawled-sentence signals matching the normalized query text."""
        return list(self._sentences_by_text.get(normalize_claim_text(text), ()))

    def lookup_website(self, domain: str) -> list:
        """Reputation records for the domain and its registrable parents."""
        results = []
        for candidate in registrable_candidates(domain):
            results.extend(self._reputation_by_domain.get(candidate, ()))
        return results

    def iter_encodable(self):
        """(signal id, text) pairs for everything the similarity index covers."""
        for signal in self._signals.values():
            if isinstance(signal, FactCheck):
                yield signal.id, signal.record.claim_text
            elif isinstance(signal, PrecrawledSentence):
                yield signal.id, signal.text

    def stats(self) -> StoreStats:
        stats = StoreStats()
        for signal in self._signals.values():
            if isinstance(signal, FactCheck):
                stats.fact_checks += 1
                name = signal.record.fact_checker_name
                stats.fact_check_sources[name] = stats.fact_check_sources.get(name, 0) + 1
            elif isinstance(signal, WebSiteReputation):
                stats.site_reputations += 1
                stats.reputation_raters[signal.rater_name] = stats.reputation_raters.get(signal.rater_name, 0) + 1
            elif isinstance(signal, PrecrawledSentence):
                stats.precrawled_sentences += 1
                d = signal.source_domain
                stats.sentence_domains[d] = stats.sentence_domains.get(d, 0) + 1
        return stats

    def __len__(self):
        return len(self._signals)

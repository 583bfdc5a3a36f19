from __future__ import annotations

import json

import pytest

from credgraph.model import Rating, WebSiteReputation
from credgraph.stores import SignalStore, normalize_claim_text, registrable_candidates


def _claim_line(text, label="false", url="http://check.example/1"):
    return json.dumps({
        "claimReviewed": text,
        "url": url,
        "reviewRating": {"alternateName": label},
        "author": {"name": "politifact", "url": "http://www.politifact.com"},
    })


def _write(path, lines):
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


class TestClaimIngestion:
    def test_three_valid_records(self, tmp_path):
        source = _write(tmp_path / "claims.jsonl", [
            _claim_line("claim one is false here", url=f"http://check.example/{i}") for i in range(3)
        ])
        store = SignalStore(tmp_path / "store.jsonl")
        assert store.ingest_claimreviews(source) == (3, 0)

    def test_reingest_is_idempotent(self, tmp_path):
        source = _write(tmp_path / "claims.jsonl", [_claim_line("the moon is made of cheese")])
        store = SignalStore(tmp_path / "store.jsonl")
        store.ingest_claimreviews(source)
        size = len(store)
        store.ingest_claimreviews(source)
        assert len(store) == size

    def test_malformed_records_counted_not_fatal(self, tmp_path):
        lines = [_claim_line(f"valid claim number {i}", url=f"http://c.example/{i}") for i in range(10)]
        lines.insert(3, "{not json at all")
        lines.insert(7, json.dumps({"claimReviewed": "missing url and rating"}))
        source = _write(tmp_path / "claims.jsonl", lines)
        store = SignalStore(tmp_path / "store.jsonl")
        assert store.ingest_claimreviews(source) == (10, 2)

    def test_unreadable_file_raises(self, tmp_path):
        store = SignalStore(tmp_path / "store.jsonl")
        with pytest.raises(OSError):
            list(store.ingest_claimreviews(tmp_path / "absent.jsonl"))

    def test_persists_across_reopen(self, tmp_path):
        source = _write(tmp_path / "claims.jsonl", [_claim_line("persistent claim text here")])
        path = tmp_path / "store.jsonl"
        SignalStore(path).ingest_claimreviews(source)
        reopened = SignalStore(path)
        assert len(reopened.lookup_claim("persistent claim text here")) == 1


class TestClaimLookup:
    def test_normalized_match(self, tmp_path):
        source = _write(tmp_path / "claims.jsonl", [_claim_line("The moon is made of cheese.")])
        store = SignalStore(tmp_path / "store.jsonl")
        store.ingest_claimreviews(source)
        assert len(store.lookup_claim("the moon is made of  cheese")) == 1

    def test_unseen_text_empty(self):
        assert SignalStore().lookup_claim("never stored") == []

    def test_two_fact_checks_same_claim(self, tmp_path):
        source = _write(tmp_path / "claims.jsonl", [
            _claim_line("one claim two checks", label="false", url="http://check.example/a"),
            _claim_line("one claim two checks", label="half true", url="http://check.example/b"),
        ])
        store = SignalStore(tmp_path / "store.jsonl")
        store.ingest_claimreviews(source)
        assert len(store.lookup_claim("one claim two checks")) == 2

    def test_normalize_claim_text(self):
        assert normalize_claim_text("  The  Moon!? ") == "the moon"
        assert normalize_claim_text("already plain") == "already plain"

    def test_lookup_consistent_with_own_normalizer(self, tmp_path):
        source = _write(tmp_path / "claims.jsonl", [_claim_line("Budgets NEVER double twice!")])
        store = SignalStore(tmp_path / "store.jsonl")
        store.ingest_claimreviews(source)
        raw = "Budgets NEVER double twice!"
        assert store.lookup_claim(raw) == store.lookup_claim(normalize_claim_text(raw))
        assert normalize_claim_text(normalize_claim_text(raw)) == normalize_claim_text(raw)


class TestWebsiteLookup:
    def _store_with_sites(self):
        store = SignalStore()
        store.add_signal(WebSiteReputation(domain="www.krone.at", rater_name="NewsGuard",
                                           rating=Rating(0.8, 0.9), review_url="https://newsguard.example"))
        store.add_signal(WebSiteReputation(domain="www.krone.at", rater_name="Web Of Trust",
                                           rating=Rating(0.6, 0.8), review_url="https://wot.example"))
        store.add_signal(WebSiteReputation(domain="example.com", rater_name="NewsGuard",
                                           rating=Rating(-0.2, 0.5), review_url=""))
        return store

    def test_two_raters_returned(self):
        assert len(self._store_with_sites().lookup_website("www.krone.at")) == 2

    def test_unknown_domain_empty(self):
        assert self._store_with_sites().lookup_website("nowhere.invalid") == []

    def test_subdomain_falls_back_to_parent(self):
        matches = self._store_with_sites().lookup_website("news.example.com")
        assert [m.domain for m in matches] == ["example.com"]

    def test_registrable_candidates(self):
        assert registrable_candidates("a.b.example.com") == ["a.b.example.com", "b.example.com", "example.com"]
        assert registrable_candidates("example.com") == ["example.com"]


class TestPrecrawledIngestion:
    def test_three_valid(self, tmp_path):
        source = _write(tmp_path / "sents.jsonl", [
            json.dumps({"text": f"a perfectly valid sentence number {i}",
                        "url": "https://news.example.com/story", "date": "2020-04-01"})
            for i in range(3)
        ])
        store = SignalStore(tmp_path / "store.jsonl")
        assert store.ingest_precrawled(source) == 3
        assert len(store.lookup_precrawled("a perfectly valid sentence number 0")) == 1

    def test_short_sentence_rejected(self, tmp_path):
        source = _write(tmp_path / "sents.jsonl", [
            json.dumps({"text": "too short here", "url": "https://news.example.com/x"})
        ])
        store = SignalStore(tmp_path / "store.jsonl")
        assert store.ingest_precrawled(source) == 0

    def test_reingest_idempotent(self, tmp_path):
        source = _write(tmp_path / "sents.jsonl", [
            json.dumps({"text": "the same sentence stored once only",
                        "url": "https://news.example.com/x", "date": "2020-01-01"})
        ])
        store = SignalStore(tmp_path / "store.jsonl")
        store.ingest_precrawled(source)
        store.ingest_precrawled(source)
        assert len(store) == 1

    def test_domain_derived_from_url(self, tmp_path):
        source = _write(tmp_path / "sents.jsonl", [
            json.dumps({"text": "domains come from the url field",
                        "url": "HTTPS://News.Example.COM/story?x=1"})
        ])
        store = SignalStore(tmp_path / "store.jsonl")
        store.ingest_precrawled(source)
        (signal,) = store.lookup_precrawled("domains come from the url field")
        assert signal.source_domain == "news.example.com"


class TestSiteIngestionAndStats:
    def test_jsonl_and_csv(self, tmp_path):
        jsonl = _write(tmp_path / "sites.jsonl", [
            json.dumps({"domain": "example.com", "rater": "NewsGuard", "value": 0.8,
                        "confidence": 0.9, "url": "https://rater.example"}),
            json.dumps({"domain": "bad value", "rater": "x", "value": 7, "confidence": 0.5}),
        ])
        store = SignalStore(tmp_path / "store.jsonl")
        assert store.ingest_site_ratings(jsonl) == (1, 1)
        csv_path = tmp_path / "sites.csv"
        csv_path.write_text("domain,rater,value,confidence,url\n"
                            "other.org,Web Of Trust,-0.4,0.6,https://wot.example\n")
        assert store.ingest_site_ratings(csv_path) == (1, 0)
        assert len(store.lookup_website("other.org")) == 1

    def test_stats_counts(self, tmp_path):
        store = SignalStore(tmp_path / "store.jsonl")
        store.ingest_claimreviews(_write(tmp_path / "claims.jsonl",
                                         [_claim_line("a statistically valid claim")]))
        store.ingest_precrawled(_write(tmp_path / "sents.jsonl", [
            json.dumps({"text": "one sentence for the statistics", "url": "http://example.com/x"})
        ]))
        stats = store.stats().as_dict()
        assert stats["fact_checks"] == 1
        assert stats["precrawled_sentences"] == 1
        assert stats["site_reputations"] == 0
        assert stats["fact_check_sources"] == {"politifact": 1}

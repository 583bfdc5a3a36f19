from __future__ import annotations

import pytest

from credgraph.bots import BotConfig, ReviewEngine
from credgraph.model import ClaimReviewRecord, FactCheck, Rating, WebSiteReputation
from credgraph.normalize import claimreview_to_signal
from credgraph.stores import SignalStore

FIXED_TIME = "2026-08-08T00:00:00Z"


def make_factcheck(claim_text, label="false", url="http://factcheck.example/1",
                   checker="politifact", checker_url="http://www.politifact.com"):
    record = ClaimReviewRecord(claim_text=claim_text, review_url=url,
                               fact_checker_name=checker, fact_checker_url=checker_url,
                               alternate_name=label)
    return claimreview_to_signal(record)


def make_factcheck_rated(claim_text, value, confidence, url="http://factcheck.example/r"):
    """Fact-check carrying an arbitrary pinned rating (synthetic fixtures)."""
    record = ClaimReviewRecord(claim_text=claim_text, review_url=url,
                               fact_checker_name="politifact",
                               fact_checker_url="http://www.politifact.com",
                               alternate_name="synthetic")
    return FactCheck(record=record, rating=Rating(value, confidence), rating_source="textual")


def make_reputation(domain, value, confidence, rater="NewsGuard",
                    url="https://www.newsguardtech.com/"):
    return WebSiteReputation(domain=domain, rater_name=rater,
                             rating=Rating(value, confidence), review_url=url)


@pytest.fixture()
def empty_engine():
    return ReviewEngine(SignalStore(), BotConfig(timestamp=FIXED_TIME))


@pytest.fixture()
def seeded_store():
    """One 'false' fact-check, one crawled sentence, two site reputations."""
    store = SignalStore()
    store.add_signal(make_factcheck("The moon is made of green cheese tonight"))
    store.add_signal(make_reputation("www.krone.at", 0.8, 0.9))
    store.add_signal(make_reputation("www.krone.at", 0.6, 0.8,
                                     rater="Web Of Trust", url="https://mywot.com/"))
    store.add_signal(make_reputation("news.example.org", 0.7, 0.9))
    from credgraph.model import PrecrawledSentence
    store.add_signal(PrecrawledSentence(
        text="We want to invest in the greatest welfare program of modern times",
        source_url="https://news.example.org/welfare",
        source_domain="news.example.org",
        crawl_date="2020-04-01"))
    return store


@pytest.fixture()
def engine(seeded_store):
    return ReviewEngine(seeded_store, BotConfig(timestamp=FIXED_TIME))


@pytest.fixture()
def caution_engine(seeded_store):
    return ReviewEngine(seeded_store, BotConfig(timestamp=FIXED_TIME, caution=True))

"""Random valid review-graph generator for round-trip and validation tests."""

from __future__ import annotations

import random

from credgraph.model import (
    Article,
    BotDescriptor,
    Claim,
    ClaimReviewRecord,
    CredibilityReview,
    FactCheck,
    PrecrawledSentence,
    Rating,
    ReviewGraph,
    Sentence,
    SentencePair,
    SocialMediaPost,
    WebSite,
    WebSiteReputation,
)

_WORDS = ["moon", "cheese", "tax", "vaccine", "election", "climate", "budget",
          "river", "senator", "crowd", "photo", "virus", "policy", "border"]


def _text(rng: random.Random) -> str:
    return " ".join(rng.choice(_WORDS) for _ in range(rng.randint(3, 9)))


def _rating(rng: random.Random) -> Rating:
    return Rating(round(rng.uniform(-1, 1), 6), round(rng.uniform(0, 1), 6))


def _record(rng: random.Random) -> ClaimReviewRecord:
    if rng.random() < 0.5:
        return ClaimReviewRecord(
            claim_text=_text(rng),
            review_url=f"http://checker.example/{rng.randint(1, 999)}",
            fact_checker_name=rng.choice(["politifact", "snopes", "fullfact"]),
            fact_checker_url="http://checker.example",
            alternate_name=rng.choice(["false", "mostly true", "pants on fire"]),
        )
    worst, best = sorted(rng.sample(range(0, 10), 2))
    return ClaimReviewRecord(
        claim_text=_text(rng),
        review_url=f"http://checker.example/{rng.randint(1, 999)}",
        rating_value=rng.uniform(worst, best),
        best_rating=float(best),
        worst_rating=float(worst),
    )


def random_graph(rng: random.Random) -> ReviewGraph:
    """A small random graph honoring every model invariant."""
    nodes = {}

    def add(node):
        nodes[node.id] = node
        return node

    # grow the bot DAG one at a time so depends_on stays acyclic
    bots = [add(BotDescriptor(name="bot_0", version="1.0"))]
    for i in range(1, rng.randint(1, 3)):
        deps = tuple(b.id for b in rng.sample(bots, k=rng.randint(0, len(bots))))
        bots.append(add(BotDescriptor(name=f"bot_{i}", version="1.0", depends_on=deps)))

    site = add(WebSite(domain=rng.choice(["example.com", "www.krone.at", "news.test.org"])))
    items = [add(Sentence(text=_text(rng))), add(Claim(text=_text(rng))), site]
    if rng.random() < 0.6:
        items.append(add(Article(url="http://example.com/a", title=_text(rng),
                                 body_text=_text(rng), website_ref=site.id)))
    if rng.random() < 0.4:
        items.append(add(SocialMediaPost(url="https://twitter.com/x/1", text=_text(rng),
                                         linked_item_refs=(items[0].id,), website_ref=site.id)))
    if rng.random() < 0.3:
        items.append(add(SentencePair(source_ref=items[0].id, target_ref=items[1].id)))

    signals = []
    for _ in range(rng.randint(1, 3)):
        kind = rng.random()
        if kind < 0.4:
            signals.append(add(FactCheck(record=_record(rng), rating=_rating(rng),
                                         rating_source=rng.choice(["textual", "numeric"]))))
        elif kind < 0.7:
            signals.append(add(WebSiteReputation(domain="example.com", rater_name="RaterX",
                                                 rating=_rating(rng), review_url="http://rater.example")))
        else:
            signals.append(add(PrecrawledSentence(text=_text(rng), source_url="http://example.com/p",
                                                  source_domain="example.com", crawl_date="2020-04-01")))

    reviews = []
    for _ in range(rng.randint(1, 4)):
        based_on = [s.id for s in rng.sample(signals, k=rng.randint(0, len(signals)))]
        based_on += [r.id for r in rng.sample(reviews, k=min(len(reviews), rng.randint(0, 2)))]
        review = CredibilityReview(
            item_reviewed=rng.choice(items).id,
            rating=_rating(rng),
            author=rng.choice(bots).id,
            is_based_on=tuple(based_on),
            explanation=f"Seems *uncertain* because {_text(rng)}.",
            created_at="2026-08-08T00:00:00Z",
        )
        if review.id not in nodes:
            reviews.append(add(review))

    root = CredibilityReview(
        item_reviewed=items[0].id,
        rating=_rating(rng),
        author=bots[-1].id,
        is_based_on=tuple(r.id for r in reviews),
        explanation="Root review.",
        created_at="2026-08-08T00:00:00Z",
    )
    add(root)
    return ReviewGraph(root=root.id, nodes=nodes)

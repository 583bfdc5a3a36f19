"""Domain model for credibility review graphs.

A review graph is a DAG of nodes: credibility reviews, the data items they
review, the ground signals (fact-checks, site reputations, crawled sentences)
they rest on, and the bots that authored them. All node types are immutable
after construction and carry content-addressed identifiers so that identical
sub-reviews deduplicate within a graph.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Optional, Union


class CredGraphError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(CredGraphError):
    """A domain invariant was violated."""


class ParseError(CredGraphError):
    """A document could not be parsed into a valid graph."""


class BackendUnavailableError(CredGraphError):
    """The remote NLP backend could not be reached."""


REVIEW_ASPECT = "credibility"

_ID_PREFIX = "urn:cred"


def _content_id(kind: str, *parts) -> str:
    payload = json.dumps(parts, sort_keys=True, ensure_ascii=False, separators=(",", ":"))
    digest = hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]
    return f"{_ID_PREFIX}:{kind}:{digest}"


def _check_unit_interval(name: str, value: float, lo: float, hi: float) -> float:
    value = float(value)
    if not (lo <= value <= hi):
        raise ValidationError(f"{name} must be in [{lo}, {hi}], got {value!r}")
    return value


@dataclass(frozen=True)
class Rating:
    """A credibility rating: value in [-1, 1], confidence in [0, 1]."""

    value: float
    confidence: float

    def __post_init__(self):
        object.__setattr__(self, "value", _check_unit_interval("rating value", self.value, -1.0, 1.0))
        object.__setattr__(self, "confidence", _check_unit_interval("confidence", self.confidence, 0.0, 1.0))


# --- data items -------------------------------------------------------------

def _require_text(kind: str, text: str) -> str:
    if not isinstance(text, str) or not text.strip():
        raise ValidationError(f"{kind} text must be non-empty")
    return text


def normalize_domain(domain: str) -> str:
    """Lowercase a domain and strip scheme, path, port and credentials."""
    d = domain.strip().lower()
    if "://" in d:
        d = d.split("://", 1)[1]
    d = d.split("/", 1)[0].split("?", 1)[0].split("#", 1)[0]
    if "@" in d:
        d = d.rsplit("@", 1)[1]
    d = d.split(":", 1)[0]
    return d.strip(".")


@dataclass(frozen=True)
class Sentence:
    text: str
    id: str = ""

    def __post_init__(self):
        _require_text("Sentence", self.text)
        if not self.id:
            object.__setattr__(self, "id", _content_id("item", "Sentence", self.text))


@dataclass(frozen=True)
class Claim:
    text: str
    id: str = ""

    def __post_init__(self):
        _require_text("Claim", self.text)
        if not self.id:
            object.__setattr__(self, "id", _content_id("item", "Claim", self.text))


@dataclass(frozen=True)
class WebSite:
    """A website identified by its bare domain (lowercase, no scheme/path)."""

    domain: str
    id: str = ""

    def __post_init__(self):
        d = self.domain
        if not d or d != normalize_domain(d):
            raise ValidationError(f"WebSite domain must be normalized (lowercase, bare): {d!r}")
        if not self.id:
            object.__setattr__(self, "id", _content_id("item", "WebSite", d))


@dataclass(frozen=True)
class Article:
    url: Optional[str] = None
    title: Optional[str] = None
    body_text: Optional[str] = None
    website_ref: Optional[str] = None
    id: str = ""

    def __post_init__(self):
        if not self.id:
            object.__setattr__(
                self, "id",
                _content_id("item", "Article", self.url, self.title, self.body_text, self.website_ref),
            )


@dataclass(frozen=True)
class SocialMediaPost:
    url: Optional[str] = None
    text: Optional[str] = None
    linked_item_refs: tuple = ()
    website_ref: Optional[str] = None
    id: str = ""

    def __post_init__(self):
        object.__setattr__(self, "linked_item_refs", tuple(self.linked_item_refs))
        if not self.id:
            object.__setattr__(
                self, "id",
                _content_id("item", "SocialMediaPost", self.url, self.text,
                            list(self.linked_item_refs), self.website_ref),
            )


@dataclass(frozen=True)
class SentencePair:
    source_ref: str
    target_ref: str
    id: str = ""

    def __post_init__(self):
        if not self.id:
            object.__setattr__(self, "id", _content_id("item", "SentencePair", self.source_ref, self.target_ref))


DataItem = Union[Sentence, Claim, Article, SocialMediaPost, WebSite, SentencePair]

ITEM_TYPES = (Sentence, Claim, Article, SocialMediaPost, WebSite, SentencePair)


# --- ground signals ---------------------------------------------------------

@dataclass(frozen=True)
class ClaimReviewRecord:
    """A fact-checker's published verdict on a claim, before normalization."""

    claim_text: str
    review_url: str
    fact_checker_name: str = "unknown"
    fact_checker_url: str = ""
    rating_value: Optional[float] = None
    best_rating: Optional[float] = None
    worst_rating: Optional[float] = None
    alternate_name: Optional[str] = None

    def __post_init__(self):
        _require_text("claim", self.claim_text)
        has_numeric = self.rating_value is not None and self.best_rating is not None and self.worst_rating is not None
        if not has_numeric and self.alternate_name is None:
            raise ValidationError("claim review needs a numeric rating (with best/worst) or an alternateName")
        if has_numeric and not self.best_rating > self.worst_rating:
            raise ValidationError(f"bestRating must exceed worstRating ({self.best_rating} <= {self.worst_rating})")


@dataclass(frozen=True)
class FactCheck:
    """Ground signal: a normalized fact-check of a claim."""

    record: ClaimReviewRecord
    rating: Rating
    rating_source: str = "textual"  # which verdict encoding the rating came from
    id: str = ""

    def __post_init__(self):
        if self.rating_source not in ("textual", "numeric", "none"):
            raise ValidationError(f"unknown rating source {self.rating_source!r}")
        if not self.id:
            r = self.record
            object.__setattr__(
                self, "id",
                _content_id("signal", "FactCheck", r.claim_text, r.review_url, r.fact_checker_name,
                            r.rating_value, r.best_rating, r.worst_rating, r.alternate_name),
            )


@dataclass(frozen=True)
class WebSiteReputation:
    """Ground signal: an external rater's credibility record for a domain."""

    domain: str
    rater_name: str
    rating: Rating
    review_url: str = ""
    id: str = ""

    def __post_init__(self):
        if self.domain != normalize_domain(self.domain):
            raise ValidationError(f"reputation domain must be normalized: {self.domain!r}")
        if not self.id:
            object.__setattr__(
                self, "id",
                _content_id("signal", "WebSiteReputation", self.domain, self.rater_name,
                            self.rating.value, self.rating.confidence, self.review_url),
            )


@dataclass(frozen=True)
class PrecrawledSentence:
    """Ground signal: a sentence found on a known website during a crawl."""

    text: str
    source_url: str
    source_domain: str
    crawl_date: str = ""
    id: str = ""

    def __post_init__(self):
        _require_text("precrawled sentence", self.text)
        if self.source_domain != normalize_domain(self.source_domain):
            raise ValidationError(f"source domain must be normalized: {self.source_domain!r}")
        if not self.id:
            object.__setattr__(
                self, "id",
                _content_id("signal", "PrecrawledSentence", self.text, self.source_url,
                            self.source_domain, self.crawl_date),
            )


GroundSignal = Union[FactCheck, WebSiteReputation, PrecrawledSentence]

SIGNAL_TYPES = (FactCheck, WebSiteReputation, PrecrawledSentence)


# --- reviews and bots -------------------------------------------------------

@dataclass(frozen=True)
class BotDescriptor:
    name: str
    version: str
    depends_on: tuple = ()
    id: str = ""

    def __post_init__(self):
        object.__setattr__(self, "depends_on", tuple(self.depends_on))
        if not self.id:
            object.__setattr__(self, "id", f"{_ID_PREFIX}:bot:{self.name}@{self.version}")


@dataclass(frozen=True)
class CredibilityReview:
    """A review assigning a credibility rating to a data item.

    ``is_based_on`` references the reviews and ground signals the rating was
    derived from; following those references down to ground signals yields the
    full provenance chain. The identifier hashes the review content excluding
    the explanation and timestamp, so re-deriving the same review (same item,
    rating, evidence and author) yields the same node.
    """

    item_reviewed: str
    rating: Rating
    author: str
    is_based_on: tuple = ()
    explanation: str = ""
    review_aspect: str = REVIEW_ASPECT
    created_at: str = ""
    id: str = ""

    def __post_init__(self):
        if self.review_aspect != REVIEW_ASPECT:
            raise ValidationError(f"review aspect must be {REVIEW_ASPECT!r}, got {self.review_aspect!r}")
        object.__setattr__(self, "is_based_on", tuple(self.is_based_on))
        if not self.id:
            object.__setattr__(
                self, "id",
                _content_id("review", self.item_reviewed, self.rating.value, self.rating.confidence,
                            list(self.is_based_on), self.author),
            )


GraphNode = Union[CredibilityReview, DataItem, GroundSignal, BotDescriptor]


@dataclass(frozen=True)
class Violation:
    node_id: str
    rule: str
    detail: str

    def __str__(self):
        return f"{self.node_id}: [{self.rule}] {self.detail}"


@dataclass(frozen=True)
class ReviewGraph:
    """The provenance graph produced by one review request.

    ``nodes`` maps identifiers to reviews, items, signals and bots; ``root``
    is the identifier of the top-level review.
    """

    root: str
    nodes: dict = field(default_factory=dict)

    def node(self, node_id: str) -> GraphNode:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise ValidationError(f"unknown node id {node_id!r}") from None

    def reviews(self) -> list:
        return [n for n in self.nodes.values() if isinstance(n, CredibilityReview)]


def _reference_edges(node: GraphNode) -> list:
    """Outgoing id references of a node, labelled by role."""
    edges = []
    if isinstance(node, CredibilityReview):
        edges.append(("itemReviewed", node.item_reviewed))
        edges.append(("author", node.author))
        edges.extend(("isBasedOn", ref) for ref in node.is_based_on)
    elif isinstance(node, BotDescriptor):
        edges.extend(("dependsOn", ref) for ref in node.depends_on)
    elif isinstance(node, Article):
        if node.website_ref:
            edges.append(("website", node.website_ref))
    elif isinstance(node, SocialMediaPost):
        edges.extend(("linkedItem", ref) for ref in node.linked_item_refs)
        if node.website_ref:
            edges.append(("website", node.website_ref))
    elif isinstance(node, SentencePair):
        edges.append(("source", node.source_ref))
        edges.append(("target", node.target_ref))
    return edges


def _provenance_edges(node: GraphNode) -> list:
    """Edges that form reasoning chains and therefore must stay acyclic.

    Item-to-item links (a post referencing another post) may legitimately
    cycle on the web; the reviewing recursion is depth-limited instead.
    """
    if isinstance(node, CredibilityReview):
        return list(node.is_based_on)
    if isinstance(node, BotDescriptor):
        return list(node.depends_on)
    return []


def validate_graph(graph: ReviewGraph) -> list:
    """Check all graph invariants; returns a list of violations (empty = valid)."""
    violations = []
    if graph.root not in graph.nodes:
        violations.append(Violation(graph.root, "root-present", "root review is not among the graph nodes"))
    else:
        root = graph.nodes[graph.root]
        if not isinstance(root, CredibilityReview):
            violations.append(Violation(graph.root, "root-type", "root node is not a credibility review"))

    for node_id, node in graph.nodes.items():
        if getattr(node, "id", None) != node_id:
            violations.append(Violation(node_id, "id-consistent", "node is keyed under a different id"))
        for role, ref in _reference_edges(node):
            if ref not in graph.nodes:
                violations.append(Violation(node_id, "resolvable-ref", f"{role} references absent id {ref!r}"))

    # Cycle check over provenance edges (isBasedOn / dependsOn), DFS coloring.
    # Each back-edge is reported once, at the node whose edge closes the cycle.
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {node_id: WHITE for node_id in graph.nodes}

    def visit(node_id: str) -> None:
        color[node_id] = GRAY
        for ref in _provenance_edges(graph.nodes[node_id]):
            if ref not in graph.nodes:
                continue  # reported above as dangling
            if color[ref] == GRAY:
                violations.append(Violation(node_id, "acyclic", f"provenance cycle closed via {ref!r}"))
            elif color[ref] == WHITE:
                visit(ref)
        color[node_id] = BLACK

    for node_id in sorted(graph.nodes):
        if color[node_id] == WHITE:
            visit(node_id)

    return violations


def require_valid(graph: ReviewGraph) -> None:
    violations = validate_graph(graph)
    if violations:
        raise ValidationError("; ".join(str(v) for v in violations))

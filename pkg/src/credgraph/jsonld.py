"""JSON-LD (de)serialization of review graphs.

The wire format uses schema.org vocabulary plus a small extension context for
the terms schema.org lacks (CredibilityReview, Bot, Sentence, confidence and
the ground-signal types). Serialization is deterministic: node objects are
emitted under ``@graph`` sorted by ``@id`` with sorted keys, so equal graphs
produce byte-identical documents.
"""

from __future__ import annotations

import json
from importlib import resources
from typing import Optional

from .model import (
    ITEM_TYPES,
    Article,
    BotDescriptor,
    Claim,
    ClaimReviewRecord,
    CredibilityReview,
    FactCheck,
    GraphNode,
    ParseError,
    PrecrawledSentence,
    Rating,
    ReviewGraph,
    Sentence,
    SentencePair,
    SocialMediaPost,
    ValidationError,
    WebSite,
    WebSiteReputation,
    validate_graph,
)


def extension_context() -> dict:
    """The shipped static @context (schema.org vocab + extension namespace)."""
    text = resources.files("credgraph.data").joinpath("context.jsonld").read_text("utf-8")
    return json.loads(text)["@context"]


_CONTEXT = None


def _context() -> dict:
    global _CONTEXT
    if _CONTEXT is None:
        _CONTEXT = extension_context()
    return _CONTEXT


def _ref(node_id: str) -> dict:
    return {"@id": node_id}


def _rating_obj(rating: Rating) -> dict:
    return {"@type": "Rating", "ratingValue": rating.value, "confidence": rating.confidence}


def _node_to_obj(node: GraphNode) -> dict:
    if isinstance(node, CredibilityReview):
        return {
            "@id": node.id,
            "@type": "CredibilityReview",
            "reviewAspect": node.review_aspect,
            "itemReviewed": _ref(node.item_reviewed),
            "reviewRating": _rating_obj(node.rating),
            "isBasedOn": [_ref(r) for r in node.is_based_on],
            "author": _ref(node.author),
            "ratingExplanation": node.explanation,
            "dateCreated": node.created_at,
        }
    if isinstance(node, Sentence):
        return {"@id": node.id, "@type": "Sentence", "text": node.text}
    if isinstance(node, Claim):
        return {"@id": node.id, "@type": "Claim", "text": node.text}
    if isinstance(node, WebSite):
        return {"@id": node.id, "@type": "WebSite", "name": node.domain}
    if isinstance(node, Article):
        obj = {"@id": node.id, "@type": "Article"}
        if node.url is not None:
            obj["url"] = node.url
        if node.title is not None:
            obj["headline"] = node.title
        if node.body_text is not None:
            obj["articleBody"] = node.body_text
        if node.website_ref:
            obj["isPartOf"] = _ref(node.website_ref)
        return obj
    if isinstance(node, SocialMediaPost):
        obj = {"@id": node.id, "@type": "SocialMediaPost"}
        if node.url is not None:
            obj["url"] = node.url
        if node.text is not None:
            obj["text"] = node.text
        if node.linked_item_refs:
            obj["sharedContent"] = [_ref(r) for r in node.linked_item_refs]
        if node.website_ref:
            obj["isPartOf"] = _ref(node.website_ref)
        return obj
    if isinstance(node, SentencePair):
        return {
            "@id": node.id,
            "@type": "SentencePair",
            "sourceItem": _ref(node.source_ref),
            "targetItem": _ref(node.target_ref),
        }
    if isinstance(node, BotDescriptor):
        return {
            "@id": node.id,
            "@type": "Bot",
            "name": node.name,
            "softwareVersion": node.version,
            "isBasedOn": [_ref(r) for r in node.depends_on],
        }
    if isinstance(node, FactCheck):
        rec = node.record
        original = {"@type": "Rating"}
        if rec.rating_value is not None:
            original["ratingValue"] = rec.rating_value
        if rec.best_rating is not None:
            original["bestRating"] = rec.best_rating
        if rec.worst_rating is not None:
            original["worstRating"] = rec.worst_rating
        if rec.alternate_name is not None:
            original["alternateName"] = rec.alternate_name
        return {
            "@id": node.id,
            "@type": "ClaimReview",
            "claimReviewed": rec.claim_text,
            "url": rec.review_url,
            "author": {"@type": "Organization", "name": rec.fact_checker_name, "url": rec.fact_checker_url},
            "reviewRating": original,
            "normalizedRating": _rating_obj(node.rating),
            "ratingSource": node.rating_source,
        }
    if isinstance(node, WebSiteReputation):
        return {
            "@id": node.id,
            "@type": "WebSiteReputation",
            "domain": node.domain,
            "raterName": node.rater_name,
            "reviewRating": _rating_obj(node.rating),
            "url": node.review_url,
        }
    if isinstance(node, PrecrawledSentence):
        return {
            "@id": node.id,
            "@type": "PrecrawledSentence",
            "text": node.text,
            "url": node.source_url,
            "sourceDomain": node.source_domain,
            "dateCreated": node.crawl_date,
        }
    raise ValidationError(f"cannot serialize node of type {type(node).__name__}")


def serialize_nodes(nodes) -> str:
    """Serialize a plain node list (no root) as a deterministic JSON-LD document."""
    doc = {
        "@context": _context(),
        "@graph": [_node_to_obj(n) for n in sorted(nodes, key=lambda n: n.id)],
    }
    return json.dumps(doc, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def serialize_jsonld(graph: ReviewGraph) -> str:
    """Serialize a valid review graph to a deterministic JSON-LD document."""
    violations = validate_graph(graph)
    if violations:
        raise ValidationError("graph failed validation: " + "; ".join(str(v) for v in violations))
    doc = {
        "@context": _context(),
        "mainEntity": _ref(graph.root),
        "@graph": [_node_to_obj(graph.nodes[node_id]) for node_id in sorted(graph.nodes)],
    }
    return json.dumps(doc, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


# --- parsing ----------------------------------------------------------------

def _expect(obj: dict, key: str, node_id: str):
    if key not in obj:
        raise ParseError(f"node {node_id!r} is missing required property {key!r}")
    return obj[key]


def _opt(obj: dict, key: str):
    return obj.get(key)


def _ref_id(value, node_id: str, key: str) -> str:
    if isinstance(value, dict) and isinstance(value.get("@id"), str):
        return value["@id"]
    if isinstance(value, str):
        return value
    raise ParseError(f"node {node_id!r}: property {key!r} must be an @id reference")


def _ref_list(value, node_id: str, key: str) -> list:
    if not isinstance(value, list):
        raise ParseError(f"node {node_id!r}: property {key!r} must be an array")
    return [_ref_id(v, node_id, key) for v in value]


def _parse_rating(obj, node_id: str, key: str) -> Rating:
    if not isinstance(obj, dict):
        raise ParseError(f"node {node_id!r}: {key} must be a Rating object")
    try:
        return Rating(float(_expect(obj, "ratingValue", node_id)), float(_expect(obj, "confidence", node_id)))
    except (TypeError, ValueError) as exc:
        raise ParseError(f"node {node_id!r}: invalid {key}: {exc}") from exc
    except ValidationError as exc:
        raise ParseError(f"node {node_id!r}: {exc}") from exc


def _obj_to_node(obj: dict) -> GraphNode:
    node_id = obj.get("@id")
    if not isinstance(node_id, str) or not node_id:
        raise ParseError("graph node is missing @id")
    node_type = obj.get("@type")
    if not isinstance(node_type, str):
        raise ParseError(f"node {node_id!r} is missing @type")

    try:
        if node_type == "CredibilityReview":
            aspect = _expect(obj, "reviewAspect", node_id)
            return CredibilityReview(
                item_reviewed=_ref_id(_expect(obj, "itemReviewed", node_id), node_id, "itemReviewed"),
                rating=_parse_rating(_expect(obj, "reviewRating", node_id), node_id, "reviewRating"),
                author=_ref_id(_expect(obj, "author", node_id), node_id, "author"),
                is_based_on=tuple(_ref_list(_expect(obj, "isBasedOn", node_id), node_id, "isBasedOn")),
                explanation=_expect(obj, "ratingExplanation", node_id),
                review_aspect=aspect,
                created_at=_expect(obj, "dateCreated", node_id),
                id=node_id,
            )
        if node_type == "Sentence":
            return Sentence(text=_expect(obj, "text", node_id), id=node_id)
        if node_type == "Claim":
            return Claim(text=_expect(obj, "text", node_id), id=node_id)
        if node_type == "WebSite":
            return WebSite(domain=_expect(obj, "name", node_id), id=node_id)
        if node_type == "Article":
            website = _opt(obj, "isPartOf")
            return Article(
                url=_opt(obj, "url"),
                title=_opt(obj, "headline"),
                body_text=_opt(obj, "articleBody"),
                website_ref=_ref_id(website, node_id, "isPartOf") if website is not None else None,
                id=node_id,
            )
        if node_type == "SocialMediaPost":
            website = _opt(obj, "isPartOf")
            linked = obj.get("sharedContent", [])
            return SocialMediaPost(
                url=_opt(obj, "url"),
                text=_opt(obj, "text"),
                linked_item_refs=tuple(_ref_list(linked, node_id, "sharedContent")),
                website_ref=_ref_id(website, node_id, "isPartOf") if website is not None else None,
                id=node_id,
            )
        if node_type == "SentencePair":
            return SentencePair(
                source_ref=_ref_id(_expect(obj, "sourceItem", node_id), node_id, "sourceItem"),
                target_ref=_ref_id(_expect(obj, "targetItem", node_id), node_id, "targetItem"),
                id=node_id,
            )
        if node_type == "Bot":
            return BotDescriptor(
                name=_expect(obj, "name", node_id),
                version=_expect(obj, "softwareVersion", node_id),
                depends_on=tuple(_ref_list(obj.get("isBasedOn", []), node_id, "isBasedOn")),
                id=node_id,
            )
        if node_type == "ClaimReview":
            original = _expect(obj, "reviewRating", node_id)
            author = obj.get("author") or {}
            record = ClaimReviewRecord(
                claim_text=_expect(obj, "claimReviewed", node_id),
                review_url=_expect(obj, "url", node_id),
                fact_checker_name=author.get("name", "unknown"),
                fact_checker_url=author.get("url", ""),
                rating_value=_opt(original, "ratingValue"),
                best_rating=_opt(original, "bestRating"),
                worst_rating=_opt(original, "worstRating"),
                alternate_name=_opt(original, "alternateName"),
            )
            return FactCheck(
                record=record,
                rating=_parse_rating(_expect(obj, "normalizedRating", node_id), node_id, "normalizedRating"),
                rating_source=_expect(obj, "ratingSource", node_id),
                id=node_id,
            )
        if node_type == "WebSiteReputation":
            return WebSiteReputation(
                domain=_expect(obj, "domain", node_id),
                rater_name=_expect(obj, "raterName", node_id),
                rating=_parse_rating(_expect(obj, "reviewRating", node_id), node_id, "reviewRating"),
                review_url=_expect(obj, "url", node_id),
                id=node_id,
            )
        if node_type == "PrecrawledSentence":
            return PrecrawledSentence(
                text=_expect(obj, "text", node_id),
                source_url=_expect(obj, "url", node_id),
                source_domain=_expect(obj, "sourceDomain", node_id),
                crawl_date=_expect(obj, "dateCreated", node_id),
                id=node_id,
            )
    except ValidationError as exc:
        raise ParseError(f"node {node_id!r}: {exc}") from exc

    raise ParseError(f"node {node_id!r} has unknown @type {node_type!r}")


def parse_jsonld(document: str) -> ReviewGraph:
    """Parse a JSON-LD document into a validated review graph."""
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    main = doc.get("mainEntity")
    if main is None:
        raise ParseError("document is missing mainEntity (root review reference)")
    root = _ref_id(main, "<document>", "mainEntity")
    graph_objs = doc.get("@graph")
    if not isinstance(graph_objs, list):
        raise ParseError("document is missing a @graph array")

    nodes = {}
    for obj in graph_objs:
        if not isinstance(obj, dict):
            raise ParseError("@graph entries must be objects")
        node = _obj_to_node(obj)
        if node.id in nodes:
            raise ParseError(f"duplicate node id {node.id!r}")
        nodes[node.id] = node

    graph = ReviewGraph(root=root, nodes=nodes)
    violations = validate_graph(graph)
    if violations:
        raise ParseError("document violates graph invariants: " + "; ".join(str(v) for v in violations))
    return graph


def parse_item_document(document: str) -> tuple:
    """Parse a review *request*: a JSON-LD document describing one data item.

    Accepts either a bare node object or a document with ``@graph`` (and
    optionally ``mainEntity``) so posts can inline the articles they link.
    Returns ``(item, extras)`` where ``extras`` maps ids of any additional
    items referenced by the main one.
    """
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("request must be a JSON object")

    if "@graph" in doc:
        objs = doc["@graph"]
        if not isinstance(objs, list) or not objs:
            raise ParseError("@graph must be a non-empty array")
        main_ref: Optional[str] = None
        if "mainEntity" in doc:
            main_ref = _ref_id(doc["mainEntity"], "<document>", "mainEntity")
    else:
        objs = [doc]
        main_ref = None

    nodes = {}
    for obj in objs:
        if not isinstance(obj, dict):
            raise ParseError("@graph entries must be objects")
        node = _obj_to_node(obj)
        nodes[node.id] = node

    for node in nodes.values():
        if not isinstance(node, ITEM_TYPES):
            raise ParseError(f"request node {node.id!r} is not a data item")

    if main_ref is None:
        main_ref = next(iter(nodes))
    if main_ref not in nodes:
        raise ParseError(f"mainEntity {main_ref!r} not found in request")
    item = nodes.pop(main_ref)
    return item, nodes

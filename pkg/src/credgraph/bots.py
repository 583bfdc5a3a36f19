"""The review bots: lookup, linking and decomposing strategies over one engine.

Six bots cooperate to review content:

* ``claim_lookup`` turns stored fact-checks into reviews of exact claims.
* ``site_lookup`` aggregates external reputation records for a website.
* ``precrawl_link`` rates a sentence by the site it was crawled from, at
  reduced confidence.
* ``semsim_link`` rates a sentence by linking it to similar reviewed
  sentences, flipping polarity on disagreement and discounting confidence by
  stance-revised similarity.
* ``article_review`` decomposes an article into sentences plus its website
  and keeps the least credible part.
* ``post_review`` does the same for social media posts, following linked
  content to a bounded depth.

Every review is emitted into a graph builder together with the items,
signals and bot descriptors it references, so the returned root review can
always be traced back to ground signals or to an explicit no-signal marker.
"""

from __future__ import annotations

import dataclasses
import datetime as _dt
import threading
from dataclasses import dataclass, field
from typing import Optional

from .algebra import (
    ARTICLE_WEBSITE_ONLY,
    DEFAULT_CONFIDENCE_FLOOR,
    DEFAULT_KAPPA_SITE,
    DEFAULT_KAPPA_STANCE,
    DEFAULT_REVISE_MULTIPLIERS,
    GRADATION,
    SEMSIM_WEAK_STANCE,
    CautionContext,
    StanceLabel,
    apply_caution,
    combine_linked,
    least_credible,
    map_to_label,
    most_confident,
)
from .model import (
    Article,
    BackendUnavailableError,
    BotDescriptor,
    Claim,
    CredibilityReview,
    FactCheck,
    GraphNode,
    PrecrawledSentence,
    Rating,
    ReviewGraph,
    Sentence,
    SocialMediaPost,
    ValidationError,
    WebSite,
    require_valid,
)
from .nlp import BaselineBackend, build_index, get_backend
from .segment import reviewable_sentences
from .stores import SignalStore

BOT_VERSION = "0.1.0"

DEFAULT_PLATFORM_DOMAINS = frozenset({
    "twitter.com", "x.com", "t.co", "facebook.com", "instagram.com",
    "youtube.com", "tiktok.com", "reddit.com", "threads.net", "mastodon.social",
})

# Default bot registry: name -> dependencies. Config files may re-declare
# this mapping to disable bots or override per-bot constants.
DEFAULT_REGISTRY = {
    "claim_lookup": {},
    "site_lookup": {},
    "precrawl_link": {"depends_on": ["site_lookup"]},
    "semsim_link": {"depends_on": ["claim_lookup", "precrawl_link"]},
    "article_review": {"depends_on": ["semsim_link", "site_lookup"]},
    "post_review": {"depends_on": ["article_review", "semsim_link"]},
}

_OVERRIDABLE_FIELDS = {
    "sim_floor", "top_k", "precrawl_decay", "confidence_floor",
    "kappa_site", "kappa_stance", "website_confidence_cap",
}


class UnsupportedItemError(ValidationError):
    """No registered bot can review this item type."""


@dataclass(frozen=True)
class BotConfig:
    """Tunable constants for the bot network; all ranges validated."""

    sim_floor: float = 0.6
    top_k: int = 5
    revise_multipliers: dict = field(default_factory=lambda: dict(DEFAULT_REVISE_MULTIPLIERS))
    precrawl_decay: float = 0.8
    confidence_floor: float = DEFAULT_CONFIDENCE_FLOOR
    caution: bool = False
    kappa_site: float = DEFAULT_KAPPA_SITE
    kappa_stance: float = DEFAULT_KAPPA_STANCE
    backend: str = "baseline"
    backend_url: str = ""
    backend_timeout: float = 10.0
    max_link_depth: int = 2
    website_confidence_cap: float = 0.95
    platform_domains: frozenset = DEFAULT_PLATFORM_DOMAINS
    timestamp: Optional[str] = None

    def __post_init__(self):
        for name, value, lo, hi in (
            ("sim_floor", self.sim_floor, 0.0, 1.0),
            ("precrawl_decay", self.precrawl_decay, 0.0, 1.0),
            ("confidence_floor", self.confidence_floor, 0.0, 1.0),
            ("kappa_site", self.kappa_site, 0.0, 1.0),
            ("kappa_stance", self.kappa_stance, 0.0, 1.0),
            ("website_confidence_cap", self.website_confidence_cap, 0.0, 1.0),
        ):
            if not lo <= value <= hi:
                raise ValidationError(f"{name} must be in [{lo}, {hi}], got {value!r}")
        if self.top_k < 1:
            raise ValidationError(f"top_k must be >= 1, got {self.top_k!r}")
        if self.max_link_depth < 0:
            raise ValidationError(f"max_link_depth must be >= 0, got {self.max_link_depth!r}")
        if self.backend not in ("baseline", "remote"):
            raise ValidationError(f"backend must be 'baseline' or 'remote', got {self.backend!r}")
        multipliers = {StanceLabel(k): float(v) for k, v in self.revise_multipliers.items()}
        for stance, m in multipliers.items():
            if not 0.0 <= m <= 1.0:
                raise ValidationError(f"revise multiplier for {stance.value} must be in [0, 1], got {m}")
        if set(multipliers) != set(StanceLabel):
            raise ValidationError("revise multipliers must cover all four stance labels")
        object.__setattr__(self, "revise_multipliers", multipliers)
        object.__setattr__(self, "platform_domains", frozenset(self.platform_domains))


class GraphBuilder:
    """Accumulates the nodes one review request touches."""

    def __init__(self):
        self.nodes = {}

    def add(self, node: GraphNode) -> GraphNode:
        existing = self.nodes.get(node.id)
        if existing is not None:
            return existing
        self.nodes[node.id] = node
        return node

    def merge(self, other: "GraphBuilder") -> None:
        for node in other.nodes.values():
            self.add(node)


def _validate_registry(registry: dict) -> None:
    for name, block in registry.items():
        if name not in DEFAULT_REGISTRY:
            raise ValidationError(f"unknown bot {name!r} in registry")
        unknown = set(block) - _OVERRIDABLE_FIELDS - {"depends_on"}
        if unknown:
            raise ValidationError(f"bot {name!r}: unknown config keys {sorted(unknown)}")
        for dep in block.get("depends_on", DEFAULT_REGISTRY[name].get("depends_on", [])):
            if dep not in registry:
                raise ValidationError(f"bot {name!r} depends on unregistered bot {dep!r}")
    # depends_on must form a DAG over the registered set
    state = {}

    def visit(name):
        state[name] = "gray"
        deps = registry[name].get("depends_on", DEFAULT_REGISTRY[name].get("depends_on", []))
        for dep in deps:
            if state.get(dep) == "gray":
                raise ValidationError(f"bot registry contains a dependency cycle through {dep!r}")
            if dep not in state:
                visit(dep)
        state[name] = "black"

    for name in registry:
        if name not in state:
            visit(name)


class ReviewEngine:
    """Stateless-at-serve-time engine hosting the registered bots.

    Holds immutable references to the signal store, the similarity index and
    the NLP backend; a single review request may therefore run concurrently
    with others. All reviews produced by one engine instance share its
    creation timestamp, which keeps identical requests byte-identical.
    """

    def __init__(self, store: SignalStore, config: Optional[BotConfig] = None,
                 index=None, registry: Optional[dict] = None):
        self.store = store
        self.config = config or BotConfig()
        self.registry = dict(registry) if registry is not None else dict(DEFAULT_REGISTRY)
        _validate_registry(self.registry)
        self.created_at = self.config.timestamp or _dt.datetime.now(_dt.timezone.utc).strftime(
            "%Y-%m-%dT%H:%M:%SZ")

        self._bot_cfg = {}
        self._descriptors = {}
        for name in sorted(self.registry):
            block = self.registry[name]
            overrides = {k: v for k, v in block.items() if k in _OVERRIDABLE_FIELDS}
            self._bot_cfg[name] = dataclasses.replace(self.config, **overrides) if overrides else self.config
        for name in sorted(self.registry):
            deps = self.registry[name].get("depends_on", DEFAULT_REGISTRY[name].get("depends_on", []))
            dep_ids = tuple(self._bot_id(dep) for dep in deps)
            self._descriptors[name] = BotDescriptor(name=name, version=BOT_VERSION, depends_on=dep_ids)

        self._backend = get_backend(self.config.backend, self.config.backend_url, self.config.backend_timeout)
        self._index = index
        self._fallback_backend = None
        self._fallback_index = None
        self._nlp_lock = threading.Lock()
        if self.config.backend == "baseline" and index is None:
            self._index = self._build_local_index(BaselineBackend())

    @staticmethod
    def _bot_id(name: str) -> str:
        return BotDescriptor(name=name, version=BOT_VERSION).id

    def _build_local_index(self, backend):
        entries = sorted(self.store.iter_encodable())
        vectors = backend.encode_batch([text for _, text in entries])
        return build_index(backend.backend_id, backend.dim, list(zip([sid for sid, _ in entries], vectors)))

    # -- public surface --------------------------------------------------------

    def bots(self) -> list:
        """Registered bot descriptors in stable (name) order."""
        return [self._descriptors[name] for name in sorted(self._descriptors)]

    def review(self, item, extras: Optional[dict] = None) -> ReviewGraph:
        """Review a data item and return the full provenance graph."""
        builder = GraphBuilder()
        if extras:
            for node in extras.values():
                builder.add(node)
        root = self._review_item(item, builder, extras or {}, depth=0)
        graph = ReviewGraph(root=root.id, nodes=dict(builder.nodes))
        require_valid(graph)
        return graph

    def explain(self, review: CredibilityReview) -> str:
        """The markdown explanation for a review; generic text for unknown authors."""
        if review.author not in {d.id for d in self._descriptors.values()}:
            return (f"This item seems *{_phrase(review.rating)}* "
                    f"(confidence {review.rating.confidence:.2f}; review by an unregistered bot).")
        return review.explanation or f"This item seems *{_phrase(review.rating)}*."

    def health(self) -> dict:
        stats = self.store.stats()
        backend_mode = self.config.backend
        reachable = True
        if self.config.backend == "remote":
            reachable = self._backend.reachable()
            if self._fallback_backend is not None or not reachable:
                backend_mode = "baseline-fallback"
        index_present = self._index is not None or self._fallback_index is not None
        degraded = []
        if not index_present:
            degraded.append("similarity index missing: linking bots will find no matches")
        return {
            "status": "degraded" if degraded else "ok",
            "reasons": degraded,
            "backend": backend_mode,
            "backend_reachable": reachable,
            "stores": stats.as_dict(),
            "index": {"present": index_present,
                      "entries": len(self._index) if self._index is not None else 0},
            "bots": sorted(self._descriptors),
        }

    # -- dispatch ---------------------------------------------------------------

    def _review_item(self, item, builder, extras, depth):
        if isinstance(item, Claim):
            return self.review_claim(item, builder)
        if isinstance(item, Sentence):
            return self.review_sentence_semsim(item, builder)
        if isinstance(item, WebSite):
            return self.review_website(item, builder)
        if isinstance(item, Article):
            return self.review_article(item, builder, extras, depth)
        if isinstance(item, SocialMediaPost):
            return self.review_social_post(item, builder, extras, depth)
        raise UnsupportedItemError(f"no bot reviews items of type {type(item).__name__}")

    def _require_bot(self, name):
        if name not in self.registry:
            raise UnsupportedItemError(f"bot {name!r} is not registered")
        return self._descriptors[name]

    def _add_bot(self, name, builder) -> BotDescriptor:
        descriptor = self._require_bot(name)
        builder.add(descriptor)
        for dep in self.registry[name].get("depends_on", DEFAULT_REGISTRY[name].get("depends_on", [])):
            self._add_bot(dep, builder)
        return descriptor

    def _cr(self, item_id, rating, bot, based_on, explanation) -> CredibilityReview:
        return CredibilityReview(
            item_reviewed=item_id,
            rating=rating,
            author=bot.id,
            is_based_on=tuple(based_on),
            explanation=explanation,
            created_at=self.created_at,
        )

    # -- NLP plumbing -----------------------------------------------------------

    _FALLBACK_NOTE = " *(remote NLP backend unavailable; used built-in baseline)*"

    def _nlp(self):
        """Active (backend, index, fallback_note); sticky baseline after degrade."""
        if self._fallback_backend is not None:
            return self._fallback_backend, self._fallback_index, self._FALLBACK_NOTE
        return self._backend, self._index, ""

    def _activate_fallback(self):
        with self._nlp_lock:
            if self._fallback_backend is None:
                backend = BaselineBackend()
                self._fallback_index = self._build_local_index(backend)
                self._fallback_backend = backend
        return self._nlp()

    def _encode_with_fallback(self, text):
        if self._fallback_backend is None:
            try:
                query = self._backend.encode(text)
                if self._index is None and self.config.backend == "remote":
                    # Remote index was never built offline; build it now that
                    # the backend is known to be up.
                    with self._nlp_lock:
                        if self._index is None:
                            self._index = self._build_local_index(self._backend)
                return query, self._backend, self._index, ""
            except BackendUnavailableError:
                pass
            backend, index, note = self._activate_fallback()
        else:
            backend, index, note = self._nlp()
        return backend.encode(text), backend, index, note

    # -- lookup bots --------------------------------------------------------------

    def review_claim(self, item, builder: Optional[GraphBuilder] = None) -> CredibilityReview:
        """Review a claim (or sentence) against stored fact-checks of its exact text."""
        builder = builder if builder is not None else GraphBuilder()
        bot = self._add_bot("claim_lookup", builder)
        builder.add(item)
        signals = sorted(self.store.lookup_claim(item.text), key=lambda s: s.id)
        if not signals:
            explanation = f"Claim `{item.text}` could not be assessed: no fact-check found for this text."
            return builder.add(self._cr(item.id, Rating(0.0, 0.0), bot, (), explanation))
        candidates = []
        for signal in signals:
            candidates.append(self._factcheck_cr(item, signal, bot))
        winner = most_confident(candidates)
        winner_signal = signals[candidates.index(winner)]
        builder.add(winner_signal)
        return builder.add(winner)

    def _factcheck_cr(self, item, signal: FactCheck, bot) -> CredibilityReview:
        explanation = (f"Claim `{item.text}` is *{_phrase(signal.rating)}* "
                       f"based on a {_factcheck_link(signal)} with {_verdict_desc(signal)}.")
        return self._cr(item.id, signal.rating, bot, (signal.id,), explanation)

    def review_website(self, item: WebSite, builder: Optional[GraphBuilder] = None) -> CredibilityReview:
        """Aggregate all reputation records for a domain into one review."""
        builder = builder if builder is not None else GraphBuilder()
        bot = self._add_bot("site_lookup", builder)
        cfg = self._bot_cfg["site_lookup"]
        builder.add(item)
        signals = sorted(self.store.lookup_website(item.domain), key=lambda s: s.id)
        if not signals:
            explanation = f"Site `{item.domain}` has no reputation reviews from external raters."
            return builder.add(self._cr(item.id, Rating(0.0, 0.0), bot, (), explanation))
        total_conf = sum(s.rating.confidence for s in signals)
        if total_conf > 0:
            value = sum(s.rating.value * s.rating.confidence for s in signals) / total_conf
        else:
            value = sum(s.rating.value for s in signals) / len(signals)
        product = 1.0
        for s in signals:
            product *= 1.0 - s.rating.confidence
        confidence = min(1.0 - product, cfg.website_confidence_cap)
        rating = Rating(value, confidence)
        for s in signals:
            builder.add(s)
        raters = []
        for s in signals:
            link = f"[{s.rater_name}]({s.review_url})" if s.review_url else s.rater_name
            if link not in raters:
                raters.append(link)
        explanation = (f"Site `{item.domain}` seems *{_phrase(rating)}* based on {len(signals)} review(s) "
                       f"by external rater(s) {' or '.join(raters)}.")
        return builder.add(self._cr(item.id, rating, bot, tuple(s.id for s in signals), explanation))

    # -- linking bots ---------------------------------------------------------------

    def review_sentence_precrawled(self, item: Sentence,
                                   builder: Optional[GraphBuilder] = None) -> Optional[CredibilityReview]:
        """Rate a sentence by the websites it was crawled from, or None if unseen."""
        builder = builder if builder is not None else GraphBuilder()
        occurrences = sorted(self.store.lookup_precrawled(item.text), key=lambda s: s.id)
        if not occurrences:
            return None
        candidates = []
        subs = []
        for signal in occurrences:
            sub = GraphBuilder()
            candidates.append(self._precrawl_cr(signal, sub))
            subs.append(sub)
        winner = most_confident(candidates)
        builder.merge(subs[candidates.index(winner)])
        return builder.add(winner)

    def _precrawl_cr(self, signal: PrecrawledSentence, builder: GraphBuilder) -> CredibilityReview:
        """Review for one crawl occurrence: website rating with decayed confidence."""
        bot = self._add_bot("precrawl_link", builder)
        cfg = self._bot_cfg["precrawl_link"]
        sentence = builder.add(Sentence(text=signal.text))
        builder.add(signal)
        site_cr = self.review_website(WebSite(domain=signal.source_domain), builder)
        rating = Rating(site_cr.rating.value, cfg.precrawl_decay * site_cr.rating.confidence)
        explanation = (f"Sentence `{signal.text}` seems *{_phrase(rating)}* as it was published in site "
                       f"`{signal.source_domain}`. (Explanation for WebSite omitted)")
        return builder.add(self._cr(sentence.id, rating, bot, (signal.id, site_cr.id), explanation))

    def review_sentence_semsim(self, item: Sentence,
                               builder: Optional[GraphBuilder] = None) -> CredibilityReview:
        """Rate a sentence by linking it to similar sentences with known reviews."""
        builder = builder if builder is not None else GraphBuilder()
        bot = self._add_bot("semsim_link", builder)
        cfg = self._bot_cfg["semsim_link"]
        builder.add(item)

        query, backend, index, note = self._encode_with_fallback(item.text)
        if index is None:
            explanation = (f"Sentence `{item.text}` could not be matched: no similarity index is loaded."
                           + note)
            return builder.add(self._cr(item.id, Rating(0.0, 0.0), bot, (), explanation))
        if index.backend_id != backend.backend_id:
            raise ValidationError(
                f"similarity index was built with backend {index.backend_id!r}, "
                f"but the active backend is {backend.backend_id!r}")

        matches = index.nearest(query, k=cfg.top_k, sim_floor=cfg.sim_floor)
        candidates = []
        subs = []
        for match in matches:
            signal = self.store.get_signal(match.signal_ref)
            if signal is None:
                continue  # index is stale relative to the store
            sub = GraphBuilder()
            if isinstance(signal, FactCheck):
                claim_bot = self._add_bot("claim_lookup", sub)
                claim_item = sub.add(Claim(text=signal.record.claim_text))
                sub.add(signal)
                child = sub.add(self._factcheck_cr(claim_item, signal, claim_bot))
                target_text = signal.record.claim_text
            elif isinstance(signal, PrecrawledSentence):
                child = self._precrawl_cr(signal, sub)
                target_text = signal.text
            else:
                continue
            try:
                judgment = backend.stance(item.text, target_text)
            except BackendUnavailableError:
                backend, index, note = self._activate_fallback()
                judgment = backend.stance(item.text, target_text)
            rating = combine_linked(child, judgment.label, match.similarity, cfg.revise_multipliers)
            explanation = (
                f"Sentence `{item.text}` seems *{_phrase(rating)}* as it {_relation(judgment.label)}: "
                f"`{target_text}` that {_tail(child)} "
                f"(stance: {judgment.label.value}, similarity: {match.similarity:.2f})." + note
            )
            cr = self._cr(item.id, rating, bot, (child.id,), explanation)
            cr = apply_caution(
                cr,
                CautionContext(SEMSIM_WEAK_STANCE, stance=judgment.label),
                enabled=cfg.caution,
                kappa_site=cfg.kappa_site,
                kappa_stance=cfg.kappa_stance,
            )
            candidates.append(cr)
            subs.append(sub)
        if not candidates:
            explanation = f"Sentence `{item.text}` could not be matched: no similar reviewed sentences found." + note
            return builder.add(self._cr(item.id, Rating(0.0, 0.0), bot, (), explanation))
        winner = most_confident(candidates)
        builder.merge(subs[candidates.index(winner)])
        return builder.add(winner)

    # -- decomposing bots --------------------------------------------------------------

    def review_article(self, item: Article, builder: Optional[GraphBuilder] = None,
                       extras: Optional[dict] = None, depth: int = 0) -> CredibilityReview:
        """Decompose an article into sentences plus its website; keep the least credible part."""
        builder = builder if builder is not None else GraphBuilder()
        extras = extras or {}
        bot = self._add_bot("article_review", builder)
        cfg = self._bot_cfg["article_review"]
        builder.add(item)

        parts = []  # (part review, sub-builder, kind)
        for text in reviewable_sentences(item.title, item.body_text):
            sub = GraphBuilder()
            sentence = sub.add(Sentence(text=text))
            child = self.review_sentence_semsim(sentence, sub)
            explanation = (f"Article {_article_link(item)} seems *{_phrase(child.rating)}* "
                           f"based on its least credible sentence: {child.explanation}")
            parts.append((self._cr(item.id, child.rating, bot, (child.id,), explanation), sub, "sentence"))

        website = self._resolve_website(item.website_ref, extras, builder)
        if website is not None:
            sub = GraphBuilder()
            site_cr = self.review_website(website, sub)
            if site_cr.is_based_on:
                rating = Rating(site_cr.rating.value, cfg.precrawl_decay * site_cr.rating.confidence)
                explanation = (f"Article {_article_link(item)} seems *{_phrase(rating)}* based only on "
                               f"the reputation of the site it was published on. {site_cr.explanation}")
                parts.append((self._cr(item.id, rating, bot, (site_cr.id,), explanation), sub, "website"))

        if not parts:
            explanation = (f"Article {_article_link(item)} could not be assessed: "
                           f"no reviewable sentences and no known website.")
            return builder.add(self._cr(item.id, Rating(0.0, 0.0), bot, (), explanation))

        winner = least_credible([p for p, _, _ in parts], cfg.confidence_floor)
        winner_idx = [p.id for p, _, _ in parts].index(winner.id)
        builder.merge(parts[winner_idx][1])
        if parts[winner_idx][2] == "website":
            winner = apply_caution(
                winner,
                CautionContext(ARTICLE_WEBSITE_ONLY),
                enabled=cfg.caution,
                kappa_site=cfg.kappa_site,
                kappa_stance=cfg.kappa_stance,
            )
        return builder.add(winner)

    def review_social_post(self, item: SocialMediaPost, builder: Optional[GraphBuilder] = None,
                           extras: Optional[dict] = None, depth: int = 0) -> CredibilityReview:
        """Decompose a post into its sentences and linked content; keep the least credible part."""
        builder = builder if builder is not None else GraphBuilder()
        extras = extras or {}
        bot = self._add_bot("post_review", builder)
        cfg = self._bot_cfg["post_review"]
        builder.add(item)

        parts = []
        for text in reviewable_sentences(item.text):
            sub = GraphBuilder()
            sentence = sub.add(Sentence(text=text))
            child = self.review_sentence_semsim(sentence, sub)
            explanation = f"Sentence `{text}` in {_post_link(item)}: {child.explanation}"
            parts.append((self._cr(item.id, child.rating, bot, (child.id,), explanation), sub))

        for ref in item.linked_item_refs:
            linked = extras.get(ref) or builder.nodes.get(ref)
            if linked is None:
                raise ValidationError(f"post {item.id!r} links unresolved item {ref!r}")
            sub = GraphBuilder()
            sub.add(linked)
            if depth + 1 > cfg.max_link_depth:
                explanation = (f"Linked content in {_post_link(item)} was not reviewed: "
                               f"link depth limit ({cfg.max_link_depth}) reached.")
                parts.append((self._cr(item.id, Rating(0.0, 0.0), bot, (), explanation), sub))
                continue
            child = self._review_item(linked, sub, extras, depth + 1)
            explanation = f"Content linked from {_post_link(item)}: {child.explanation}"
            parts.append((self._cr(item.id, child.rating, bot, (child.id,), explanation), sub))

        website = self._resolve_website(item.website_ref, extras, builder)
        if website is not None and website.domain not in cfg.platform_domains:
            sub = GraphBuilder()
            site_cr = self.review_website(website, sub)
            if site_cr.is_based_on:
                rating = Rating(site_cr.rating.value, cfg.precrawl_decay * site_cr.rating.confidence)
                explanation = (f"This {_post_link(item)} seems *{_phrase(rating)}* based only on "
                               f"the reputation of the site it appeared on. {site_cr.explanation}")
                parts.append((self._cr(item.id, rating, bot, (site_cr.id,), explanation), sub))

        if not parts:
            explanation = f"This {_post_link(item)} could not be assessed: no reviewable content found."
            return builder.add(self._cr(item.id, Rating(0.0, 0.0), bot, (), explanation))

        winner = least_credible([p for p, _ in parts], cfg.confidence_floor)
        winner_idx = [p.id for p, _ in parts].index(winner.id)
        builder.merge(parts[winner_idx][1])
        return builder.add(winner)

    def _resolve_website(self, ref, extras, builder):
        if not ref:
            return None
        website = extras.get(ref) or builder.nodes.get(ref)
        if website is None:
            raise ValidationError(f"website reference {ref!r} cannot be resolved")
        if not isinstance(website, WebSite):
            raise ValidationError(f"website reference {ref!r} resolves to {type(website).__name__}")
        return website


# -- explanation helpers ---------------------------------------------------------

def _phrase(rating: Rating) -> str:
    return map_to_label(rating, GRADATION)


def _relation(stance: StanceLabel) -> str:
    return {
        StanceLabel.AGREE: "agrees with sentence",
        StanceLabel.DISAGREE: "disagrees with sentence",
        StanceLabel.DISCUSS: "is similar to and discussed by sentence",
        StanceLabel.UNRELATED: "is similar to an unrelated sentence",
    }[stance]


def _factcheck_link(signal: FactCheck) -> str:
    rec = signal.record
    checker = f"[{rec.fact_checker_name}]({rec.fact_checker_url})" if rec.fact_checker_url else rec.fact_checker_name
    return f"[fact-check]({rec.review_url}) by {checker}"


def _verdict_desc(signal: FactCheck) -> str:
    rec = signal.record
    if signal.rating_source == "numeric":
        return f"normalised numeric ratingValue {rec.rating_value:g} in range [{rec.worst_rating:g}-{rec.best_rating:g}]"
    if signal.rating_source == "textual":
        return f"textual rating '{rec.alternate_name}'"
    return "an unmappable rating"


def _tail(review: CredibilityReview) -> str:
    """A review's explanation with its leading item mention stripped, for nesting."""
    text = review.explanation
    for marker in (" is *", " seems *"):
        idx = text.find(marker)
        if idx >= 0:
            return text[idx + 1:]
    return text or "(explanation omitted)"


def _article_link(item: Article) -> str:
    if item.url and item.title:
        return f"[{item.title}]({item.url})"
    if item.url:
        return f"[{item.url}]({item.url})"
    if item.title:
        return f"`{item.title}`"
    return "`(untitled)`"


def _post_link(item: SocialMediaPost) -> str:
    kind = "tweet" if item.url and ("twitter.com" in item.url or "//x.com" in item.url) else "post"
    if item.url:
        return f"[{kind}]({item.url})"
    return kind

"""credgraph: composable credibility reviews with full provenance.

A network of bots looks up ground credibility signals (fact-checks, website
reputations, crawled sentences), links new sentences to reviewed ones via
semantic similarity and stance, and decomposes articles and social media
posts into reviewable parts. Every result is a graph of credibility reviews
serialized as JSON-LD, each traceable back to the signals it rests on.
"""

from .algebra import (
    BUILTIN_SCHEMES,
    LabelScheme,
    StanceLabel,
    apply_caution,
    combine_linked,
    least_credible,
    map_to_label,
    most_confident,
    polarity,
    revise_similarity,
)
from .bots import BotConfig, ReviewEngine
from .jsonld import parse_item_document, parse_jsonld, serialize_jsonld
from .model import (
    Article,
    BotDescriptor,
    Claim,
    ClaimReviewRecord,
    CredGraphError,
    CredibilityReview,
    FactCheck,
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
from .normalize import claimreview_to_signal, normalize_numeric, normalize_textual
from .stores import SignalStore

__version__ = "0.1.0"

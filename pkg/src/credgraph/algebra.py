"""Pure functions over ratings.

Covers the aggregation operators used by the bots (pick the most confident
review, pick the least credible one), the stance-driven polarity flip and
similarity revision used when transferring a rating between similar
sentences, the label schemes that map a (value, confidence) pair onto
dataset verdict labels, and the caution adjustments that damp weak evidence.
"""

from __future__ import annotations

import dataclasses
import enum
import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .model import CredibilityReview, Rating, ValidationError


class StanceLabel(str, enum.Enum):
    AGREE = "agree"
    DISAGREE = "disagree"
    DISCUSS = "discuss"
    UNRELATED = "unrelated"


# Similarity multipliers per stance: a match that merely discusses or is
# unrelated to the input transfers far less confidence than one that takes a
# position. The revision never raises similarity.
DEFAULT_REVISE_MULTIPLIERS = {
    StanceLabel.AGREE: 1.0,
    StanceLabel.DISAGREE: 1.0,
    StanceLabel.DISCUSS: 0.75,
    StanceLabel.UNRELATED: 0.25,
}

# Reviews whose confidence does not exceed this floor are ignored when
# hunting for the least credible part, so a single noisy low-value signal
# cannot dominate an aggregate.
DEFAULT_CONFIDENCE_FLOOR = 0.5

# Caution-mode damping constants.
DEFAULT_KAPPA_SITE = 0.5
DEFAULT_KAPPA_STANCE = 0.5


def polarity(stance: StanceLabel) -> int:
    """Rating sign transfer: -1 when the input disagrees with the match, else +1."""
    return -1 if stance == StanceLabel.DISAGREE else 1


def revise_similarity(stance: StanceLabel, sim: float, multipliers: Optional[dict] = None) -> float:
    """Discount a similarity score by the predicted stance; never raises it."""
    if not 0.0 <= sim <= 1.0:
        raise ValidationError(f"similarity must be in [0, 1], got {sim!r}")
    table = multipliers or DEFAULT_REVISE_MULTIPLIERS
    m = table[StanceLabel(stance)]
    return sim * m


def combine_linked(
    neighbor: CredibilityReview,
    stance: StanceLabel,
    sim: float,
    multipliers: Optional[dict] = None,
) -> Rating:
    """Transfer a neighbor's rating to the input sentence.

    The value keeps the neighbor's magnitude and flips sign only on
    disagreement; the confidence is the neighbor's confidence scaled by the
    stance-revised similarity, so it can never exceed the neighbor's.
    """
    stance = StanceLabel(stance)
    value = neighbor.rating.value * polarity(stance)
    confidence = neighbor.rating.confidence * revise_similarity(stance, sim, multipliers)
    return Rating(value=value, confidence=confidence)


def most_confident(reviews: Sequence[CredibilityReview]) -> CredibilityReview:
    """Select the review with the highest confidence.

    Ties go to the more extreme rating value, then to the lowest id, so the
    result is independent of input order.
    """
    if not reviews:
        raise ValidationError("no signals: cannot aggregate an empty review list")
    return min(reviews, key=lambda r: (-r.rating.confidence, -abs(r.rating.value), r.id))


def least_credible(
    reviews: Sequence[CredibilityReview],
    confidence_floor: float = DEFAULT_CONFIDENCE_FLOOR,
) -> CredibilityReview:
    """Select the lowest-value review among those confident enough to count.

    Only reviews whose confidence exceeds ``confidence_floor`` participate;
    when none do, falls back to :func:`most_confident`. Ties go to the higher
    confidence, then to the lowest id.
    """
    if not reviews:
        raise ValidationError("no signals: cannot aggregate an empty review list")
    eligible = [r for r in reviews if r.rating.confidence > confidence_floor]
    if not eligible:
        return most_confident(reviews)
    return min(eligible, key=lambda r: (r.rating.value, -r.rating.confidence, r.id))


# --- label schemes ----------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    """A numeric interval with independently open/closed endpoints."""

    lo: float = -math.inf
    hi: float = math.inf
    lo_closed: bool = True
    hi_closed: bool = True

    def contains(self, x: float) -> bool:
        above = x >= self.lo if self.lo_closed else x > self.lo
        below = x <= self.hi if self.hi_closed else x < self.hi
        return above and below


ANY = Interval()


@dataclass(frozen=True)
class LabelRule:
    value: Interval
    confidence: Interval
    label: str

    def matches(self, rating: Rating) -> bool:
        return self.value.contains(rating.value) and self.confidence.contains(rating.confidence)


@dataclass(frozen=True)
class LabelScheme:
    """An ordered, first-match-wins mapping from ratings to verdict labels."""

    name: str
    rules: tuple

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))

    def labels(self) -> list:
        seen = []
        for rule in self.rules:
            if rule.label not in seen:
                seen.append(rule.label)
        return seen


def map_to_label(rating: Rating, scheme: LabelScheme) -> str:
    for rule in scheme.rules:
        if rule.matches(rating):
            return rule.label
    raise ValidationError(f"label scheme {scheme.name!r} is not total: no rule for {rating}")


def _value_rule(label, lo=-math.inf, hi=math.inf, lo_closed=True, hi_closed=True, confidence=ANY):
    return LabelRule(Interval(lo, hi, lo_closed, hi_closed), confidence, label)


# Six-label scheme: five credibility grades gated on confidence > 0.7,
# everything at or below that confidence is "not verifiable".
COINFORM250 = LabelScheme(
    name="coinform250",
    rules=(
        LabelRule(ANY, Interval(hi=0.7, hi_closed=True), "not verifiable"),
        _value_rule("credible", lo=0.5),
        _value_rule("mostly credible", lo=0.25, hi=0.5, hi_closed=False),
        _value_rule("uncertain", lo=-0.25, hi=0.25, hi_closed=False),
        _value_rule("mostly not credible", lo=-0.5, hi=-0.25, hi_closed=False),
        _value_rule("not credible", hi=-0.5, hi_closed=False),
    ),
)

# Three-label scheme thresholded at |value| = 0.75.
CLEF18 = LabelScheme(
    name="clef18",
    rules=(
        _value_rule("TRUE", lo=0.75),
        _value_rule("FALSE", hi=-0.75),
        _value_rule("HALF-TRUE"),
    ),
)

# Binary scheme: negative ratings are fake, everything else real.
BINARY = LabelScheme(
    name="binary",
    rules=(
        _value_rule("fake", hi=0.0, hi_closed=False),
        _value_rule("real"),
    ),
)

# Value-only gradation used to phrase explanations; same value bins as the
# six-label scheme but without the confidence gate.
GRADATION = LabelScheme(
    name="gradation",
    rules=(
        _value_rule("credible", lo=0.5),
        _value_rule("mostly credible", lo=0.25, hi=0.5, hi_closed=False),
        _value_rule("uncertain", lo=-0.25, hi=0.25, hi_closed=False),
        _value_rule("mostly not credible", lo=-0.5, hi=-0.25, hi_closed=False),
        _value_rule("not credible", hi=-0.5, hi_closed=False),
    ),
)

BUILTIN_SCHEMES = {s.name: s for s in (COINFORM250, CLEF18, BINARY, GRADATION)}


def get_scheme(name: str) -> LabelScheme:
    try:
        return BUILTIN_SCHEMES[name]
    except KeyError:
        raise ValidationError(f"unknown label scheme {name!r}") from None


def _interval_from_config(obj) -> Interval:
    if obj is None:
        return ANY
    return Interval(
        lo=float(obj.get("min", -math.inf)),
        hi=float(obj.get("max", math.inf)),
        lo_closed=bool(obj.get("min_inclusive", True)),
        hi_closed=bool(obj.get("max_inclusive", True)),
    )


def load_scheme(path) -> LabelScheme:
    """Load a label scheme from a declarative JSON file.

    Format: ``{"name": ..., "rules": [{"label": ..., "value": {"min":, "max":,
    "min_inclusive":, "max_inclusive":}, "confidence": {...}}, ...]}`` where
    omitted intervals match anything; rules apply in order, first match wins.
    """
    with open(path, "r", encoding="utf-8") as fh:
        cfg = json.load(fh)
    rules = tuple(
        LabelRule(
            value=_interval_from_config(rule.get("value")),
            confidence=_interval_from_config(rule.get("confidence")),
            label=str(rule["label"]),
        )
        for rule in cfg["rules"]
    )
    if not rules:
        raise ValidationError(f"label scheme file {path} declares no rules")
    return LabelScheme(name=str(cfg["name"]), rules=rules)


# --- caution mode -----------------------------------------------------------

ARTICLE_WEBSITE_ONLY = "article-rating-based-only-on-website"
SEMSIM_WEAK_STANCE = "semsim-stance-weak"


@dataclass(frozen=True)
class CautionContext:
    """Describes why a review might deserve a caution adjustment."""

    kind: str
    stance: Optional[StanceLabel] = None


def apply_caution(
    review: CredibilityReview,
    context: CautionContext,
    enabled: bool = True,
    kappa_site: float = DEFAULT_KAPPA_SITE,
    kappa_stance: float = DEFAULT_KAPPA_STANCE,
) -> CredibilityReview:
    """Damp over-confident reviews under the two known weak-evidence conditions.

    Article ratings that rest only on the website's reputation are scaled in
    both value and confidence; similarity-linked ratings whose stance is
    unrelated or discuss lose confidence only. Any other context, or caution
    mode disabled, returns the review unchanged. Adjusted reviews carry a note
    in their explanation naming the adjustment.
    """
    if not enabled:
        return review
    if context.kind == ARTICLE_WEBSITE_ONLY:
        rating = Rating(review.rating.value * kappa_site, review.rating.confidence * kappa_site)
        note = f" *(caution: rating and confidence reduced — based only on website reputation, x{kappa_site:g})*"
    elif context.kind == SEMSIM_WEAK_STANCE and context.stance in (StanceLabel.UNRELATED, StanceLabel.DISCUSS):
        rating = Rating(review.rating.value, review.rating.confidence * kappa_stance)
        note = f" *(caution: confidence reduced — stance was '{context.stance.value}', x{kappa_stance:g})*"
    else:
        return review
    return dataclasses.replace(review, rating=rating, explanation=review.explanation + note, id="")

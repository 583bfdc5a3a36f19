from __future__ import annotations

import json
import random

import pytest

from credgraph.algebra import (
    ARTICLE_WEBSITE_ONLY,
    BINARY,
    CLEF18,
    COINFORM250,
    SEMSIM_WEAK_STANCE,
    CautionContext,
    StanceLabel,
    apply_caution,
    combine_linked,
    least_credible,
    load_scheme,
    map_to_label,
    most_confident,
    polarity,
    revise_similarity,
)
from credgraph.model import CredibilityReview, Rating, ValidationError


def _cr(value, confidence, tag=""):
    return CredibilityReview(item_reviewed=f"urn:item:{tag}", rating=Rating(value, confidence),
                             author="urn:bot:t", explanation=tag, created_at="2026-08-08T00:00:00Z")


def _random_crs(rng, n):
    # confidences/values drawn from a small grid so ties actually occur
    grid_c = [0.0, 0.2, 0.5, 0.7, 0.9, 1.0]
    grid_v = [-1.0, -0.6, -0.2, 0.0, 0.2, 0.6, 1.0]
    return [_cr(rng.choice(grid_v), rng.choice(grid_c), tag=str(i)) for i in range(n)]


def brute_force_most_confident(reviews):
    best = None
    for review in reviews:
        if best is None:
            best = review
            continue
        key = (review.rating.confidence, abs(review.rating.value))
        best_key = (best.rating.confidence, abs(best.rating.value))
        if key > best_key or (key == best_key and review.id < best.id):
            best = review
    return best


def brute_force_least_credible(reviews, floor=0.5):
    eligible = [r for r in reviews if r.rating.confidence > floor]
    if not eligible:
        return brute_force_most_confident(reviews)
    best = None
    for review in eligible:
        if best is None:
            best = review
            continue
        key = (review.rating.value, -review.rating.confidence)
        best_key = (best.rating.value, -best.rating.confidence)
        if key < best_key or (key == best_key and review.id < best.id):
            best = review
    return best


class TestAggregators:
    def test_most_confident_direct(self):
        low, high = _cr(0.1, 0.3, "a"), _cr(0.2, 0.9, "b")
        assert most_confident([low, high]) is high

    def test_most_confident_single(self):
        only = _cr(0.4, 0.2, "x")
        assert most_confident([only]) is only

    def test_most_confident_matches_brute_force(self):
        rng = random.Random(11)
        for _ in range(200):
            reviews = _random_crs(rng, 50)
            assert most_confident(reviews) == brute_force_most_confident(reviews)

    def test_least_credible_direct(self):
        good, bad = _cr(0.8, 0.9, "a"), _cr(-1.0, 0.9, "b")
        assert least_credible([good, bad]) is bad

    def test_least_credible_all_below_floor_falls_back(self):
        reviews = [_cr(-1.0, 0.2, "a"), _cr(0.9, 0.4, "b")]
        assert least_credible(reviews) == most_confident(reviews)

    def test_least_credible_matches_brute_force(self):
        rng = random.Random(13)
        for _ in range(200):
            reviews = _random_crs(rng, 50)
            assert least_credible(reviews) == brute_force_least_credible(reviews)

    def test_permutation_invariance(self):
        rng = random.Random(17)
        reviews = _random_crs(rng, 20)
        shuffled = reviews[:]
        rng.shuffle(shuffled)
        assert most_confident(reviews) == most_confident(shuffled)
        assert least_credible(reviews) == least_credible(shuffled)

    def test_empty_list_rejected(self):
        with pytest.raises(ValidationError, match="no signals"):
            most_confident([])
        with pytest.raises(ValidationError, match="no signals"):
            least_credible([])


class TestPolarityAndRevision:
    def test_polarity(self):
        assert polarity(StanceLabel.DISAGREE) == -1
        assert polarity(StanceLabel.AGREE) == 1
        assert polarity(StanceLabel.DISCUSS) == 1
        assert polarity(StanceLabel.UNRELATED) == 1

    def test_revise_similarity_defaults(self):
        assert revise_similarity(StanceLabel.AGREE, 0.9) == 0.9
        assert revise_similarity(StanceLabel.UNRELATED, 0.8) == pytest.approx(0.2)
        assert revise_similarity(StanceLabel.DISCUSS, 0.0) == 0.0

    def test_revise_similarity_range_checked(self):
        with pytest.raises(ValidationError):
            revise_similarity(StanceLabel.AGREE, 1.2)

    def test_revise_similarity_custom_multipliers(self):
        table = {StanceLabel.AGREE: 1.0, StanceLabel.DISAGREE: 1.0,
                 StanceLabel.DISCUSS: 0.5, StanceLabel.UNRELATED: 0.1}
        assert revise_similarity(StanceLabel.DISCUSS, 0.8, table) == pytest.approx(0.4)


class TestCombineLinked:
    def test_agreeing_with_false_claim(self):
        neighbor = _cr(-1.0, 1.0)
        rating = combine_linked(neighbor, StanceLabel.AGREE, 1.0)
        assert (rating.value, rating.confidence) == (-1.0, 1.0)

    def test_disagreeing_flips_sign(self):
        neighbor = _cr(-1.0, 1.0)
        rating = combine_linked(neighbor, StanceLabel.DISAGREE, 1.0)
        assert (rating.value, rating.confidence) == (1.0, 1.0)

    def test_unrelated_discounts_confidence(self):
        neighbor = _cr(0.6, 0.8)
        rating = combine_linked(neighbor, StanceLabel.UNRELATED, 0.5)
        assert rating.value == 0.6
        assert rating.confidence == pytest.approx(0.8 * 0.5 * 0.25)

    def test_properties_hold(self):
        rng = random.Random(23)
        for _ in range(500):
            neighbor = _cr(rng.uniform(-1, 1), rng.uniform(0, 1))
            stance = rng.choice(list(StanceLabel))
            sim = rng.uniform(0, 1)
            rating = combine_linked(neighbor, stance, sim)
            assert rating.confidence <= neighbor.rating.confidence + 1e-12
            assert abs(rating.value) == pytest.approx(abs(neighbor.rating.value))
            flipped = rating.value == -neighbor.rating.value
            if neighbor.rating.value != 0:
                assert flipped == (stance == StanceLabel.DISAGREE)


class TestLabelSchemes:
    @pytest.mark.parametrize("value,confidence,label", [
        (0.6, 0.9, "credible"),
        (0.5, 0.9, "credible"),
        (0.49, 0.9, "mostly credible"),
        (0.25, 0.9, "mostly credible"),
        (0.24, 0.9, "uncertain"),
        (-0.25, 0.9, "uncertain"),
        (-0.26, 0.9, "mostly not credible"),
        (-0.5, 0.9, "mostly not credible"),
        (-0.51, 0.9, "not credible"),
        (-0.9, 0.5, "not verifiable"),
        (0.9, 0.7, "not verifiable"),
        (0.9, 0.701, "credible"),
    ])
    def test_six_label_scheme(self, value, confidence, label):
        assert map_to_label(Rating(value, confidence), COINFORM250) == label

    @pytest.mark.parametrize("value,label", [
        (0.75, "TRUE"), (1.0, "TRUE"), (0.74, "HALF-TRUE"),
        (0.0, "HALF-TRUE"), (-0.74, "HALF-TRUE"), (-0.75, "FALSE"), (-1.0, "FALSE"),
    ])
    def test_clef18_scheme(self, value, label):
        assert map_to_label(Rating(value, 1.0), CLEF18) == label

    @pytest.mark.parametrize("value,label", [(-0.01, "fake"), (0.0, "real"), (0.8, "real")])
    def test_binary_scheme(self, value, label):
        assert map_to_label(Rating(value, 0.0), BINARY) == label

    def test_schemes_total(self):
        rng = random.Random(29)
        for _ in range(2000):
            rating = Rating(rng.uniform(-1, 1), rng.uniform(0, 1))
            for scheme in (COINFORM250, CLEF18, BINARY):
                assert map_to_label(rating, scheme) in scheme.labels()

    def test_scheme_loadable_from_file(self, tmp_path):
        cfg = {
            "name": "thumbs",
            "rules": [
                {"label": "down", "value": {"max": 0, "max_inclusive": False}},
                {"label": "up"},
            ],
        }
        path = tmp_path / "scheme.json"
        path.write_text(json.dumps(cfg))
        scheme = load_scheme(path)
        assert map_to_label(Rating(-0.5, 0.5), scheme) == "down"
        assert map_to_label(Rating(0.0, 0.5), scheme) == "up"


class TestApplyCaution:
    def test_website_only_article_damped(self):
        review = _cr(-0.8, 0.9)
        adjusted = apply_caution(review, CautionContext(ARTICLE_WEBSITE_ONLY))
        assert adjusted.rating.value == pytest.approx(-0.4)
        assert adjusted.rating.confidence == pytest.approx(0.45)
        assert "caution" in adjusted.explanation

    def test_agreeing_stance_untouched(self):
        review = _cr(-0.8, 0.9)
        assert apply_caution(review, CautionContext(SEMSIM_WEAK_STANCE, StanceLabel.AGREE)) is review

    def test_disabled_is_identity(self):
        review = _cr(-0.8, 0.9)
        ctx = CautionContext(ARTICLE_WEBSITE_ONLY)
        assert apply_caution(review, ctx, enabled=False) is review

    def test_never_raises_confidence_never_flips_sign(self):
        rng = random.Random(31)
        for _ in range(500):
            review = _cr(rng.uniform(-1, 1), rng.uniform(0, 1))
            ctx = rng.choice([
                CautionContext(ARTICLE_WEBSITE_ONLY),
                CautionContext(SEMSIM_WEAK_STANCE, rng.choice(list(StanceLabel))),
            ])
            adjusted = apply_caution(review, ctx)
            assert adjusted.rating.confidence <= review.rating.confidence + 1e-12
            assert adjusted.rating.value * review.rating.value >= 0

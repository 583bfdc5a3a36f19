from __future__ import annotations

import random

import pytest

from credgraph.algebra import GRADATION, map_to_label
from credgraph.model import ClaimReviewRecord, Rating
from credgraph.normalize import (
    UnmappableRating,
    claimreview_to_signal,
    default_rule_table,
    load_rule_table,
    normalize_numeric,
    normalize_textual,
)


class TestNumeric:
    def test_politifact_two_of_five(self):
        rating = normalize_numeric(2, worst=1, best=5)
        assert rating.value == -0.5
        assert rating.confidence == 1.0
        assert map_to_label(rating, GRADATION) == "mostly not credible"

    def test_endpoints_exact(self):
        assert normalize_numeric(1, 1, 5).value == -1.0
        assert normalize_numeric(5, 1, 5).value == 1.0

    def test_midpoint_is_zero(self):
        assert normalize_numeric(3, 1, 5).value == 0.0

    def test_degenerate_range_unmappable(self):
        with pytest.raises(UnmappableRating):
            normalize_numeric(1, 1, 1)

    def test_out_of_range_unmappable(self):
        with pytest.raises(UnmappableRating):
            normalize_numeric(6, 1, 5)

    def test_affine_and_monotone(self):
        rng = random.Random(3)
        for _ in range(300):
            worst = rng.uniform(-10, 10)
            best = worst + rng.uniform(0.5, 10)
            a = rng.uniform(worst, best)
            b = rng.uniform(worst, best)
            ra, rb = normalize_numeric(a, worst, best), normalize_numeric(b, worst, best)
            if a < b:
                assert ra.value < rb.value
            assert -1.0 <= ra.value <= 1.0


class TestTextual:
    def test_false_label(self):
        rating = normalize_textual("false")
        assert (rating.value, rating.confidence) == (-1.0, 1.0)
        assert map_to_label(rating, GRADATION) == "not credible"

    def test_case_insensitive(self):
        assert normalize_textual("FALSE") == normalize_textual("false")
        assert normalize_textual("  Mostly   True ") == normalize_textual("mostly true")

    def test_no_comma_pattern(self):
        rating = normalize_textual("no, the moon is not made of cheese")
        assert (rating.value, rating.confidence) == (-1.0, 0.9)

    def test_unmatched_is_none(self):
        assert normalize_textual("flibber") is None

    def test_exact_wins_over_pattern(self):
        # "wrong" is an exact entry; "wrong about everything" falls to the pattern
        assert normalize_textual("wrong") == Rating(-0.5, 0.8)
        assert normalize_textual("wrong about everything") == Rating(-0.5, 0.8)

    def test_shipped_table_spot_values(self):
        assert normalize_textual("pants on fire") == Rating(-1.0, 1.0)
        assert normalize_textual("mostly false") == Rating(-0.5, 0.8)
        assert normalize_textual("half true") == Rating(0.0, 0.7)
        assert normalize_textual("this is exaggerated") == Rating(0.0, 0.7)
        assert normalize_textual("mostly true") == Rating(0.5, 0.8)
        assert normalize_textual("true") == Rating(1.0, 1.0)

    def test_shipped_table_all_in_range(self):
        table = default_rule_table()  # Rating construction range-checks every entry
        assert table.version >= 1
        assert len(table.labels) >= 40
        assert len(table.patterns) >= 10

    def test_bad_table_rejected(self, tmp_path):
        path = tmp_path / "rules.json"
        path.write_text('{"version": 1, "labels": {"nope": [2.0, 1.0]}, "patterns": []}')
        with pytest.raises(Exception):
            load_rule_table(path)


def _record(**kwargs):
    defaults = dict(claim_text="the claim", review_url="http://check.example/1",
                    fact_checker_name="checker", fact_checker_url="http://check.example")
    defaults.update(kwargs)
    return ClaimReviewRecord(**defaults)


class TestClaimReviewToSignal:
    def test_textual_false(self):
        signal = claimreview_to_signal(_record(alternate_name="false"))
        assert signal.rating == Rating(-1.0, 1.0)
        assert signal.rating_source == "textual"

    def test_numeric_only_endpoint(self):
        signal = claimreview_to_signal(_record(rating_value=5, best_rating=5, worst_rating=1))
        assert signal.rating == Rating(1.0, 1.0)
        assert signal.rating_source == "numeric"

    def test_unmappable_yields_neutral_zero(self):
        signal = claimreview_to_signal(_record(alternate_name="flibber"))
        assert signal.rating == Rating(0.0, 0.0)
        assert signal.rating_source == "none"

    def test_sign_conflict_prefers_textual(self):
        signal = claimreview_to_signal(_record(alternate_name="false",
                                               rating_value=4, best_rating=5, worst_rating=1))
        assert signal.rating == Rating(-1.0, 1.0)
        assert signal.rating_source == "textual"

    def test_same_sign_prefers_numeric(self):
        signal = claimreview_to_signal(_record(alternate_name="false",
                                               rating_value=2, best_rating=5, worst_rating=1))
        assert signal.rating.value == -0.5
        assert signal.rating_source == "numeric"

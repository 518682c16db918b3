"""Sampling, verdicts, extrapolation, promotion, the results table."""

from __future__ import annotations

import random

import pytest

from conftest import GOLDEN
from wnforge.confidence import (
    CriterionSetStats,
    IncompleteSample,
    MissingConfidence,
    NotInSample,
    SampleTooLarge,
    default_sample_size,
    draw_sample,
    extrapolate_confidence,
    method_stats,
    promote,
    record_verdict,
    round_half_up,
    table_report,
)
from wnforge.links import CandidateLink
from wnforge.model import LexKBError, PartOfSpeech, SynsetId, WordForm

NOUN = PartOfSpeech.NOUN


def make_links(n: int, method: str = "mono1") -> list[CandidateLink]:
    return [
        CandidateLink(
            method=method,
            word=WordForm("ca", f"w{i}", NOUN),
            synset=SynsetId("en", NOUN, f"s{i}"),
            pivot_word=WordForm("en", f"e{i}", NOUN),
        )
        for i in range(n)
    ]


def judge(sample, correct_ids):
    for lid in sample.links:
        verdict = "correct" if lid in correct_ids else "incorrect"
        sample = record_verdict(sample, lid, verdict)
    return sample


class TestDefaultSampleSize:
    def test_small_sets_sample_everything(self):
        assert default_sample_size(5) == 5
        assert default_sample_size(30) == 30

    def test_floor_of_thirty(self):
        assert default_sample_size(100) == 30
        assert default_sample_size(1000) == 30

    def test_three_percent_above_the_floor(self):
        assert default_sample_size(2000) == 60
        assert default_sample_size(49069) == 1473


class TestDrawSample:
    def test_exhaustive_sample_is_the_whole_set(self):
        links = make_links(5)
        sample = draw_sample(links, 5, seed=1)
        assert sorted(sample.links) == sorted(l.link_id for l in links)

    def test_same_seed_same_sample(self):
        links = make_links(40)
        assert draw_sample(links, 10, 7).links == draw_sample(links, 10, 7).links

    def test_permutation_invariant(self):
        links = make_links(40)
        shuffled = list(links)
        random.Random(3).shuffle(shuffled)
        assert draw_sample(shuffled, 10, 7).links == draw_sample(links, 10, 7).links

    def test_size_bounds_checked(self):
        links = make_links(4)
        with pytest.raises(SampleTooLarge):
            draw_sample(links, 5, 1)
        with pytest.raises(SampleTooLarge):
            draw_sample(links, 0, 1)
        with pytest.raises(SampleTooLarge):
            draw_sample([], 1, 1)

    def test_mixed_methods_rejected(self):
        links = make_links(2, "mono1") + make_links(2, "poly1")
        with pytest.raises(LexKBError, match="single method"):
            draw_sample(links, 2, 1)

    def test_single_draws_are_uniform(self):
        links = make_links(4)
        counts = {l.link_id: 0 for l in links}
        for seed in range(10000):
            counts[draw_sample(links, 1, seed).links[0]] += 1
        for n in counts.values():
            assert abs(n - 2500) <= 150


class TestVerdicts:
    def test_unsampled_link_rejected(self):
        sample = draw_sample(make_links(4), 2, 1)
        with pytest.raises(NotInSample):
            record_verdict(sample, "mono1:ca:w9:e9:s9", "correct")

    def test_bad_verdict_value_rejected(self):
        sample = draw_sample(make_links(4), 2, 1)
        with pytest.raises(LexKBError):
            record_verdict(sample, sample.links[0], "maybe")

    def test_overwrite_keeps_latest_only(self):
        sample = draw_sample(make_links(4), 1, 1)
        lid = sample.links[0]
        sample = record_verdict(sample, lid, "incorrect")
        sample = record_verdict(sample, lid, "correct")
        assert sample.verdicts == {lid: True}


class TestExtrapolate:
    def test_nine_of_ten_is_ninety(self):
        sample = draw_sample(make_links(10), 10, 1)
        sample = judge(sample, set(sample.links[:9]))
        assert extrapolate_confidence(sample) == 90.0

    def test_zero_of_five_is_zero(self):
        sample = judge(draw_sample(make_links(5), 5, 1), set())
        assert extrapolate_confidence(sample) == 0.0

    def test_incomplete_sample_lists_missing(self):
        sample = draw_sample(make_links(5), 3, 1)
        sample = record_verdict(sample, sample.links[0], "correct")
        with pytest.raises(IncompleteSample) as err:
            extrapolate_confidence(sample)
        assert sorted(err.value.missing) == sorted(sample.links[1:])

    def test_published_mono1_row_rate(self):
        # a 1226-link set sampled at 49 with 47 correct extrapolates to 95.9
        links = make_links(1226)
        sample = draw_sample(links, 49, seed=5)
        sample = judge(sample, set(sample.links[:47]))
        assert extrapolate_confidence(sample) == 95.9

    def test_rounding_is_half_up(self):
        assert round_half_up(54.45) == 54.5
        assert round_half_up(94.04) == 94.0
        assert round_half_up(66.666666) == 66.7
        sample = judge(draw_sample(make_links(3), 3, 1), set())
        sample = record_verdict(sample, sample.links[0], "correct")
        # 1/3 -> 33.333... -> 33.3
        assert extrapolate_confidence(sample) == 33.3


class TestPromote:
    def rows(self, confidences: dict[str, float]) -> list[CriterionSetStats]:
        return [
            CriterionSetStats(m, links=10, synsets=5, words=5, confidence=c)
            for m, c in confidences.items()
        ]

    def test_boundary_is_inclusive(self):
        promoted, rejected = promote(self.rows({"mono1": 85.0, "poly4": 84.9}))
        assert promoted == ["mono1"] and rejected == ["poly4"]

    def test_missing_confidence_fails(self):
        with pytest.raises(MissingConfidence):
            promote([CriterionSetStats("mono1", 10, 5, 5, confidence=None)])

    def test_all_zero_promotes_nothing(self):
        promoted, _ = promote(self.rows({"mono1": 0.0, "poly1": 0.0}))
        assert promoted == []

    def test_monotone_in_threshold(self):
        rng = random.Random(13)
        for _ in range(200):
            confidences = {
                f"m{i}": round(rng.uniform(0, 100), 1) for i in range(9)
            }
            t1, t2 = sorted(rng.uniform(0, 100) for _ in range(2))
            low, _ = promote(self.rows(confidences), t1)
            high, _ = promote(self.rows(confidences), t2)
            assert set(high) <= set(low)


class TestMethodStats:
    def test_distinct_counts(self):
        links = [
            CandidateLink("mono1", WordForm("ca", "a", NOUN),
                          SynsetId("en", NOUN, "s1")),
            CandidateLink("mono1", WordForm("ca", "a", NOUN),
                          SynsetId("en", NOUN, "s2")),
        ]
        rows = {r.method: r for r in method_stats(links, {})}
        assert (rows["mono1"].links, rows["mono1"].synsets,
                rows["mono1"].words) == (2, 2, 1)

    def test_every_report_method_present(self):
        rows = method_stats([], {})
        assert [r.method for r in rows] == [
            "mono1", "mono2", "mono3", "mono4",
            "poly1", "poly2", "poly3", "poly4", "variant",
        ]

    def test_counts_match_brute_force_on_random_link_stores(self):
        rng = random.Random(19)
        methods = ["mono1", "poly3", "variant"]
        for _ in range(50):
            links = [
                CandidateLink(
                    rng.choice(methods),
                    WordForm("ca", f"w{rng.randint(0, 6)}", NOUN),
                    SynsetId("en", NOUN, f"s{rng.randint(0, 6)}"),
                )
                for _ in range(rng.randint(0, 25))
            ]
            links = list(set(links))
            rows = {r.method: r for r in method_stats(links, {})}
            for m in methods:
                mine = [l for l in links if l.method == m]
                assert rows[m].links == len(mine)
                assert rows[m].synsets == len({l.synset for l in mine})
                assert rows[m].words == len({l.word for l in mine})


class TestTableReport:
    def paper_rows(self) -> list[CriterionSetStats]:
        data = [
            ("mono1", 1226, 1212, 1221, 95.9),
            ("mono2", 419, 337, 258, 97.6),
            ("mono3", 448, 208, 396, 93.3),
            ("mono4", 3012, 1532, 2178, 94.0),
            ("poly1", 2298, 2244, 864, 90.4),
            ("poly2", 568, 519, 158, 77.9),
            ("poly3", 1125, 477, 357, 71.7),
            ("poly4", 37714, 9151, 4266, 54.5),
            ("variant", 2259, 1517, 1516, 96.0),
        ]
        return [CriterionSetStats(*row) for row in data]

    def test_tsv_matches_golden(self):
        golden = (GOLDEN / "table1.tsv").read_text(encoding="utf-8")
        assert table_report(self.paper_rows()) == golden

    def test_rows_sort_into_canonical_order(self):
        rows = list(reversed(self.paper_rows()))
        report = table_report(rows)
        assert report.splitlines()[1].startswith("mono1\t")

    def test_missing_confidence_renders_as_dash(self):
        report = table_report(
            [CriterionSetStats("mono1", 1, 1, 1, confidence=None)]
        )
        assert report.splitlines()[1] == "mono1\t1\t1\t1\t-"

    def test_markdown_shape(self):
        report = table_report(self.paper_rows(), fmt="markdown")
        lines = report.splitlines()
        assert lines[0].startswith("| Criteria")
        assert set(lines[1]) <= {"|", "-"}
        assert len(lines) == 11

    def test_unknown_format_rejected(self):
        with pytest.raises(LexKBError):
            table_report(self.paper_rows(), fmt="csv")

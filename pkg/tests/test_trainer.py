import math
import random
from fractions import Fraction

import pytest
from helpers import gender_lexicon, member

from sdprofiler.errors import (
    InvalidAssignment,
    ProfilerError,
    TooFewClasses,
    TrainTestOverlap,
    UnknownValueCode,
)
from sdprofiler.lexicon import GRAPHIC, LINGUISTIC, validate_lexicon
from sdprofiler.rational import format_decimal
from sdprofiler.scorer import UNDETERMINED
from sdprofiler.taxonomy import AGE, GENDER, SPHERE
from sdprofiler.trainer import (
    Candidate,
    ClassFrequencyTable,
    TrainerConfig,
    assemble_lexicon,
    extract_candidates,
    holdout_validate,
    log_odds,
    train,
    weigh_candidates,
)

LOOSE = TrainerConfig(min_member_support=1, top_k=10)


def small_corpora():
    return {
        "f1": member("f1", "cats purr", "cats sleep"),
        "f2": member("f2", "cats purr :)"),
        "m1": member("m1", "dogs bark"),
        "m2": member("m2", "dogs bark :)"),
    }


FEMALE2_MALE2 = {"f1": "female", "f2": "female", "m1": "male", "m2": "male"}


class TestLogOdds:
    def test_nine_of_ten_versus_one_of_ten_is_ln_five(self):
        """((9+1)/(10+2)) / ((1+1)/(10+2)) = 5."""
        assert abs(log_odds(9, 10, 1, 10, 1.0) - math.log(5)) <= 1e-12

    def test_label_swap_antisymmetry_is_exact(self):
        """Swapping the class with its complement negates the weight with
        no floating-point slack at all."""
        rng = random.Random(505)
        for _ in range(200):
            n_a = rng.randint(1, 40)
            n_b = rng.randint(1, 40)
            s_a = rng.randint(0, n_a)
            s_b = rng.randint(0, n_b)
            k = rng.choice([0.5, 1.0, 2.0])
            assert log_odds(s_a, n_a, s_b, n_b, k) == -log_odds(s_b, n_b, s_a, n_a, k)

    def test_balanced_support_weighs_zero(self):
        assert log_odds(3, 10, 3, 10, 1.0) == 0.0


class TestExtractCandidates:
    def test_member_support_and_occurrences(self):
        table = extract_candidates(small_corpora(), FEMALE2_MALE2, GENDER, LOOSE)
        assert table.class_members == {"female": 2, "male": 2}
        assert table.support[Candidate(LINGUISTIC, "cats")] == {"female": 2}
        assert table.support[Candidate(LINGUISTIC, "dogs bark")] == {"male": 2}
        assert table.support[Candidate(GRAPHIC, ":)")] == {"female": 1, "male": 1}
        assert table.occurrences[Candidate(LINGUISTIC, "cats")] == 3

    def test_sliding_windows_overlap(self):
        corpora = {"a": member("a", "go go go"), "b": member("b", "stop")}
        table = extract_candidates(corpora, {"a": "female", "b": "male"}, GENDER, LOOSE)
        assert table.occurrences[Candidate(LINGUISTIC, "go")] == 3
        assert table.occurrences[Candidate(LINGUISTIC, "go go")] == 2

    def test_phrase_length_cap_respected(self):
        corpora = {"a": member("a", "one two three"), "b": member("b", "x")}
        table = extract_candidates(
            corpora,
            {"a": "female", "b": "male"},
            GENDER,
            TrainerConfig(max_phrase_len=1, min_member_support=1),
        )
        assert Candidate(LINGUISTIC, "one two") not in table.support

    def test_labeled_member_without_posts_skipped(self):
        corpora = small_corpora()
        classes = dict(FEMALE2_MALE2, ghost="female")
        table = extract_candidates(corpora, classes, GENDER, LOOSE)
        assert table.class_members == {"female": 2, "male": 2}

    def test_single_class_rejected(self):
        corpora = {"f1": member("f1", "hi"), "f2": member("f2", "ho")}
        with pytest.raises(TooFewClasses):
            extract_candidates(corpora, {"f1": "female", "f2": "female"}, GENDER, LOOSE)

    def test_unknown_value_rejected(self):
        with pytest.raises(UnknownValueCode):
            extract_candidates(small_corpora(), {"f1": "robot"}, GENDER, LOOSE)


class TestWeighCandidates:
    def test_hand_computed_weights(self):
        table = extract_candidates(small_corpora(), FEMALE2_MALE2, GENDER, LOOSE)
        weighted = dict(weigh_candidates(table, LOOSE))
        female = {cand: w for cand, w in weighted["female"]}
        # support 2/2 female vs 0/2 male: log(3/4) - log(1/4) = log 3
        assert abs(female[Candidate(LINGUISTIC, "cats")] - math.log(3)) <= 1e-12
        # balanced ':)' weighs 0 and is floored out
        assert Candidate(GRAPHIC, ":)") not in female

    def test_min_member_support_filters(self):
        table = extract_candidates(small_corpora(), FEMALE2_MALE2, GENDER, LOOSE)
        strict = weigh_candidates(table, TrainerConfig(min_member_support=2, top_k=10))
        kept = {cand.text for cand, _ in strict["female"]}
        assert "cats" in kept  # both female members use it
        assert "sleep" not in kept  # only f1 does

    def test_top_k_truncates(self):
        table = extract_candidates(small_corpora(), FEMALE2_MALE2, GENDER, LOOSE)
        one = weigh_candidates(table, TrainerConfig(min_member_support=1, top_k=1))
        assert len(one["female"]) == 1 and len(one["male"]) == 1

    def test_tie_break_order_is_kind_then_text(self):
        table = ClassFrequencyTable(
            kind=GENDER,
            class_members={"female": 2, "male": 2},
            support={
                Candidate(LINGUISTIC, "bb"): {"female": 2},
                Candidate(LINGUISTIC, "aa"): {"female": 2},
                Candidate(GRAPHIC, ":)"): {"female": 2},
            },
            occurrences={},
        )
        weighted = weigh_candidates(table, LOOSE)
        assert [cand for cand, _ in weighted["female"]] == [
            Candidate(GRAPHIC, ":)"),
            Candidate(LINGUISTIC, "aa"),
            Candidate(LINGUISTIC, "bb"),
        ]

    def test_deterministic(self):
        table = extract_candidates(small_corpora(), FEMALE2_MALE2, GENDER, LOOSE)
        assert weigh_candidates(table, LOOSE) == weigh_candidates(table, LOOSE)


class TestAssembleLexicon:
    def test_produces_valid_lexicon_with_quantized_weights(self):
        weighted = {
            "female": ((Candidate(LINGUISTIC, "cats"), math.log(5)),),
            "male": ((Candidate(LINGUISTIC, "dogs"), 0.5),),
        }
        lex = assemble_lexicon(weighted, GENDER, version="t-1")
        assert validate_lexicon(lex) == []
        (io,) = [io for io in lex.ios if io.value_code == "female"]
        weight = io.weighted_markers[0][1]
        assert weight == Fraction(1609437912, 10**9)
        assert format_decimal(weight, 9) == "1.609437912"

    def test_declares_full_kind_tables(self):
        weighted = {
            "female": ((Candidate(LINGUISTIC, "cats"), 1.0),),
            "male": ((Candidate(LINGUISTIC, "dogs"), 1.0),),
        }
        lex = assemble_lexicon(weighted, GENDER)
        assert len(lex.indicators) == 12
        assert len(lex.values) == 2
        assert {io.id for io in lex.ios} == {"female:Gender-E", "male:Gender-E"}

    def test_sphere_classes_route_to_paired_indicators(self):
        weighted = {
            "sphere-c": ((Candidate(LINGUISTIC, "acid"), 1.0),),
            "sphere-g": ((Candidate(LINGUISTIC, "verdict"), 1.0),),
        }
        lex = assemble_lexicon(weighted, SPHERE)
        assert {io.id for io in lex.ios} == {"sphere-c:Sphere-C", "sphere-g:Sphere-G"}

    def test_shared_candidate_becomes_one_marker(self):
        weighted = {
            "female": ((Candidate(LINGUISTIC, "hello"), 1.0),),
            "male": ((Candidate(LINGUISTIC, "hello"), 0.5),),
        }
        lex = assemble_lexicon(weighted, GENDER)
        assert [m.id for m in lex.markers] == ["lin:hello"]
        assert len(lex.ios) == 2

    def test_indicator_override(self):
        weighted = {
            "female": ((Candidate(LINGUISTIC, "cats"), 1.0),),
            "male": ((Candidate(LINGUISTIC, "dogs"), 1.0),),
        }
        lex = assemble_lexicon(
            weighted, GENDER, indicator_overrides={"female": "Gender-A"}
        )
        assert {io.id for io in lex.ios} == {"female:Gender-A", "male:Gender-E"}

    def test_override_must_stay_within_kind(self):
        weighted = {"female": ((Candidate(LINGUISTIC, "cats"), 1.0),)}
        with pytest.raises(InvalidAssignment):
            assemble_lexicon(weighted, GENDER, indicator_overrides={"female": "Age-B"})

    def test_non_canonical_candidate_dropped(self):
        weighted = {
            "female": ((Candidate(LINGUISTIC, "Hello"), 1.0),),
            "male": ((Candidate(LINGUISTIC, "ok"), 1.0),),
        }
        lex = assemble_lexicon(weighted, GENDER)
        assert {io.value_code for io in lex.ios} == {"male"}

    def test_merge_keeps_other_kinds_and_prunes_strays(self):
        base = gender_lexicon({"she": 1, "stray": 1}, {"he": 1})
        weighted = {
            "adolescent": ((Candidate(LINGUISTIC, "lol"), 1.0),),
            "adult": ((Candidate(LINGUISTIC, "mortgage"), 1.0),),
        }
        lex = assemble_lexicon(weighted, AGE, base=base)
        assert validate_lexicon(lex) == []
        io_ids = {io.id for io in lex.ios}
        assert io_ids == {
            "female:Gender-E",
            "male:Gender-E",
            "adolescent:Age-B",
            "adult:Age-B",
        }
        marker_ids = {m.id for m in lex.markers}
        assert {"lin:she", "lin:stray", "lin:he", "lin:lol", "lin:mortgage"} == marker_ids

    def test_merge_replaces_same_kind(self):
        base = gender_lexicon({"she": 1}, {"he": 1})
        weighted = {
            "female": ((Candidate(LINGUISTIC, "hers"), 1.0),),
            "male": ((Candidate(LINGUISTIC, "his"), 1.0),),
        }
        lex = assemble_lexicon(weighted, GENDER, base=base)
        marker_ids = {m.id for m in lex.markers}
        assert marker_ids == {"lin:hers", "lin:his"}  # she/he gone with their IOs


class TestTrainerConfig:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"smoothing": 0},
            {"top_k": 0},
            {"max_phrase_len": 0},
            {"max_phrase_len": 9},
            {"min_member_support": 0},
            {"weight_floor": 0},
            {"graphic_candidates": ("", ":)")},
        ],
    )
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ValueError):
            TrainerConfig(**kwargs)


class TestTrain:
    def test_end_to_end_separates_planted_classes(self):
        rng = random.Random(606)
        vocab = {"female": [f"rose{i}" for i in range(8)], "male": [f"iron{i}" for i in range(8)]}
        corpora, labels = {}, {}
        for code, words in vocab.items():
            for i in range(8):
                mid = f"{code}{i}"
                texts = [
                    " ".join(
                        rng.choice(words) if rng.random() < 0.6 else f"noise{rng.randrange(30)}"
                        for _ in range(10)
                    )
                    for _ in range(4)
                ]
                corpora[mid] = member(mid, *texts)
                labels[mid] = {GENDER: code}
        lex = train(corpora, labels, GENDER, TrainerConfig(top_k=20))
        assert validate_lexicon(lex) == []
        report = holdout_validate(lex, corpora, {m: labels[m][GENDER] for m in labels}, GENDER, Fraction(1, 20))
        assert report.accuracy == 1
        assert report.undetermined_rate == 0


class TestHoldoutValidate:
    def lexicon(self):
        return gender_lexicon({"she": 1}, {"he": 1})

    def corpora(self):
        return {
            "f1": member("f1", "she she"),
            "f2": member("f2", "he"),
            "u1": member("u1", "nothing here"),
            "m1": member("m1", "he he"),
        }

    def classes(self):
        return {"f1": "female", "f2": "female", "u1": "female", "m1": "male"}

    def test_accuracy_over_decided_and_undetermined_over_all(self):
        report = holdout_validate(
            self.lexicon(), self.corpora(), self.classes(), GENDER, Fraction(0)
        )
        assert (report.total, report.decided, report.correct) == (4, 3, 2)
        assert report.accuracy == Fraction(2, 3)
        assert report.undetermined_rate == Fraction(1, 4)
        by_member = {o.member_id: o for o in report.outcomes}
        assert by_member["f2"].decided == "male"
        assert by_member["u1"].decided == UNDETERMINED

    def test_overlap_with_training_rejected(self):
        with pytest.raises(TrainTestOverlap) as exc_info:
            holdout_validate(
                self.lexicon(),
                self.corpora(),
                self.classes(),
                GENDER,
                Fraction(0),
                train_member_ids={"f1", "other"},
            )
        assert exc_info.value.member_ids == ["f1"]

    def test_no_members_is_an_error(self):
        with pytest.raises(ProfilerError, match="no holdout members"):
            holdout_validate(self.lexicon(), {}, {}, GENDER, Fraction(0))

    def test_uncovered_kind_is_an_error(self):
        with pytest.raises(ProfilerError, match="no indicative characteristics"):
            holdout_validate(
                self.lexicon(), self.corpora(), {"f1": "adult"}, AGE, Fraction(0)
            )

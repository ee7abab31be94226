"""Congruence scoring: from marker counts to per-kind value decisions.

All scores are exact rationals; nothing is rounded until rendering.  The
pipeline per member and characteristic kind:

1. each indicative characteristic gets a congruence in [0, 1]:
   the weighted sum of its matched markers' counts, divided by the number
   of its markers times its total marker weight;
2. each (indicator, value) pair scores the mean congruence of its
   indicative characteristics;
3. each value scores the mean over its (indicator, value) pairs;
4. the top value wins if it is positive, strictly ahead, and its lead
   over the runner-up reaches the decision threshold; otherwise the kind
   is reported as undetermined.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .corpus import UserCorpus
from .lexicon import IndicativeCharacteristic, Lexicon
from .matcher import count_markers
from .rational import SCORE_DIGITS, format_decimal
from .taxonomy import EDUCATION, KIND_ORDER, CharacteristicKind

UNDETERMINED = "undetermined"

ZERO = Fraction(0)


def congruence(
    io: IndicativeCharacteristic, counts: Mapping[str, int], *, binary: bool = False
) -> Fraction:
    """Congruence of one indicative characteristic against observed counts.

    numerator:   sum of weight * count over the IO's markers that occurred;
    denominator: (number of the IO's markers) * (sum of all its weights).

    binary=True clamps each count to at most 1, so repetition stops adding
    evidence and the result stays within [0, 1].
    """
    if not io.weighted_markers:
        return ZERO
    numerator = ZERO
    total_weight = ZERO
    for marker_id, weight in io.weighted_markers:
        total_weight += weight
        n = counts.get(marker_id, 0)
        if n > 0:
            numerator += weight * (1 if binary else n)
    return numerator / (len(io.weighted_markers) * total_weight)


def indicator_scores(
    lexicon: Lexicon, counts: Mapping[str, int], *, binary: bool = False
) -> dict[tuple[str, str], Fraction]:
    """Mean congruence per (indicator code, value code) pair.

    Keys appear in canonical order: kind, then indicator code, then value
    code.  Pairs without indicative characteristics are absent.
    """
    grouped: dict[tuple[str, str], list[Fraction]] = {}
    for io in lexicon.ios:
        key = (io.indicator_code, io.value_code)
        grouped.setdefault(key, []).append(congruence(io, counts, binary=binary))

    def sort_key(key):
        indicator_code, value_code = key
        kind = lexicon.indicators_by_code[indicator_code].kind
        return (KIND_ORDER[kind], indicator_code, value_code)

    return {
        key: sum(grouped[key], ZERO) / len(grouped[key])
        for key in sorted(grouped, key=sort_key)
    }


def value_scores(
    lexicon: Lexicon,
    counts: Mapping[str, int],
    kind: CharacteristicKind,
    *,
    binary: bool = False,
) -> dict[str, Fraction]:
    """Mean of a value's indicator scores, for every scored value of a kind.

    Values of the kind with no indicative characteristics are absent.
    """
    per_pair = indicator_scores(lexicon, counts, binary=binary)
    grouped: dict[str, list[Fraction]] = {}
    for (indicator_code, value_code), score in per_pair.items():
        if lexicon.indicators_by_code[indicator_code].kind == kind:
            grouped.setdefault(value_code, []).append(score)
    return {
        code: sum(grouped[code], ZERO) / len(grouped[code]) for code in sorted(grouped)
    }


def decide(scores: Mapping[str, Fraction], threshold: Fraction) -> tuple[str, Fraction]:
    """Pick the winning value code, or UNDETERMINED.

    The winner must score above zero, be strictly ahead (exact ties lose),
    and lead the runner-up by at least the threshold.  With fewer than two
    scored values the margin is zero, so only a zero threshold can decide.
    """
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    if not ranked:
        return UNDETERMINED, ZERO
    top_code, top = ranked[0]
    if len(ranked) < 2:
        margin = ZERO
    else:
        second = ranked[1][1]
        if top == second:
            return UNDETERMINED, ZERO
        margin = top - second
    if top > 0 and margin >= threshold:
        return top_code, margin
    return UNDETERMINED, margin


@dataclass(frozen=True)
class KindScore:
    """One kind's scored values and the resulting decision."""

    kind: CharacteristicKind
    scores: tuple[tuple[str, Fraction], ...]
    decided: str
    margin: Fraction


@dataclass(frozen=True)
class MemberProfile:
    member_id: str
    kinds: tuple[KindScore, ...]
    declared_education: str | None = None


def kind_scores(
    lexicon: Lexicon,
    counts: Mapping[str, int],
    threshold: Fraction,
    *,
    binary: bool = False,
) -> tuple[KindScore, ...]:
    """Score and decide every kind the lexicon actually covers."""
    covered = sorted(
        {lexicon.values_by_code[io.value_code].kind for io in lexicon.ios},
        key=lambda k: KIND_ORDER[k],
    )
    out = []
    for kind in covered:
        scores = value_scores(lexicon, counts, kind, binary=binary)
        decided, margin = decide(scores, threshold)
        out.append(
            KindScore(
                kind=kind,
                scores=tuple(sorted(scores.items())),
                decided=decided,
                margin=margin,
            )
        )
    return tuple(out)


def score_member(
    lexicon: Lexicon,
    corpus: UserCorpus,
    threshold: Fraction,
    *,
    binary: bool = False,
) -> MemberProfile:
    """Full pipeline for one member: count, score, decide.

    Education is never inferred; whatever the member declared is passed
    through unchanged.
    """
    counts = count_markers(lexicon, corpus)
    return MemberProfile(
        member_id=corpus.member_id,
        kinds=kind_scores(lexicon, counts.counts, threshold, binary=binary),
        declared_education=corpus.declared.get(EDUCATION),
    )


def profile_to_dict(profile: MemberProfile) -> dict:
    """JSON-ready rendering; rationals become 6-digit fixed-point strings."""
    doc: dict = {"member_id": profile.member_id}
    for ks in profile.kinds:
        doc[ks.kind.value] = {
            "decided": ks.decided,
            "margin": format_decimal(ks.margin, SCORE_DIGITS),
            "scores": {
                code: format_decimal(score, SCORE_DIGITS) for code, score in ks.scores
            },
        }
    doc["education"] = profile.declared_education
    return doc

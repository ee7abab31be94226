"""Lexicon training from labeled member corpora.

The pipeline mirrors how the scoring side consumes a lexicon:

1. extract_candidates: collect token n-grams (and a fixed emoticon list)
   with per-class member support — in how many members of each class the
   candidate occurs at least once;
2. weigh_candidates: score each candidate per class by smoothed log-odds
   of member support, keep the strongest;
3. assemble_lexicon: turn each class's surviving candidates into markers
   under one indicative characteristic, optionally merged over a base
   lexicon (other kinds keep their entries, this kind is replaced).

Weights leave here as exact 9-digit decimal Fractions, so an assembled
lexicon serializes and reloads without drift.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, NamedTuple

from .corpus import UserCorpus
from .errors import (
    InvalidAssignment,
    ProfilerError,
    TooFewClasses,
    TrainTestOverlap,
    UnknownValueCode,
    ValidationError,
)
from .lexicon import (
    GRAPHIC,
    LINGUISTIC,
    CharacteristicValue,
    IndicativeCharacteristic,
    IndicatorCode,
    Lexicon,
    Marker,
    validate_lexicon,
)
from .matcher import tokenize
from .rational import quantize_weight
from .scorer import UNDETERMINED, score_member
from .taxonomy import (
    DEFAULT_TRAINING_INDICATOR,
    INDICATOR_TABLES,
    SPHERE,
    VALUE_TABLES,
    CharacteristicKind,
    is_known_indicator,
    is_known_value,
    sphere_indicator_for_value,
)

logger = logging.getLogger(__name__)

WEIGHT_FLOOR = 0.01

DEFAULT_GRAPHIC_CANDIDATES = (
    ":)",
    ":(",
    ":D",
    ":P",
    ";)",
    ":-)",
    ":-(",
    ":'(",
    "=)",
    "=(",
    "<3",
    "^^",
)


class Candidate(NamedTuple):
    kind: str  # LINGUISTIC or GRAPHIC
    text: str


@dataclass(frozen=True)
class TrainerConfig:
    smoothing: float = 1.0
    top_k: int = 50
    max_phrase_len: int = 2
    min_member_support: int = 2
    weight_floor: float = WEIGHT_FLOOR
    graphic_candidates: tuple[str, ...] = DEFAULT_GRAPHIC_CANDIDATES
    indicator_overrides: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.smoothing <= 0:
            raise ValueError(f"smoothing must be > 0, got {self.smoothing}")
        if self.top_k < 1:
            raise ValueError(f"top_k must be >= 1, got {self.top_k}")
        if not 1 <= self.max_phrase_len <= 8:
            raise ValueError(
                f"max_phrase_len must be in 1..8, got {self.max_phrase_len}"
            )
        if self.min_member_support < 1:
            raise ValueError(
                f"min_member_support must be >= 1, got {self.min_member_support}"
            )
        if self.weight_floor <= 0:
            raise ValueError(f"weight_floor must be > 0, got {self.weight_floor}")
        for pat in self.graphic_candidates:
            if not pat:
                raise ValueError("graphic candidates must be non-empty strings")


@dataclass
class ClassFrequencyTable:
    """Member-level candidate support per class value."""

    kind: CharacteristicKind
    class_members: dict[str, int]
    support: dict[Candidate, dict[str, int]]
    occurrences: dict[Candidate, int]

    def total_members(self) -> int:
        return sum(self.class_members.values())


def _count_nonoverlapping(text: str, pattern: str) -> int:
    count = 0
    pos = text.find(pattern)
    while pos != -1:
        count += 1
        pos = text.find(pattern, pos + len(pattern))
    return count


def extract_candidates(
    corpora: Mapping[str, UserCorpus],
    classes: Mapping[str, str],
    kind: CharacteristicKind,
    config: TrainerConfig | None = None,
) -> ClassFrequencyTable:
    """Tabulate candidate support over the labeled members of one kind.

    classes maps member_id to the member's value code.  Labeled members
    without posts are skipped (they carry no textual evidence), as are
    corpus members without a label.  Needs at least two distinct classes.
    """
    config = config or TrainerConfig()
    class_members: dict[str, int] = {}
    support: dict[Candidate, dict[str, int]] = {}
    occurrences: dict[Candidate, int] = {}

    unlabeled = sorted(set(corpora) - set(classes))
    if unlabeled:
        logger.warning(
            "%d corpus member(s) have no %s label and are ignored",
            len(unlabeled),
            kind.value,
        )

    skipped_empty = 0
    for member_id in sorted(classes):
        value_code = classes[member_id]
        if not is_known_value(kind, value_code):
            raise UnknownValueCode(kind.value, value_code)
        corpus = corpora.get(member_id)
        if corpus is None or not corpus.posts:
            skipped_empty += 1
            continue
        class_members[value_code] = class_members.get(value_code, 0) + 1

        member_cands: set[Candidate] = set()
        for post in corpus.posts:
            toks = [t.folded for t in tokenize(post.text).tokens]
            for n in range(1, config.max_phrase_len + 1):
                for i in range(len(toks) - n + 1):
                    cand = Candidate(LINGUISTIC, " ".join(toks[i : i + n]))
                    occurrences[cand] = occurrences.get(cand, 0) + 1
                    member_cands.add(cand)
            for pattern in config.graphic_candidates:
                hits = _count_nonoverlapping(post.text, pattern)
                if hits:
                    cand = Candidate(GRAPHIC, pattern)
                    occurrences[cand] = occurrences.get(cand, 0) + hits
                    member_cands.add(cand)

        for cand in sorted(member_cands):
            per_class = support.setdefault(cand, {})
            per_class[value_code] = per_class.get(value_code, 0) + 1

    if skipped_empty:
        logger.warning("%d labeled member(s) have no posts and are ignored", skipped_empty)
    if len(class_members) < 2:
        raise TooFewClasses(
            f"training for {kind.value} needs at least two classes with posts, "
            f"got {sorted(class_members)}"
        )
    return ClassFrequencyTable(
        kind=kind,
        class_members=class_members,
        support=support,
        occurrences=occurrences,
    )


def log_odds(
    in_class: int, class_size: int, out_class: int, complement_size: int, smoothing: float
) -> float:
    """Smoothed log-odds of member support: how much more typical a
    candidate is inside the class than in the pooled complement.

    Computed as log(a) - log(b), not log(a/b), so swapping the class with
    its complement negates the result exactly.
    """
    a = (in_class + smoothing) / (class_size + 2 * smoothing)
    b = (out_class + smoothing) / (complement_size + 2 * smoothing)
    return math.log(a) - math.log(b)


def weigh_candidates(
    table: ClassFrequencyTable, config: TrainerConfig | None = None
) -> dict[str, tuple[tuple[Candidate, float], ...]]:
    """Per class: the strongest candidates by log-odds, descending.

    A candidate qualifies for a class when its member support there reaches
    min_member_support and its log-odds reaches weight_floor; at most top_k
    survive.  Ordering is (weight desc, kind, text), fully deterministic.
    """
    config = config or TrainerConfig()
    total = table.total_members()
    out: dict[str, tuple[tuple[Candidate, float], ...]] = {}
    for value_code in sorted(table.class_members):
        n_in = table.class_members[value_code]
        n_out = total - n_in
        rows = []
        for cand, per_class in table.support.items():
            s_in = per_class.get(value_code, 0)
            if s_in < config.min_member_support:
                continue
            s_out = sum(per_class.values()) - s_in
            w = log_odds(s_in, n_in, s_out, n_out, config.smoothing)
            if w >= config.weight_floor:
                rows.append((cand, w))
        rows.sort(key=lambda cw: (-cw[1], cw[0].kind, cw[0].text))
        out[value_code] = tuple(rows[: config.top_k])
    return out


def _canonical_pattern(text: str) -> str:
    return " ".join(t.folded for t in tokenize(text).tokens)


def _marker_id(cand: Candidate) -> str:
    prefix = "gfx" if cand.kind == GRAPHIC else "lin"
    return f"{prefix}:{cand.text}"


def _indicator_for(kind: CharacteristicKind, value_code: str, overrides) -> str:
    if value_code in overrides:
        return overrides[value_code]
    if kind == SPHERE:
        return sphere_indicator_for_value(value_code)
    return DEFAULT_TRAINING_INDICATOR[kind]


def assemble_lexicon(
    weighted: Mapping[str, tuple],
    kind: CharacteristicKind,
    *,
    base: Lexicon | None = None,
    version: str | None = None,
    indicator_overrides: Mapping[str, str] | None = None,
) -> Lexicon:
    """Build a valid lexicon out of weighted candidates for one kind.

    Every class becomes one indicative characteristic under the kind's
    training indicator (gender and age have fixed homes; sphere classes go
    to their paired indicator; overrides win but must stay within the
    kind).  The kind's full canonical value and indicator tables are
    declared so merges never leave a partially declared kind behind.

    With a base lexicon, entries of other kinds survive untouched, this
    kind's are replaced, identical marker ids keep the base's definition,
    and markers nothing references any more are dropped.
    """
    overrides = dict(indicator_overrides or {})
    version = version or f"trained-{kind.value}-1"

    new_markers: dict[str, Marker] = {}
    new_ios: list[IndicativeCharacteristic] = []
    for value_code in sorted(weighted):
        rows = weighted[value_code]
        indicator_code = _indicator_for(kind, value_code, overrides)
        weighted_markers = []
        for cand, w in rows:
            if not is_known_indicator(kind, indicator_code):
                raise InvalidAssignment(
                    cand.text, indicator_code, f"not a {kind.value} indicator"
                )
            if cand.kind == LINGUISTIC and _canonical_pattern(cand.text) != cand.text:
                logger.warning(
                    "dropping candidate %r: not a canonical token sequence", cand.text
                )
                continue
            weight = quantize_weight(w) if isinstance(w, float) else Fraction(w)
            if weight <= 0:
                continue
            marker_id = _marker_id(cand)
            new_markers.setdefault(marker_id, Marker(id=marker_id, kind=cand.kind, pattern=cand.text))
            weighted_markers.append((marker_id, weight))
        if not weighted_markers:
            logger.warning("class %r kept no markers; it will not be scored", value_code)
            continue
        new_ios.append(
            IndicativeCharacteristic(
                id=f"{value_code}:{indicator_code}",
                indicator_code=indicator_code,
                value_code=value_code,
                weighted_markers=tuple(weighted_markers),
            )
        )

    values = [
        CharacteristicValue(kind=kind, code=code, label=label)
        for code, label in VALUE_TABLES[kind].items()
    ]
    indicators = [
        IndicatorCode(kind=kind, code=code, label=label)
        for code, label in INDICATOR_TABLES[kind].items()
    ]
    ios = list(new_ios)
    markers = dict(new_markers)

    if base is not None:
        values.extend(v for v in base.values if v.kind != kind)
        indicators.extend(i for i in base.indicators if i.kind != kind)
        kept_ios = [
            io for io in base.ios if base.values_by_code[io.value_code].kind != kind
        ]
        ios.extend(kept_ios)
        for m in base.markers:
            markers[m.id] = m  # base definition wins on id conflicts

    referenced = {mid for io in ios for mid, _ in io.weighted_markers}
    lex = Lexicon(
        version=version,
        values=tuple(values),
        indicators=tuple(indicators),
        ios=tuple(ios),
        markers=tuple(m for mid, m in markers.items() if mid in referenced),
    )
    violations = validate_lexicon(lex)
    if violations:
        raise ValidationError(violations)
    return lex


def train(
    corpora: Mapping[str, UserCorpus],
    labels: Mapping[str, Mapping[CharacteristicKind, str]],
    kind: CharacteristicKind,
    config: TrainerConfig | None = None,
    *,
    base: Lexicon | None = None,
    version: str | None = None,
) -> Lexicon:
    """End-to-end: labeled corpora in, ready-to-save lexicon out."""
    config = config or TrainerConfig()
    classes = {
        member_id: kinds[kind] for member_id, kinds in labels.items() if kind in kinds
    }
    table = extract_candidates(corpora, classes, kind, config)
    weighted = weigh_candidates(table, config)
    return assemble_lexicon(
        weighted,
        kind,
        base=base,
        version=version,
        indicator_overrides=config.indicator_overrides,
    )


# ---------------------------------------------------------------------------
# Holdout evaluation


@dataclass(frozen=True)
class MemberOutcome:
    member_id: str
    expected: str
    decided: str
    margin: Fraction


@dataclass(frozen=True)
class EvaluationReport:
    """Holdout quality: accuracy over decided members, undetermined rate
    over all members, and the per-member outcomes behind both."""

    kind: CharacteristicKind
    total: int
    decided: int
    correct: int
    accuracy: Fraction
    undetermined_rate: Fraction
    outcomes: tuple[MemberOutcome, ...]


def holdout_validate(
    lexicon: Lexicon,
    corpora: Mapping[str, UserCorpus],
    classes: Mapping[str, str],
    kind: CharacteristicKind,
    threshold: Fraction,
    *,
    binary: bool = False,
    train_member_ids=None,
) -> EvaluationReport:
    """Score every labeled holdout member and compare with the labels.

    Pass train_member_ids to assert the holdout is disjoint from the
    training sample; overlap raises instead of silently inflating scores.
    """
    if train_member_ids is not None:
        overlap = set(classes) & set(train_member_ids)
        if overlap:
            raise TrainTestOverlap(overlap)

    outcomes = []
    decided_count = 0
    correct = 0
    skipped = 0
    for member_id in sorted(classes):
        expected = classes[member_id]
        if not is_known_value(kind, expected):
            raise UnknownValueCode(kind.value, expected)
        corpus = corpora.get(member_id)
        if corpus is None:
            skipped += 1
            continue
        profile = score_member(lexicon, corpus, threshold, binary=binary)
        kind_score = next((ks for ks in profile.kinds if ks.kind == kind), None)
        if kind_score is None:
            raise ProfilerError(
                f"lexicon has no indicative characteristics for {kind.value}"
            )
        outcomes.append(
            MemberOutcome(
                member_id=member_id,
                expected=expected,
                decided=kind_score.decided,
                margin=kind_score.margin,
            )
        )
        if kind_score.decided != UNDETERMINED:
            decided_count += 1
            if kind_score.decided == expected:
                correct += 1

    if skipped:
        logger.warning("%d labeled member(s) have no corpus and were skipped", skipped)
    total = len(outcomes)
    if total == 0:
        raise ProfilerError("no holdout members to evaluate")
    return EvaluationReport(
        kind=kind,
        total=total,
        decided=decided_count,
        correct=correct,
        accuracy=Fraction(correct, decided_count) if decided_count else Fraction(0),
        undetermined_rate=Fraction(total - decided_count, total),
        outcomes=tuple(outcomes),
    )

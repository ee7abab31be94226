"""Verification of declared member data against inferred profiles.

Every member and characteristic kind lands in exactly one status:

* confirmed:     declared and the inferred decision agrees;
* contradicted:  declared and the inferred decision names another value;
* unverifiable:  declared, but no decision could be made (undetermined,
                 or the lexicon does not cover the kind);
* undeclared:    the member stated nothing for the kind.

Education is declarable-only, so it is always unverifiable or undeclared.
Raising the decision threshold can only move members from confirmed or
contradicted into unverifiable, never flip one decision into another.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .corpus import UserCorpus
from .lexicon import Lexicon
from .rational import SCORE_DIGITS, format_decimal
from .scorer import UNDETERMINED, score_member
from .taxonomy import EDUCATION, SCOREABLE_KINDS, CharacteristicKind

CONFIRMED = "confirmed"
CONTRADICTED = "contradicted"
UNVERIFIABLE = "unverifiable"
UNDECLARED = "undeclared"

STATUSES = (CONFIRMED, CONTRADICTED, UNVERIFIABLE, UNDECLARED)

ALL_KINDS = SCOREABLE_KINDS + (EDUCATION,)


@dataclass(frozen=True)
class KindVerdict:
    kind: CharacteristicKind
    status: str
    declared: str | None
    inferred: str | None
    margin: Fraction


@dataclass(frozen=True)
class Verdict:
    member_id: str
    kinds: tuple[KindVerdict, ...]

    def status_of(self, kind: CharacteristicKind) -> str:
        for kv in self.kinds:
            if kv.kind == kind:
                return kv.status
        raise KeyError(kind)


def verify(
    lexicon: Lexicon,
    corpus: UserCorpus,
    threshold: Fraction,
    *,
    binary: bool = False,
) -> Verdict:
    """Check one member's declared data against what their posts suggest."""
    profile = score_member(lexicon, corpus, threshold, binary=binary)
    by_kind = {ks.kind: ks for ks in profile.kinds}

    verdicts = []
    for kind in SCOREABLE_KINDS:
        declared = corpus.declared.get(kind)
        ks = by_kind.get(kind)
        inferred = ks.decided if ks is not None else None
        margin = ks.margin if ks is not None else Fraction(0)
        if declared is None:
            status = UNDECLARED
        elif inferred is None or inferred == UNDETERMINED:
            status = UNVERIFIABLE
        elif inferred == declared:
            status = CONFIRMED
        else:
            status = CONTRADICTED
        verdicts.append(
            KindVerdict(
                kind=kind,
                status=status,
                declared=declared,
                inferred=inferred,
                margin=margin,
            )
        )

    declared_education = corpus.declared.get(EDUCATION)
    verdicts.append(
        KindVerdict(
            kind=EDUCATION,
            status=UNVERIFIABLE if declared_education is not None else UNDECLARED,
            declared=declared_education,
            inferred=None,
            margin=Fraction(0),
        )
    )
    return Verdict(member_id=corpus.member_id, kinds=tuple(verdicts))


def verify_batch(
    lexicon: Lexicon,
    corpora: Mapping[str, UserCorpus],
    threshold: Fraction,
    *,
    binary: bool = False,
) -> tuple[list[Verdict], dict[str, dict[str, int]]]:
    """Verify every member (sorted by id) and tally statuses per kind.

    The summary is zero-filled: every kind shows every status, so counts
    can be compared across runs without key juggling.
    """
    summary = {kind.value: {status: 0 for status in STATUSES} for kind in ALL_KINDS}
    verdicts = []
    for member_id in sorted(corpora):
        verdict = verify(lexicon, corpora[member_id], threshold, binary=binary)
        verdicts.append(verdict)
        for kv in verdict.kinds:
            summary[kv.kind.value][kv.status] += 1
    return verdicts, summary


def verdict_to_dict(verdict: Verdict) -> dict:
    """JSON-ready rendering; margins become 6-digit fixed-point strings."""
    doc: dict = {"member_id": verdict.member_id}
    for kv in verdict.kinds:
        doc[kv.kind.value] = {
            "status": kv.status,
            "declared": kv.declared,
            "inferred": kv.inferred,
            "margin": format_decimal(kv.margin, SCORE_DIGITS),
        }
    return doc

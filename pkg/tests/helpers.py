"""Shared test utilities: independent oracles and tiny builders.

The oracles deliberately recompute results through a different route than
the implementation (integer common-denominator arithmetic instead of
Fraction ops, groupby instead of the tokenizer's scanner, fresh greedy
scans instead of the match planner) so agreement actually means something.
"""

from __future__ import annotations

import io
from contextlib import redirect_stderr, redirect_stdout
from fractions import Fraction
from itertools import groupby

from sdprofiler.cli import main as cli_main
from sdprofiler.corpus import Post, UserCorpus
from sdprofiler.lexicon import (
    CharacteristicValue,
    IndicativeCharacteristic,
    IndicatorCode,
    Lexicon,
    Marker,
    MatchRegulations,
)
from sdprofiler.taxonomy import (
    AGE,
    GENDER,
    INDICATOR_TABLES,
    SPHERE,
    VALUE_TABLES,
)


def run_cli(*argv):
    """Run the CLI in-process; returns (exit_code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    try:
        with redirect_stdout(out), redirect_stderr(err):
            code = cli_main(list(argv))
    except SystemExit as exc:  # argparse usage errors
        code = exc.code if isinstance(exc.code, int) else 2
    return code, out.getvalue(), err.getvalue()


# ---------------------------------------------------------------------------
# Builders


def member(member_id: str, *texts: str) -> UserCorpus:
    posts = [Post(member_id, f"{member_id}-p{i}", text) for i, text in enumerate(texts)]
    return UserCorpus(member_id=member_id, posts=posts)


def gender_lexicon(
    female_markers, male_markers, *, version="test-1", regulations=None
) -> Lexicon:
    """Two-IO gender lexicon from {pattern: weight} dicts (linguistic,
    whole-token unless regulations says otherwise)."""
    regulations = regulations or MatchRegulations()
    markers = {}
    ios = []
    for code, spec in (("female", female_markers), ("male", male_markers)):
        weighted = []
        for pattern, weight in spec.items():
            mid = f"lin:{pattern}"
            markers[mid] = Marker(
                id=mid, kind="linguistic", pattern=pattern, regulations=regulations
            )
            weighted.append((mid, Fraction(weight)))
        ios.append(
            IndicativeCharacteristic(
                id=f"{code}:Gender-E",
                indicator_code="Gender-E",
                value_code=code,
                weighted_markers=tuple(weighted),
            )
        )
    return Lexicon(
        version=version,
        values=tuple(
            CharacteristicValue(GENDER, code, label)
            for code, label in VALUE_TABLES[GENDER].items()
        ),
        indicators=tuple(
            IndicatorCode(GENDER, code, label)
            for code, label in INDICATOR_TABLES[GENDER].items()
        ),
        ios=tuple(ios),
        markers=tuple(markers.values()),
    )


def single_marker_lexicon(marker: Marker, *, kind=GENDER, value_code="female") -> Lexicon:
    """Smallest scoreable lexicon around one marker."""
    indicator_code = {GENDER: "Gender-E", AGE: "Age-B", SPHERE: "Sphere-A"}[kind]
    return Lexicon(
        version="test-1",
        values=(CharacteristicValue(kind, value_code, VALUE_TABLES[kind][value_code]),),
        indicators=(
            IndicatorCode(kind, indicator_code, INDICATOR_TABLES[kind][indicator_code]),
        ),
        ios=(
            IndicativeCharacteristic(
                id=f"{value_code}:{indicator_code}",
                indicator_code=indicator_code,
                value_code=value_code,
                weighted_markers=((marker.id, Fraction(1)),),
            ),
        ),
        markers=(marker,),
    )


def random_io(rng, *, max_markers=5, max_weight_den=20) -> IndicativeCharacteristic:
    k = rng.randint(1, max_markers)
    weighted = []
    for i in range(k):
        den = rng.randint(1, max_weight_den)
        num = rng.randint(1, 3 * den)
        weighted.append((f"lin:w{i:02d}", Fraction(num, den)))
    return IndicativeCharacteristic(
        id="female:Gender-E",
        indicator_code="Gender-E",
        value_code="female",
        weighted_markers=tuple(weighted),
    )


def random_counts(rng, io, *, max_count=10) -> dict[str, int]:
    counts = {}
    for mid, _ in io.weighted_markers:
        if rng.random() < 0.2:
            continue  # absent key, must read as zero
        counts[mid] = rng.randint(0, max_count)
    return counts


# ---------------------------------------------------------------------------
# Oracles


def congruence_oracle(io, counts, *, binary=False) -> Fraction:
    """Recompute congruence over a single common denominator.

    Scales every weight to integers, sums term by term, and returns the
    unreduced ratio — no Fraction arithmetic until the final comparison
    value.
    """
    common = 1
    for _, w in io.weighted_markers:
        common *= w.denominator
    scaled = [(mid, w.numerator * (common // w.denominator)) for mid, w in io.weighted_markers]
    total = sum(s for _, s in scaled)
    numerator = 0
    for mid, s in scaled:
        n = counts.get(mid, 0)
        if n > 0:
            numerator += s * (1 if binary else n)
    return Fraction(numerator, len(scaled) * total)


def tokens_oracle(text: str) -> list[tuple[str, int, int]]:
    """(token_text, byte_start, byte_end) via groupby over the word-char
    predicate, with byte offsets recomputed by encoding prefixes."""
    out = []
    pos = 0
    for is_word, group in groupby(text, key=lambda ch: ch.isalnum() or ch == "'"):
        chunk = "".join(group)
        if is_word:
            start = len(text[:pos].encode("utf-8"))
            end = start + len(chunk.encode("utf-8"))
            out.append((chunk, start, end))
        pos += len(chunk)
    return out


def _fold_tokens(text: str) -> list[str]:
    return [chunk.casefold() for chunk, _, _ in tokens_oracle(text)]


def count_oracle(marker: Marker, text: str) -> int:
    """Non-overlapping occurrence count of one marker in one post text,
    via fresh greedy scans."""
    if marker.kind == "graphic":
        count = 0
        pos = text.find(marker.pattern)
        while pos != -1:
            count += 1
            pos = text.find(marker.pattern, pos + len(marker.pattern))
        return count

    toks = _fold_tokens(text)
    ptoks = marker.pattern.split(" ")
    if marker.regulations.whole_token:
        count = 0
        i = 0
        while i + len(ptoks) <= len(toks):
            if toks[i : i + len(ptoks)] == ptoks:
                count += 1
                i += len(ptoks)
            else:
                i += 1
        return count
    if len(ptoks) == 1:
        count = 0
        for tok in toks:
            pos = tok.find(ptoks[0])
            while pos != -1:
                count += 1
                pos = tok.find(ptoks[0], pos + len(ptoks[0]))
        return count
    count = 0
    i = 0
    while i + len(ptoks) <= len(toks):
        if all(p in toks[i + d] for d, p in enumerate(ptoks)):
            count += 1
            i += len(ptoks)
        else:
            i += 1
    return count


def corpus_count_oracle(marker: Marker, corpus: UserCorpus) -> dict[str, int]:
    """Regulated per-post counts for one marker over a whole corpus."""
    raw = {}
    for post in corpus.posts:
        n = count_oracle(marker, post.text)
        if n:
            raw[post.post_id] = n
    regs = marker.regulations
    if regs.scope == "per_post":
        return {pid: n for pid, n in raw.items() if n >= regs.min_count}
    return raw if sum(raw.values()) >= regs.min_count else {}

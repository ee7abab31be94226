"""Marker matching: tokenization, occurrence events, regulated counts.

Tokens are maximal runs of alphanumeric characters plus the apostrophe;
matching compares case-folded token text.  Spans are byte offsets into the
UTF-8 encoding of the post text so downstream consumers can slice encoded
content without re-deriving character widths.

Three matching modes:

* linguistic, whole_token=True: the pattern's token sequence must equal a
  window of post tokens;
* linguistic, whole_token=False: each pattern token must occur inside the
  corresponding post token (single-token patterns count repeats within one
  token);
* graphic: literal substring of the raw, unfolded text.

All modes take non-overlapping leftmost occurrences per marker, so "aaa"
contains "aa" once and ":):)" contains ":)" twice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .corpus import Post, UserCorpus
from .lexicon import GRAPHIC, LINGUISTIC, SCOPE_CORPUS, SCOPE_PER_POST, Lexicon, Marker


@dataclass(frozen=True)
class Token:
    text: str
    folded: str
    start: int
    end: int


@dataclass(frozen=True)
class TokenStream:
    text: str
    tokens: tuple[Token, ...]


@dataclass(frozen=True)
class MatchEvent:
    marker_id: str
    post_id: str
    start: int
    end: int


@dataclass
class MarkerCounts:
    """Regulated occurrence totals for one member.

    counts is dense (every marker id of the lexicon is a key, zeros
    included); per_post is sparse (only positive entries).  After
    regulations, counts[m] always equals the sum over per_post[m].
    """

    member_id: str
    counts: dict[str, int] = field(default_factory=dict)
    per_post: dict[str, dict[str, int]] = field(default_factory=dict)

    def total(self, marker_id: str) -> int:
        return self.counts[marker_id]


def _is_word_char(ch: str) -> bool:
    return ch.isalnum() or ch == "'"


def tokenize(text: str) -> TokenStream:
    """Split text into word tokens with UTF-8 byte spans."""
    tokens: list[Token] = []
    run_start_byte = 0
    run_chars: list[str] = []
    byte_pos = 0
    for ch in text:
        width = len(ch.encode("utf-8"))
        if _is_word_char(ch):
            if not run_chars:
                run_start_byte = byte_pos
            run_chars.append(ch)
        elif run_chars:
            raw = "".join(run_chars)
            tokens.append(
                Token(text=raw, folded=raw.casefold(), start=run_start_byte, end=byte_pos)
            )
            run_chars = []
        byte_pos += width
    if run_chars:
        raw = "".join(run_chars)
        tokens.append(
            Token(text=raw, folded=raw.casefold(), start=run_start_byte, end=byte_pos)
        )
    return TokenStream(text=text, tokens=tuple(tokens))


def marker_list(lexicon: Lexicon) -> tuple[Marker, ...]:
    """All markers in canonical (id-sorted) order."""
    return lexicon.markers


# ---------------------------------------------------------------------------
# Per-lexicon match plan


@dataclass(frozen=True)
class _Plan:
    # whole-token patterns bucketed by their first token
    token_buckets: dict
    # (marker_id, pattern) for single-token substring markers
    within_token: tuple
    # (marker_id, pattern_tokens) for multi-token substring markers
    window_contain: tuple
    # (marker_id, pattern) for graphic markers
    graphic: tuple


@lru_cache(maxsize=16)
def _plan_for(lexicon: Lexicon) -> _Plan:
    buckets: dict[str, list] = {}
    within = []
    windows = []
    graphic = []
    for m in lexicon.markers:
        if m.kind == GRAPHIC:
            graphic.append((m.id, m.pattern))
            continue
        ptoks = tuple(t.folded for t in tokenize(m.pattern).tokens)
        if m.regulations.whole_token:
            buckets.setdefault(ptoks[0], []).append((m.id, ptoks))
        elif len(ptoks) == 1:
            within.append((m.id, ptoks[0]))
        else:
            windows.append((m.id, ptoks))
    return _Plan(
        token_buckets=buckets,
        within_token=tuple(within),
        window_contain=tuple(windows),
        graphic=tuple(graphic),
    )


def _byte_offsets(text: str) -> list[int]:
    offsets = [0]
    pos = 0
    for ch in text:
        pos += len(ch.encode("utf-8"))
        offsets.append(pos)
    return offsets


def match_events(lexicon: Lexicon, post: Post) -> list[MatchEvent]:
    """Raw occurrence events for one post, before any count regulation.

    Sorted by (start, end, marker_id).  Within-token substring repeats
    produce one event per occurrence, all spanning the containing token.
    """
    plan = _plan_for(lexicon)
    stream = tokenize(post.text)
    toks = stream.tokens
    events: list[MatchEvent] = []

    if plan.token_buckets:
        next_free: dict[str, int] = {}
        for i, tok in enumerate(toks):
            for marker_id, ptoks in plan.token_buckets.get(tok.folded, ()):
                k = len(ptoks)
                if i < next_free.get(marker_id, 0) or i + k > len(toks):
                    continue
                if all(toks[i + d].folded == ptoks[d] for d in range(1, k)):
                    events.append(
                        MatchEvent(marker_id, post.post_id, toks[i].start, toks[i + k - 1].end)
                    )
                    next_free[marker_id] = i + k

    for marker_id, pattern in plan.within_token:
        for tok in toks:
            pos = tok.folded.find(pattern)
            while pos != -1:
                events.append(MatchEvent(marker_id, post.post_id, tok.start, tok.end))
                pos = tok.folded.find(pattern, pos + len(pattern))

    for marker_id, ptoks in plan.window_contain:
        k = len(ptoks)
        i = 0
        while i + k <= len(toks):
            if all(ptoks[d] in toks[i + d].folded for d in range(k)):
                events.append(
                    MatchEvent(marker_id, post.post_id, toks[i].start, toks[i + k - 1].end)
                )
                i += k
            else:
                i += 1

    if plan.graphic:
        offsets = _byte_offsets(post.text)
        for marker_id, pattern in plan.graphic:
            pos = post.text.find(pattern)
            while pos != -1:
                events.append(
                    MatchEvent(
                        marker_id, post.post_id, offsets[pos], offsets[pos + len(pattern)]
                    )
                )
                pos = post.text.find(pattern, pos + len(pattern))

    events.sort(key=lambda e: (e.start, e.end, e.marker_id))
    return events


def count_markers(lexicon: Lexicon, corpus: UserCorpus) -> MarkerCounts:
    """Count marker occurrences over all posts and apply each marker's
    regulations (min_count thresholds at corpus or per-post scope)."""
    raw: dict[str, dict[str, int]] = {m.id: {} for m in lexicon.markers}
    for post in corpus.posts:
        for event in match_events(lexicon, post):
            per_post = raw[event.marker_id]
            per_post[post.post_id] = per_post.get(post.post_id, 0) + 1

    result = MarkerCounts(member_id=corpus.member_id)
    for m in lexicon.markers:
        per_post = raw[m.id]
        regs = m.regulations
        if regs.scope == SCOPE_PER_POST:
            kept = {pid: n for pid, n in per_post.items() if n >= regs.min_count}
        else:  # SCOPE_CORPUS: an under-threshold total suppresses everything
            total = sum(per_post.values())
            kept = dict(per_post) if total >= regs.min_count else {}
        result.counts[m.id] = sum(kept.values())
        if kept:
            result.per_post[m.id] = kept
    return result

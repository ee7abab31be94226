"""Corpus ingestion: forum posts and per-member declared profile data.

Input files are JSON Lines, one object per line, strict schema (unknown keys
rejected so typos fail loudly instead of being silently ignored).  Blank
lines are allowed and skipped.  Every parse failure reports the file and
line number.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConflictingLabel, DuplicatePost, ParseError, UnknownValueCode
from .taxonomy import EDUCATION, CharacteristicKind, is_known_value

POST_KEYS = {"member_id", "post_id", "text"}
DECLARED_KEYS = {"member_id", "declared"}
LABEL_KEYS = {"member_id", "kind", "value"}


@dataclass(frozen=True)
class Post:
    member_id: str
    post_id: str
    text: str


@dataclass(frozen=True)
class DeclaredProfile:
    """What the member stated about themselves, keyed by characteristic kind.

    Education appears here only; it is never inferred from text.
    """

    entries: tuple[tuple[CharacteristicKind, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(sorted(self.entries)))

    def get(self, kind: CharacteristicKind):
        for k, code in self.entries:
            if k == kind:
                return code
        return None

    def kinds(self):
        return [k for k, _ in self.entries]


@dataclass
class UserCorpus:
    """All posts of one member, in ingestion order, plus declared data."""

    member_id: str
    posts: list[Post] = field(default_factory=list)
    declared: DeclaredProfile = DeclaredProfile()

    def post_count(self) -> int:
        return len(self.posts)


def _iter_jsonl(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc}", path=path) from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", path=path, line=lineno) from exc
        if not isinstance(obj, dict):
            raise ParseError("each line must be a JSON object", path=path, line=lineno)
        yield lineno, obj


def _require_keys(obj, allowed, path, lineno):
    missing = allowed - set(obj)
    if missing:
        raise ParseError(
            f"missing key(s): {', '.join(sorted(missing))}", path=path, line=lineno
        )
    unknown = set(obj) - allowed
    if unknown:
        raise ParseError(
            f"unknown key(s): {', '.join(sorted(unknown))}", path=path, line=lineno
        )


def _str_field(obj, key, path, lineno):
    val = obj[key]
    if not isinstance(val, str) or not val:
        raise ParseError(f"'{key}' must be a non-empty string", path=path, line=lineno)
    return val


def ingest_posts(path, corpora: dict[str, UserCorpus] | None = None) -> dict[str, UserCorpus]:
    """Read a posts file into per-member corpora, ordered as encountered.

    A repeated (member_id, post_id) pair raises DuplicatePost; posts of
    unknown members create their corpus on first sight.
    """
    corpora = {} if corpora is None else corpora
    seen: set[tuple[str, str]] = {
        (c.member_id, p.post_id) for c in corpora.values() for p in c.posts
    }
    for lineno, obj in _iter_jsonl(path):
        _require_keys(obj, POST_KEYS, path, lineno)
        member_id = _str_field(obj, "member_id", path, lineno)
        post_id = _str_field(obj, "post_id", path, lineno)
        text = obj["text"]
        if not isinstance(text, str):
            raise ParseError("'text' must be a string", path=path, line=lineno)
        key = (member_id, post_id)
        if key in seen:
            raise DuplicatePost(member_id, post_id)
        seen.add(key)
        corpus = corpora.get(member_id)
        if corpus is None:
            corpus = corpora[member_id] = UserCorpus(member_id=member_id)
        corpus.posts.append(Post(member_id=member_id, post_id=post_id, text=text))
    return corpora


def parse_declared_entries(obj, path=None, lineno=None) -> DeclaredProfile:
    """Build a DeclaredProfile from a {kind: value_code} mapping.

    Value codes are checked against the canonical tables; education accepts
    any non-empty string because it has no closed value set.
    """
    if not isinstance(obj, dict):
        raise ParseError("'declared' must be a JSON object", path=path, line=lineno)
    entries = []
    for raw_kind in sorted(obj):
        try:
            kind = CharacteristicKind(raw_kind)
        except ValueError:
            raise ParseError(
                f"unknown characteristic kind {raw_kind!r}", path=path, line=lineno
            ) from None
        code = obj[raw_kind]
        if not isinstance(code, str) or not code:
            raise ParseError(
                f"declared {raw_kind} must be a non-empty string", path=path, line=lineno
            )
        if kind != EDUCATION and not is_known_value(kind, code):
            raise UnknownValueCode(kind, code)
        entries.append((kind, code))
    return DeclaredProfile(entries=tuple(entries))


def attach_declared(path, corpora: dict[str, UserCorpus]) -> dict[str, UserCorpus]:
    """Read a declared-profile file and attach each record to its member.

    Members appearing only here (no posts) get an empty corpus so the
    verifier can still report on them.  A member declared twice with
    different data raises ConflictingLabel.
    """
    for lineno, obj in _iter_jsonl(path):
        _require_keys(obj, DECLARED_KEYS, path, lineno)
        member_id = _str_field(obj, "member_id", path, lineno)
        declared = parse_declared_entries(obj["declared"], path, lineno)
        corpus = corpora.get(member_id)
        if corpus is None:
            corpus = corpora[member_id] = UserCorpus(member_id=member_id)
        if corpus.declared.entries:
            if corpus.declared != declared:
                old = dict(corpus.declared.entries)
                new = dict(declared.entries)
                for k in sorted(set(old) | set(new), key=lambda k: k.value):
                    if old.get(k) != new.get(k):
                        raise ConflictingLabel(
                            member_id,
                            k.value,
                            (old.get(k, "<absent>"), new.get(k, "<absent>")),
                        )
            continue
        corpus.declared = declared
    return corpora


def ingest_labeled(path) -> dict[str, dict[CharacteristicKind, str]]:
    """Read training labels: one (member_id, kind, value) per line.

    Returns {member_id: {kind: value_code}}.  The same member may carry
    labels for several kinds, but two different values for one kind raise
    ConflictingLabel.
    """
    labels: dict[str, dict[CharacteristicKind, str]] = {}
    for lineno, obj in _iter_jsonl(path):
        _require_keys(obj, LABEL_KEYS, path, lineno)
        member_id = _str_field(obj, "member_id", path, lineno)
        raw_kind = _str_field(obj, "kind", path, lineno)
        value = _str_field(obj, "value", path, lineno)
        try:
            kind = CharacteristicKind(raw_kind)
        except ValueError:
            raise ParseError(
                f"unknown characteristic kind {raw_kind!r}", path=path, line=lineno
            ) from None
        if kind == EDUCATION:
            raise ParseError(
                "education cannot be a training label; it is declarable-only",
                path=path,
                line=lineno,
            )
        if not is_known_value(kind, value):
            raise UnknownValueCode(kind, value)
        per_member = labels.setdefault(member_id, {})
        if kind in per_member and per_member[kind] != value:
            raise ConflictingLabel(member_id, kind.value, (per_member[kind], value))
        per_member[kind] = value
    return labels

"""Marker-taxonomy data model: load, validate, and canonically save lexicons.

A lexicon wires four entity lists together:

* characteristic values (which value of gender/age/sphere a signal points at),
* indicator codes (the stylistic dimensions of the fixed taxonomy tables),
* indicative characteristics ("IOs": weighted marker sets, each tied to one
  indicator and one value),
* the markers themselves (word/phrase patterns or literal graphic patterns).

The on-disk form is a single strict-schema JSON document.  Serialization is
canonical: entities sorted, weights rendered as fixed 9-digit decimals, so
identical lexicons produce identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from functools import cached_property
from importlib import resources
from pathlib import Path

from .errors import ParseError, ValidationError
from .rational import WEIGHT_DIGITS, format_decimal
from .taxonomy import (
    EDUCATION,
    INDICATOR_TABLES,
    KIND_ORDER,
    SCOREABLE_KINDS,
    VALUE_TABLES,
    CharacteristicKind,
)

LINGUISTIC = "linguistic"
GRAPHIC = "graphic"

SCOPE_CORPUS = "corpus"
SCOPE_PER_POST = "per_post"

MAX_PATTERN_TOKENS = 8

DEFAULT_LEXICON_RESOURCE = "data/default_lexicon.json"


@dataclass(frozen=True)
class CharacteristicValue:
    kind: CharacteristicKind
    code: str
    label: str


@dataclass(frozen=True)
class IndicatorCode:
    kind: CharacteristicKind
    code: str
    label: str


@dataclass(frozen=True)
class MatchRegulations:
    """Per-marker matching constraints.

    whole_token applies to linguistic markers only: True matches the pattern
    as whole tokens, False as a substring of token text.  Occurrence totals
    below min_count are reported as zero, evaluated at the corpus or the
    per-post level depending on scope.
    """

    whole_token: bool = True
    min_count: int = 1
    scope: str = SCOPE_CORPUS


@dataclass(frozen=True)
class Marker:
    """One linguistic (folded token sequence) or graphic (literal) pattern."""

    id: str
    kind: str
    pattern: str
    regulations: MatchRegulations = MatchRegulations()


@dataclass(frozen=True)
class IndicativeCharacteristic:
    """A weighted marker set signalling one value under one indicator."""

    id: str
    indicator_code: str
    value_code: str
    weighted_markers: tuple[tuple[str, Fraction], ...]

    def __post_init__(self):
        # order never carries meaning; normalize so equality/serialization agree
        object.__setattr__(
            self, "weighted_markers", tuple(sorted(self.weighted_markers))
        )

    def marker_ids(self):
        return [mid for mid, _ in self.weighted_markers]


def _kind_key(kind: CharacteristicKind) -> int:
    return KIND_ORDER[kind]


@dataclass(frozen=True)
class Lexicon:
    """Immutable after construction; entity lists are held in canonical order."""

    version: str
    values: tuple[CharacteristicValue, ...]
    indicators: tuple[IndicatorCode, ...]
    ios: tuple[IndicativeCharacteristic, ...]
    markers: tuple[Marker, ...]

    def __post_init__(self):
        object.__setattr__(
            self,
            "values",
            tuple(sorted(self.values, key=lambda v: (_kind_key(v.kind), v.code))),
        )
        object.__setattr__(
            self,
            "indicators",
            tuple(sorted(self.indicators, key=lambda i: (_kind_key(i.kind), i.code))),
        )
        object.__setattr__(self, "ios", tuple(sorted(self.ios, key=lambda io: io.id)))
        object.__setattr__(
            self, "markers", tuple(sorted(self.markers, key=lambda m: m.id))
        )

    @cached_property
    def markers_by_id(self):
        return {m.id: m for m in self.markers}

    @cached_property
    def values_by_code(self):
        return {v.code: v for v in self.values}

    @cached_property
    def indicators_by_code(self):
        return {i.code: i for i in self.indicators}

    @cached_property
    def marker_ids(self) -> frozenset[str]:
        return frozenset(self.markers_by_id)

    def values_of(self, kind: CharacteristicKind):
        return [v for v in self.values if v.kind == kind]

    def indicators_of(self, kind: CharacteristicKind):
        return [i for i in self.indicators if i.kind == kind]

    def ios_of(self, kind: CharacteristicKind):
        by_code = self.values_by_code
        return [
            io
            for io in self.ios
            if io.value_code in by_code and by_code[io.value_code].kind == kind
        ]


def validate_lexicon(lex: Lexicon) -> list[str]:
    """Return every invariant violation (empty list means valid).

    Checks reference closure in both directions (IOs resolve, markers are
    used), id uniqueness, weight positivity, pattern well-formedness, and
    that declared values/indicators come from the canonical tables.  A
    lexicon that declares indicators for all three scoreable kinds must
    declare each kind's complete table and complete value set.
    """
    violations: list[str] = []

    seen_values: set[str] = set()
    for v in lex.values:
        if v.kind == EDUCATION:
            violations.append(
                f"value {v.code!r}: education is declarable-only and cannot appear in a lexicon"
            )
            continue
        if not _known_value(v.kind, v.code):
            violations.append(f"value {v.code!r} is not a known {v.kind.value} value")
        if v.code in seen_values:
            violations.append(f"duplicate value code {v.code!r}")
        seen_values.add(v.code)

    seen_indicators: set[str] = set()
    for ind in lex.indicators:
        if ind.kind == EDUCATION:
            violations.append(
                f"indicator {ind.code!r}: education is declarable-only and has no indicator table"
            )
            continue
        if not _known_indicator(ind.kind, ind.code):
            violations.append(
                f"indicator {ind.code!r} is not a known {ind.kind.value} indicator code"
            )
        if ind.code in seen_indicators:
            violations.append(f"duplicate indicator code {ind.code!r}")
        seen_indicators.add(ind.code)

    declared_kinds = {ind.kind for ind in lex.indicators}
    if all(k in declared_kinds for k in SCOREABLE_KINDS):
        # Full taxonomy declared: every table must be complete.
        for kind in SCOREABLE_KINDS:
            expected = set(INDICATOR_TABLES[kind])
            got = {i.code for i in lex.indicators_of(kind)}
            if got != expected and got <= expected:
                violations.append(
                    f"{kind.value} declares {len(got)} of {len(expected)} indicator codes"
                )
            expected_values = set(VALUE_TABLES[kind])
            got_values = {v.code for v in lex.values_of(kind)}
            if got_values != expected_values and got_values <= expected_values:
                violations.append(
                    f"{kind.value} declares {len(got_values)} of "
                    f"{len(expected_values)} values"
                )

    seen_markers: set[str] = set()
    for m in lex.markers:
        if m.id in seen_markers:
            violations.append(f"duplicate marker id {m.id!r}")
        seen_markers.add(m.id)
        violations.extend(_check_marker(m))

    referenced: set[str] = set()
    seen_ios: set[str] = set()
    for io in lex.ios:
        if io.id in seen_ios:
            violations.append(f"duplicate indicative characteristic id {io.id!r}")
        seen_ios.add(io.id)

        indicator = lex.indicators_by_code.get(io.indicator_code)
        value = lex.values_by_code.get(io.value_code)
        if indicator is None:
            violations.append(
                f"indicative characteristic {io.id!r} references undeclared indicator {io.indicator_code!r}"
            )
        if value is None:
            violations.append(
                f"indicative characteristic {io.id!r} references undeclared value {io.value_code!r}"
            )
        if indicator is not None and value is not None and indicator.kind != value.kind:
            violations.append(
                f"indicative characteristic {io.id!r} mixes kinds: "
                f"indicator {io.indicator_code!r} is {indicator.kind.value}, "
                f"value {io.value_code!r} is {value.kind.value}"
            )

        if not io.weighted_markers:
            violations.append(f"indicative characteristic {io.id!r} has no markers")
        io_seen: set[str] = set()
        for mid, weight in io.weighted_markers:
            if mid in io_seen:
                violations.append(
                    f"indicative characteristic {io.id!r} lists marker {mid!r} twice"
                )
            io_seen.add(mid)
            referenced.add(mid)
            if mid not in lex.markers_by_id:
                violations.append(
                    f"indicative characteristic {io.id!r} references unknown marker {mid!r}"
                )
            if weight <= 0:
                violations.append(
                    f"indicative characteristic {io.id!r}: marker {mid!r} has non-positive weight {weight}"
                )

    for m in lex.markers:
        if m.id not in referenced:
            violations.append(
                f"marker {m.id!r} is not referenced by any indicative characteristic"
            )

    return violations


def _known_value(kind, code):
    return code in VALUE_TABLES.get(kind, {})


def _known_indicator(kind, code):
    return code in INDICATOR_TABLES.get(kind, {})


def _check_marker(m: Marker) -> list[str]:
    out = []
    if not m.pattern:
        out.append(f"marker {m.id!r} has an empty pattern")
        return out
    if m.kind not in (LINGUISTIC, GRAPHIC):
        out.append(f"marker {m.id!r} has unknown kind {m.kind!r}")
        return out
    if m.regulations.min_count < 1:
        out.append(f"marker {m.id!r} has min_count {m.regulations.min_count} < 1")
    if m.regulations.scope not in (SCOPE_CORPUS, SCOPE_PER_POST):
        out.append(f"marker {m.id!r} has unknown scope {m.regulations.scope!r}")
    if m.kind == LINGUISTIC:
        if m.pattern != m.pattern.strip():
            out.append(f"marker {m.id!r} pattern has leading/trailing whitespace")
        from .matcher import tokenize  # deferred: matcher imports this module

        toks = [t.folded for t in tokenize(m.pattern).tokens]
        if not 1 <= len(toks) <= MAX_PATTERN_TOKENS:
            out.append(
                f"marker {m.id!r} pattern must be 1..{MAX_PATTERN_TOKENS} tokens, got {len(toks)}"
            )
        elif " ".join(toks) != m.pattern:
            out.append(
                f"marker {m.id!r} pattern is not a case-folded token sequence "
                f"(canonical form: {' '.join(toks)!r})"
            )
    return out


# ---------------------------------------------------------------------------
# File I/O


def load_lexicon(path) -> Lexicon:
    """Parse and validate a lexicon file.

    Raises ParseError for malformed JSON or schema violations (with
    position where available) and ValidationError, carrying the full
    violation list, when the document parses but breaks an invariant.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read lexicon: {exc}", path=path) from exc
    try:
        doc = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", path=path, line=exc.lineno) from exc

    lex = _lexicon_from_doc(doc, path)
    violations = validate_lexicon(lex)
    if violations:
        raise ValidationError(violations)
    return lex


def _lexicon_from_doc(doc, path) -> Lexicon:
    def fail(msg):
        raise ParseError(msg, path=path)

    if not isinstance(doc, dict):
        fail("lexicon document must be a JSON object")
    _strict_keys(doc, {"version", "values", "indicators", "ios", "markers"}, "lexicon", path)

    version = doc["version"]
    if not isinstance(version, str):
        fail("'version' must be a string")

    values = tuple(
        _parse_value(entry, i, path) for i, entry in enumerate(_array(doc, "values", path))
    )
    indicators = tuple(
        _parse_indicator(entry, i, path)
        for i, entry in enumerate(_array(doc, "indicators", path))
    )
    ios = tuple(
        _parse_io(entry, i, path) for i, entry in enumerate(_array(doc, "ios", path))
    )
    markers = tuple(
        _parse_marker(entry, i, path) for i, entry in enumerate(_array(doc, "markers", path))
    )
    return Lexicon(version=version, values=values, indicators=indicators, ios=ios, markers=markers)


def _array(doc, key, path):
    val = doc[key]
    if not isinstance(val, list):
        raise ParseError(f"'{key}' must be an array", path=path)
    return val


def _strict_keys(obj, allowed, where, path):
    if not isinstance(obj, dict):
        raise ParseError(f"{where} must be a JSON object", path=path)
    missing = allowed - set(obj)
    if missing:
        raise ParseError(f"{where} is missing key(s): {', '.join(sorted(missing))}", path=path)
    unknown = set(obj) - allowed
    if unknown:
        raise ParseError(f"{where} has unknown key(s): {', '.join(sorted(unknown))}", path=path)


def _string(obj, key, where, path):
    val = obj[key]
    if not isinstance(val, str) or not val:
        raise ParseError(f"{where}: '{key}' must be a non-empty string", path=path)
    return val


def _parse_kind(obj, where, path) -> CharacteristicKind:
    raw = _string(obj, "kind", where, path)
    try:
        return CharacteristicKind(raw)
    except ValueError:
        raise ParseError(f"{where}: unknown kind {raw!r}", path=path) from None


def _parse_value(entry, i, path) -> CharacteristicValue:
    where = f"values[{i}]"
    _strict_keys(entry, {"kind", "code", "label"}, where, path)
    return CharacteristicValue(
        kind=_parse_kind(entry, where, path),
        code=_string(entry, "code", where, path),
        label=_string(entry, "label", where, path),
    )


def _parse_indicator(entry, i, path) -> IndicatorCode:
    where = f"indicators[{i}]"
    _strict_keys(entry, {"kind", "code", "label"}, where, path)
    return IndicatorCode(
        kind=_parse_kind(entry, where, path),
        code=_string(entry, "code", where, path),
        label=_string(entry, "label", where, path),
    )


def _parse_weight(raw, where, path) -> Fraction:
    if isinstance(raw, bool) or not isinstance(raw, (int, str, Decimal)):
        raise ParseError(f"{where}: weight must be a decimal string or integer", path=path)
    try:
        if isinstance(raw, str):
            raw = Decimal(raw)
        return Fraction(raw)
    except (ValueError, ArithmeticError):
        raise ParseError(f"{where}: cannot parse weight {raw!r}", path=path) from None


def _parse_io(entry, i, path) -> IndicativeCharacteristic:
    where = f"ios[{i}]"
    _strict_keys(entry, {"id", "indicator", "value", "markers"}, where, path)
    io_id = _string(entry, "id", where, path)
    markers = entry["markers"]
    if not isinstance(markers, list):
        raise ParseError(f"{where}: 'markers' must be an array", path=path)
    weighted = []
    for j, pair in enumerate(markers):
        pair_where = f"{where}.markers[{j}]"
        _strict_keys(pair, {"marker_id", "weight"}, pair_where, path)
        weighted.append(
            (
                _string(pair, "marker_id", pair_where, path),
                _parse_weight(pair["weight"], pair_where, path),
            )
        )
    return IndicativeCharacteristic(
        id=io_id,
        indicator_code=_string(entry, "indicator", where, path),
        value_code=_string(entry, "value", where, path),
        weighted_markers=tuple(weighted),
    )


def _parse_marker(entry, i, path) -> Marker:
    where = f"markers[{i}]"
    keys = {"id", "kind", "pattern"}
    if isinstance(entry, dict) and "regulations" in entry:
        keys.add("regulations")
    _strict_keys(entry, keys, where, path)
    kind = _string(entry, "kind", where, path)
    regs = MatchRegulations()
    if "regulations" in entry:
        rwhere = f"{where}.regulations"
        rentry = entry["regulations"]
        _strict_keys(rentry, {"whole_token", "min_count", "scope"}, rwhere, path)
        whole = rentry["whole_token"]
        if not isinstance(whole, bool):
            raise ParseError(f"{rwhere}: 'whole_token' must be a boolean", path=path)
        min_count = rentry["min_count"]
        if isinstance(min_count, bool) or not isinstance(min_count, int):
            raise ParseError(f"{rwhere}: 'min_count' must be an integer", path=path)
        regs = MatchRegulations(
            whole_token=whole,
            min_count=min_count,
            scope=_string(rentry, "scope", rwhere, path),
        )
    return Marker(
        id=_string(entry, "id", where, path),
        kind=kind,
        pattern=_string(entry, "pattern", where, path),
        regulations=regs,
    )


def lexicon_to_json(lex: Lexicon) -> str:
    """Canonical serialization: fixed key order, sorted entities,
    9-fractional-digit weights, trailing newline."""
    doc = {
        "version": lex.version,
        "values": [
            {"kind": v.kind.value, "code": v.code, "label": v.label} for v in lex.values
        ],
        "indicators": [
            {"kind": i.kind.value, "code": i.code, "label": i.label}
            for i in lex.indicators
        ],
        "ios": [
            {
                "id": io.id,
                "indicator": io.indicator_code,
                "value": io.value_code,
                "markers": [
                    {"marker_id": mid, "weight": format_decimal(w, WEIGHT_DIGITS)}
                    for mid, w in sorted(io.weighted_markers)
                ],
            }
            for io in lex.ios
        ],
        "markers": [
            {
                "id": m.id,
                "kind": m.kind,
                "pattern": m.pattern,
                "regulations": {
                    "whole_token": m.regulations.whole_token,
                    "min_count": m.regulations.min_count,
                    "scope": m.regulations.scope,
                },
            }
            for m in lex.markers
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def save_lexicon(lex: Lexicon, path) -> None:
    """Write the canonical form; refuses to persist an invalid lexicon."""
    violations = validate_lexicon(lex)
    if violations:
        raise ValidationError(violations)
    Path(path).write_text(lexicon_to_json(lex), encoding="utf-8")


# ---------------------------------------------------------------------------
# Default taxonomy skeleton


def default_skeleton(version: str = "taxonomy-skeleton-1") -> Lexicon:
    """The shipped taxonomy: full value and indicator tables, no markers yet."""
    values = tuple(
        CharacteristicValue(kind=kind, code=code, label=label)
        for kind in SCOREABLE_KINDS
        for code, label in VALUE_TABLES[kind].items()
    )
    indicators = tuple(
        IndicatorCode(kind=kind, code=code, label=label)
        for kind in SCOREABLE_KINDS
        for code, label in INDICATOR_TABLES[kind].items()
    )
    return Lexicon(version=version, values=values, indicators=indicators, ios=(), markers=())


def default_lexicon_path() -> Path:
    """Filesystem path of the shipped default taxonomy file."""
    return Path(str(resources.files(__package__).joinpath(DEFAULT_LEXICON_RESOURCE)))

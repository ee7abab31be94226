"""Command-line interface.

Subcommands cover the full pipeline: train a lexicon from labeled posts,
validate a lexicon file, score members, verify declared data, and measure
holdout quality.  Machine output (JSON) goes to stdout; diagnostics and
logging go to stderr.

Exit codes: 0 success, 1 data or validation failure, 2 usage error.

A JSON config file (--config) can preset tunable options; explicit flags
win over the config, the config wins over built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .corpus import attach_declared, ingest_labeled, ingest_posts
from .errors import ParseError, ProfilerError, ValidationError
from .lexicon import default_lexicon_path, load_lexicon, save_lexicon, validate_lexicon
from .rational import SCORE_DIGITS, format_decimal, parse_rational
from .scorer import profile_to_dict, score_member
from .synthetic import SyntheticSpec, generate, write_corpus
from .taxonomy import CharacteristicKind
from .trainer import TrainerConfig, holdout_validate, train
from .verifier import STATUSES, verdict_to_dict, verify_batch

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = Fraction(1, 20)


# ---------------------------------------------------------------------------
# Argument and config-value coercion


def _threshold_arg(text: str) -> Fraction:
    try:
        value = parse_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(
            f"threshold must be a fraction like 1/20 or a decimal like 0.05, got {text!r}"
        ) from None
    if not 0 <= value <= 1:
        raise argparse.ArgumentTypeError(f"threshold must be within [0, 1], got {text!r}")
    return value


def _positive_int(text) -> int:
    try:
        value = int(text)
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _positive_float(text) -> float:
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {value}")
    return value


def _phrase_len(text) -> int:
    value = _positive_int(text)
    if value > 8:
        raise argparse.ArgumentTypeError(f"phrase length is capped at 8, got {value}")
    return value


def _bool_setting(raw) -> bool:
    if isinstance(raw, bool):
        return raw
    raise argparse.ArgumentTypeError(f"expected true or false, got {raw!r}")


# config keys -> coercion of the raw JSON value
_CONFIG_KEYS = {
    "threshold": lambda raw: _threshold_arg(str(raw)),
    "binary": _bool_setting,
    "top_k": _positive_int,
    "smoothing": _positive_float,
    "max_phrase_len": _phrase_len,
    "min_member_support": _positive_int,
    "weight_floor": _positive_float,
}


def _load_config(path, parser: argparse.ArgumentParser) -> dict:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        parser.error(f"cannot read config: {exc}")
    except json.JSONDecodeError as exc:
        parser.error(f"config is not valid JSON: {exc.msg} (line {exc.lineno})")
    if not isinstance(raw, dict):
        parser.error("config must be a JSON object")
    cfg = {}
    for key in sorted(raw):
        if key not in _CONFIG_KEYS:
            parser.error(
                f"unknown config key {key!r} (known: {', '.join(sorted(_CONFIG_KEYS))})"
            )
        try:
            cfg[key] = _CONFIG_KEYS[key](raw[key])
        except argparse.ArgumentTypeError as exc:
            parser.error(f"config key {key!r}: {exc}")
    return cfg


def _setting(args, cfg: dict, key: str, default):
    value = getattr(args, key, None)
    if value is not None:
        return value
    return cfg.get(key, default)


def _trainer_config(args, cfg) -> TrainerConfig:
    return TrainerConfig(
        smoothing=_setting(args, cfg, "smoothing", 1.0),
        top_k=_setting(args, cfg, "top_k", 50),
        max_phrase_len=_setting(args, cfg, "max_phrase_len", 2),
        min_member_support=_setting(args, cfg, "min_member_support", 2),
        weight_floor=_setting(args, cfg, "weight_floor", 0.01),
    )


def _emit(doc) -> None:
    print(json.dumps(doc, indent=2, ensure_ascii=False))


# ---------------------------------------------------------------------------
# Subcommand handlers


def _cmd_build_lexicon(args, cfg) -> int:
    corpora = ingest_posts(args.posts)
    labels = ingest_labeled(args.labels)
    kind = CharacteristicKind(args.kind)
    base = load_lexicon(args.base) if args.base else None
    lexicon = train(
        corpora, labels, kind, _trainer_config(args, cfg), base=base, version=args.version
    )
    save_lexicon(lexicon, args.out)
    _emit(
        {
            "out": str(args.out),
            "version": lexicon.version,
            "values": len(lexicon.values),
            "indicators": len(lexicon.indicators),
            "ios": len(lexicon.ios),
            "markers": len(lexicon.markers),
            "classes": sorted({io.value_code for io in lexicon.ios}),
        }
    )
    return 0


def _cmd_validate_lexicon(args, cfg) -> int:
    path = args.path if args.path else default_lexicon_path()
    try:
        lexicon = load_lexicon(path)
    except ValidationError as exc:
        _emit({"valid": False, "violations": exc.violations})
        return 1
    except ParseError as exc:
        _emit({"valid": False, "violations": [str(exc)]})
        return 1
    # load_lexicon validates; re-check so a clean result is explicit
    violations = validate_lexicon(lexicon)
    _emit({"valid": not violations, "violations": violations})
    return 1 if violations else 0


def _scored_members(args, cfg):
    lexicon = load_lexicon(args.lexicon)
    corpora = ingest_posts(args.posts)
    if getattr(args, "declared", None):
        attach_declared(args.declared, corpora)
    threshold = _setting(args, cfg, "threshold", DEFAULT_THRESHOLD)
    binary = _setting(args, cfg, "binary", False)
    return lexicon, corpora, threshold, binary


def _cmd_score(args, cfg) -> int:
    lexicon, corpora, threshold, binary = _scored_members(args, cfg)
    member_ids = sorted(corpora)
    if args.member:
        missing = [m for m in args.member if m not in corpora]
        if missing:
            raise ProfilerError(f"unknown member id(s): {', '.join(sorted(missing))}")
        member_ids = sorted(args.member)
    profiles = [
        score_member(lexicon, corpora[mid], threshold, binary=binary)
        for mid in member_ids
    ]
    if args.format == "text":
        for profile in profiles:
            print(f"member {profile.member_id}")
            for ks in profile.kinds:
                margin = format_decimal(ks.margin, SCORE_DIGITS)
                print(f"  {ks.kind.value}: {ks.decided} (margin {margin})")
                for code, score in ks.scores:
                    print(f"    {code} {format_decimal(score, SCORE_DIGITS)}")
            print(f"  education: {profile.declared_education or '(none)'}")
    else:
        _emit(
            {
                "threshold": format_decimal(threshold, SCORE_DIGITS),
                "members": [profile_to_dict(p) for p in profiles],
            }
        )
    return 0


def _cmd_verify(args, cfg) -> int:
    lexicon, corpora, threshold, binary = _scored_members(args, cfg)
    verdicts, summary = verify_batch(lexicon, corpora, threshold, binary=binary)
    if args.format == "text":
        for verdict in verdicts:
            print(f"member {verdict.member_id}")
            for kv in verdict.kinds:
                detail = f"declared {kv.declared or '-'}, inferred {kv.inferred or '-'}"
                print(f"  {kv.kind.value}: {kv.status} ({detail})")
        print("summary")
        for kind, counts in summary.items():
            parts = " ".join(f"{status} {counts[status]}" for status in STATUSES)
            print(f"  {kind}: {parts}")
    else:
        _emit(
            {
                "threshold": format_decimal(threshold, SCORE_DIGITS),
                "members": [verdict_to_dict(v) for v in verdicts],
                "summary": summary,
            }
        )
    return 0


def _cmd_evaluate(args, cfg) -> int:
    lexicon = load_lexicon(args.lexicon)
    corpora = ingest_posts(args.posts)
    labels = ingest_labeled(args.labels)
    kind = CharacteristicKind(args.kind)
    classes = {mid: kinds[kind] for mid, kinds in labels.items() if kind in kinds}
    threshold = _setting(args, cfg, "threshold", DEFAULT_THRESHOLD)
    binary = _setting(args, cfg, "binary", False)
    train_member_ids = None
    if args.train_labeled:
        train_member_ids = set(ingest_labeled(args.train_labeled))
    report = holdout_validate(
        lexicon,
        corpora,
        classes,
        kind,
        threshold,
        binary=binary,
        train_member_ids=train_member_ids,
    )
    if args.format == "text":
        print(f"kind {report.kind.value}")
        print(f"members {report.total} decided {report.decided} correct {report.correct}")
        print(f"accuracy {format_decimal(report.accuracy, SCORE_DIGITS)}")
        print(f"undetermined_rate {format_decimal(report.undetermined_rate, SCORE_DIGITS)}")
    else:
        _emit(
            {
                "kind": report.kind.value,
                "total": report.total,
                "decided": report.decided,
                "correct": report.correct,
                "accuracy": format_decimal(report.accuracy, SCORE_DIGITS),
                "undetermined_rate": format_decimal(report.undetermined_rate, SCORE_DIGITS),
                "outcomes": [
                    {
                        "member_id": o.member_id,
                        "expected": o.expected,
                        "decided": o.decided,
                        "margin": format_decimal(o.margin, SCORE_DIGITS),
                    }
                    for o in report.outcomes
                ],
            }
        )
    return 0


def _cmd_gen_synthetic(args, cfg) -> int:
    spec = SyntheticSpec() if args.seed is None else SyntheticSpec(seed=args.seed)
    files = write_corpus(generate(spec), args.out_dir)
    _emit({"out_dir": str(args.out_dir), "files": files})
    return 0


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sdprofiler",
        description="Profile and verify socio-demographic characteristics "
        "of web-community members from what they post.",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="log more to stderr (-v info, -vv debug)",
    )
    parser.add_argument("--config", help="JSON file presetting tunable options")

    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    p = sub.add_parser("build-lexicon", help="train a lexicon from labeled posts")
    p.add_argument("--posts", required=True, help="posts file (JSON Lines)")
    p.add_argument("--labels", required=True, help="training labels file (JSON Lines)")
    p.add_argument("--kind", required=True, choices=("gender", "age", "sphere"))
    p.add_argument("--out", required=True, help="where to write the lexicon")
    p.add_argument("--base", help="existing lexicon to merge the result over")
    p.add_argument("--version", help="version string stored in the lexicon")
    p.add_argument("--top-k", dest="top_k", type=_positive_int, default=None)
    p.add_argument("--smoothing", type=_positive_float, default=None)
    p.add_argument(
        "--max-phrase-len", dest="max_phrase_len", type=_phrase_len, default=None
    )
    p.add_argument(
        "--min-member-support",
        dest="min_member_support",
        type=_positive_int,
        default=None,
    )
    p.add_argument(
        "--weight-floor", dest="weight_floor", type=_positive_float, default=None
    )
    p.set_defaults(func=_cmd_build_lexicon)

    p = sub.add_parser(
        "validate-lexicon", help="check a lexicon file against every invariant"
    )
    p.add_argument("path", nargs="?", help="lexicon file (default: the shipped taxonomy)")
    p.set_defaults(func=_cmd_validate_lexicon)

    p = sub.add_parser("score", help="infer member profiles from their posts")
    p.add_argument("--lexicon", required=True)
    p.add_argument("--posts", required=True)
    p.add_argument("--declared", help="declared-data file (for education pass-through)")
    p.add_argument("--threshold", type=_threshold_arg, default=None)
    p.add_argument("--binary", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--member", action="append", help="score only this member (repeatable)")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("verify", help="check declared data against inferred profiles")
    p.add_argument("--lexicon", required=True)
    p.add_argument("--posts", required=True)
    p.add_argument("--declared", required=True)
    p.add_argument("--threshold", type=_threshold_arg, default=None)
    p.add_argument("--binary", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("evaluate", help="measure decision quality on labeled holdout")
    p.add_argument("--lexicon", required=True)
    p.add_argument("--posts", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--kind", required=True, choices=("gender", "age", "sphere"))
    p.add_argument("--threshold", type=_threshold_arg, default=None)
    p.add_argument("--binary", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument(
        "--train-labeled",
        dest="train_labeled",
        help="training labels file; fails if the holdout overlaps it",
    )
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=_cmd_evaluate)

    # deliberately undocumented in the command listing: only used by tests
    # and benchmarks to produce a deterministic corpus
    p = sub.add_parser("gen-synthetic")
    p.add_argument("--out-dir", dest="out_dir", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_gen_synthetic)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)]
    logging.basicConfig(
        stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s"
    )

    cfg = _load_config(args.config, parser) if args.config else {}
    try:
        return args.func(args, cfg)
    except ValidationError as exc:
        for violation in exc.violations:
            print(f"error: {violation}", file=sys.stderr)
        return 1
    except (ProfilerError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

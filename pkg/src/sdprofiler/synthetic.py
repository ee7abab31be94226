"""Seeded synthetic corpus for end-to-end pipeline checks.

Two gender classes with disjoint planted vocabularies over a shared noise
vocabulary, plus a class-correlated emoticon so the graphic marker path
gets exercised.  Everything is driven by one random.Random(seed), so a
given spec always produces byte-identical files.

The planted signal is strong by construction: with the default spec a
member emits each of their 20 class words about nine times across their
posts, while the other class never uses them at all.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from random import Random

from .taxonomy import GENDER, CharacteristicKind


@dataclass(frozen=True)
class SyntheticSpec:
    kind: CharacteristicKind = GENDER
    classes: tuple[str, ...] = ("female", "male")
    emoticons: tuple[str, ...] = (":)", ":(")
    train_members: int = 50  # per class
    holdout_members: int = 10  # per class
    posts_per_member: int = 20
    tokens_min: int = 10
    tokens_max: int = 18
    planted_words: int = 20  # per class
    noise_words: int = 200  # shared across classes
    planted_share: float = 0.65  # chance a token comes from the class vocabulary
    emoticon_share: float = 0.25  # chance a post ends with the class emoticon
    seed: int = 7

    def class_vocabulary(self, code: str) -> list[str]:
        return [f"{code}term{i:02d}" for i in range(self.planted_words)]

    def noise_vocabulary(self) -> list[str]:
        return [f"filler{i:03d}" for i in range(self.noise_words)]


@dataclass(frozen=True)
class SyntheticCorpus:
    """Row dicts ready for JSON Lines serialization."""

    train_posts: tuple[dict, ...]
    train_labels: tuple[dict, ...]
    holdout_posts: tuple[dict, ...]
    holdout_labels: tuple[dict, ...]
    holdout_declared: tuple[dict, ...]


def generate(spec: SyntheticSpec | None = None) -> SyntheticCorpus:
    spec = spec or SyntheticSpec()
    rng = Random(spec.seed)
    noise = spec.noise_vocabulary()

    def posts_for(member_id: str, vocab: list[str], emoticon: str) -> list[dict]:
        rows = []
        for j in range(spec.posts_per_member):
            n = rng.randint(spec.tokens_min, spec.tokens_max)
            words = [
                rng.choice(vocab) if rng.random() < spec.planted_share else rng.choice(noise)
                for _ in range(n)
            ]
            text = " ".join(words)
            if rng.random() < spec.emoticon_share:
                text = f"{text} {emoticon}"
            rows.append({"member_id": member_id, "post_id": f"{member_id}-p{j:02d}", "text": text})
        return rows

    train_posts: list[dict] = []
    train_labels: list[dict] = []
    holdout_posts: list[dict] = []
    holdout_labels: list[dict] = []
    holdout_declared: list[dict] = []

    for class_index, code in enumerate(spec.classes):
        vocab = spec.class_vocabulary(code)
        emoticon = spec.emoticons[class_index % len(spec.emoticons)]
        for i in range(spec.train_members):
            member_id = f"train-{code}-{i:03d}"
            train_posts.extend(posts_for(member_id, vocab, emoticon))
            train_labels.append(
                {"member_id": member_id, "kind": spec.kind.value, "value": code}
            )
        for i in range(spec.holdout_members):
            member_id = f"hold-{code}-{i:03d}"
            holdout_posts.extend(posts_for(member_id, vocab, emoticon))
            holdout_labels.append(
                {"member_id": member_id, "kind": spec.kind.value, "value": code}
            )
            # first member of each class mis-declares, so verification has
            # something to contradict; every third also declares education
            declared_value = spec.classes[(class_index + 1) % len(spec.classes)] if i == 0 else code
            declared: dict = {spec.kind.value: declared_value}
            if i % 3 == 0:
                declared["education"] = "higher-technical"
            holdout_declared.append({"member_id": member_id, "declared": declared})

    return SyntheticCorpus(
        train_posts=tuple(train_posts),
        train_labels=tuple(train_labels),
        holdout_posts=tuple(holdout_posts),
        holdout_labels=tuple(holdout_labels),
        holdout_declared=tuple(holdout_declared),
    )


def write_jsonl(rows, path) -> None:
    path = Path(path)
    lines = [json.dumps(row, ensure_ascii=False, sort_keys=True) for row in rows]
    path.write_text("\n".join(lines) + "\n" if lines else "", encoding="utf-8")


def write_corpus(corpus: SyntheticCorpus, out_dir) -> list[str]:
    """Write the five standard files; returns their names in listing order."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    named = (
        ("train-posts.jsonl", corpus.train_posts),
        ("train-labels.jsonl", corpus.train_labels),
        ("holdout-posts.jsonl", corpus.holdout_posts),
        ("holdout-labels.jsonl", corpus.holdout_labels),
        ("holdout-declared.jsonl", corpus.holdout_declared),
    )
    for name, rows in named:
        write_jsonl(rows, out_dir / name)
    return [name for name, _ in named]

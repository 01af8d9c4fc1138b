"""Shared synthetic-data generators for the test suite."""

from __future__ import annotations

import json
import random
from typing import Sequence

from titlekit.textproc import Token, tokens_from_words

NOUNS = [
    "graph", "energy", "vertex", "network", "model", "system", "data",
    "knowledge", "management", "service", "analysis", "method", "structure",
    "algorithm", "detection", "evaluation", "information", "language",
    "learning", "title", "paper", "stop", "science", "theory",
]
ADJECTIVES = ["new", "deep", "novel", "robust", "large", "small", "recent"]
AUXILIARIES = ["of", "for", "with", "in", "on", "and", "the", "a", "by", "to"]
NUMBER_WORDS = ["one", "two", "three"]
PUNCTUATION = [",", ":", "."]


def random_words(
    rng: random.Random,
    min_len: int = 1,
    max_len: int = 10,
    vocab: Sequence[str] | None = None,
) -> list[str]:
    pool = list(vocab) if vocab is not None else NOUNS + ADJECTIVES + AUXILIARIES
    n = rng.randint(min_len, max_len)
    return [rng.choice(pool) for _ in range(n)]


def random_tagged(
    rng: random.Random,
    min_len: int = 0,
    max_len: int = 16,
    with_punctuation: bool = True,
) -> list[Token]:
    pool = NOUNS + ADJECTIVES + AUXILIARIES + NUMBER_WORDS
    if with_punctuation:
        pool = pool + PUNCTUATION
    n = rng.randint(min_len, max_len)
    return tokens_from_words([rng.choice(pool) for _ in range(n)])


def random_phrase_text(rng: random.Random, n_phrases: int) -> str:
    """Text made of noun phrases joined by auxiliaries, ending in a noun."""
    chunks = []
    for _ in range(n_phrases):
        words = rng.sample(NOUNS, rng.randint(1, 3))
        if rng.random() < 0.4:
            words = [rng.choice(ADJECTIVES)] + words
        chunks.append(" ".join(words))
    glue = [rng.choice(["for", "with", "in", "on", "and"]) for _ in range(n_phrases - 1)]
    parts = [chunks[0]]
    for connector, chunk in zip(glue, chunks[1:]):
        parts.extend([connector, chunk])
    return " ".join(parts)


def imprint_record(
    id_: str,
    title: str,
    abstract: str = "",
    views: int = 10,
    language: str | None = None,
) -> str:
    record = {"id": id_, "title": title, "abstract": abstract, "views": views}
    if language is not None:
        record["language"] = language
    return json.dumps(record, ensure_ascii=False)


def toy_corpus_lines(rng: random.Random, n_train: int = 24, n_test: int = 6) -> list[str]:
    """A small corpus exercising cleaning, conditioning, and the test set.

    Training-style records have views > 1, titles longer than 20
    characters, and abstracts repeating the title's terms; test-style
    records have views == 1 and titles longer than 100 characters with
    several multiword noun phrases.
    """
    lines = []
    for i in range(n_train):
        title = random_phrase_text(rng, rng.randint(2, 3)).title()
        while len(title) <= 20:
            title = random_phrase_text(rng, 3).title()
        abstract = (
            f"This paper presents the {title.lower()} and gives a detailed "
            f"study of the {title.lower()} with experiments on real data."
        )
        lines.append(
            imprint_record(
                f"train-{i:03d}",
                title,
                abstract,
                views=rng.randint(2, 500),
                language="en",
            )
        )
    for i in range(n_test):
        title = random_phrase_text(rng, 5).title()
        while len(title) <= 100:
            title += " " + random_phrase_text(rng, 2).title()
        abstract = f"We study the {title.lower()} in detail."
        lines.append(
            imprint_record(f"test-{i:03d}", title, abstract, views=1, language="en")
        )
    return lines

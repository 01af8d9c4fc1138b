"""Corpus ingestion, cleaning, conditioning, and partitioning.

An imprint is one article record (title, abstract, view count) as a
scholarly platform displays it.  This module reads imprints from JSON
Lines, computes corpus statistics, builds abstract-to-title training
pairs, filters them by noun-phrase overlap conditions, and produces
reproducible train/validation/test partitions.
"""

from __future__ import annotations

import json
import logging
import math
import statistics
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .textproc import (
    DEFAULT_MERGE_PREPOSITIONS,
    LanguageGuess,
    LexiconTagger,
    NpRelation,
    StopwordLanguageDetector,
    Token,
    analyze,
    chunk_noun_phrases,
    np_relation,
    tokens_from_words,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Imprint:
    """One article record; ``title_len`` is the title's character count."""

    id: str
    title: str
    abstract: str
    views: int
    title_len: int
    language: str | None = None

    @classmethod
    def from_record(cls, record: dict) -> "Imprint":
        id_ = record.get("id")
        title = record.get("title")
        views = record.get("views")
        abstract = record.get("abstract", "")
        language = record.get("language")
        if not isinstance(id_, str) or not id_:
            raise ValueError("missing or invalid 'id'")
        if not isinstance(title, str):
            raise ValueError("missing or invalid 'title'")
        if isinstance(views, bool) or not isinstance(views, int) or views < 0:
            raise ValueError("missing or invalid 'views'")
        if not isinstance(abstract, str):
            raise ValueError("invalid 'abstract'")
        if language is not None and not isinstance(language, str):
            raise ValueError("invalid 'language'")
        return cls(
            id=id_,
            title=title,
            abstract=abstract,
            views=views,
            title_len=len(title),
            language=language,
        )

    def to_record(self) -> dict:
        record = {
            "id": self.id,
            "title": self.title,
            "abstract": self.abstract,
            "views": self.views,
            "title_len": self.title_len,
        }
        if self.language is not None:
            record["language"] = self.language
        return record


@dataclass
class Corpus:
    imprints: list[Imprint] = field(default_factory=list)
    n_malformed: int = 0

    def __len__(self) -> int:
        return len(self.imprints)

    def __iter__(self):
        return iter(self.imprints)

    def views_by_id(self) -> dict[str, int]:
        return {imp.id: imp.views for imp in self.imprints}


def ingest(lines: Iterable[str]) -> Corpus:
    """Parse JSONL records into a corpus, skipping malformed lines.

    Blank lines are ignored; lines that are not JSON objects, violate
    the record schema, or repeat an already-seen id are skipped and
    counted in ``n_malformed``.  Input order is preserved.
    """
    corpus = Corpus()
    seen_ids: set[str] = set()
    for line in lines:
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            if not isinstance(record, dict):
                raise ValueError("line is not a JSON object")
            imprint = Imprint.from_record(record)
            if imprint.id in seen_ids:
                raise ValueError(f"duplicate id {imprint.id!r}")
        except (json.JSONDecodeError, ValueError) as exc:
            corpus.n_malformed += 1
            logger.debug("skipping malformed record: %s", exc)
            continue
        seen_ids.add(imprint.id)
        corpus.imprints.append(imprint)
    return corpus


def ingest_path(path: str | Path) -> Corpus:
    """Ingest a JSONL file; I/O failures propagate to the caller."""
    with open(path, encoding="utf-8") as handle:
        return ingest(handle)


# ---------------------------------------------------------------------------
# Cleaning
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CleaningRules:
    """Retention predicates; view/length thresholds are strict (>)."""

    min_views: int = 1
    min_title_len: int = 20
    allowed_languages: tuple[str, ...] = ("en",)
    require_common_term: bool = True


def term_set(tokens: Sequence[Token]) -> frozenset[str]:
    """Normalized content terms of a token sequence."""
    return frozenset(t.normalized for t in tokens if t.is_term)


def clean(
    corpus: Corpus,
    rules: CleaningRules = CleaningRules(),
    detector: StopwordLanguageDetector | None = None,
    tagger: LexiconTagger | None = None,
) -> Corpus:
    """Keep records passing the view, length, language, and term checks.

    A record survives when views and title length exceed the thresholds,
    its language (explicit field if present, otherwise detected from
    title plus abstract) is allowed, and abstract and title share at
    least one normalized content term.  Output is a stable-order subset
    of the input.
    """
    detector = detector or StopwordLanguageDetector()
    kept = []
    for imp in corpus.imprints:
        if imp.views <= rules.min_views:
            continue
        if imp.title_len <= rules.min_title_len:
            continue
        if rules.allowed_languages:
            if imp.language is not None:
                guess = LanguageGuess(code=imp.language.lower(), confidence=1.0)
            else:
                guess = detector.detect(f"{imp.title} {imp.abstract}".strip())
            allowed = {code.lower() for code in rules.allowed_languages}
            if guess.code not in allowed:
                continue
        if rules.require_common_term:
            title_terms = term_set(analyze(imp.title, tagger))
            abstract_terms = term_set(analyze(imp.abstract, tagger))
            if not title_terms & abstract_terms:
                continue
        kept.append(imp)
    return Corpus(imprints=kept, n_malformed=corpus.n_malformed)


# ---------------------------------------------------------------------------
# Training pairs and conditioning
# ---------------------------------------------------------------------------

FLAG_WEAK = "weak"
FLAG_CONDITIONED = "conditioned"
FLAG_STRONG = "strong"
FLAG_TOP_VIEWS = "top-views"


@dataclass(frozen=True)
class TrainingPair:
    """Reference/target token pair plus conditioning metadata."""

    reference: tuple[Token, ...]
    target: tuple[Token, ...]
    source_imprint: str
    views: int
    condition_flags: frozenset[str] = frozenset()

    def to_record(self) -> dict:
        return {
            "source_imprint": self.source_imprint,
            "reference": [t.surface.lower() for t in self.reference],
            "target": [t.surface.lower() for t in self.target],
            "views": self.views,
            "condition_flags": sorted(self.condition_flags),
        }

    @classmethod
    def from_record(cls, record: dict, tagger: LexiconTagger | None = None) -> "TrainingPair":
        return cls(
            reference=tuple(tokens_from_words(record["reference"], tagger)),
            target=tuple(tokens_from_words(record["target"], tagger)),
            source_imprint=record["source_imprint"],
            views=int(record.get("views", 0)),
            condition_flags=frozenset(record.get("condition_flags", ())),
        )


def truncate_reference(tokens: Sequence[Token], limit: int) -> list[Token]:
    """First ``limit`` tokens of an abstract-side reference."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    return list(tokens[:limit])


def build_pairs(
    corpus: Corpus,
    truncation_limit: int = 50,
    tagger: LexiconTagger | None = None,
) -> list[TrainingPair]:
    """Abstract-to-title pairs: truncated abstract reference, full title target."""
    pairs = []
    for imp in corpus.imprints:
        reference = truncate_reference(analyze(imp.abstract, tagger), truncation_limit)
        target = analyze(imp.title, tagger)
        pairs.append(
            TrainingPair(
                reference=tuple(reference),
                target=tuple(target),
                source_imprint=imp.id,
                views=imp.views,
            )
        )
    return pairs


@dataclass(frozen=True)
class ConditionSpec:
    """Which pair-retention condition to apply.

    ``weak`` keeps pairs sharing at least one term, ``conditioned``
    those with at least two similar-or-equal noun-phrase pairings,
    ``strong`` those with an equal multiword noun-phrase pair, and
    ``top-views`` the weak subset restricted to the most-viewed
    imprints (views at or above the given quantile of the weak set).
    """

    kind: str
    top_views_quantile: float = 0.73

    _KINDS = (FLAG_WEAK, FLAG_CONDITIONED, FLAG_STRONG, FLAG_TOP_VIEWS)

    def __post_init__(self) -> None:
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown condition kind {self.kind!r}")
        if not 0.0 < self.top_views_quantile < 1.0:
            raise ValueError("top_views_quantile must be in (0, 1)")

    @classmethod
    def weak(cls) -> "ConditionSpec":
        return cls(kind=FLAG_WEAK)

    @classmethod
    def conditioned(cls) -> "ConditionSpec":
        return cls(kind=FLAG_CONDITIONED)

    @classmethod
    def strong(cls) -> "ConditionSpec":
        return cls(kind=FLAG_STRONG)

    @classmethod
    def top_views(cls, quantile: float = 0.73) -> "ConditionSpec":
        return cls(kind=FLAG_TOP_VIEWS, top_views_quantile=quantile)


def _relation_counts(
    pair: TrainingPair,
    merge_prepositions: frozenset[str],
) -> tuple[int, int]:
    """(similar-or-equal pairings, equal pairings) between R and T phrases."""
    ref_nps = chunk_noun_phrases(pair.reference, merge_prepositions)
    tgt_nps = chunk_noun_phrases(pair.target, merge_prepositions)
    similar = 0
    equal = 0
    for r_np in ref_nps:
        for t_np in tgt_nps:
            rel = np_relation(r_np, t_np)
            if rel is NpRelation.EQUAL:
                equal += 1
                similar += 1
            elif rel is NpRelation.SIMILAR:
                similar += 1
    return similar, equal


def has_common_term(pair: TrainingPair) -> bool:
    return bool(term_set(pair.reference) & term_set(pair.target))


def quantile(values: Sequence[float], q: float) -> float:
    """Linear-interpolation quantile of a non-empty value sequence."""
    if not values:
        raise ValueError("quantile of empty sequence")
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must be in [0, 1]")
    ordered = sorted(values)
    if len(ordered) == 1:
        return float(ordered[0])
    pos = q * (len(ordered) - 1)
    lo = math.floor(pos)
    hi = math.ceil(pos)
    if lo == hi:
        return float(ordered[lo])
    frac = pos - lo
    return float(ordered[lo] * (1.0 - frac) + ordered[hi] * frac)


def condition(
    pairs: Sequence[TrainingPair],
    spec: ConditionSpec,
    merge_prepositions: frozenset[str] = DEFAULT_MERGE_PREPOSITIONS,
) -> list[TrainingPair]:
    """Keep pairs satisfying ``spec``; survivors gain the matching flag.

    Counting for ``conditioned`` is over distinct (reference-phrase,
    target-phrase) combinations, so one reference phrase similar to two
    target phrases contributes two pairings.
    """
    if spec.kind == FLAG_TOP_VIEWS:
        weak = [p for p in pairs if has_common_term(p)]
        if not weak:
            return []
        cutoff = quantile([p.views for p in weak], spec.top_views_quantile)
        survivors = [p for p in weak if p.views >= cutoff]
    else:
        survivors = []
        for pair in pairs:
            if spec.kind == FLAG_WEAK:
                keep = has_common_term(pair)
            elif spec.kind == FLAG_CONDITIONED:
                similar, _ = _relation_counts(pair, merge_prepositions)
                keep = similar >= 2
            else:
                _, equal = _relation_counts(pair, merge_prepositions)
                keep = equal >= 1
            if keep:
                survivors.append(pair)
    return [
        replace(p, condition_flags=p.condition_flags | {spec.kind}) for p in survivors
    ]


# ---------------------------------------------------------------------------
# Partitioning
# ---------------------------------------------------------------------------

def split_train_valid(
    pairs: Sequence[TrainingPair],
    ratio: float = 0.93,
    seed: int = 0,
) -> tuple[list[TrainingPair], list[TrainingPair]]:
    """Random disjoint split; reproducible for a fixed seed.

    The train side gets ``round(ratio * n)`` pairs (clamped so both
    sides are non-empty).  Fewer than two pairs cannot be split.
    """
    import random

    if not 0.0 < ratio < 1.0:
        raise ValueError("ratio must be in (0, 1)")
    if len(pairs) < 2:
        raise ValueError("need at least 2 pairs to split")
    shuffled = list(pairs)
    random.Random(seed).shuffle(shuffled)
    n_train = int(ratio * len(shuffled) + 0.5)
    n_train = min(max(n_train, 1), len(shuffled) - 1)
    return shuffled[:n_train], shuffled[n_train:]


def select_test_set(
    corpus: Corpus,
    n: int = 1000,
    seed: int = 0,
    min_title_len: int = 100,
) -> list[Imprint]:
    """Sample up to ``n`` single-view imprints with long titles.

    Eligible records have views == 1 and title length above
    ``min_title_len``.  The sample is seeded and returned in corpus
    order; if fewer than ``n`` records are eligible, all of them are
    returned with a warning.
    """
    import random

    eligible = [
        (i, imp)
        for i, imp in enumerate(corpus.imprints)
        if imp.views == 1 and imp.title_len > min_title_len
    ]
    if len(eligible) <= n:
        if len(eligible) < n:
            logger.warning(
                "only %d of %d requested test imprints are eligible",
                len(eligible),
                n,
            )
        return [imp for _, imp in eligible]
    chosen = random.Random(seed).sample(range(len(eligible)), n)
    return [eligible[i][1] for i in sorted(chosen)]


# ---------------------------------------------------------------------------
# Statistics
# ---------------------------------------------------------------------------

DEFAULT_QUANTILE_POINTS = (0.25, 0.5, 0.73, 0.75, 0.9, 0.95, 0.99)


@dataclass(frozen=True)
class CorpusStats:
    n_records: int
    n_filtered: int
    pearson_views_title_len: float | None
    title_len_histogram: list[tuple[int, int]]
    views_quantiles: dict[str, float]

    def to_dict(self) -> dict:
        return {
            "n_records": self.n_records,
            "n_filtered": self.n_filtered,
            "pearson_views_title_len": self.pearson_views_title_len,
            "title_len_histogram": [list(bin_) for bin_ in self.title_len_histogram],
            "views_quantiles": self.views_quantiles,
        }


def corpus_stats(
    corpus: Corpus,
    min_views: int = 5,
    min_title_len: int = 20,
    histogram_bin_width: int = 10,
    quantile_points: Sequence[float] = DEFAULT_QUANTILE_POINTS,
) -> CorpusStats:
    """Views/length statistics over the filtered corpus.

    Applies the strict filters views > ``min_views`` and title length
    > ``min_title_len`` first; the filtered corpus must be non-empty.
    Pearson correlation of views against title length is ``None`` when
    either column is constant.
    """
    filtered = [
        imp
        for imp in corpus.imprints
        if imp.views > min_views and imp.title_len > min_title_len
    ]
    if not filtered:
        raise ValueError("no records remain after the statistics filter")
    views = [float(imp.views) for imp in filtered]
    lengths = [float(imp.title_len) for imp in filtered]
    try:
        pearson: float | None = statistics.correlation(views, lengths)
    except statistics.StatisticsError:
        pearson = None

    histogram: dict[int, int] = {}
    for length in lengths:
        lo = int(length // histogram_bin_width) * histogram_bin_width
        histogram[lo] = histogram.get(lo, 0) + 1
    bins = sorted(histogram.items())

    quantiles = {f"{q:g}": quantile(views, q) for q in quantile_points}
    return CorpusStats(
        n_records=len(corpus.imprints),
        n_filtered=len(filtered),
        pearson_views_title_len=pearson,
        title_len_histogram=bins,
        views_quantiles=quantiles,
    )


# ---------------------------------------------------------------------------
# JSONL helpers
# ---------------------------------------------------------------------------

def write_jsonl(path: str | Path, records: Iterable[Mapping]) -> int:
    """Write records as sorted-key JSON lines; returns the line count."""
    count = 0
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for record in records:
            handle.write(json.dumps(record, ensure_ascii=False, sort_keys=True))
            handle.write("\n")
            count += 1
    return count


def read_jsonl(path: str | Path) -> list[dict]:
    with open(path, encoding="utf-8") as handle:
        return [json.loads(line) for line in handle if line.strip()]


def write_pairs(path: str | Path, pairs: Iterable[TrainingPair]) -> int:
    return write_jsonl(path, (p.to_record() for p in pairs))


def read_pairs(path: str | Path, tagger: LexiconTagger | None = None) -> list[TrainingPair]:
    return [TrainingPair.from_record(r, tagger) for r in read_jsonl(path)]

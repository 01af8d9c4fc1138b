"""Evaluation metrics for generated titles.

BLEU (corpus-level), ROUGE-1/2/L as recall/precision/f triples, the
noun-phrase-based precision score, per-corpus aggregation, and
checkpoint selection.  Scorers compare tokens case-insensitively and
are pure functions; corpus aggregation sums in input order so results
are bit-reproducible.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

from .textproc import (
    DEFAULT_MERGE_PREPOSITIONS,
    LexiconTagger,
    NounPhrase,
    Token,
    analyze,
    chunk_noun_phrases,
)


@dataclass(frozen=True)
class RPF:
    """Recall/precision/f triple; f is the harmonic mean (0 when p+r=0)."""

    recall: float
    precision: float
    f: float

    @classmethod
    def from_rp(cls, recall: float, precision: float) -> "RPF":
        if recall + precision > 0.0:
            f = 2.0 * precision * recall / (precision + recall)
        else:
            f = 0.0
        return cls(recall=recall, precision=precision, f=f)


RPF_ZERO = RPF(recall=0.0, precision=0.0, f=0.0)


def _lower(tokens: Sequence[str]) -> list[str]:
    return [t.lower() for t in tokens]


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


# ---------------------------------------------------------------------------
# BLEU
# ---------------------------------------------------------------------------

def bleu_corpus(
    hypotheses: Sequence[Sequence[str]],
    references: Sequence[Sequence[str]],
    max_n: int = 4,
) -> float:
    """Corpus-level BLEU with brevity penalty and no smoothing.

    Clipped n-gram matches and totals are accumulated over the whole
    corpus for n = 1..max_n and combined as a geometric mean; any order
    with zero matches (but a non-zero total) zeroes the score.  Orders
    for which the corpus contains no hypothesis n-grams at all are
    skipped rather than scored, so short corpora still satisfy
    bleu_corpus(x, x) == 1.
    """
    if len(hypotheses) != len(references):
        raise ValueError("hypothesis/reference count mismatch")
    if not hypotheses:
        raise ValueError("empty corpus")
    matches = [0] * (max_n + 1)
    totals = [0] * (max_n + 1)
    hyp_len = 0
    ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        hyp = _lower(hyp)
        ref = _lower(ref)
        hyp_len += len(hyp)
        ref_len += len(ref)
        for n in range(1, max_n + 1):
            hyp_counts = _ngrams(hyp, n)
            ref_counts = _ngrams(ref, n)
            totals[n] += sum(hyp_counts.values())
            matches[n] += sum((hyp_counts & ref_counts).values())
    if hyp_len == 0:
        return 0.0
    log_sum = 0.0
    n_orders = 0
    for n in range(1, max_n + 1):
        if totals[n] == 0:
            continue
        if matches[n] == 0:
            return 0.0
        log_sum += math.log(matches[n] / totals[n])
        n_orders += 1
    if n_orders == 0:
        return 0.0
    brevity = 1.0 if hyp_len >= ref_len else math.exp(1.0 - ref_len / hyp_len)
    return brevity * math.exp(log_sum / n_orders)


def bleu_title(
    hypothesis: Sequence[str],
    reference: Sequence[str],
    max_n: int = 4,
) -> float:
    """Single-title diagnostic BLEU with add-one smoothing for n > 1."""
    hyp = _lower(hypothesis)
    ref = _lower(reference)
    if not hyp:
        return 0.0
    log_sum = 0.0
    n_orders = 0
    for n in range(1, max_n + 1):
        hyp_counts = _ngrams(hyp, n)
        ref_counts = _ngrams(ref, n)
        total = sum(hyp_counts.values())
        if total == 0:
            continue
        matched = sum((hyp_counts & ref_counts).values())
        if n > 1:
            matched += 1
            total += 1
        if matched == 0:
            return 0.0
        log_sum += math.log(matched / total)
        n_orders += 1
    if n_orders == 0:
        return 0.0
    brevity = 1.0 if len(hyp) >= len(ref) else math.exp(1.0 - len(ref) / len(hyp))
    return brevity * math.exp(log_sum / n_orders)


# ---------------------------------------------------------------------------
# ROUGE
# ---------------------------------------------------------------------------

def rouge_n(hypothesis: Sequence[str], reference: Sequence[str], n: int) -> RPF:
    """N-gram overlap: clipped common count over each side's total."""
    if n < 1:
        raise ValueError("n must be >= 1")
    hyp_counts = _ngrams(_lower(hypothesis), n)
    ref_counts = _ngrams(_lower(reference), n)
    common = sum((hyp_counts & ref_counts).values())
    hyp_total = sum(hyp_counts.values())
    ref_total = sum(ref_counts.values())
    recall = common / ref_total if ref_total else 0.0
    precision = common / hyp_total if hyp_total else 0.0
    return RPF.from_rp(recall, precision)


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    """Longest common subsequence length, O(len(a) * len(b))."""
    if not a or not b:
        return 0
    previous = [0] * (len(b) + 1)
    for x in a:
        current = [0]
        for j, y in enumerate(b, start=1):
            if x == y:
                current.append(previous[j - 1] + 1)
            else:
                current.append(max(previous[j], current[-1]))
        previous = current
    return previous[-1]


def rouge_l(hypothesis: Sequence[str], reference: Sequence[str]) -> RPF:
    """LCS-based overlap: recall over reference, precision over hypothesis."""
    hyp = _lower(hypothesis)
    ref = _lower(reference)
    common = lcs_length(hyp, ref)
    recall = common / len(ref) if ref else 0.0
    precision = common / len(hyp) if hyp else 0.0
    return RPF.from_rp(recall, precision)


# ---------------------------------------------------------------------------
# Noun-phrase precision
# ---------------------------------------------------------------------------

def _first_occurrence_multiword(nps: Sequence[NounPhrase]) -> list[NounPhrase]:
    seen: set[frozenset[str]] = set()
    unique = []
    for np in nps:
        if not np.is_multiword or np.terms in seen:
            continue
        seen.add(np.terms)
        unique.append(np)
    return unique


def _mw_similar(a: frozenset[str], b: frozenset[str]) -> bool:
    # both sides are multiword, so "similar or equal" reduces to
    # sharing at least two terms
    return len(a & b) >= 2


def match_phrases(
    hyp_terms: Sequence[frozenset[str]],
    ref_terms: Sequence[frozenset[str]],
) -> list[int]:
    """Greedy left-to-right one-to-one matching of hypothesis phrases.

    Hypothesis phrases are taken in order; each is matched to a free
    similar reference phrase when possible, reassigning earlier matches
    (augmenting paths) rather than giving up, so a phrase is left out
    only if no one-to-one assignment can include it.  The matched set
    therefore has maximum possible size.  Returns the matched
    hypothesis indices in order.
    """
    ref_owner: dict[int, int] = {}
    hyp_assignment: dict[int, int] = {}

    def try_assign(h: int, banned: set[int]) -> bool:
        for r, terms in enumerate(ref_terms):
            if r in banned or not _mw_similar(hyp_terms[h], terms):
                continue
            banned.add(r)
            if r not in ref_owner or try_assign(ref_owner[r], banned):
                ref_owner[r] = h
                hyp_assignment[h] = r
                return True
        return False

    for h in range(len(hyp_terms)):
        try_assign(h, set())
    return sorted(hyp_assignment)


def np_diff_p(
    hypothesis: Sequence[Token],
    reference: Sequence[Token],
    merge_prepositions: frozenset[str] = DEFAULT_MERGE_PREPOSITIONS,
) -> float:
    """Fraction of hypothesis tokens covered by matched noun phrases.

    Both sides are chunked; duplicate hypothesis phrases (same
    normalized term set) count once, keeping the first occurrence.
    Remaining multiword hypothesis phrases are matched one-to-one
    against reference multiword phrases sharing at least two terms,
    irrespective of reference order.  The score is the token count of
    matched hypothesis spans over the total hypothesis token count;
    a hypothesis without multiword phrases (or without tokens) scores 0.
    """
    if not hypothesis:
        return 0.0
    hyp_nps = _first_occurrence_multiword(
        chunk_noun_phrases(hypothesis, merge_prepositions)
    )
    ref_nps = [
        np
        for np in chunk_noun_phrases(reference, merge_prepositions)
        if np.is_multiword
    ]
    if not hyp_nps or not ref_nps:
        return 0.0
    matched = match_phrases(
        [np.terms for np in hyp_nps], [np.terms for np in ref_nps]
    )
    covered = sum(len(hyp_nps[i]) for i in matched)
    return covered / len(hypothesis)


# ---------------------------------------------------------------------------
# Aggregation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MetricReport:
    bleu: float
    rouge1: RPF
    rouge2: RPF
    rougeL: RPF
    np_diff_p: float
    n_titles: int
    n_degenerate: int

    def to_dict(self) -> dict:
        def rpf_dict(rpf: RPF) -> dict:
            return {"recall": rpf.recall, "precision": rpf.precision, "f": rpf.f}

        return {
            "bleu": self.bleu,
            "rouge-1": rpf_dict(self.rouge1),
            "rouge-2": rpf_dict(self.rouge2),
            "rouge-L": rpf_dict(self.rougeL),
            "np_diff_p": self.np_diff_p,
            "n_titles": self.n_titles,
            "n_degenerate": self.n_degenerate,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    CSV_COLUMNS = (
        "rouge-1-r",
        "rouge-1-p",
        "rouge-1-f",
        "rouge-2-r",
        "rouge-2-p",
        "rouge-2-f",
        "rouge-L-r",
        "rouge-L-p",
        "rouge-L-f",
        "bleu",
        "np_diff_p",
    )

    @classmethod
    def csv_header(cls) -> str:
        return ",".join(cls.CSV_COLUMNS)

    def to_csv_row(self) -> str:
        values = (
            self.rouge1.recall,
            self.rouge1.precision,
            self.rouge1.f,
            self.rouge2.recall,
            self.rouge2.precision,
            self.rouge2.f,
            self.rougeL.recall,
            self.rougeL.precision,
            self.rougeL.f,
            self.bleu,
            self.np_diff_p,
        )
        return ",".join(f"{v:.6f}" for v in values)


def _mean_rpf(triples: Sequence[RPF]) -> RPF:
    n = len(triples)
    if n == 0:
        return RPF_ZERO
    return RPF(
        recall=sum(t.recall for t in triples) / n,
        precision=sum(t.precision for t in triples) / n,
        f=sum(t.f for t in triples) / n,
    )


def evaluate(
    hypotheses: Sequence[str],
    references: Sequence[str],
    tagger: LexiconTagger | None = None,
    merge_prepositions: frozenset[str] = DEFAULT_MERGE_PREPOSITIONS,
) -> MetricReport:
    """Score aligned hypothesis/reference text lines.

    BLEU is corpus-level; ROUGE and the noun-phrase precision are
    arithmetic means of per-title scores.  Degenerate (token-free)
    hypotheses stay in the corpus, score zero everywhere, and are
    counted, so dropping titles can never inflate the averages.
    """
    if len(hypotheses) != len(references):
        raise ValueError("hypothesis/reference count mismatch")
    if not hypotheses:
        raise ValueError("empty corpus")
    hyp_tokens = [analyze(line, tagger) for line in hypotheses]
    ref_tokens = [analyze(line, tagger) for line in references]
    n_degenerate = sum(1 for toks in hyp_tokens if not toks)

    hyp_words = [[t.surface for t in toks] for toks in hyp_tokens]
    ref_words = [[t.surface for t in toks] for toks in ref_tokens]
    bleu = bleu_corpus(hyp_words, ref_words)
    rouge1 = _mean_rpf([rouge_n(h, r, 1) for h, r in zip(hyp_words, ref_words)])
    rouge2 = _mean_rpf([rouge_n(h, r, 2) for h, r in zip(hyp_words, ref_words)])
    rougeL = _mean_rpf([rouge_l(h, r) for h, r in zip(hyp_words, ref_words)])
    np_scores = [
        np_diff_p(h, r, merge_prepositions)
        for h, r in zip(hyp_tokens, ref_tokens)
    ]
    return MetricReport(
        bleu=bleu,
        rouge1=rouge1,
        rouge2=rouge2,
        rougeL=rougeL,
        np_diff_p=sum(np_scores) / len(np_scores),
        n_titles=len(hypotheses),
        n_degenerate=n_degenerate,
    )


def mean_np_diff_p(
    hypotheses: Sequence[str],
    references: Sequence[str],
    tagger: LexiconTagger | None = None,
    merge_prepositions: frozenset[str] = DEFAULT_MERGE_PREPOSITIONS,
) -> float:
    if len(hypotheses) != len(references):
        raise ValueError("hypothesis/reference count mismatch")
    if not hypotheses:
        raise ValueError("empty corpus")
    scores = [
        np_diff_p(analyze(h, tagger), analyze(r, tagger), merge_prepositions)
        for h, r in zip(hypotheses, references)
    ]
    return sum(scores) / len(scores)


def select_checkpoint(
    checkpoint_runs: Mapping[str, Sequence[str]],
    validation_references: Sequence[str],
    tagger: LexiconTagger | None = None,
    merge_prepositions: frozenset[str] = DEFAULT_MERGE_PREPOSITIONS,
) -> str:
    """Name of the run with the highest mean noun-phrase precision.

    Ties go to the lexicographically latest checkpoint name.
    """
    if not checkpoint_runs:
        raise ValueError("no checkpoint runs given")
    scored = {
        name: mean_np_diff_p(lines, validation_references, tagger, merge_prepositions)
        for name, lines in checkpoint_runs.items()
    }
    return max(scored, key=lambda name: (scored[name], name))

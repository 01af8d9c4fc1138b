"""Title hypothesis generation, post-processing, and filtering.

Hypotheses come from the built-in prefix baseline or from an external
generator spoken to over a line protocol: one lowercased,
space-tokenized source title per stdin line, exactly one hypothesis
line per source on stdout, UTF-8 with LF line endings, empty line for
an empty hypothesis.  Generated titles then pass through the
post-processing step (term de-duplication, auxiliary elimination,
trailing-token stripping, title casing) and an optional structural
filter requiring overlap with the source title's noun phrases.
"""

from __future__ import annotations

import enum
import shlex
import subprocess
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

from .textproc import (
    DEFAULT_MERGE_PREPOSITIONS,
    LexiconTagger,
    NounPhrase,
    Tag,
    Token,
    chunk_noun_phrases,
    pos_tag,
    similar_or_equal,
    tokenize,
)


class Stage(enum.Enum):
    RAW = "raw"
    POSTPROCESSED = "postprocessed"
    ACCEPTED = "accepted"
    REJECTED = "rejected"


@dataclass(frozen=True)
class Hypothesis:
    """A generated title candidate and where it came from.

    ``degenerate`` marks an empty token sequence; such hypotheses are
    carried along (and scored zero downstream) instead of vanishing,
    so per-stage counts stay auditable.
    """

    tokens: tuple[Token, ...]
    source_id: str = ""
    generator: str = ""
    stage: Stage = Stage.RAW
    degenerate: bool = False

    def text(self) -> str:
        from .textproc import detokenize

        return detokenize(self.tokens)


class GeneratorError(RuntimeError):
    """External generator failed or broke the line protocol."""


KIND_BASELINE = "baseline"
KIND_COMMAND = "command"
KIND_FILE = "file"


@dataclass(frozen=True)
class GeneratorSpec:
    """Which generator produces raw hypotheses; exactly one kind."""

    kind: str
    char_limit: int = 75
    command: str | None = None
    path: str | Path | None = None

    def __post_init__(self) -> None:
        if self.kind not in (KIND_BASELINE, KIND_COMMAND, KIND_FILE):
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.kind == KIND_COMMAND and not self.command:
            raise ValueError("command generator needs a command line")
        if self.kind == KIND_FILE and not self.path:
            raise ValueError("file generator needs a hypothesis file path")
        if self.kind == KIND_BASELINE and self.char_limit < 1:
            raise ValueError("char_limit must be >= 1")

    @classmethod
    def baseline(cls, char_limit: int = 75) -> "GeneratorSpec":
        return cls(kind=KIND_BASELINE, char_limit=char_limit)

    @classmethod
    def external_command(cls, command: str) -> "GeneratorSpec":
        return cls(kind=KIND_COMMAND, command=command)

    @classmethod
    def hypothesis_file(cls, path: str | Path) -> "GeneratorSpec":
        return cls(kind=KIND_FILE, path=path)


def wire_line(tokens: Sequence[Token]) -> str:
    """Render tokens for the generator protocol: lowercased, space-joined."""
    return " ".join(t.surface.lower() for t in tokens)


def _is_auxiliary(token: Token) -> bool:
    # function words and punctuation behave alike for post-processing
    return token.tag in (Tag.AUXILIARY, Tag.PUNCTUATION)


def apply_title_case(tokens: Sequence[Token]) -> list[Token]:
    """Uppercase the first letter of content tokens, lowercase auxiliaries.

    The first token is always capitalized, auxiliary or not.
    """
    styled = []
    for i, tok in enumerate(tokens):
        surface = tok.surface.lower() if tok.tag == Tag.AUXILIARY else tok.surface
        if i == 0 or tok.tag != Tag.AUXILIARY:
            surface = surface[:1].upper() + surface[1:]
        styled.append(replace(tok, surface=surface) if surface != tok.surface else tok)
    return styled


# ---------------------------------------------------------------------------
# Baseline
# ---------------------------------------------------------------------------

def baseline_mbase(
    title_tokens: Sequence[Token],
    char_limit: int = 75,
    source_id: str = "",
    merge_prepositions: frozenset[str] = DEFAULT_MERGE_PREPOSITIONS,
) -> Hypothesis:
    """Prefix baseline: first ``char_limit`` characters, cut at a noun.

    Takes the longest token prefix whose character extent stays within
    the limit (a straddling token is dropped entirely), then truncates
    after the last noun of that prefix that sits inside a noun phrase,
    and title-cases the result.  Without such a noun the hypothesis is
    empty and flagged degenerate.
    """
    if char_limit < 1:
        raise ValueError("char_limit must be >= 1")
    prefix = [
        t for t in title_tokens if t.char_offset + len(t.surface) <= char_limit
    ]
    cut = -1
    for np in chunk_noun_phrases(prefix, merge_prepositions):
        for i in range(np.start, np.end):
            if prefix[i].tag in (Tag.NOUN, Tag.PROPER_NOUN):
                cut = max(cut, i)
    if cut < 0:
        return Hypothesis(
            tokens=(),
            source_id=source_id,
            generator="baseline",
            stage=Stage.RAW,
            degenerate=True,
        )
    kept = apply_title_case(prefix[: cut + 1])
    return Hypothesis(
        tokens=tuple(kept),
        source_id=source_id,
        generator="baseline",
        stage=Stage.RAW,
    )


# ---------------------------------------------------------------------------
# Generator invocation
# ---------------------------------------------------------------------------

def _hypotheses_from_lines(
    lines: Sequence[str],
    source_ids: Sequence[str],
    generator: str,
    tagger: LexiconTagger | None,
) -> list[Hypothesis]:
    hypotheses = []
    for line, source_id in zip(lines, source_ids):
        tokens = pos_tag(tokenize(line), tagger)
        hypotheses.append(
            Hypothesis(
                tokens=tuple(tokens),
                source_id=source_id,
                generator=generator,
                stage=Stage.RAW,
                degenerate=not tokens,
            )
        )
    return hypotheses


def run_generator(
    spec: GeneratorSpec,
    sources: Sequence[Sequence[Token]],
    source_ids: Sequence[str] | None = None,
    tagger: LexiconTagger | None = None,
    merge_prepositions: frozenset[str] = DEFAULT_MERGE_PREPOSITIONS,
) -> list[Hypothesis]:
    """Produce one raw hypothesis per source title, order preserved.

    Sources are passed to external generators untruncated, one wire
    line each.  A line-count mismatch or a nonzero exit status raises
    :class:`GeneratorError` with the process diagnostics.
    """
    if not sources:
        raise ValueError("sources must be non-empty")
    if source_ids is None:
        source_ids = [str(i) for i in range(len(sources))]
    if len(source_ids) != len(sources):
        raise ValueError("source_ids length mismatch")

    if spec.kind == KIND_BASELINE:
        return [
            baseline_mbase(
                tokens,
                spec.char_limit,
                source_id=source_id,
                merge_prepositions=merge_prepositions,
            )
            for tokens, source_id in zip(sources, source_ids)
        ]

    if spec.kind == KIND_COMMAND:
        payload = "".join(wire_line(s) + "\n" for s in sources)
        try:
            proc = subprocess.run(
                shlex.split(spec.command),
                input=payload,
                capture_output=True,
                text=True,
                encoding="utf-8",
            )
        except OSError as exc:
            raise GeneratorError(f"cannot launch generator: {exc}") from exc
        if proc.returncode != 0:
            detail = proc.stderr.strip().splitlines()
            tail = detail[-1] if detail else "no diagnostics"
            raise GeneratorError(
                f"generator exited with status {proc.returncode}: {tail}"
            )
        lines = proc.stdout.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        label = f"cmd:{shlex.split(spec.command)[0]}"
    else:
        text = Path(spec.path).read_text(encoding="utf-8")
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        label = f"file:{Path(spec.path).name}"

    if len(lines) != len(sources):
        raise GeneratorError(
            f"generator produced {len(lines)} lines for {len(sources)} sources"
        )
    return _hypotheses_from_lines(lines, source_ids, label, tagger)


# ---------------------------------------------------------------------------
# Post-processing step
# ---------------------------------------------------------------------------

def ps_tokens(tokens: Sequence[Token]) -> list[Token]:
    """The post-processing step on a tagged token sequence.

    1. every repeated term keeps only its first occurrence (keyed on
       the normalized form, so inflection variants collide);
    2. an auxiliary token is dropped unless a term occurs strictly
       between it and the next auxiliary token (or, for the last
       auxiliary run, anywhere after it);
    3. trailing adjectives and auxiliaries are stripped iteratively;
    4. the survivors are title-cased.
    """
    seen: set[str] = set()
    deduped = []
    for tok in tokens:
        if tok.is_term:
            if tok.normalized in seen:
                continue
            seen.add(tok.normalized)
        deduped.append(tok)

    kept = []
    for i, tok in enumerate(deduped):
        if _is_auxiliary(tok):
            has_term = False
            for following in deduped[i + 1 :]:
                if _is_auxiliary(following):
                    break
                if following.is_term:
                    has_term = True
                    break
            if not has_term:
                continue
        kept.append(tok)

    while kept and (kept[-1].tag == Tag.ADJECTIVE or _is_auxiliary(kept[-1])):
        kept.pop()

    return apply_title_case(kept)


def postprocess_ps(hypothesis: Hypothesis) -> Hypothesis:
    """Apply the post-processing step to a raw hypothesis."""
    if hypothesis.stage is not Stage.RAW:
        raise ValueError(f"cannot post-process a {hypothesis.stage.value} hypothesis")
    tokens = ps_tokens(hypothesis.tokens)
    return replace(
        hypothesis,
        tokens=tuple(tokens),
        stage=Stage.POSTPROCESSED,
        degenerate=not tokens,
    )


# ---------------------------------------------------------------------------
# Structural filter
# ---------------------------------------------------------------------------

def filter_title(
    hypothesis: Hypothesis,
    source_title_nps: Sequence[NounPhrase],
    merge_prepositions: frozenset[str] = DEFAULT_MERGE_PREPOSITIONS,
    min_similar: int = 2,
) -> Hypothesis:
    """Accept hypotheses structurally anchored in the source title.

    A post-processed hypothesis is accepted when at least
    ``min_similar`` of its distinct multiword noun phrases each stand
    in a similar-or-equal relation to some multiword noun phrase of
    the source title; one source phrase may anchor several hypothesis
    phrases.  Everything else is rejected.
    """
    if hypothesis.stage is not Stage.POSTPROCESSED:
        raise ValueError(f"cannot filter a {hypothesis.stage.value} hypothesis")
    source_mw = [np for np in source_title_nps if np.is_multiword]
    matched = 0
    for np in chunk_noun_phrases(hypothesis.tokens, merge_prepositions):
        if not np.is_multiword:
            continue
        if any(similar_or_equal(np, src) for src in source_mw):
            matched += 1
    stage = Stage.ACCEPTED if matched >= min_similar else Stage.REJECTED
    return replace(hypothesis, stage=stage)

"""Deterministic text processing for scientific titles.

Tokenization, language identification, lexicon-based part-of-speech
tagging, and noun-phrase chunking with complex-phrase merging.  All
functions are pure: identical input always yields identical output,
and nothing here keeps mutable state, so everything is safe to call
from multiple threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence


class Tag:
    """Part-of-speech categories assigned by the tagger."""

    NOUN = "noun"
    PROPER_NOUN = "proper-noun"
    ADJECTIVE = "adjective"
    VERB = "verb"
    NUMBER = "number"
    AUXILIARY = "auxiliary"
    PUNCTUATION = "punctuation"
    OTHER = "other"


#: Tags whose tokens count as content terms.
TERM_TAGS = frozenset(
    {Tag.NOUN, Tag.PROPER_NOUN, Tag.ADJECTIVE, Tag.VERB, Tag.NUMBER}
)


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    tag: str
    is_term: bool
    char_offset: int

    def __len__(self) -> int:
        return len(self.surface)


_VOWELS = frozenset("aeiouy")


def light_stem(word: str) -> str:
    """Lowercase and strip light inflection suffixes.

    Handles plural -s/-es/-ies and -ing/-ed where enough of a stem
    remains for the result to be plausible.  Intentionally much weaker
    than a full stemmer: the goal is only that inflectional variants of
    the same term ("graph"/"graphs") normalize to one string.
    """
    w = word.casefold()
    if len(w) >= 5 and w.endswith("ies"):
        w = w[:-3] + "y"
    elif len(w) >= 5 and w.endswith("sses"):
        w = w[:-2]
    elif len(w) >= 5 and w.endswith(("xes", "zes", "ches", "shes")):
        w = w[:-2]
    elif len(w) >= 4 and w.endswith("s") and not w.endswith(("ss", "us", "is")):
        w = w[:-1]
    for suffix in ("ing", "ed"):
        if w.endswith(suffix):
            stem = w[: -len(suffix)]
            if len(stem) >= 4 and any(c in _VOWELS for c in stem):
                # undouble a doubled final consonant (running -> run),
                # but keep -ll/-ss/-zz stems intact (falling -> fall)
                if stem[-1] == stem[-2] and stem[-1] not in "lsz":
                    stem = stem[:-1]
                w = stem
            break
    return w


# Characters that join alphanumeric runs into one token when flanked
# by alphanumerics on both sides ("state-of-the-art", "don't").
_JOINERS = "-'’"


def tokenize(text: str) -> list[Token]:
    """Split text into word and punctuation tokens with char offsets.

    Every non-whitespace character of the input lands in exactly one
    token, so ``text[t.char_offset : t.char_offset + len(t.surface)]``
    reproduces each surface.  Words are alphanumeric runs (internal
    hyphens/apostrophes kept); every other character becomes its own
    punctuation token.  Word tokens are untagged (``Tag.OTHER``) until
    they pass through :func:`pos_tag`.
    """
    tokens: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isalnum():
            j = i + 1
            while j < n:
                c = text[j]
                if c.isalnum():
                    j += 1
                elif c in _JOINERS and j + 1 < n and text[j + 1].isalnum():
                    j += 1
                else:
                    break
            surface = text[i:j]
            tokens.append(
                Token(
                    surface=surface,
                    normalized=light_stem(surface),
                    tag=Tag.OTHER,
                    is_term=False,
                    char_offset=i,
                )
            )
            i = j
        else:
            tokens.append(
                Token(
                    surface=ch,
                    normalized=ch,
                    tag=Tag.PUNCTUATION,
                    is_term=False,
                    char_offset=i,
                )
            )
            i += 1
    return tokens


def tokens_from_words(words: Sequence[str], tagger: "LexiconTagger | None" = None) -> list[Token]:
    """Build a tagged token sequence from pre-split words.

    Used when reading line-oriented files whose tokens are already
    space-separated; offsets are assigned as if the words were joined
    by single spaces.
    """
    tokens: list[Token] = []
    pos = 0
    for word in words:
        tokens.append(
            Token(
                surface=word,
                normalized=light_stem(word),
                tag=Tag.OTHER,
                is_term=False,
                char_offset=pos,
            )
        )
        pos += len(word) + 1
    return pos_tag(tokens, tagger)


_NO_SPACE_BEFORE = frozenset(",:;.!?)]}%")
_NO_SPACE_AFTER = frozenset("([{")


def detokenize(tokens: Sequence[Token]) -> str:
    """Render tokens back to display text with punctuation attached."""
    parts: list[str] = []
    for tok in tokens:
        if parts and tok.surface in _NO_SPACE_BEFORE:
            parts[-1] += tok.surface
        elif parts and parts[-1][-1] in _NO_SPACE_AFTER:
            parts[-1] += tok.surface
        else:
            parts.append(tok.surface)
    return " ".join(parts)


# ---------------------------------------------------------------------------
# Language identification
# ---------------------------------------------------------------------------

_LANGUAGE_PROFILES: dict[str, frozenset[str]] = {
    "en": frozenset(
        """a an the and or but of in on at by for with from to into as is are
        was were be been this that these those it its their there not which
        what who how we our you your they them he she his her all any some
        no can could will would may might must should about between during
        through over under more most other than then when where while if
        study on new using based""".split()
    ),
    "de": frozenset(
        """der die das den dem des ein eine einer eines einem und oder aber
        von zur zum für mit auf ist sind war waren sein werden wird wurde
        nicht auch als bei aus nach über unter durch gegen ohne um im am
        beim dass wenn wie wir ihr sie er es ich dies diese dieser zwischen
        sowie bzw untersuchung beitrag""".split()
    ),
    "fr": frozenset(
        """le la les un une des du de et ou mais dans sur pour avec par est
        sont était sera être ce cette ces il elle ils elles nous vous qui
        que quoi dont où ne pas plus moins très aussi comme entre pendant
        sous vers chez leur leurs son sa ses au aux étude sur nouvelle""".split()
    ),
    "es": frozenset(
        """el la los las un una unos unas de del y o pero en sobre para con
        por es son era serán ser este esta estos estas ese esa eso aquel
        que quien cual donde no más menos muy también como entre durante
        bajo hacia su sus nuestro al estudio nuevo usando""".split()
    ),
    "it": frozenset(
        """il lo la i gli le un uno una di del della dei delle e o ma in su
        per con da è sono era essere questo questa questi queste quello che
        chi quale dove non più meno molto anche come tra fra durante sotto
        verso suo sua suoi al allo alla studio nuovo""".split()
    ),
    "pt": frozenset(
        """o a os as um uma uns umas de do da dos das e ou mas em no na nos
        nas sobre para com por é são era ser este esta estes estas esse
        essa isso que quem qual onde não mais menos muito também como entre
        durante sob seu sua seus suas ao à estudo novo usando""".split()
    ),
    "nl": frozenset(
        """de het een en of maar van in op bij voor met uit naar over onder
        door tegen zonder om is zijn was waren worden wordt niet ook als
        dat dit deze die wij jullie zij hij ik tussen tijdens naar zoals
        onderzoek nieuwe""".split()
    ),
    "ru": frozenset(
        """и в во не на я он она оно они мы вы с со как а то все она так
        его но да ты к у же за бы по ее из под для при об это этот эта
        или что кто где когда более менее очень также между без около
        исследование новый метод анализ""".split()
    ),
}


@dataclass(frozen=True)
class LanguageGuess:
    """Detected language: a two-letter code, or ``None`` for unknown."""

    code: str | None
    confidence: float

    @property
    def is_unknown(self) -> bool:
        return self.code is None


UNKNOWN_LANGUAGE = LanguageGuess(code=None, confidence=0.0)


class StopwordLanguageDetector:
    """Language identification by counting closed-class word hits.

    Each built-in profile is a stopword set for one language; the text
    is assigned to the profile matching the most alphabetic tokens.
    Texts with fewer than ``min_alpha_tokens`` alphabetic tokens, or
    with no profile hits at all, come back unknown.  Custom profiles
    may be supplied to extend or replace the built-in set.
    """

    def __init__(
        self,
        profiles: Mapping[str, Iterable[str]] | None = None,
        min_alpha_tokens: int = 3,
    ) -> None:
        source = profiles if profiles is not None else _LANGUAGE_PROFILES
        self._profiles = {code: frozenset(words) for code, words in source.items()}
        self._min_alpha_tokens = min_alpha_tokens

    def detect(self, text: str) -> LanguageGuess:
        words = [t.surface.casefold() for t in tokenize(text) if t.surface.isalpha()]
        if len(words) < self._min_alpha_tokens:
            return UNKNOWN_LANGUAGE
        best_code: str | None = None
        best_hits = 0
        for code in sorted(self._profiles):
            hits = sum(1 for w in words if w in self._profiles[code])
            if hits > best_hits:
                best_code, best_hits = code, hits
        if best_code is None:
            return UNKNOWN_LANGUAGE
        return LanguageGuess(code=best_code, confidence=best_hits / len(words))


_DEFAULT_DETECTOR = StopwordLanguageDetector()


def detect_language(text: str) -> LanguageGuess:
    """Detect the language of ``text`` with the default detector."""
    return _DEFAULT_DETECTOR.detect(text)


# ---------------------------------------------------------------------------
# Part-of-speech tagging
# ---------------------------------------------------------------------------

_AUXILIARY_WORDS = frozenset(
    """a an the this that these those each every either neither some any no
    all both such another same
    of in on at by for with from to into onto over under between among
    through during without within across behind beyond beneath beside
    besides against along around about above below after before since until
    upon toward towards per via amid despite except near off
    and or but nor so yet if than because although though while whereas
    whether unless once
    it its itself they them their theirs he him his she her hers we us our
    ours you your yours i me my mine who whom whose which what
    is are was were be been being am do does did doing done have has had
    having can could will would shall should may might must
    not""".split()
)

_NUMBER_WORDS = frozenset(
    """zero one two three four five six seven eight nine ten eleven twelve
    thirteen fourteen fifteen sixteen seventeen eighteen nineteen twenty
    thirty forty fifty sixty seventy eighty ninety hundred thousand million
    billion""".split()
)

_VERB_WORDS = frozenset(
    """run ran runs go goes went gone come came become became becomes get
    got gets make made makes take took taken takes give gave given gives
    keep kept keeps put puts bring brought say said says tell told know
    knew known see saw seen want wants using apply applies applying improve
    improves improving enhance enhances enhancing explore explores
    exploring investigate investigates investigating evaluate evaluates
    evaluating assess assesses assessing compare compares comparing combine
    combines combining predict predicts predicting detect detects detecting
    enable enables enabling""".split()
)

_ADJECTIVE_WORDS = frozenset(
    """new novel deep large small high low fast slow big long short strong
    weak good bad great real main key single dual multiple various
    different similar early late recent robust simple complex open closed
    joint hybrid optimal final better best worse worst faster slower wide
    narrow broad modern sparse dense light heavy hard soft easy common rare
    many few several""".split()
)

_ADJECTIVE_SUFFIXES = ("ical", "ic", "al", "ous", "ive", "able", "ible", "ful", "less", "ish")

# Frequent nouns whose endings look adjectival; checked before the
# suffix heuristic so they keep their noun reading.
_NOUN_OVERRIDES = frozenset(
    """music logic magic clinic critic topic fabric traffic statistic
    arithmetic material potential signal journal animal metal capital
    hospital interval proposal approval arrival trial goal crystal canal
    coal festival terminal mineral objective perspective alternative
    incentive initiative motive archive table cable variable vegetable
    fish dish wish""".split()
)


def load_wordlist(path: str | Path) -> frozenset[str]:
    """Load a one-entry-per-line UTF-8 word list (blank lines skipped)."""
    lines = Path(path).read_text(encoding="utf-8").split("\n")
    return frozenset(w.strip().casefold() for w in lines if w.strip())


def _is_number(word: str) -> bool:
    stripped = word.replace(",", "").replace(".", "")
    return stripped.isdigit() and bool(stripped)


class LexiconTagger:
    """Closed-class lexicon plus suffix heuristics, tuned for titles.

    Unknown words default to ``noun``: scientific titles are noun-heavy
    and noun phrases are what downstream consumers care about.  Each
    word list can be replaced, e.g. with :func:`load_wordlist`.
    """

    def __init__(
        self,
        auxiliary: frozenset[str] = _AUXILIARY_WORDS,
        verbs: frozenset[str] = _VERB_WORDS,
        adjectives: frozenset[str] = _ADJECTIVE_WORDS,
        number_words: frozenset[str] = _NUMBER_WORDS,
        noun_overrides: frozenset[str] = _NOUN_OVERRIDES,
    ) -> None:
        self.auxiliary = auxiliary
        self.verbs = verbs
        self.adjectives = adjectives
        self.number_words = number_words
        self.noun_overrides = noun_overrides

    def tag_word(self, surface: str) -> str:
        if not any(c.isalnum() for c in surface):
            return Tag.PUNCTUATION
        word = surface.casefold()
        if word in self.auxiliary:
            return Tag.AUXILIARY
        if word in self.number_words or _is_number(word):
            return Tag.NUMBER
        if word in self.verbs:
            return Tag.VERB
        if word in self.adjectives:
            return Tag.ADJECTIVE
        if surface.isupper() and len(surface) >= 2 and surface.isalpha():
            return Tag.PROPER_NOUN
        if any(c.isupper() for c in surface[1:]):
            return Tag.PROPER_NOUN
        if word in self.noun_overrides:
            return Tag.NOUN
        plural_like = (
            len(word) >= 4
            and word.endswith("s")
            and not word.endswith(("ss", "us", "is"))
        )
        if not plural_like:
            for suffix in _ADJECTIVE_SUFFIXES:
                if word.endswith(suffix) and len(word) > len(suffix) + 2:
                    return Tag.ADJECTIVE
        if word.endswith("ly") and len(word) > 4:
            return Tag.OTHER
        return Tag.NOUN

    def tag(self, tokens: Sequence[Token]) -> list[Token]:
        tagged = []
        for tok in tokens:
            tag = self.tag_word(tok.surface)
            tagged.append(replace(tok, tag=tag, is_term=tag in TERM_TAGS))
        return tagged


_DEFAULT_TAGGER = LexiconTagger()


def pos_tag(tokens: Sequence[Token], tagger: LexiconTagger | None = None) -> list[Token]:
    """Assign one tag per token; pure and deterministic."""
    return (tagger or _DEFAULT_TAGGER).tag(tokens)


def analyze(text: str, tagger: LexiconTagger | None = None) -> list[Token]:
    """Tokenize and tag in one step."""
    return pos_tag(tokenize(text), tagger)


# ---------------------------------------------------------------------------
# Noun-phrase chunking
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NounPhrase:
    """Contiguous token span [start, end) with its normalized term set."""

    start: int
    end: int
    terms: frozenset[str]
    is_multiword: bool

    def __len__(self) -> int:
        return self.end - self.start


DEFAULT_MERGE_PREPOSITIONS = frozenset({"of"})

# Determiners tolerated between a merge preposition and the next noun
# phrase ("energy of a graph").
_MERGE_DETERMINERS = frozenset({"a", "an", "the"})

_HEAD_TAGS = frozenset({Tag.NOUN, Tag.PROPER_NOUN})
_MODIFIER_TAGS = frozenset({Tag.ADJECTIVE, Tag.NUMBER})


def _base_noun_phrase_spans(tokens: Sequence[Token]) -> list[tuple[int, int]]:
    spans: list[tuple[int, int]] = []
    i, n = 0, len(tokens)
    while i < n:
        tag = tokens[i].tag
        if tag in _MODIFIER_TAGS or tag in _HEAD_TAGS:
            j = i
            while j < n and tokens[j].tag in _MODIFIER_TAGS:
                j += 1
            if j < n and tokens[j].tag in _HEAD_TAGS:
                k = j
                while k < n and tokens[k].tag in _HEAD_TAGS:
                    k += 1
                spans.append((i, k))
                i = k
            else:
                i = max(j, i + 1)
        else:
            i += 1
    return spans


def _make_noun_phrase(tokens: Sequence[Token], start: int, end: int) -> NounPhrase:
    terms = frozenset(t.normalized for t in tokens[start:end] if t.is_term)
    return NounPhrase(start=start, end=end, terms=terms, is_multiword=len(terms) >= 2)


def chunk_noun_phrases(
    tokens: Sequence[Token],
    merge_prepositions: frozenset[str] = DEFAULT_MERGE_PREPOSITIONS,
) -> list[NounPhrase]:
    """Extract base noun phrases and merge prepositional chains.

    Base phrases are maximal ``(adjective|number)* (noun|proper-noun)+``
    runs.  Chains of the shape NP + merge-preposition (+ determiners) +
    NP are merged into a single phrase covering the whole stretch, so
    "vertex energy of a graph" maps to one concept; the merged term set
    is the union of the parts.  Returned phrases are non-overlapping
    and ordered by span start.
    """
    spans = _base_noun_phrase_spans(tokens)
    merged: list[NounPhrase] = []
    idx = 0
    while idx < len(spans):
        start, end = spans[idx]
        while idx + 1 < len(spans):
            next_start, next_end = spans[idx + 1]
            k = end
            if (
                k >= next_start
                or tokens[k].tag != Tag.AUXILIARY
                or tokens[k].normalized not in merge_prepositions
            ):
                break
            k += 1
            while (
                k < next_start
                and tokens[k].tag == Tag.AUXILIARY
                and tokens[k].normalized in _MERGE_DETERMINERS
            ):
                k += 1
            if k != next_start:
                break
            end = next_end
            idx += 1
        merged.append(_make_noun_phrase(tokens, start, end))
        idx += 1
    return merged


# ---------------------------------------------------------------------------
# Noun-phrase relations
# ---------------------------------------------------------------------------

class NpRelation(enum.Enum):
    EQUAL = "equal"
    SIMILAR = "similar"
    COMMON_TERM = "common-term"
    UNRELATED = "unrelated"


def np_relation(a: NounPhrase, b: NounPhrase) -> NpRelation:
    """Classify the term overlap between two noun phrases.

    Equal: identical term sets, both multiword.  Similar: at least two
    common terms.  CommonTerm: exactly one.  Symmetric in its arguments.
    """
    common = a.terms & b.terms
    if a.terms == b.terms and a.is_multiword and b.is_multiword:
        return NpRelation.EQUAL
    if len(common) >= 2:
        return NpRelation.SIMILAR
    if len(common) == 1:
        return NpRelation.COMMON_TERM
    return NpRelation.UNRELATED


def similar_or_equal(a: NounPhrase, b: NounPhrase) -> bool:
    return np_relation(a, b) in (NpRelation.EQUAL, NpRelation.SIMILAR)

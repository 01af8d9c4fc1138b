"""Toolkit for conditioning, generating, and evaluating simplified scientific titles."""

from .corpus import (
    CleaningRules,
    ConditionSpec,
    Corpus,
    CorpusStats,
    Imprint,
    TrainingPair,
    build_pairs,
    clean,
    condition,
    corpus_stats,
    ingest,
    ingest_path,
    select_test_set,
    split_train_valid,
    truncate_reference,
)
from .metrics import (
    RPF,
    MetricReport,
    bleu_corpus,
    bleu_title,
    evaluate,
    lcs_length,
    np_diff_p,
    rouge_l,
    rouge_n,
    select_checkpoint,
)
from .pipeline import (
    GeneratorError,
    GeneratorSpec,
    Hypothesis,
    Stage,
    baseline_mbase,
    filter_title,
    postprocess_ps,
    ps_tokens,
    run_generator,
)
from .textproc import (
    LanguageGuess,
    LexiconTagger,
    NounPhrase,
    NpRelation,
    StopwordLanguageDetector,
    Tag,
    Token,
    analyze,
    chunk_noun_phrases,
    detect_language,
    detokenize,
    np_relation,
    pos_tag,
    tokenize,
)

__version__ = "0.1.0"

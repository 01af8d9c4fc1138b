"""Command-line orchestration of the title-simplification pipeline.

Each subcommand wraps one stage (ingest, stats, condition, split,
baseline, generate, postprocess, filter, evaluate, select-checkpoint);
``pipeline`` chains the same stage functions end to end.  Every
command writes a run manifest (config snapshot, seed, input digests)
next to its outputs.  Defaults come from the built-in configuration,
then a ``key = value`` config file, then command-line flags, in that
order of increasing precedence.

Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 external-generator failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import datetime
import hashlib
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from . import corpus as corpus_mod
from . import metrics as metrics_mod
from . import pipeline as pipeline_mod
from .corpus import CleaningRules, ConditionSpec
from .pipeline import GeneratorError, GeneratorSpec, Hypothesis, Stage
from .textproc import analyze, chunk_noun_phrases

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_GENERATOR = 3

IMPRINTS_FILE = "imprints.jsonl"
CLEANED_FILE = "cleaned.jsonl"
PAIRS_FILE = "pairs.jsonl"
TRAIN_FILE = "train.jsonl"
VALID_FILE = "valid.jsonl"
TEST_TITLES_FILE = "test_titles.txt"
RAW_HYPS_FILE = "raw_hypotheses.txt"
PS_HYPS_FILE = "ps_hypotheses.txt"
FILTERED_FILE = "filtered.txt"
ACCEPTED_FILE = "accepted.txt"
BASELINE_FILE = "baseline.txt"
STATS_FILE = "stats.json"
METRICS_JSON_FILE = "metrics.json"
METRICS_CSV_FILE = "metrics.csv"
MANIFEST_FILE = "manifest.json"


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):  # noqa: D102 - argparse hook
        raise UsageError(message)


@dataclass
class RunConfig:
    corpus: str | None = None
    out: str | None = None
    min_views: int = 1
    min_title_len: int = 20
    languages: tuple[str, ...] = ("en",)
    condition: str = "weak"
    top_views_quantile: float = 0.73
    ratio: float = 0.93
    seed: int = 0
    truncation_limit: int = 50
    char_limit: int = 75
    merge_prepositions: tuple[str, ...] = ("of",)
    filter: bool = True
    generator: str = "baseline"
    command: str | None = None
    hyp_file: str | None = None
    test_size: int = 1000

    def merge_set(self) -> frozenset[str]:
        return frozenset(self.merge_prepositions)

    def cleaning_rules(self) -> CleaningRules:
        return CleaningRules(
            min_views=self.min_views,
            min_title_len=self.min_title_len,
            allowed_languages=self.languages,
        )

    def condition_spec(self) -> ConditionSpec:
        try:
            return ConditionSpec(
                kind=self.condition, top_views_quantile=self.top_views_quantile
            )
        except ValueError as exc:
            raise UsageError(str(exc)) from exc

    def generator_spec(self) -> GeneratorSpec:
        try:
            if self.generator == "baseline":
                return GeneratorSpec.baseline(self.char_limit)
            if self.generator == "cmd":
                if not self.command:
                    raise ValueError("generator 'cmd' needs --command")
                return GeneratorSpec.external_command(self.command)
            if self.generator == "file":
                if not self.hyp_file:
                    raise ValueError("generator 'file' needs --hyp-file")
                return GeneratorSpec.hypothesis_file(self.hyp_file)
            raise ValueError(f"unknown generator {self.generator!r}")
        except ValueError as exc:
            raise UsageError(str(exc)) from exc

    def validate(self) -> None:
        if not 0.0 < self.ratio < 1.0:
            raise UsageError("ratio must be in (0, 1)")
        if self.min_views < 0 or self.min_title_len < 0:
            raise UsageError("thresholds must be non-negative")
        if self.truncation_limit < 1 or self.char_limit < 1:
            raise UsageError("limits must be positive")
        if self.test_size < 1:
            raise UsageError("test_size must be positive")


_INT_KEYS = {"min_views", "min_title_len", "seed", "truncation_limit", "char_limit", "test_size"}
_FLOAT_KEYS = {"top_views_quantile", "ratio"}
_BOOL_KEYS = {"filter"}
_LIST_KEYS = {"languages", "merge_prepositions"}


def load_config_file(path: str | Path) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").split("\n"), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _coerce(key: str, raw: str):
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _BOOL_KEYS:
            lowered = raw.lower()
            if lowered in ("on", "true", "yes", "1"):
                return True
            if lowered in ("off", "false", "no", "0"):
                return False
            raise ValueError(f"not a boolean: {raw!r}")
        if key in _LIST_KEYS:
            return tuple(item.strip() for item in raw.split(",") if item.strip())
        return raw
    except ValueError as exc:
        raise UsageError(f"config key {key!r}: {exc}") from exc


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    known = {f.name for f in dataclasses.fields(RunConfig)}
    if getattr(args, "config", None):
        for key, raw in load_config_file(args.config).items():
            if key not in known:
                raise UsageError(f"unknown config key {key!r}")
            setattr(cfg, key, _coerce(key, raw))
    for key in known:
        value = getattr(args, key, None)
        if value is None:
            continue
        if key in _LIST_KEYS and isinstance(value, str):
            value = _coerce(key, value)
        setattr(cfg, key, value)
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# Shared I/O helpers
# ---------------------------------------------------------------------------

def _read_lines(path: str | Path) -> list[str]:
    lines = Path(path).read_text(encoding="utf-8").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def _write_lines(path: str | Path, lines) -> int:
    count = 0
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for line in lines:
            handle.write(line)
            handle.write("\n")
            count += 1
    return count


def _sha256(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(65536), b""):
            digest.update(block)
    return digest.hexdigest()


def _write_manifest(
    out_dir: Path,
    command: str,
    cfg: RunConfig,
    inputs: dict[str, str | Path],
    counts: dict[str, int | float | None],
) -> None:
    manifest = {
        "command": command,
        "config": dataclasses.asdict(cfg),
        "inputs": {name: _sha256(p) for name, p in inputs.items() if p is not None},
        "counts": counts,
        "created_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    with open(out_dir / MANIFEST_FILE, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(manifest, handle, indent=2, sort_keys=True, ensure_ascii=False)
        handle.write("\n")


def _out_dir(cfg: RunConfig) -> Path:
    if not cfg.out:
        raise UsageError("an output directory is required (--out)")
    path = Path(cfg.out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _require(value: str | None, flag: str) -> str:
    if not value:
        raise UsageError(f"{flag} is required")
    return value


# ---------------------------------------------------------------------------
# Stage implementations (file -> file); reused by `pipeline`
# ---------------------------------------------------------------------------

def stage_ingest(corpus_path: str | Path, out_path: Path) -> dict:
    corpus = corpus_mod.ingest_path(corpus_path)
    corpus_mod.write_jsonl(out_path, (imp.to_record() for imp in corpus))
    return {"imprints": len(corpus), "malformed": corpus.n_malformed}


def stage_clean(corpus_path: str | Path, out_path: Path, cfg: RunConfig) -> dict:
    corpus = corpus_mod.ingest_path(corpus_path)
    cleaned = corpus_mod.clean(corpus, cfg.cleaning_rules())
    corpus_mod.write_jsonl(out_path, (imp.to_record() for imp in cleaned))
    return {
        "ingested": len(corpus),
        "malformed": corpus.n_malformed,
        "cleaned": len(cleaned),
    }


def stage_condition_from_corpus(
    corpus_path: str | Path, out_path: Path, cfg: RunConfig
) -> dict:
    corpus = corpus_mod.ingest_path(corpus_path)
    cleaned = corpus_mod.clean(corpus, cfg.cleaning_rules())
    pairs = corpus_mod.build_pairs(cleaned, cfg.truncation_limit)
    conditioned = corpus_mod.condition(pairs, cfg.condition_spec(), cfg.merge_set())
    corpus_mod.write_pairs(out_path, conditioned)
    return {
        "ingested": len(corpus),
        "malformed": corpus.n_malformed,
        "cleaned": len(cleaned),
        "pairs": len(pairs),
        "conditioned": len(conditioned),
    }


def stage_condition_from_pairs(
    pairs_path: str | Path, out_path: Path, cfg: RunConfig
) -> dict:
    pairs = corpus_mod.read_pairs(pairs_path)
    conditioned = corpus_mod.condition(pairs, cfg.condition_spec(), cfg.merge_set())
    corpus_mod.write_pairs(out_path, conditioned)
    return {"pairs": len(pairs), "conditioned": len(conditioned)}


def stage_split(
    pairs_path: str | Path, train_path: Path, valid_path: Path, cfg: RunConfig
) -> dict:
    pairs = corpus_mod.read_pairs(pairs_path)
    train, valid = corpus_mod.split_train_valid(pairs, cfg.ratio, cfg.seed)
    corpus_mod.write_pairs(train_path, train)
    corpus_mod.write_pairs(valid_path, valid)
    return {"pairs": len(pairs), "train": len(train), "valid": len(valid)}


def stage_select_test(corpus_path: str | Path, out_path: Path, cfg: RunConfig) -> dict:
    corpus = corpus_mod.ingest_path(corpus_path)
    test = corpus_mod.select_test_set(corpus, cfg.test_size, cfg.seed)
    _write_lines(out_path, (imp.title for imp in test))
    return {"eligible_selected": len(test)}


def stage_generate(titles_path: str | Path, out_path: Path, cfg: RunConfig) -> dict:
    lines = _read_lines(titles_path)
    if not lines:
        raise ValueError(f"no source titles in {titles_path}")
    sources = [analyze(line) for line in lines]
    hypotheses = pipeline_mod.run_generator(
        cfg.generator_spec(), sources, merge_prepositions=cfg.merge_set()
    )
    _write_lines(out_path, (h.text() for h in hypotheses))
    return {
        "sources": len(sources),
        "hypotheses": len(hypotheses),
        "degenerate": sum(1 for h in hypotheses if h.degenerate),
    }


def stage_postprocess(hyp_path: str | Path, out_path: Path) -> dict:
    lines = _read_lines(hyp_path)
    processed = []
    n_degenerate = 0
    for line in lines:
        tokens = analyze(line)
        raw = Hypothesis(tokens=tuple(tokens), stage=Stage.RAW, degenerate=not tokens)
        done = pipeline_mod.postprocess_ps(raw)
        n_degenerate += done.degenerate
        processed.append(done.text())
    _write_lines(out_path, processed)
    return {"hypotheses": len(lines), "degenerate": n_degenerate}


def stage_filter(
    hyp_path: str | Path,
    titles_path: str | Path,
    filtered_path: Path,
    accepted_path: Path,
    cfg: RunConfig,
) -> dict:
    hyp_lines = _read_lines(hyp_path)
    title_lines = _read_lines(titles_path)
    if len(hyp_lines) != len(title_lines):
        raise ValueError(
            f"{len(hyp_lines)} hypotheses vs {len(title_lines)} source titles"
        )
    merge = cfg.merge_set()
    filtered = []
    accepted = []
    for hyp_line, title_line in zip(hyp_lines, title_lines):
        tokens = analyze(hyp_line)
        hypothesis = Hypothesis(
            tokens=tuple(tokens), stage=Stage.POSTPROCESSED, degenerate=not tokens
        )
        source_nps = chunk_noun_phrases(analyze(title_line), merge)
        result = pipeline_mod.filter_title(hypothesis, source_nps, merge)
        if result.stage is Stage.ACCEPTED:
            filtered.append(result.text())
            accepted.append(result.text())
        else:
            filtered.append("")
    _write_lines(filtered_path, filtered)
    _write_lines(accepted_path, accepted)
    return {
        "hypotheses": len(hyp_lines),
        "accepted": len(accepted),
        "rejected": len(hyp_lines) - len(accepted),
    }


def stage_evaluate(
    hyp_path: str | Path,
    ref_path: str | Path,
    out_dir: Path | None,
    cfg: RunConfig,
    write_csv: bool = False,
) -> tuple[metrics_mod.MetricReport, dict]:
    hyp_lines = _read_lines(hyp_path)
    ref_lines = _read_lines(ref_path)
    report = metrics_mod.evaluate(
        hyp_lines, ref_lines, merge_prepositions=cfg.merge_set()
    )
    if out_dir is not None:
        with open(out_dir / METRICS_JSON_FILE, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(report.to_json())
            fh.write("\n")
        if write_csv:
            _write_lines(
                out_dir / METRICS_CSV_FILE,
                [report.csv_header(), report.to_csv_row()],
            )
    return report, {
        "titles": report.n_titles,
        "degenerate": report.n_degenerate,
    }


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_ingest(args: argparse.Namespace, cfg: RunConfig) -> int:
    out = _out_dir(cfg)
    corpus_path = _require(cfg.corpus, "--corpus")
    counts = stage_ingest(corpus_path, out / IMPRINTS_FILE)
    _write_manifest(out, "ingest", cfg, {"corpus": corpus_path}, counts)
    print(f"ingested {counts['imprints']} imprints ({counts['malformed']} malformed)")
    return EXIT_OK


def cmd_stats(args: argparse.Namespace, cfg: RunConfig) -> int:
    out = _out_dir(cfg)
    corpus_path = _require(cfg.corpus, "--corpus")
    corpus = corpus_mod.ingest_path(corpus_path)
    stats = corpus_mod.corpus_stats(corpus)
    with open(out / STATS_FILE, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(stats.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    _write_manifest(
        out,
        "stats",
        cfg,
        {"corpus": corpus_path},
        {"records": stats.n_records, "filtered": stats.n_filtered},
    )
    print(json.dumps(stats.to_dict(), indent=2, sort_keys=True))
    return EXIT_OK


def cmd_condition(args: argparse.Namespace, cfg: RunConfig) -> int:
    out = _out_dir(cfg)
    if bool(cfg.corpus) == bool(args.pairs):
        raise UsageError("give exactly one of --corpus or --pairs")
    if cfg.corpus:
        counts = stage_condition_from_corpus(cfg.corpus, out / PAIRS_FILE, cfg)
        inputs = {"corpus": cfg.corpus}
    else:
        counts = stage_condition_from_pairs(args.pairs, out / PAIRS_FILE, cfg)
        inputs = {"pairs": args.pairs}
    _write_manifest(out, "condition", cfg, inputs, counts)
    print(f"conditioned pairs: {counts['conditioned']} ({cfg.condition})")
    return EXIT_OK


def cmd_split(args: argparse.Namespace, cfg: RunConfig) -> int:
    out = _out_dir(cfg)
    pairs_path = _require(args.pairs, "--pairs")
    counts = stage_split(pairs_path, out / TRAIN_FILE, out / VALID_FILE, cfg)
    _write_manifest(out, "split", cfg, {"pairs": pairs_path}, counts)
    print(f"split {counts['pairs']} pairs into {counts['train']}/{counts['valid']}")
    return EXIT_OK


def cmd_baseline(args: argparse.Namespace, cfg: RunConfig) -> int:
    out = _out_dir(cfg)
    titles_path = _require(args.titles, "--titles")
    baseline_cfg = dataclasses.replace(cfg, generator="baseline")
    counts = stage_generate(titles_path, out / BASELINE_FILE, baseline_cfg)
    _write_manifest(out, "baseline", cfg, {"titles": titles_path}, counts)
    print(f"wrote {counts['hypotheses']} baseline titles")
    return EXIT_OK


def cmd_generate(args: argparse.Namespace, cfg: RunConfig) -> int:
    out = _out_dir(cfg)
    titles_path = _require(args.titles, "--titles")
    counts = stage_generate(titles_path, out / RAW_HYPS_FILE, cfg)
    _write_manifest(out, "generate", cfg, {"titles": titles_path}, counts)
    print(f"generated {counts['hypotheses']} raw hypotheses")
    return EXIT_OK


def cmd_postprocess(args: argparse.Namespace, cfg: RunConfig) -> int:
    out = _out_dir(cfg)
    hyp_path = _require(args.hyp, "--hyp")
    counts = stage_postprocess(hyp_path, out / PS_HYPS_FILE)
    _write_manifest(out, "postprocess", cfg, {"hyp": hyp_path}, counts)
    print(f"post-processed {counts['hypotheses']} hypotheses")
    return EXIT_OK


def cmd_filter(args: argparse.Namespace, cfg: RunConfig) -> int:
    out = _out_dir(cfg)
    hyp_path = _require(args.hyp, "--hyp")
    titles_path = _require(args.titles, "--titles")
    counts = stage_filter(
        hyp_path, titles_path, out / FILTERED_FILE, out / ACCEPTED_FILE, cfg
    )
    _write_manifest(
        out, "filter", cfg, {"hyp": hyp_path, "titles": titles_path}, counts
    )
    print(f"accepted {counts['accepted']} of {counts['hypotheses']} hypotheses")
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace, cfg: RunConfig) -> int:
    hyp_path = _require(args.hyp, "--hyp")
    ref_path = _require(args.ref, "--ref")
    out = _out_dir(cfg) if cfg.out else None
    report, counts = stage_evaluate(hyp_path, ref_path, out, cfg, write_csv=args.csv)
    if out is not None:
        _write_manifest(
            out, "evaluate", cfg, {"hyp": hyp_path, "ref": ref_path}, counts
        )
    print(report.to_json())
    return EXIT_OK


def cmd_select_checkpoint(args: argparse.Namespace, cfg: RunConfig) -> int:
    ref_path = _require(args.ref, "--ref")
    references = _read_lines(ref_path)
    runs = {}
    run_paths = {}
    for item in args.run or []:
        if "=" not in item:
            raise UsageError(f"--run expects NAME=PATH, got {item!r}")
        name, _, path = item.partition("=")
        runs[name] = _read_lines(path)
        run_paths[f"run:{name}"] = path
    if not runs:
        raise UsageError("at least one --run NAME=PATH is required")
    best = metrics_mod.select_checkpoint(
        runs, references, merge_prepositions=cfg.merge_set()
    )
    if cfg.out:
        out = _out_dir(cfg)
        _write_lines(out / "selected.txt", [best])
        _write_manifest(
            out,
            "select-checkpoint",
            cfg,
            {"ref": ref_path, **run_paths},
            {"runs": len(runs)},
        )
    print(best)
    return EXIT_OK


def cmd_pipeline(args: argparse.Namespace, cfg: RunConfig) -> int:
    out = _out_dir(cfg)
    corpus_path = _require(cfg.corpus, "--corpus (or corpus= in the config file)")
    counts: dict = {}

    counts.update(stage_ingest(corpus_path, out / IMPRINTS_FILE))
    counts.update(stage_clean(out / IMPRINTS_FILE, out / CLEANED_FILE, cfg))
    counts.update(
        stage_condition_from_corpus(out / IMPRINTS_FILE, out / PAIRS_FILE, cfg)
    )

    conditioned = corpus_mod.read_pairs(out / PAIRS_FILE)
    if len(conditioned) >= 2:
        counts.update(
            stage_split(out / PAIRS_FILE, out / TRAIN_FILE, out / VALID_FILE, cfg)
        )
    else:
        logger.warning("too few conditioned pairs to split; writing empty partitions")
        corpus_mod.write_pairs(out / TRAIN_FILE, conditioned)
        corpus_mod.write_pairs(out / VALID_FILE, [])
        counts.update({"train": len(conditioned), "valid": 0})

    counts.update(stage_select_test(corpus_path, out / TEST_TITLES_FILE, cfg))
    if counts["eligible_selected"] == 0:
        raise ValueError("no imprints satisfy the test-set criteria")

    counts.update(stage_generate(out / TEST_TITLES_FILE, out / RAW_HYPS_FILE, cfg))
    counts.update(stage_postprocess(out / RAW_HYPS_FILE, out / PS_HYPS_FILE))

    if cfg.filter:
        counts.update(
            stage_filter(
                out / PS_HYPS_FILE,
                out / TEST_TITLES_FILE,
                out / FILTERED_FILE,
                out / ACCEPTED_FILE,
                cfg,
            )
        )
        final_path = out / FILTERED_FILE
    else:
        final_path = out / PS_HYPS_FILE

    report, eval_counts = stage_evaluate(
        final_path, out / TEST_TITLES_FILE, out, cfg, write_csv=True
    )
    counts.update(eval_counts)

    _write_manifest(out, "pipeline", cfg, {"corpus": corpus_path}, counts)
    print(report.to_json())
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(
        prog="titlekit",
        description="Corpus-to-evaluation toolkit for scientific title simplification.",
    )
    parser.add_argument("--verbose", action="store_true", help="log at INFO level")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help_: str) -> _ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("--config", help="flat key = value configuration file")
        p.add_argument("--out", help="output directory")
        p.add_argument("--seed", type=int)
        p.add_argument("--merge-prepositions", dest="merge_prepositions")
        return p

    p = add("ingest", cmd_ingest, "read a JSONL corpus of imprints")
    p.add_argument("--corpus")

    p = add("stats", cmd_stats, "views/length statistics of a corpus")
    p.add_argument("--corpus")

    p = add("condition", cmd_condition, "build and condition training pairs")
    p.add_argument("--corpus")
    p.add_argument("--pairs")
    p.add_argument("--spec", dest="condition",
                   choices=["weak", "conditioned", "strong", "top-views"])
    p.add_argument("--top-views-quantile", dest="top_views_quantile", type=float)
    p.add_argument("--min-views", dest="min_views", type=int)
    p.add_argument("--min-title-len", dest="min_title_len", type=int)
    p.add_argument("--languages")
    p.add_argument("--truncation-limit", dest="truncation_limit", type=int)

    p = add("split", cmd_split, "split pairs into train/validation")
    p.add_argument("--pairs")
    p.add_argument("--ratio", type=float)

    p = add("baseline", cmd_baseline, "prefix baseline titles")
    p.add_argument("--titles")
    p.add_argument("--char-limit", dest="char_limit", type=int)

    p = add("generate", cmd_generate, "produce raw hypotheses")
    p.add_argument("--titles")
    p.add_argument("--generator", choices=["baseline", "cmd", "file"])
    p.add_argument("--command")
    p.add_argument("--hyp-file", dest="hyp_file")
    p.add_argument("--char-limit", dest="char_limit", type=int)

    p = add("postprocess", cmd_postprocess, "apply the post-processing step")
    p.add_argument("--hyp")

    p = add("filter", cmd_filter, "drop hypotheses without source structure")
    p.add_argument("--hyp")
    p.add_argument("--titles")

    p = add("evaluate", cmd_evaluate, "score hypotheses against references")
    p.add_argument("--hyp")
    p.add_argument("--ref")
    p.add_argument("--csv", action="store_true", help="also write a CSV row")

    p = add("select-checkpoint", cmd_select_checkpoint,
            "pick the run with the best noun-phrase precision")
    p.add_argument("--run", action="append", metavar="NAME=PATH")
    p.add_argument("--ref")

    p = add("pipeline", cmd_pipeline, "run every stage end to end")
    p.add_argument("--corpus")
    p.add_argument("--spec", dest="condition",
                   choices=["weak", "conditioned", "strong", "top-views"])
    p.add_argument("--top-views-quantile", dest="top_views_quantile", type=float)
    p.add_argument("--min-views", dest="min_views", type=int)
    p.add_argument("--min-title-len", dest="min_title_len", type=int)
    p.add_argument("--languages")
    p.add_argument("--truncation-limit", dest="truncation_limit", type=int)
    p.add_argument("--ratio", type=float)
    p.add_argument("--generator", choices=["baseline", "cmd", "file"])
    p.add_argument("--command")
    p.add_argument("--hyp-file", dest="hyp_file")
    p.add_argument("--char-limit", dest="char_limit", type=int)
    p.add_argument("--test-size", dest="test_size", type=int)
    p.add_argument("--filter", dest="filter", action=argparse.BooleanOptionalAction)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = resolve_config(args)
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GeneratorError as exc:
        print(f"generator error: {exc}", file=sys.stderr)
        return EXIT_GENERATOR
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())

import json
import random
import subprocess
import sys
import time
from pathlib import Path

import pytest

NOUNS = [
    "graph", "energy", "vertex", "network", "model", "system", "data",
    "knowledge", "management", "service", "analysis", "method", "structure",
    "algorithm", "detection", "evaluation", "information", "language",
    "learning", "title", "theory", "matrix", "signal", "spectrum", "cluster",
    "pattern", "feature", "process", "design", "control",
]
AUXILIARIES = ["of", "for", "with", "in", "on"]


def copy_line_words(rng: random.Random, min_len: int = 4, max_len: int = 8) -> list[str]:
    n = rng.randint(min_len, max_len)
    words: list[str] = []
    while len(words) < n:
        words.append(rng.choice(NOUNS))
        if rng.random() < 0.25:
            words.append(rng.choice(AUXILIARIES))
    return words[:n]


def phrase_rich_words(rng: random.Random) -> list[str]:
    """Source lines built from noun bigrams, so multiword phrases abound."""
    words: list[str] = []
    for i in range(rng.randint(2, 3)):
        if i:
            words.append(rng.choice(AUXILIARIES))
        words.extend(rng.sample(NOUNS, 2))
    return words


def write_pair_file(
    path: Path, rng: random.Random, count: int, oov_rate: float = 0.0
) -> None:
    """Identity-copy pairs; with ``oov_rate``, a pair carries a unique
    nonce token that a capped vocabulary will exclude, so the target is
    reachable only through the copy mechanism."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for i in range(count):
            words = copy_line_words(rng)
            if rng.random() < oov_rate:
                words.insert(rng.randrange(len(words) + 1), f"rare{i:04d}")
            fh.write(
                json.dumps(
                    {
                        "source_imprint": f"p{i:04d}",
                        "reference": words,
                        "target": words,
                        "views": 5,
                        "condition_flags": ["weak"],
                    }
                )
                + "\n"
            )


#: vocabulary budget that covers the closed toy word list but none of
#: the per-pair nonce tokens
TOY_VOCAB_SIZE = 4 + len(NOUNS) + len(AUXILIARIES)


def titlekit_cmd(*args: str) -> list[str]:
    return [sys.executable, "-m", "titlekit", *args]


def titlegen_infer_command(checkpoint: Path) -> str:
    return f"{sys.executable} -m titlegen infer --checkpoint {checkpoint}"


def run_titlekit(*args: str) -> subprocess.CompletedProcess:
    return subprocess.run(titlekit_cmd(*args), capture_output=True, text=True)


class ToyTraining:
    def __init__(self, root: Path):
        from titlegen.train import TrainConfig, train

        rng = random.Random(1234)
        self.root = root
        self.pair_file = root / "pairs.jsonl"
        write_pair_file(self.pair_file, rng, 500, oov_rate=0.5)
        self.heldout = [copy_line_words(rng) for _ in range(40)]
        start = time.perf_counter()
        self.checkpoints = train(
            TrainConfig(
                train_file=str(self.pair_file),
                out_dir=str(root / "checkpoints"),
                epochs=10,
                checkpoint_interval=4,
                max_vocab=TOY_VOCAB_SIZE,
                seed=0,
            ),
            log=lambda message: None,
        )
        self.train_seconds = time.perf_counter() - start


@pytest.fixture(scope="session")
def toy_training(tmp_path_factory) -> ToyTraining:
    return ToyTraining(tmp_path_factory.mktemp("toy"))

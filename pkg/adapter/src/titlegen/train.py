"""Training loop with interval checkpointing."""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass
from pathlib import Path

import torch

from .data import Vocab, batches, load_pairs
from .model import PointerGenerator


@dataclass
class TrainConfig:
    train_file: str
    out_dir: str
    num_layers: int = 1
    emb_dim: int = 64
    hidden_size: int = 128
    epochs: int = 10
    batch_size: int = 32
    learning_rate: float = 3e-3
    checkpoint_interval: int = 4
    grad_clip: float = 2.0
    max_vocab: int = 20000
    max_decode_len: int = 60
    seed: int = 0
    min_pairs: int = 100

    def validate(self) -> None:
        if self.num_layers not in (1, 2):
            raise ValueError("num_layers must be 1 or 2")
        if self.checkpoint_interval < 1:
            raise ValueError("checkpoint_interval must be >= 1")
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be positive")


def save_checkpoint(path: Path, model: PointerGenerator, vocab: Vocab, config: TrainConfig) -> None:
    torch.save(
        {
            "model": model.state_dict(),
            "vocab": vocab.to_list(),
            "config": asdict(config),
        },
        path,
    )


def train(config: TrainConfig, log=print) -> list[Path]:
    """Train on a pair file, writing a checkpoint every interval epochs.

    Returns the checkpoint paths in the order written.  The final epoch
    is always checkpointed.  Fully deterministic for a fixed seed.
    """
    config.validate()
    pairs = load_pairs(config.train_file)
    if len(pairs) < config.min_pairs:
        raise ValueError(
            f"need at least {config.min_pairs} training pairs, got {len(pairs)}"
        )
    torch.manual_seed(config.seed)
    rng = random.Random(config.seed)
    vocab = Vocab.build(pairs, config.max_vocab)
    model = PointerGenerator(
        len(vocab), config.emb_dim, config.hidden_size, config.num_layers
    )
    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)

    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    model.train()
    for epoch in range(1, config.epochs + 1):
        total = 0.0
        n_batches = 0
        for batch in batches(pairs, vocab, config.batch_size, rng):
            optimizer.zero_grad()
            loss = model(batch)
            loss.backward()
            torch.nn.utils.clip_grad_norm_(model.parameters(), config.grad_clip)
            optimizer.step()
            total += loss.item()
            n_batches += 1
        log(f"epoch {epoch}/{config.epochs}: loss {total / n_batches:.4f}")
        if epoch % config.checkpoint_interval == 0 or epoch == config.epochs:
            path = out_dir / f"cp_{epoch:03d}.pt"
            save_checkpoint(path, model, vocab, config)
            written.append(path)
    return written

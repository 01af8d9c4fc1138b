"""Greedy inference over the generator line protocol.

Reads one lowercased, space-tokenized source title per stdin line and
writes exactly one hypothesis line per input line, same order, UTF-8
with LF endings.  An empty input line yields an empty output line.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence, TextIO

import torch

from .data import BOS, EOS, UNK, Vocab, encode_source
from .model import PointerGenerator


def load_checkpoint(path: str | Path) -> tuple[PointerGenerator, Vocab, dict]:
    payload = torch.load(path, map_location="cpu", weights_only=False)
    vocab = Vocab.from_list(payload["vocab"])
    config = payload["config"]
    model = PointerGenerator(
        len(vocab),
        config["emb_dim"],
        config["hidden_size"],
        config["num_layers"],
    )
    model.load_state_dict(payload["model"])
    model.eval()
    return model, vocab, config


@torch.no_grad()
def generate_tokens(
    model: PointerGenerator,
    vocab: Vocab,
    words: Sequence[str],
    max_len: int = 60,
) -> list[str]:
    src_ids, src_ext, oovs = encode_source([w.lower() for w in words], vocab)
    src = torch.tensor([src_ids], dtype=torch.long)
    src_ext_t = torch.tensor([src_ext], dtype=torch.long)
    src_mask = src.ne(-1)  # no padding in a single-line batch
    enc_out, state = model.encode(src)
    prev = BOS
    out: list[str] = []
    for _ in range(max_len):
        emb = model.embedding(torch.tensor([prev], dtype=torch.long))
        dist, state, _ = model.step(
            emb, state, enc_out, src_mask, src_ext_t, len(oovs)
        )
        idx = int(dist.squeeze(0).argmax().item())
        if idx == EOS:
            break
        if idx >= len(vocab):
            out.append(oovs[idx - len(vocab)])
            prev = UNK
        else:
            out.append(vocab.token(idx))
            prev = idx
    return out


def run(checkpoint: str | Path, stdin: TextIO, stdout: TextIO) -> int:
    model, vocab, config = load_checkpoint(checkpoint)
    max_len = int(config.get("max_decode_len", 60))
    for line in stdin:
        words = line.rstrip("\n").split(" ")
        words = [w for w in words if w]
        if not words:
            stdout.write("\n")
            continue
        tokens = generate_tokens(model, vocab, words, max_len)
        stdout.write(" ".join(t.lower() for t in tokens))
        stdout.write("\n")
    stdout.flush()
    return 0

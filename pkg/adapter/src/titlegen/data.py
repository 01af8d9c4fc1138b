"""Pair-file loading, vocabulary, and batching.

Training data is the pair format written by the primary toolkit: JSON
Lines with lowercased ``reference``/``target`` token arrays.  Out-of-
vocabulary source tokens get temporary per-example ids past the end of
the vocabulary so the copy mechanism can point at them.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import torch

PAD, UNK, BOS, EOS = 0, 1, 2, 3
SPECIALS = ["<pad>", "<unk>", "<s>", "</s>"]


class Vocab:
    def __init__(self, tokens: Sequence[str]):
        self._tokens = list(SPECIALS) + [t for t in tokens if t not in SPECIALS]
        self._ids = {tok: i for i, tok in enumerate(self._tokens)}

    @classmethod
    def build(cls, pairs: Sequence[tuple[list[str], list[str]]], max_size: int = 20000) -> "Vocab":
        counts: Counter = Counter()
        for reference, target in pairs:
            counts.update(reference)
            counts.update(target)
        ranked = sorted(counts, key=lambda tok: (-counts[tok], tok))
        return cls(ranked[: max_size - len(SPECIALS)])

    def id(self, token: str) -> int:
        return self._ids.get(token, UNK)

    def token(self, idx: int) -> str:
        return self._tokens[idx]

    def __len__(self) -> int:
        return len(self._tokens)

    def to_list(self) -> list[str]:
        return list(self._tokens)

    @classmethod
    def from_list(cls, tokens: list[str]) -> "Vocab":
        vocab = cls.__new__(cls)
        vocab._tokens = list(tokens)
        vocab._ids = {tok: i for i, tok in enumerate(tokens)}
        return vocab


def load_pairs(path: str | Path) -> list[tuple[list[str], list[str]]]:
    """Read reference/target token pairs; abort on the first bad line."""
    pairs = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{lineno}: not valid JSON ({exc})") from exc
            reference = record.get("reference") if isinstance(record, dict) else None
            target = record.get("target") if isinstance(record, dict) else None
            for name, side in (("reference", reference), ("target", target)):
                if (
                    not isinstance(side, list)
                    or not side
                    or not all(isinstance(tok, str) and tok for tok in side)
                ):
                    raise ValueError(
                        f"{path}:{lineno}: {name} must be a non-empty list of tokens"
                    )
            pairs.append(([t.lower() for t in reference], [t.lower() for t in target]))
    if not pairs:
        raise ValueError(f"{path}: no training pairs found")
    return pairs


def encode_source(words: Sequence[str], vocab: Vocab) -> tuple[list[int], list[int], list[str]]:
    """(vocab ids, extended ids, oov words in first-occurrence order)."""
    ids, extended, oovs = [], [], []
    for word in words:
        idx = vocab.id(word)
        ids.append(idx)
        if idx == UNK:
            if word not in oovs:
                oovs.append(word)
            extended.append(len(vocab) + oovs.index(word))
        else:
            extended.append(idx)
    return ids, extended, oovs


def encode_target(words: Sequence[str], vocab: Vocab, oovs: Sequence[str]) -> list[int]:
    """Target ids over the extended vocabulary (copyable source OOVs)."""
    out = []
    for word in words:
        idx = vocab.id(word)
        if idx == UNK and word in oovs:
            idx = len(vocab) + oovs.index(word)
        out.append(idx)
    return out


@dataclass
class Batch:
    src: torch.Tensor        # (B, S) vocab ids, PAD-padded
    src_mask: torch.Tensor   # (B, S) True on real tokens
    src_ext: torch.Tensor    # (B, S) extended ids
    tgt_in: torch.Tensor     # (B, T) decoder inputs (BOS + vocab ids)
    tgt_out: torch.Tensor    # (B, T) gold extended ids (+ EOS)
    tgt_mask: torch.Tensor   # (B, T)
    max_oov: int


def make_batch(pairs: Sequence[tuple[list[str], list[str]]], vocab: Vocab) -> Batch:
    encoded = []
    for reference, target in pairs:
        src_ids, src_ext, oovs = encode_source(reference, vocab)
        tgt_ext = encode_target(target, vocab, oovs) + [EOS]
        tgt_in = [BOS] + [vocab.id(w) for w in target]
        encoded.append((src_ids, src_ext, tgt_in, tgt_ext, len(oovs)))
    s_max = max(len(e[0]) for e in encoded)
    t_max = max(len(e[2]) for e in encoded)
    max_oov = max(e[4] for e in encoded)

    def pad(rows, width):
        return torch.tensor(
            [row + [PAD] * (width - len(row)) for row in rows], dtype=torch.long
        )

    src = pad([e[0] for e in encoded], s_max)
    src_ext = pad([e[1] for e in encoded], s_max)
    tgt_in = pad([e[2] for e in encoded], t_max)
    tgt_out = pad([e[3] for e in encoded], t_max)
    return Batch(
        src=src,
        src_mask=src.ne(PAD),
        src_ext=src_ext,
        tgt_in=tgt_in,
        tgt_out=tgt_out,
        tgt_mask=tgt_out.ne(PAD),
        max_oov=max_oov,
    )


def batches(
    pairs: Sequence[tuple[list[str], list[str]]],
    vocab: Vocab,
    batch_size: int,
    rng: random.Random | None = None,
) -> Iterator[Batch]:
    order = list(range(len(pairs)))
    if rng is not None:
        rng.shuffle(order)
    for start in range(0, len(order), batch_size):
        chunk = [pairs[i] for i in order[start : start + batch_size]]
        yield make_batch(chunk, vocab)

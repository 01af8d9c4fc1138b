"""Attention-based encoder-decoder with a copy (pointer) mechanism.

Bidirectional LSTM encoder, unidirectional LSTM decoder (1 or 2
layers) with multiplicative attention, and a pointer-generator output:
a mixing gate interpolates between generating from the vocabulary and
copying a source token through the attention distribution.  The output
distribution lives over the vocabulary extended with the example's
source OOV slots.  No coverage term is used.
"""

from __future__ import annotations

import torch
import torch.nn as nn
import torch.nn.functional as F

from .data import PAD, Batch

EPS = 1e-10


class PointerGenerator(nn.Module):
    def __init__(
        self,
        vocab_size: int,
        emb_dim: int = 64,
        hidden_size: int = 128,
        num_layers: int = 1,
    ):
        super().__init__()
        if num_layers not in (1, 2):
            raise ValueError("num_layers must be 1 or 2")
        self.vocab_size = vocab_size
        self.num_layers = num_layers
        self.hidden_size = hidden_size
        self.embedding = nn.Embedding(vocab_size, emb_dim, padding_idx=PAD)
        self.encoder = nn.LSTM(
            emb_dim, hidden_size, num_layers, batch_first=True, bidirectional=True
        )
        self.bridge_h = nn.Linear(2 * hidden_size, hidden_size)
        self.bridge_c = nn.Linear(2 * hidden_size, hidden_size)
        self.decoder = nn.LSTM(emb_dim, hidden_size, num_layers, batch_first=True)
        self.attn = nn.Linear(2 * hidden_size, hidden_size, bias=False)
        self.vocab_out = nn.Linear(3 * hidden_size, vocab_size)
        self.copy_gate = nn.Linear(3 * hidden_size + emb_dim, 1)

    def encode(self, src: torch.Tensor):
        emb = self.embedding(src)
        enc_out, (h, c) = self.encoder(emb)

        def merge(state: torch.Tensor) -> torch.Tensor:
            # (layers*2, B, H) -> (layers, B, 2H)
            layers2, batch, hidden = state.shape
            state = state.view(self.num_layers, 2, batch, hidden)
            return torch.cat([state[:, 0], state[:, 1]], dim=-1)

        h0 = torch.tanh(self.bridge_h(merge(h)))
        c0 = torch.tanh(self.bridge_c(merge(c)))
        return enc_out, (h0, c0)

    def step(
        self,
        token_emb: torch.Tensor,   # (B, E)
        state,                     # decoder LSTM state
        enc_out: torch.Tensor,     # (B, S, 2H)
        src_mask: torch.Tensor,    # (B, S)
        src_ext: torch.Tensor,     # (B, S) extended ids
        max_oov: int,
    ):
        dec_out, state = self.decoder(token_emb.unsqueeze(1), state)
        scores = torch.bmm(dec_out, self.attn(enc_out).transpose(1, 2))  # (B,1,S)
        scores = scores.masked_fill(~src_mask.unsqueeze(1), float("-inf"))
        attn = F.softmax(scores, dim=-1)
        context = torch.bmm(attn, enc_out)  # (B,1,2H)
        features = torch.cat([dec_out, context], dim=-1)  # (B,1,3H)
        vocab_dist = F.softmax(self.vocab_out(features), dim=-1)  # (B,1,V)
        gate_in = torch.cat([features, token_emb.unsqueeze(1)], dim=-1)
        p_gen = torch.sigmoid(self.copy_gate(gate_in))  # (B,1,1)

        batch = token_emb.size(0)
        extended = torch.zeros(
            batch, 1, self.vocab_size + max_oov, device=token_emb.device
        )
        extended[:, :, : self.vocab_size] = p_gen * vocab_dist
        extended.scatter_add_(2, src_ext.unsqueeze(1), (1.0 - p_gen) * attn)
        return extended.squeeze(1), state, attn.squeeze(1)

    def forward(self, batch: Batch) -> torch.Tensor:
        """Mean negative log-likelihood under teacher forcing."""
        enc_out, state = self.encode(batch.src)
        emb = self.embedding(batch.tgt_in)
        steps = []
        for t in range(batch.tgt_in.size(1)):
            dist, state, _ = self.step(
                emb[:, t], state, enc_out, batch.src_mask, batch.src_ext, batch.max_oov
            )
            steps.append(dist)
        dists = torch.stack(steps, dim=1)  # (B, T, V+max_oov)
        gold = dists.gather(2, batch.tgt_out.unsqueeze(-1)).squeeze(-1)
        nll = -torch.log(gold + EPS)
        mask = batch.tgt_mask.float()
        return (nll * mask).sum() / mask.sum()

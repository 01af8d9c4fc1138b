import json
import random

import pytest
import torch

from titlegen.data import (
    BOS,
    EOS,
    PAD,
    UNK,
    Vocab,
    encode_source,
    encode_target,
    load_pairs,
    make_batch,
)
from titlegen.model import PointerGenerator

from conftest import copy_line_words, write_pair_file


# ---------------------------------------------------------------------------
# pair loading
# ---------------------------------------------------------------------------

def test_load_pairs_round_trip(tmp_path):
    path = tmp_path / "pairs.jsonl"
    write_pair_file(path, random.Random(0), 120)
    pairs = load_pairs(path)
    assert len(pairs) == 120
    assert all(ref and tgt for ref, tgt in pairs)


def test_load_pairs_reports_bad_json_line_number(tmp_path):
    path = tmp_path / "pairs.jsonl"
    good = json.dumps({"reference": ["a", "b"], "target": ["a"]})
    path.write_text(good + "\nnot json\n", encoding="utf-8")
    with pytest.raises(ValueError, match=":2:"):
        load_pairs(path)


def test_load_pairs_reports_missing_side_line_number(tmp_path):
    path = tmp_path / "pairs.jsonl"
    good = json.dumps({"reference": ["a", "b"], "target": ["a"]})
    bad = json.dumps({"reference": ["a", "b"]})
    path.write_text(good + "\n" + good + "\n" + bad + "\n", encoding="utf-8")
    with pytest.raises(ValueError, match=":3:.*target"):
        load_pairs(path)


def test_load_pairs_rejects_empty_token_lists(tmp_path):
    path = tmp_path / "pairs.jsonl"
    path.write_text(
        json.dumps({"reference": [], "target": ["a"]}) + "\n", encoding="utf-8"
    )
    with pytest.raises(ValueError, match=":1:"):
        load_pairs(path)


def test_load_pairs_empty_file_is_an_error(tmp_path):
    path = tmp_path / "pairs.jsonl"
    path.write_text("", encoding="utf-8")
    with pytest.raises(ValueError):
        load_pairs(path)


def test_load_pairs_lowercases(tmp_path):
    path = tmp_path / "pairs.jsonl"
    path.write_text(
        json.dumps({"reference": ["Graph", "ENERGY"], "target": ["Graph"]}) + "\n",
        encoding="utf-8",
    )
    ((ref, tgt),) = [load_pairs(path)[0]]
    assert ref == ["graph", "energy"]
    assert tgt == ["graph"]


# ---------------------------------------------------------------------------
# vocabulary and encoding
# ---------------------------------------------------------------------------

def test_vocab_is_deterministic_and_serializable():
    pairs = [(["b", "a", "a"], ["c"]), (["c", "c"], ["a"])]
    vocab1 = Vocab.build(pairs)
    vocab2 = Vocab.build(list(pairs))
    assert vocab1.to_list() == vocab2.to_list()
    restored = Vocab.from_list(vocab1.to_list())
    assert restored.id("a") == vocab1.id("a")
    # frequency then lexicographic: a(3), c(3) ... a before c
    assert vocab1.to_list()[4:] == ["a", "c", "b"]


def test_encode_source_assigns_extended_ids_to_oovs():
    vocab = Vocab.build([(["graph", "energy"], ["graph"])])
    ids, extended, oovs = encode_source(["graph", "mystery", "mystery", "puzzle"], vocab)
    assert ids == [vocab.id("graph"), UNK, UNK, UNK]
    assert oovs == ["mystery", "puzzle"]
    assert extended == [vocab.id("graph"), len(vocab), len(vocab), len(vocab) + 1]


def test_encode_target_uses_source_oov_slots():
    vocab = Vocab.build([(["graph"], ["graph"])])
    ids = encode_target(["graph", "mystery", "other"], vocab, ["mystery"])
    assert ids == [vocab.id("graph"), len(vocab), UNK]


def test_make_batch_shapes_and_masks():
    vocab = Vocab.build([(["graph", "energy"], ["graph", "energy"])])
    batch = make_batch(
        [(["graph", "energy"], ["graph"]), (["energy"], ["energy", "graph"])], vocab
    )
    assert batch.src.shape == batch.src_ext.shape == (2, 2)
    assert batch.tgt_in.shape == batch.tgt_out.shape == (2, 3)
    assert batch.tgt_in[0, 0].item() == BOS
    assert batch.tgt_out[0, 1].item() == EOS
    assert bool(batch.src_mask[1, 1]) is False  # padded position
    assert batch.tgt_out[0, 2].item() == PAD
    assert bool(batch.tgt_mask[0, 2]) is False


# ---------------------------------------------------------------------------
# model
# ---------------------------------------------------------------------------

def _tiny_batch():
    rng = random.Random(5)
    pairs = [(copy_line_words(rng), copy_line_words(rng)) for _ in range(4)]
    vocab = Vocab.build(pairs)
    return make_batch(pairs, vocab), vocab


def test_model_forward_returns_finite_scalar_loss():
    torch.manual_seed(0)
    batch, vocab = _tiny_batch()
    model = PointerGenerator(len(vocab), emb_dim=16, hidden_size=24, num_layers=1)
    loss = model(batch)
    assert loss.dim() == 0
    assert torch.isfinite(loss)


def test_model_two_layer_variant_runs():
    torch.manual_seed(0)
    batch, vocab = _tiny_batch()
    model = PointerGenerator(len(vocab), emb_dim=16, hidden_size=24, num_layers=2)
    assert torch.isfinite(model(batch))


def test_model_rejects_other_layer_counts():
    with pytest.raises(ValueError):
        PointerGenerator(10, num_layers=3)


def test_step_distribution_sums_to_one_over_extended_vocab():
    torch.manual_seed(0)
    batch, vocab = _tiny_batch()
    model = PointerGenerator(len(vocab), emb_dim=16, hidden_size=24)
    enc_out, state = model.encode(batch.src)
    emb = model.embedding(batch.tgt_in[:, 0])
    dist, _, attn = model.step(
        emb, state, enc_out, batch.src_mask, batch.src_ext, batch.max_oov
    )
    assert dist.shape == (4, len(vocab) + batch.max_oov)
    assert torch.allclose(dist.sum(dim=-1), torch.ones(4), atol=1e-5)
    # attention never leaks onto padding
    assert torch.all(attn[~batch.src_mask] == 0)

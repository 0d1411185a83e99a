"""Shared fixture: a tiny character-level GPT-2 checkpoint on disk.

Built locally so tests never touch the network; the load path through
AutoTokenizer/AutoModel is the same one a published checkpoint takes.
"""

import string
from dataclasses import dataclass

import pytest
import torch

_CHARS = sorted(set(string.printable) | set("∀∃¬∧∨→⊥"))


@dataclass(frozen=True)
class Checkpoint:
    path: str
    context_window: int
    hidden: int


@pytest.fixture(scope="session")
def checkpoint(tmp_path_factory) -> Checkpoint:
    from tokenizers import Regex, Tokenizer, models, pre_tokenizers
    from transformers import GPT2Config, GPT2LMHeadModel, PreTrainedTokenizerFast

    path = tmp_path_factory.mktemp("tiny-ckpt")
    vocab = {"[UNK]": 0, "[PAD]": 1}
    for ch in _CHARS:
        vocab[ch] = len(vocab)
    inner = Tokenizer(models.WordLevel(vocab, unk_token="[UNK]"))
    inner.pre_tokenizer = pre_tokenizers.Split(Regex(r"[\s\S]"), "isolated")
    tokenizer = PreTrainedTokenizerFast(
        tokenizer_object=inner, unk_token="[UNK]", pad_token="[PAD]")
    tokenizer.save_pretrained(path)

    torch.manual_seed(20240815)
    config = GPT2Config(
        vocab_size=len(vocab),
        n_positions=256,
        n_embd=32,
        n_layer=2,
        n_head=2,
        pad_token_id=1,
    )
    GPT2LMHeadModel(config).save_pretrained(path)
    return Checkpoint(path=str(path), context_window=256, hidden=32)

import csv
import json

import pytest


@pytest.fixture(scope="session")
def tiny_bert_dir(tmp_path_factory):
    """Seeded, randomly initialized 1-layer BERT with hidden size 768.

    Saved to disk so the exporter loads it exactly like a cached checkpoint;
    no network involved.
    """
    import torch
    from transformers import BertConfig, BertModel

    directory = tmp_path_factory.mktemp("tiny-bert")
    words = (
        ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
        + list("abcdefghijklmnopqrstuvwxyz0123456789")
        + [
            "the", "an", "is", "not", "was", "to", "of", "and", "in", "it",
            "he", "she", "they", "we", "you", "joke", "funny", "news",
            "chicken", "road", "cross", "why", "did", "man", "walks", "bar",
            "said", "wife", "what", "do", "call", "this", "that", "with",
            "one", "two", "three", "part", "first", "second",
            "##s", "##ing", "##ed", "##er", "##ly",
            ".", ",", "?", "!", "'", "(", ")", ":", ";", '"', "-", "…",
        ]
    )
    vocab = list(dict.fromkeys(words))
    (directory / "vocab.txt").write_text("\n".join(vocab), encoding="utf-8")
    (directory / "tokenizer_config.json").write_text(
        json.dumps({"tokenizer_class": "BertTokenizer", "do_lower_case": True}),
        encoding="utf-8",
    )
    torch.manual_seed(1234)
    config = BertConfig(
        vocab_size=len(vocab),
        hidden_size=768,
        num_hidden_layers=1,
        num_attention_heads=4,
        intermediate_size=128,
        max_position_embeddings=128,
    )
    BertModel(config).save_pretrained(directory)
    return directory


FIXTURE_ROWS = [
    ("why did the chicken cross the road to get to the other side", "true"),
    ("a man walks into a bar and says ouch", "true"),
    ("First part. Second part. Third part.", "true"),
    ("it is not funny at all, she said", "false"),
    ("City council approves new budget for road repairs", "false"),
    ("one two three four five six seven", "false"),
    ("What do you call a fish without eyes? A fsh.", "true"),
    ("the news was good today", "false"),
    ("Is the doctor at home? No. Come right in.", "true"),
    ("plain words with no punctuation at all", "false"),
]


@pytest.fixture
def fixture_csv(tmp_path):
    path = tmp_path / "rows.csv"
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["text", "humor"])
        writer.writerows(FIXTURE_ROWS)
    return path

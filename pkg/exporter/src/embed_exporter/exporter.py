"""Feature extraction from a frozen pretrained encoder into the store file.

Each dataset row yields one record: a mean-pooled embedding of the whole
cleaned text plus one of each cleaned sentence (capped at ``s_max``). Pooling
averages the last hidden layer over non-padding tokens. Rows that clean to
nothing get zero vectors and are counted in the summary.

A provenance sidecar JSON (model name, revision, pooling, max_seq_len,
created_at) lands next to the store.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .store import DimMismatch, StoreWriter
from .textprep import clean

logger = logging.getLogger(__name__)


class BadCsv(Exception):
    pass


class ModelLoadFailure(Exception):
    pass


@dataclass
class ExportJob:
    input_csv: Path
    output_store: Path
    model_name: str = "bert-base-uncased"
    revision: str | None = None
    max_seq_len: int = 100
    dim: int = 768
    s_max: int = 3
    batch_size: int = 32
    device: str = "cpu"

    def __post_init__(self):
        if not 0 < self.max_seq_len <= 512:
            raise ValueError("max_seq_len must be in (0, 512]")
        if self.s_max < 1 or self.batch_size < 1:
            raise ValueError("s_max and batch_size must be positive")


@dataclass
class ExportSummary:
    records_written: int
    truncated_texts: int
    empty_rows: int


def read_rows(path) -> list[str]:
    path = Path(path)
    if not path.exists():
        raise BadCsv(f"{path}: no such file")
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or "text" not in reader.fieldnames or "humor" not in reader.fieldnames:
            raise BadCsv(f"{path}: expected columns text,humor")
        return [row["text"] for row in reader]


def load_encoder(job: ExportJob):
    import torch
    from transformers import AutoModel, AutoTokenizer

    try:
        tokenizer = AutoTokenizer.from_pretrained(job.model_name, revision=job.revision)
        model = AutoModel.from_pretrained(job.model_name, revision=job.revision)
    except Exception as exc:
        raise ModelLoadFailure(f"cannot load {job.model_name}: {exc}") from exc
    if model.config.hidden_size != job.dim:
        raise DimMismatch(
            f"model hidden size {model.config.hidden_size} != expected dim {job.dim}"
        )
    model.eval()
    model.to(job.device)
    torch.set_grad_enabled(False)
    return tokenizer, model


def _mean_pool(hidden, mask):
    import torch

    mask = mask.unsqueeze(-1).to(hidden.dtype)
    summed = (hidden * mask).sum(dim=1)
    counts = mask.sum(dim=1).clamp(min=1.0)
    return (summed / counts).cpu().numpy().astype(np.float64)


def _embed_texts(texts, tokenizer, model, job: ExportJob) -> tuple[np.ndarray, int]:
    """Embed a list of texts; returns (n, dim) array and truncation count."""
    untruncated = tokenizer(texts, truncation=False)["input_ids"]
    truncated = sum(1 for ids in untruncated if len(ids) > job.max_seq_len)
    batch = tokenizer(
        texts,
        truncation=True,
        max_length=job.max_seq_len,
        padding=True,
        return_tensors="pt",
    ).to(job.device)
    output = model(**batch)
    pooled = _mean_pool(output.last_hidden_state, batch["attention_mask"])
    return pooled, truncated


def export(job: ExportJob) -> ExportSummary:
    rows = read_rows(job.input_csv)
    tokenizer, model = load_encoder(job)

    prepared = []  # (example_id, cleaned, sentences) with sentences capped
    empty_rows = 0
    for i, text in enumerate(rows):
        cleaned, sentences = clean(text)
        if not cleaned:
            empty_rows += 1
            logger.warning("row %d is empty after cleaning; writing zero vectors", i)
            prepared.append((i, None, None))
        else:
            prepared.append((i, cleaned, sentences[: job.s_max]))

    truncated_total = 0
    with StoreWriter(job.output_store, job.dim) as writer:
        pending: list[tuple[int, int]] = []  # (example_id, sentence count)
        texts: list[str] = []

        def flush():
            nonlocal truncated_total
            if not texts:
                return
            vectors, truncated = _embed_texts(texts, tokenizer, model, job)
            truncated_total += truncated
            offset = 0
            for example_id, n_sentences in pending:
                writer.append(
                    example_id,
                    vectors[offset],
                    [vectors[offset + 1 + k] for k in range(n_sentences)],
                )
                offset += 1 + n_sentences
            pending.clear()
            texts.clear()

        zero = np.zeros(job.dim)
        for example_id, cleaned, sentences in prepared:
            if cleaned is None:
                flush()  # keep store order aligned with row order
                writer.append(example_id, zero, [zero])
                continue
            pending.append((example_id, len(sentences)))
            texts.extend([cleaned, *sentences])
            if len(texts) >= job.batch_size:
                flush()
        flush()
        written = writer.count

    sidecar = {
        "model": job.model_name,
        "revision": job.revision,
        "pooling": "mean",
        "max_seq_len": job.max_seq_len,
        "created_at": datetime.now(timezone.utc).isoformat(),
    }
    Path(str(job.output_store) + ".provenance.json").write_text(
        json.dumps(sidecar, indent=2), encoding="utf-8"
    )
    return ExportSummary(
        records_written=written, truncated_texts=truncated_total, empty_rows=empty_rows
    )

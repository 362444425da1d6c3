"""Balanced dataset construction from a jokes dump and a news-headline dump.

Per source the pipeline is: dedup, length/word-count cuts, sentence-case
normalization (news only, to strip away the Title Case giveaway), then a
seeded uniform sample of ``rows_per_class`` rows. The two halves merge and
shuffle into an exactly 50/50 dataset. Everything is deterministic given the
seed in ``FilterConfig``.

The output CSV carries two columns, ``text,humor``, with humor in
{true,false}. The statistics report mirrors a dataframe describe: mean, std
(population), min, median, max over six surface counts per row.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import textprep
from .errors import BadCsv, EmptyInput, MissingFile, NotEnoughRows

SOURCE_JOKES = "jokes"
SOURCE_NEWS = "news"


@dataclass(frozen=True)
class LabeledExample:
    text: str
    label: bool  # True = humor
    source: str

    def __post_init__(self):
        if not self.text:
            raise ValueError("example text must be non-empty")
        if self.source not in (SOURCE_JOKES, SOURCE_NEWS):
            raise ValueError(f"unknown source {self.source!r}")


@dataclass(frozen=True)
class FilterConfig:
    min_chars: int = 30
    max_chars: int = 100
    min_words: int = 10
    max_words: int = 18
    rows_per_class: int = 100_000
    seed: int = 0

    def __post_init__(self):
        if self.min_chars > self.max_chars or self.min_words > self.max_words:
            raise ValueError("filter ranges must satisfy min <= max")
        if self.rows_per_class <= 0:
            raise ValueError("rows_per_class must be positive")


@dataclass(frozen=True)
class ColumnStats:
    mean: float
    std: float
    min: float
    median: float
    max: float


@dataclass(frozen=True)
class DatasetStats:
    chars: ColumnStats
    words: ColumnStats
    unique_words: ColumnStats
    punctuation: ColumnStats
    duplicate_words: ColumnStats
    sentences: ColumnStats


def read_text_column(path, column: str | None = None) -> list[str]:
    """Read one text column from a CSV file, stripping outer whitespace.

    With ``column=None`` a single-column file is accepted as-is and a
    multi-column file must contain a column named "text".
    """
    path = Path(path)
    if not path.exists():
        raise MissingFile(str(path))
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None:
            raise BadCsv(f"{path}: no header row")
        if column is None:
            if len(reader.fieldnames) == 1:
                column = reader.fieldnames[0]
            elif "text" in reader.fieldnames:
                column = "text"
            else:
                raise BadCsv(
                    f"{path}: specify a text column; found {reader.fieldnames}"
                )
        elif column not in reader.fieldnames:
            raise BadCsv(f"{path}: no column {column!r}; found {reader.fieldnames}")
        return [row[column].strip() for row in reader if row[column] is not None]


def dedup(rows: list[str]) -> list[str]:
    """Drop exact-string duplicates, keeping first occurrences in order."""
    seen = set()
    kept = []
    for row in rows:
        if row not in seen:
            seen.add(row)
            kept.append(row)
    return kept


def apply_filters(rows: list[str], cfg: FilterConfig) -> list[str]:
    """Keep rows whose character and whitespace-token counts are in range.

    Both ranges are inclusive on both ends; word count is taken on the raw
    text, before any punctuation separation.
    """
    return [
        row
        for row in rows
        if cfg.min_chars <= len(row) <= cfg.max_chars
        and cfg.min_words <= len(row.split()) <= cfg.max_words
    ]


def _sample(rows: list[str], k: int, rng: np.random.Generator, source: str) -> list[str]:
    if len(rows) < k:
        raise NotEnoughRows(
            f"{source}: {len(rows)} rows survive filtering, need {k}"
        )
    idx = np.sort(rng.choice(len(rows), size=k, replace=False))
    return [rows[i] for i in idx]


def build(
    jokes_path,
    news_path,
    cfg: FilterConfig,
    jokes_column: str | None = None,
    news_column: str | None = None,
) -> list[LabeledExample]:
    """Produce the balanced labeled dataset from the two source dumps."""
    rng = np.random.default_rng(cfg.seed)
    jokes = apply_filters(dedup(read_text_column(jokes_path, jokes_column)), cfg)
    news = apply_filters(dedup(read_text_column(news_path, news_column)), cfg)
    news = [textprep.to_sentence_case(row) for row in news]
    examples = [
        LabeledExample(text=t, label=True, source=SOURCE_JOKES)
        for t in _sample(jokes, cfg.rows_per_class, rng, SOURCE_JOKES)
    ] + [
        LabeledExample(text=t, label=False, source=SOURCE_NEWS)
        for t in _sample(news, cfg.rows_per_class, rng, SOURCE_NEWS)
    ]
    order = rng.permutation(len(examples))
    return [examples[i] for i in order]


def _column(values) -> ColumnStats:
    arr = np.asarray(values, dtype=np.float64)
    return ColumnStats(
        mean=float(arr.mean()),
        std=float(arr.std()),  # population std, ddof=0
        min=float(arr.min()),
        median=float(np.median(arr)),
        max=float(arr.max()),
    )


def compute_stats(examples: list[LabeledExample]) -> DatasetStats:
    """Aggregate per-row surface counts over the dataset.

    Punctuation counts the configured mark set on quote-normalized raw text;
    sentence counts come from the full preprocessing pipeline.
    """
    if not examples:
        raise EmptyInput("no examples to aggregate")
    chars, words, unique, punct, dup, sents = [], [], [], [], [], []
    for ex in examples:
        tokens = ex.text.split()
        n_words = len(tokens)
        n_unique = len(set(tokens))
        normalized = textprep.normalize_quotes(ex.text)
        chars.append(len(ex.text))
        words.append(n_words)
        unique.append(n_unique)
        punct.append(sum(1 for ch in normalized if ch in textprep.PUNCTUATION_MARKS))
        dup.append(n_words - n_unique)
        sents.append(len(textprep.preprocess(ex.text).sentences))
    return DatasetStats(
        chars=_column(chars),
        words=_column(words),
        unique_words=_column(unique),
        punctuation=_column(punct),
        duplicate_words=_column(dup),
        sentences=_column(sents),
    )


def split(items: list, train_fraction: float, seed: int) -> tuple[list, list]:
    """Seeded shuffle, then prefix split at floor(n * train_fraction)."""
    if not 0 < train_fraction < 1:
        raise ValueError("train_fraction must be in (0, 1)")
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(items))
    cut = int(len(items) * train_fraction)
    return [items[i] for i in order[:cut]], [items[i] for i in order[cut:]]


def write_dataset_csv(path, examples: list[LabeledExample]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["text", "humor"])
        for ex in examples:
            writer.writerow([ex.text, "true" if ex.label else "false"])


def read_dataset_csv(path) -> list[LabeledExample]:
    """Load a built dataset; source is inferred from the label."""
    path = Path(path)
    if not path.exists():
        raise MissingFile(str(path))
    examples = []
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or "text" not in reader.fieldnames or "humor" not in reader.fieldnames:
            raise BadCsv(f"{path}: expected columns text,humor")
        for i, row in enumerate(reader):
            flag = (row["humor"] or "").strip().lower()
            if flag not in ("true", "false"):
                raise BadCsv(f"{path}: row {i}: humor must be true or false, got {row['humor']!r}")
            label = flag == "true"
            examples.append(
                LabeledExample(
                    text=row["text"],
                    label=label,
                    source=SOURCE_JOKES if label else SOURCE_NEWS,
                )
            )
    return examples


_STAT_ROWS = ("mean", "std", "min", "median", "max")


def stats_table(stats: DatasetStats) -> str:
    """Aligned text table: one column per count, one row per statistic."""
    columns = [f.name for f in fields(stats)]
    width = max(len(c) for c in columns) + 2
    lines = [" " * 8 + "".join(f"{c:>{width}}" for c in columns)]
    for row in _STAT_ROWS:
        cells = []
        for col in columns:
            value = getattr(getattr(stats, col), row)
            text = f"{value:.3f}" if row in ("mean", "std") else f"{value:g}"
            cells.append(f"{text:>{width}}")
        lines.append(f"{row:<8}" + "".join(cells))
    return "\n".join(lines)


def stats_json(stats: DatasetStats) -> str:
    payload = {
        f.name: {row: getattr(getattr(stats, f.name), row) for row in _STAT_ROWS}
        for f in fields(stats)
    }
    return json.dumps(payload, indent=2)

"""Fixed-dimension sentence embeddings behind a single backend interface.

Three backends serve the classifier: a deterministic hash-derived mock (test
stand-in for a frozen pretrained encoder), a random-access binary store of
precomputed vectors, and a pass-through over an in-memory mapping.

Store layout (little-endian, no padding):
    magic "CBEM" | version u16 = 1 | dim u32 | record count u64
    per record: example_id u64 | sentence_count u8 |
                (1 + sentence_count) vectors of dim float32 each,
                whole-text vector first.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    BadMagic,
    DimMismatch,
    IdNotFound,
    MissingFile,
    NotInStore,
    TruncatedFile,
    VersionMismatch,
)
from .textprep import CleanText

STORE_MAGIC = b"CBEM"
STORE_VERSION = 1

_HEADER = struct.Struct("<4sHIQ")
_RECORD_HEADER = struct.Struct("<QB")


@dataclass(frozen=True)
class EncoderConfig:
    dim: int = 768
    max_seq_len: int = 100
    max_sentences: int = 3

    def __post_init__(self):
        if self.dim <= 0:
            raise ValueError("dim must be positive")
        if not 0 < self.max_seq_len <= 512:
            raise ValueError("max_seq_len must be in (0, 512]")
        if not 0 < self.max_sentences <= 255:
            raise ValueError("max_sentences must be in (0, 255]")


@dataclass(frozen=True)
class EmbeddingRecord:
    """Whole-text vector plus per-sentence vectors for one example."""

    example_id: int
    whole_text: np.ndarray
    sentence_vectors: tuple[np.ndarray, ...]

    def __post_init__(self):
        if not self.sentence_vectors:
            raise ValueError("record needs at least one sentence vector")
        dim = self.whole_text.shape[0]
        for vec in self.sentence_vectors:
            if vec.shape != (dim,):
                raise DimMismatch(
                    f"sentence vector shape {vec.shape} != ({dim},)"
                )

    @property
    def dim(self) -> int:
        return self.whole_text.shape[0]


def mock_encode(text: str, dim: int) -> np.ndarray:
    """Expand a hash of the text into a unit-norm pseudo-random vector.

    Stable across runs and platforms; empty text maps to the zero vector.
    """
    if text == "":
        return np.zeros(dim)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    rng = np.random.default_rng(int.from_bytes(digest[:8], "little"))
    vec = rng.standard_normal(dim)
    return vec / np.linalg.norm(vec)


class MockEncoder:
    """Deterministic text encoder derived from SHA-256, for tests and demos."""

    def __init__(self, dim: int = 768):
        self.dim = dim

    def encode(self, text: str) -> np.ndarray:
        return mock_encode(text, self.dim)


class PrecomputedEncoder:
    """Pass-through backend over an in-memory text-to-vector mapping."""

    def __init__(self, vectors: dict[str, np.ndarray], dim: int):
        self.dim = dim
        self._vectors = vectors

    def encode(self, text: str) -> np.ndarray:
        if text == "":
            return np.zeros(self.dim)
        try:
            return self._vectors[text]
        except KeyError:
            raise NotInStore(f"no precomputed vector for text {text!r}") from None


def encode_record(
    encoder, clean: CleanText, cfg: EncoderConfig, example_id: int = 0
) -> EmbeddingRecord:
    """Encode the whole text and the first ``max_sentences`` sentences."""
    if not clean.sentences:
        raise ValueError("cannot encode a text with no sentences")
    whole = encoder.encode(clean.cleaned)
    sentences = tuple(
        encoder.encode(s) for s in clean.sentences[: cfg.max_sentences]
    )
    return EmbeddingRecord(example_id=example_id, whole_text=whole, sentence_vectors=sentences)


def zero_record(cfg: EncoderConfig, example_id: int = 0) -> EmbeddingRecord:
    """Fallback record (all zeros, one sentence) for empty-after-cleaning rows."""
    return EmbeddingRecord(
        example_id=example_id,
        whole_text=np.zeros(cfg.dim),
        sentence_vectors=(np.zeros(cfg.dim),),
    )


class StoreWriter:
    """Single-writer streaming store output; patches the count on close."""

    def __init__(self, path, cfg: EncoderConfig):
        self.cfg = cfg
        self.count = 0
        self._file = open(path, "wb")
        self._file.write(_HEADER.pack(STORE_MAGIC, STORE_VERSION, cfg.dim, 0))

    def append(self, record: EmbeddingRecord) -> None:
        if record.dim != self.cfg.dim:
            raise DimMismatch(
                f"record {record.example_id} has dim {record.dim}, store has {self.cfg.dim}"
            )
        self._file.write(_RECORD_HEADER.pack(record.example_id, len(record.sentence_vectors)))
        self._file.write(np.ascontiguousarray(record.whole_text, dtype="<f4").tobytes())
        for vec in record.sentence_vectors:
            self._file.write(np.ascontiguousarray(vec, dtype="<f4").tobytes())
        self.count += 1

    def close(self) -> None:
        if self._file.closed:
            return
        self._file.seek(_HEADER.size - 8)  # count is the trailing u64
        self._file.write(struct.pack("<Q", self.count))
        self._file.close()

    def __enter__(self) -> "StoreWriter":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.close()


def store_write(path, records, cfg: EncoderConfig) -> None:
    """Write records to a new store file; all must match ``cfg.dim``."""
    with StoreWriter(path, cfg) as writer:
        for rec in records:
            writer.append(rec)


@dataclass
class EmbeddingStore:
    """Read-only random-access view over a store file.

    The constructor walks the record headers once to build an id-to-offset
    index, so lookups never scan the file. Safe for concurrent reads.
    """

    path: Path
    dim: int
    count: int
    _offsets: dict[int, int] = field(repr=False)
    _ids_in_order: tuple[int, ...] = field(repr=False)

    def get(self, example_id: int) -> EmbeddingRecord:
        try:
            offset = self._offsets[example_id]
        except KeyError:
            raise IdNotFound(f"example_id {example_id} not in store") from None
        with open(self.path, "rb") as f:
            f.seek(offset)
            head = f.read(_RECORD_HEADER.size)
            rec_id, n_sentences = _RECORD_HEADER.unpack(head)
            payload = f.read((1 + n_sentences) * self.dim * 4)
        vectors = np.frombuffer(payload, dtype="<f4").astype(np.float64)
        vectors = vectors.reshape(1 + n_sentences, self.dim)
        return EmbeddingRecord(
            example_id=rec_id,
            whole_text=vectors[0],
            sentence_vectors=tuple(vectors[1:]),
        )

    def ids(self) -> tuple[int, ...]:
        return self._ids_in_order

    def __len__(self) -> int:
        return self.count


def store_open(path) -> EmbeddingStore:
    """Open a store file, validating the header and indexing every record."""
    path = Path(path)
    if not path.exists():
        raise MissingFile(str(path))
    size = path.stat().st_size
    with open(path, "rb") as f:
        head = f.read(_HEADER.size)
        if len(head) < _HEADER.size:
            raise TruncatedFile(f"{path}: header incomplete")
        magic, version, dim, count = _HEADER.unpack(head)
        if magic != STORE_MAGIC:
            raise BadMagic(f"{path}: bad magic {magic!r}")
        if version != STORE_VERSION:
            raise VersionMismatch(f"{path}: version {version}, expected {STORE_VERSION}")
        offsets: dict[int, int] = {}
        ids = []
        pos = _HEADER.size
        record_bytes = dim * 4
        for _ in range(count):
            if pos + _RECORD_HEADER.size > size:
                raise TruncatedFile(f"{path}: record header past end of file")
            f.seek(pos)
            rec_id, n_sentences = _RECORD_HEADER.unpack(f.read(_RECORD_HEADER.size))
            body = (1 + n_sentences) * record_bytes
            if pos + _RECORD_HEADER.size + body > size:
                raise TruncatedFile(f"{path}: record {rec_id} payload truncated")
            offsets[rec_id] = pos
            ids.append(rec_id)
            pos += _RECORD_HEADER.size + body
    return EmbeddingStore(
        path=path, dim=dim, count=count, _offsets=offsets, _ids_in_order=tuple(ids)
    )


def store_get(store: EmbeddingStore, example_id: int) -> EmbeddingRecord:
    return store.get(example_id)


class StoreEncoder:
    """File-backed backend serving precomputed records by example id."""

    def __init__(self, store: EmbeddingStore):
        self.store = store
        self.dim = store.dim

    def record(self, example_id: int) -> EmbeddingRecord:
        return self.store.get(example_id)

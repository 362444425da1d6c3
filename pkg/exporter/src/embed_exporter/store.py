"""Writer for the embedding store format consumed by the classifier.

Layout (little-endian, no padding):
    magic "CBEM" | version u16 = 1 | dim u32 | record count u64
    per record: example_id u64 | sentence_count u8 |
                (1 + sentence_count) vectors of dim float32, whole text first.
"""

from __future__ import annotations

import struct

import numpy as np

MAGIC = b"CBEM"
VERSION = 1

_HEADER = struct.Struct("<4sHIQ")
_RECORD = struct.Struct("<QB")


class DimMismatch(Exception):
    pass


class StoreWriter:
    def __init__(self, path, dim: int):
        self.dim = dim
        self.count = 0
        self._file = open(path, "wb")
        self._file.write(_HEADER.pack(MAGIC, VERSION, dim, 0))

    def append(self, example_id: int, whole_text: np.ndarray, sentences: list[np.ndarray]) -> None:
        vectors = [whole_text, *sentences]
        for vec in vectors:
            if vec.shape != (self.dim,):
                raise DimMismatch(f"vector shape {vec.shape}, store dim {self.dim}")
        self._file.write(_RECORD.pack(example_id, len(sentences)))
        for vec in vectors:
            self._file.write(np.ascontiguousarray(vec, dtype="<f4").tobytes())
        self.count += 1

    def close(self) -> None:
        if not self._file.closed:
            self._file.seek(_HEADER.size - 8)
            self._file.write(struct.pack("<Q", self.count))
            self._file.close()

    def __enter__(self) -> "StoreWriter":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.close()

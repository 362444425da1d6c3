"""Parallel-path neural classifier head over sentence embeddings.

Each of the first ``s_max`` sentences feeds its own stack of dense ReLU
layers ending in a width-20 vector; the whole-text embedding feeds a separate
stack ending in a width-60 vector. The path outputs concatenate (sentence
paths in order, then the text path) into three sequential dense layers whose
final scalar passes through a sigmoid. Records with fewer than ``s_max``
sentences feed zero vectors to the unused paths.

Forward, backward, and the Adam training loop are implemented directly in
NumPy; everything is deterministic given the seeds in the configs.

Parameter file layout (little-endian):
    magic "CBPM" | version u16 = 1 | config JSON length u32 | config JSON |
    per layer: row-major float32 weight matrix (out x in), then float32 bias,
    in fixed order: sentence paths ascending, text path, head.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .encoder import EmbeddingRecord
from .errors import (
    BadMagic,
    DimMismatch,
    EmptyTrainingSet,
    LengthMismatch,
    MissingFile,
    ShapeMismatch,
    TruncatedFile,
    VersionMismatch,
)

PARAMS_MAGIC = b"CBPM"
PARAMS_VERSION = 1

_PARAMS_HEADER = struct.Struct("<4sHI")

SENTENCE_PATH_OUT = 20
TEXT_PATH_OUT = 60


@dataclass(frozen=True)
class ModelConfig:
    dim: int = 768
    s_max: int = 3
    sentence_path_sizes: tuple[int, ...] = (128, 64, SENTENCE_PATH_OUT)
    text_path_sizes: tuple[int, ...] = (256, 128, TEXT_PATH_OUT)
    head_sizes: tuple[int, ...] = (128, 32, 1)
    hidden_activation: str = "relu"
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "sentence_path_sizes", tuple(self.sentence_path_sizes))
        object.__setattr__(self, "text_path_sizes", tuple(self.text_path_sizes))
        object.__setattr__(self, "head_sizes", tuple(self.head_sizes))
        if self.dim <= 0 or self.s_max <= 0:
            raise ValueError("dim and s_max must be positive")
        for sizes in (self.sentence_path_sizes, self.text_path_sizes, self.head_sizes):
            if not sizes or any(s <= 0 for s in sizes):
                raise ValueError("layer sizes must be positive")
        if self.sentence_path_sizes[-1] != SENTENCE_PATH_OUT:
            raise ValueError(f"sentence path must end in {SENTENCE_PATH_OUT}")
        if self.text_path_sizes[-1] != TEXT_PATH_OUT:
            raise ValueError(f"text path must end in {TEXT_PATH_OUT}")
        if self.head_sizes[-1] != 1:
            raise ValueError("head must end in a single output")
        if self.hidden_activation != "relu":
            raise ValueError("only relu hidden activation is supported")

    @property
    def head_input(self) -> int:
        return self.s_max * self.sentence_path_sizes[-1] + self.text_path_sizes[-1]

    def layer_shapes(self) -> list[tuple[int, int]]:
        """(out, in) shape of every dense layer in serialization order."""
        shapes = []
        for _ in range(self.s_max):
            fan_in = self.dim
            for out in self.sentence_path_sizes:
                shapes.append((out, fan_in))
                fan_in = out
        fan_in = self.dim
        for out in self.text_path_sizes:
            shapes.append((out, fan_in))
            fan_in = out
        fan_in = self.head_input
        for out in self.head_sizes:
            shapes.append((out, fan_in))
            fan_in = out
        return shapes


@dataclass
class ModelParams:
    """All trainable weights, grouped by path. Layers are (W, b) pairs."""

    config: ModelConfig
    sentence_paths: list[list[tuple[np.ndarray, np.ndarray]]]
    text_path: list[tuple[np.ndarray, np.ndarray]]
    head: list[tuple[np.ndarray, np.ndarray]]

    def layers(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """Flat layer list in fixed order: sentence paths, text path, head."""
        flat = []
        for path in self.sentence_paths:
            flat.extend(path)
        flat.extend(self.text_path)
        flat.extend(self.head)
        return flat

    def count(self) -> int:
        return sum(w.size + b.size for w, b in self.layers())

    def copy(self) -> "ModelParams":
        return ModelParams(
            config=self.config,
            sentence_paths=[[(w.copy(), b.copy()) for w, b in p] for p in self.sentence_paths],
            text_path=[(w.copy(), b.copy()) for w, b in self.text_path],
            head=[(w.copy(), b.copy()) for w, b in self.head],
        )


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 5
    batch_size: int = 64
    learning_rate: float = 1e-3
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")


@dataclass(frozen=True)
class Prediction:
    probability: float
    label: bool

    @classmethod
    def from_probability(cls, probability: float) -> "Prediction":
        return cls(probability=probability, label=probability >= 0.5)


def _relu(z):
    return np.maximum(z, 0.0)


def _sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def init(cfg: ModelConfig) -> ModelParams:
    """He-style uniform weights scaled by fan-in, zero biases, seeded."""
    rng = np.random.default_rng(cfg.seed)

    def dense(fan_in: int, fan_out: int) -> tuple[np.ndarray, np.ndarray]:
        limit = np.sqrt(6.0 / fan_in)
        w = rng.uniform(-limit, limit, size=(fan_out, fan_in))
        return w, np.zeros(fan_out)

    def stack(fan_in: int, sizes) -> list[tuple[np.ndarray, np.ndarray]]:
        layers = []
        for out in sizes:
            layers.append(dense(fan_in, out))
            fan_in = out
        return layers

    return ModelParams(
        config=cfg,
        sentence_paths=[stack(cfg.dim, cfg.sentence_path_sizes) for _ in range(cfg.s_max)],
        text_path=stack(cfg.dim, cfg.text_path_sizes),
        head=stack(cfg.head_input, cfg.head_sizes),
    )


def assemble_inputs(records, cfg: ModelConfig) -> tuple[np.ndarray, np.ndarray]:
    """Stack records into (n, s_max, dim) sentence and (n, dim) text arrays.

    Sentences beyond ``s_max`` are dropped; missing ones stay zero.
    """
    n = len(records)
    xs = np.zeros((n, cfg.s_max, cfg.dim))
    xt = np.zeros((n, cfg.dim))
    for i, rec in enumerate(records):
        if rec.dim != cfg.dim:
            raise DimMismatch(f"record {rec.example_id} dim {rec.dim} != model dim {cfg.dim}")
        xt[i] = rec.whole_text
        for j, vec in enumerate(rec.sentence_vectors[: cfg.s_max]):
            xs[i, j] = vec
    return xs, xt


@dataclass
class ForwardCache:
    """Pre-activations and activations retained for the backward pass."""

    xs: np.ndarray
    xt: np.ndarray
    sentence_zs: list[list[np.ndarray]] = field(default_factory=list)
    sentence_as: list[list[np.ndarray]] = field(default_factory=list)
    text_zs: list[np.ndarray] = field(default_factory=list)
    text_as: list[np.ndarray] = field(default_factory=list)
    concat: np.ndarray | None = None
    head_zs: list[np.ndarray] = field(default_factory=list)
    head_as: list[np.ndarray] = field(default_factory=list)
    probabilities: np.ndarray | None = None


def _forward_stack(x, layers, zs, activations, last_linear=False):
    a = x
    for k, (w, b) in enumerate(layers):
        z = a @ w.T + b
        zs.append(z)
        a = z if (last_linear and k == len(layers) - 1) else _relu(z)
        activations.append(a)
    return a


def forward_batch(params: ModelParams, xs: np.ndarray, xt: np.ndarray) -> ForwardCache:
    cfg = params.config
    cache = ForwardCache(xs=xs, xt=xt)
    parts = []
    for p in range(cfg.s_max):
        zs: list[np.ndarray] = []
        activations: list[np.ndarray] = []
        parts.append(_forward_stack(xs[:, p, :], params.sentence_paths[p], zs, activations))
        cache.sentence_zs.append(zs)
        cache.sentence_as.append(activations)
    text_out = _forward_stack(xt, params.text_path, cache.text_zs, cache.text_as)
    cache.concat = np.concatenate(parts + [text_out], axis=1)
    logits = _forward_stack(
        cache.concat, params.head, cache.head_zs, cache.head_as, last_linear=True
    )
    cache.probabilities = _sigmoid(logits[:, 0])
    return cache


def forward(params: ModelParams, record: EmbeddingRecord) -> tuple[Prediction, ForwardCache]:
    """Run one record through the head, retaining activations for backward."""
    xs, xt = assemble_inputs([record], params.config)
    cache = forward_batch(params, xs, xt)
    return Prediction.from_probability(float(cache.probabilities[0])), cache


LOSS_EPS = 1e-7


def loss(probability: float, label: bool) -> float:
    """Binary cross-entropy with the probability clamped away from 0 and 1."""
    p = min(max(probability, LOSS_EPS), 1.0 - LOSS_EPS)
    y = 1.0 if label else 0.0
    return -(y * np.log(p) + (1.0 - y) * np.log(1.0 - p))


def batch_loss(probabilities: np.ndarray, labels: np.ndarray) -> float:
    p = np.clip(probabilities, LOSS_EPS, 1.0 - LOSS_EPS)
    y = labels
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))


def _backward_stack(layers, zs, activations, x, grad_out, last_linear=False):
    """Walk a dense stack backwards; returns (layer grads, grad wrt x)."""
    grads = [None] * len(layers)
    da = grad_out
    for k in range(len(layers) - 1, -1, -1):
        w, _ = layers[k]
        dz = da if (last_linear and k == len(layers) - 1) else da * (zs[k] > 0)
        a_prev = x if k == 0 else activations[k - 1]
        grads[k] = (dz.T @ a_prev, dz.sum(axis=0))
        da = dz @ w
    return grads, da


def backward_batch(params: ModelParams, cache: ForwardCache, labels: np.ndarray) -> ModelParams:
    """Mean-over-batch gradients of the BCE loss, shaped like the params.

    Uses the fused sigmoid + cross-entropy derivative, so the gradient at the
    output is simply (p - y) / n.
    """
    cfg = params.config
    n = labels.shape[0]
    dlogits = ((cache.probabilities - labels) / n)[:, None]
    head_grads, dconcat = _backward_stack(
        params.head, cache.head_zs, cache.head_as, cache.concat, dlogits, last_linear=True
    )
    widths = [cfg.sentence_path_sizes[-1]] * cfg.s_max + [cfg.text_path_sizes[-1]]
    splits = np.cumsum(widths)[:-1]
    segments = np.split(dconcat, splits, axis=1)
    sentence_grads = []
    for p in range(cfg.s_max):
        grads, _ = _backward_stack(
            params.sentence_paths[p],
            cache.sentence_zs[p],
            cache.sentence_as[p],
            cache.xs[:, p, :],
            segments[p],
        )
        sentence_grads.append(grads)
    text_grads, _ = _backward_stack(
        params.text_path, cache.text_zs, cache.text_as, cache.xt, segments[-1]
    )
    return ModelParams(
        config=cfg, sentence_paths=sentence_grads, text_path=text_grads, head=head_grads
    )


def backward(params: ModelParams, cache: ForwardCache, label: bool) -> ModelParams:
    """Single-record gradients; shapes mirror the parameters."""
    return backward_batch(params, cache, np.array([1.0 if label else 0.0]))


class AdamState:
    """Per-layer first/second moment buffers with bias correction."""

    def __init__(self, params: ModelParams, cfg: TrainConfig):
        self.cfg = cfg
        self.t = 0
        self.m = [(np.zeros_like(w), np.zeros_like(b)) for w, b in params.layers()]
        self.v = [(np.zeros_like(w), np.zeros_like(b)) for w, b in params.layers()]

    def step(self, params: ModelParams, grads: ModelParams) -> None:
        c = self.cfg
        self.t += 1
        corr1 = 1.0 - c.adam_beta1**self.t
        corr2 = 1.0 - c.adam_beta2**self.t
        for i, ((w, b), (gw, gb)) in enumerate(zip(params.layers(), grads.layers())):
            mw, mb = self.m[i]
            vw, vb = self.v[i]
            mw += (1.0 - c.adam_beta1) * (gw - mw)
            mb += (1.0 - c.adam_beta1) * (gb - mb)
            vw += (1.0 - c.adam_beta2) * (gw**2 - vw)
            vb += (1.0 - c.adam_beta2) * (gb**2 - vb)
            w -= c.learning_rate * (mw / corr1) / (np.sqrt(vw / corr2) + c.adam_eps)
            b -= c.learning_rate * (mb / corr1) / (np.sqrt(vb / corr2) + c.adam_eps)


def train(
    params: ModelParams, records, labels, cfg: TrainConfig
) -> tuple[ModelParams, list[float]]:
    """Mini-batch Adam training; returns new params and per-epoch mean loss.

    Batches are drawn from a seeded shuffle each epoch. Deterministic given
    the seed; the input params are not modified.
    """
    records = list(records)
    if not records:
        raise EmptyTrainingSet("no training records")
    y = np.asarray([1.0 if label else 0.0 for label in labels])
    if y.shape[0] != len(records):
        raise LengthMismatch(f"{len(records)} records but {y.shape[0]} labels")
    xs, xt = assemble_inputs(records, params.config)
    params = params.copy()
    state = AdamState(params, cfg)
    rng = np.random.default_rng(cfg.seed)
    n = len(records)
    history = []
    for _ in range(cfg.epochs):
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, cfg.batch_size):
            idx = order[start : start + cfg.batch_size]
            cache = forward_batch(params, xs[idx], xt[idx])
            total += batch_loss(cache.probabilities, y[idx]) * idx.shape[0]
            grads = backward_batch(params, cache, y[idx])
            state.step(params, grads)
        history.append(total / n)
    return params, history


def predict(params: ModelParams, record: EmbeddingRecord) -> Prediction:
    pred, _ = forward(params, record)
    return pred


def predict_batch(params: ModelParams, records) -> list[Prediction]:
    records = list(records)
    if not records:
        return []
    xs, xt = assemble_inputs(records, params.config)
    cache = forward_batch(params, xs, xt)
    return [Prediction.from_probability(float(p)) for p in cache.probabilities]


def _config_to_json(cfg: ModelConfig) -> bytes:
    payload = {
        "dim": cfg.dim,
        "s_max": cfg.s_max,
        "sentence_path_sizes": list(cfg.sentence_path_sizes),
        "text_path_sizes": list(cfg.text_path_sizes),
        "head_sizes": list(cfg.head_sizes),
        "hidden_activation": cfg.hidden_activation,
        "seed": cfg.seed,
    }
    return json.dumps(payload, sort_keys=True).encode("utf-8")


def _config_from_json(blob: bytes) -> ModelConfig:
    try:
        payload = json.loads(blob.decode("utf-8"))
        return ModelConfig(
            dim=payload["dim"],
            s_max=payload["s_max"],
            sentence_path_sizes=tuple(payload["sentence_path_sizes"]),
            text_path_sizes=tuple(payload["text_path_sizes"]),
            head_sizes=tuple(payload["head_sizes"]),
            hidden_activation=payload["hidden_activation"],
            seed=payload["seed"],
        )
    except (ValueError, KeyError, TypeError) as exc:
        raise ShapeMismatch(f"invalid embedded config: {exc}") from exc


def save_params(path, params: ModelParams) -> None:
    """Serialize config and float32 layer data; see module docstring."""
    blob = _config_to_json(params.config)
    with open(path, "wb") as f:
        f.write(_PARAMS_HEADER.pack(PARAMS_MAGIC, PARAMS_VERSION, len(blob)))
        f.write(blob)
        for w, b in params.layers():
            f.write(np.ascontiguousarray(w, dtype="<f4").tobytes())
            f.write(np.ascontiguousarray(b, dtype="<f4").tobytes())


def load_params(path) -> tuple[ModelParams, ModelConfig]:
    """Read a parameter file, validating magic, version, and shape chain."""
    path = Path(path)
    if not path.exists():
        raise MissingFile(str(path))
    data = path.read_bytes()
    if len(data) < _PARAMS_HEADER.size:
        raise TruncatedFile(f"{path}: header incomplete")
    magic, version, blob_len = _PARAMS_HEADER.unpack_from(data)
    if magic != PARAMS_MAGIC:
        raise BadMagic(f"{path}: bad magic {magic!r}")
    if version != PARAMS_VERSION:
        raise VersionMismatch(f"{path}: version {version}, expected {PARAMS_VERSION}")
    pos = _PARAMS_HEADER.size
    if pos + blob_len > len(data):
        raise TruncatedFile(f"{path}: config blob truncated")
    cfg = _config_from_json(data[pos : pos + blob_len])
    pos += blob_len

    def take(shape: tuple[int, ...]) -> np.ndarray:
        nonlocal pos
        nbytes = int(np.prod(shape)) * 4
        if pos + nbytes > len(data):
            raise TruncatedFile(f"{path}: layer data truncated")
        arr = np.frombuffer(data, dtype="<f4", count=int(np.prod(shape)), offset=pos)
        pos += nbytes
        return arr.reshape(shape).astype(np.float64)

    def stack(shapes) -> list[tuple[np.ndarray, np.ndarray]]:
        return [(take((out, fan_in)), take((out,))) for out, fan_in in shapes]

    shapes = cfg.layer_shapes()
    depth_s = len(cfg.sentence_path_sizes)
    depth_t = len(cfg.text_path_sizes)
    sentence_paths = [
        stack(shapes[p * depth_s : (p + 1) * depth_s]) for p in range(cfg.s_max)
    ]
    offset = cfg.s_max * depth_s
    text_path = stack(shapes[offset : offset + depth_t])
    head = stack(shapes[offset + depth_t :])
    if pos != len(data):
        raise ShapeMismatch(f"{path}: {len(data) - pos} trailing bytes")
    params = ModelParams(
        config=cfg, sentence_paths=sentence_paths, text_path=text_path, head=head
    )
    expected = sum(o * i + o for o, i in shapes)
    if params.count() != expected:
        raise ShapeMismatch(f"{path}: parameter count {params.count()} != {expected}")
    return params, cfg

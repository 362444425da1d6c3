"""Optional full-scale check: head trained on real exported embeddings.

Needs artifacts that do not ship with the repo: the rebuilt 200k dataset CSV
and a store exported from it with the real pretrained encoder. Point
HUMORDET_DATASET_CSV and HUMORDET_REAL_STORE at them to enable; training
160k rows takes a long while on CPU.
"""

import os

import pytest

DATASET_ENV = "HUMORDET_DATASET_CSV"
STORE_ENV = "HUMORDET_REAL_STORE"


@pytest.mark.skipif(
    not (os.environ.get(DATASET_ENV) and os.environ.get(STORE_ENV)),
    reason=f"set {DATASET_ENV} and {STORE_ENV} to run the full-scale check",
)
def test_head_on_real_embeddings_reaches_095():
    from humordet import dataset as ds
    from humordet import evalbench as eb
    from humordet import model as m
    from humordet.encoder import store_open

    store = store_open(os.environ[STORE_ENV])
    examples = ds.read_dataset_csv(os.environ[DATASET_ENV])
    assert store.count == len(examples)
    items = list(enumerate(examples))
    train_items, test_items = ds.split(items, 0.8, seed=0)

    cfg = m.ModelConfig(dim=store.dim, s_max=3, seed=0)
    params, _ = m.train(
        m.init(cfg),
        [store.get(i) for i, _ in train_items],
        [ex.label for _, ex in train_items],
        m.TrainConfig(epochs=5, batch_size=64, learning_rate=1e-3, seed=0),
    )
    predictions = [
        p.label for p in m.predict_batch(params, [store.get(i) for i, _ in test_items])
    ]
    metrics = eb.compute_metrics(predictions, [ex.label for _, ex in test_items])
    print(f"ACCEPTANCE head-real-embeddings: accuracy {metrics.accuracy:.4f}")
    assert metrics.accuracy >= 0.95

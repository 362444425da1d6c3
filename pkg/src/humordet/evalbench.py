"""Binary classification metrics and a Multinomial Naive Bayes baseline.

The positive class is humor throughout. Degenerate precision/recall (zero
denominator) are reported as 0.0 and flagged with a RuntimeWarning so the
metrics stay total.

NB features are whitespace tokens of the cleaned text (full preprocessing
pass), with Lidstone smoothing by ``alpha`` and log-space scoring. Ties
break to the negative class.
"""

from __future__ import annotations

import json
import math
import warnings
from collections import Counter
from dataclasses import dataclass

from . import textprep
from .errors import EmptyInput, LengthMismatch


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class EvalMetrics:
    accuracy: float
    precision: float
    recall: float
    f1: float
    counts: ConfusionCounts


def compute_metrics(predictions: list[bool], labels: list[bool]) -> EvalMetrics:
    """Accuracy, precision, recall, F1 from paired boolean sequences."""
    if len(predictions) != len(labels):
        raise LengthMismatch(f"{len(predictions)} predictions vs {len(labels)} labels")
    if not predictions:
        raise EmptyInput("nothing to score")
    tp = fp = tn = fn = 0
    for pred, label in zip(predictions, labels):
        if pred and label:
            tp += 1
        elif pred and not label:
            fp += 1
        elif not pred and label:
            fn += 1
        else:
            tn += 1
    counts = ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn)
    accuracy = (tp + tn) / counts.total
    precision = _ratio(tp, tp + fp, "precision")
    recall = _ratio(tp, tp + fn, "recall")
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return EvalMetrics(accuracy=accuracy, precision=precision, recall=recall, f1=f1, counts=counts)


def _ratio(numerator: int, denominator: int, name: str) -> float:
    if denominator == 0:
        warnings.warn(f"{name} undefined (zero denominator), reporting 0", RuntimeWarning)
        return 0.0
    return numerator / denominator


def metrics_json(metrics: EvalMetrics) -> str:
    c = metrics.counts
    return json.dumps(
        {
            "accuracy": metrics.accuracy,
            "precision": metrics.precision,
            "recall": metrics.recall,
            "f1": metrics.f1,
            "counts": {"tp": c.tp, "fp": c.fp, "tn": c.tn, "fn": c.fn},
        }
    )


_ROW_HEADER = f"{'Method':<24}{'Accuracy':>10}{'Precision':>11}{'Recall':>8}{'F1':>7}"


def metrics_row(name: str, metrics: EvalMetrics) -> str:
    """One aligned result row (accuracy, precision, recall, F1 order)."""
    return (
        f"{name:<24}{metrics.accuracy:>10.3f}{metrics.precision:>11.3f}"
        f"{metrics.recall:>8.3f}{metrics.f1:>7.3f}"
    )


def metrics_header() -> str:
    return _ROW_HEADER


def _tokens(text: str) -> list[str]:
    return textprep.preprocess(text).cleaned.split()


@dataclass
class NBModel:
    vocabulary: dict[str, int]
    token_counts: tuple[Counter, Counter]  # index 0 = negative, 1 = positive
    class_totals: tuple[int, int]
    class_priors: tuple[float, float]
    alpha: float

    def token_log_prob(self, token: str, positive: bool) -> float:
        cls = 1 if positive else 0
        count = self.token_counts[cls].get(token, 0)
        return math.log(
            (count + self.alpha)
            / (self.class_totals[cls] + self.alpha * len(self.vocabulary))
        )


def nb_fit(texts: list[str], labels: list[bool], alpha: float = 0.2) -> NBModel:
    """Fit bag-of-words counts per class with Lidstone smoothing."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if not texts:
        raise EmptyInput("empty corpus")
    if len(texts) != len(labels):
        raise LengthMismatch(f"{len(texts)} texts vs {len(labels)} labels")
    counts = (Counter(), Counter())
    docs = [0, 0]
    vocabulary: dict[str, int] = {}
    for text, label in zip(texts, labels):
        cls = 1 if label else 0
        docs[cls] += 1
        for token in _tokens(text):
            counts[cls][token] += 1
            if token not in vocabulary:
                vocabulary[token] = len(vocabulary)
    n = docs[0] + docs[1]
    return NBModel(
        vocabulary=vocabulary,
        token_counts=counts,
        class_totals=(sum(counts[0].values()), sum(counts[1].values())),
        class_priors=(docs[0] / n, docs[1] / n),
        alpha=alpha,
    )


def nb_log_posteriors(model: NBModel, text: str) -> tuple[float, float]:
    """Unnormalized (negative, positive) log posteriors for a text."""
    scores = []
    for positive in (False, True):
        cls = 1 if positive else 0
        score = math.log(model.class_priors[cls]) if model.class_priors[cls] > 0 else -math.inf
        for token, count in Counter(_tokens(text)).items():
            score += count * model.token_log_prob(token, positive)
        scores.append(score)
    return scores[0], scores[1]


def nb_predict(model: NBModel, text: str) -> bool:
    """Argmax of the class log posteriors; ties go to the negative class."""
    negative, positive = nb_log_posteriors(model, text)
    return positive > negative


def evaluate_model(predict_fn, test_examples, name: str = "model", quiet: bool = False) -> EvalMetrics:
    """Score a predictor over labeled examples and print a result row.

    ``predict_fn`` receives each example object (anything with a ``label``
    attribute) and returns the predicted boolean.
    """
    if not test_examples:
        raise EmptyInput("empty test set")
    predictions = [bool(predict_fn(ex)) for ex in test_examples]
    labels = [ex.label for ex in test_examples]
    metrics = compute_metrics(predictions, labels)
    if not quiet:
        print(metrics_header())
        print(metrics_row(name, metrics))
    return metrics

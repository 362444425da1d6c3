"""Command line interface: one executable, one subcommand per pipeline stage.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error. Errors
print a single machine-parsable line ``error: <Class>: <reason>`` to stderr.
Data goes to stdout, progress diagnostics to stderr (silenced by --quiet).

A config file given with --config holds ``key = value`` lines (# comments
allowed) mirroring the subcommand's flags; explicit flags override it.
"""

from __future__ import annotations

import argparse
import sys

from . import dataset, evalbench, model, textprep
from .encoder import (
    EncoderConfig,
    MockEncoder,
    StoreWriter,
    encode_record,
    store_open,
    zero_record,
)
from .errors import DataError, DimMismatch, UsageError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> tuple[_Parser, dict[str, _Parser]]:
    shared = _Parser(add_help=False)
    shared.add_argument("--seed", type=int, default=0, help="seed for every random choice")
    shared.add_argument("--config", default=None, help="key=value file mirroring the flags")
    shared.add_argument("--quiet", action="store_true", help="suppress progress diagnostics")

    parser = _Parser(prog="humordet", description="Humor detection pipeline")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    subparsers: dict[str, _Parser] = {}

    def add(name: str, help_text: str) -> _Parser:
        p = sub.add_parser(
            name,
            help=help_text,
            parents=[shared],
            formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        )
        subparsers[name] = p
        return p

    p = add("build-dataset", "build the balanced dataset from two source dumps")
    p.add_argument("--jokes", required=True, help="CSV of humorous texts")
    p.add_argument("--news", required=True, help="CSV of non-humorous headlines")
    p.add_argument("--out", required=True, help="output dataset CSV (text,humor)")
    p.add_argument("--rows-per-class", type=int, default=100_000)
    p.add_argument("--jokes-column", default=None, help="text column in the jokes CSV")
    p.add_argument("--news-column", default=None, help="text column in the news CSV")

    p = add("stats", "report surface statistics of a built dataset")
    p.add_argument("--data", required=True, help="dataset CSV (text,humor)")
    p.add_argument("--json", action="store_true", help="emit JSON instead of a table")

    p = add("encode", "write an embedding store for a dataset")
    p.add_argument("--data", required=True, help="dataset CSV (text,humor)")
    p.add_argument("--store", required=True, help="output embedding store")
    p.add_argument("--backend", choices=["mock", "file"], default="mock")
    p.add_argument("--dim", type=int, default=768)
    p.add_argument("--s-max", type=int, default=3, help="sentence vectors kept per record")
    p.add_argument("--from-store", default=None, help="source store for the file backend")

    p = add("train", "train the classifier head on stored embeddings")
    p.add_argument("--store", required=True, help="embedding store")
    p.add_argument("--labels", required=True, help="dataset CSV aligned with the store")
    p.add_argument("--params-out", required=True, help="output parameter file")
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--batch", type=int, default=64)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--s-max", type=int, default=3)
    p.add_argument("--train-fraction", type=float, default=0.8,
                   help="train on this seeded fraction, leaving the rest for eval")

    p = add("eval", "evaluate the trained head or the NB baseline")
    p.add_argument("--store", default=None, help="embedding store")
    p.add_argument("--labels", default=None, help="dataset CSV aligned with the store")
    p.add_argument("--params", default=None, help="trained parameter file")
    p.add_argument("--baseline", choices=["nb"], default=None)
    p.add_argument("--data", default=None, help="dataset CSV for the baseline")
    p.add_argument("--alpha", type=float, default=0.2, help="NB smoothing")
    p.add_argument("--train-fraction", type=float, default=0.8)
    p.add_argument("--json", action="store_true", help="emit JSON instead of a table")

    p = add("predict", "classify one text with a trained head")
    p.add_argument("--text", required=True)
    p.add_argument("--params", required=True, help="trained parameter file")
    p.add_argument("--backend", choices=["mock"], default="mock")

    return parser, subparsers


def _parse_bool(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise UsageError(f"cannot parse {value!r} as a boolean")


def _load_config(path: str) -> dict[str, str]:
    entries = {}
    try:
        with open(path, encoding="utf-8") as f:
            for lineno, raw in enumerate(f, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected key=value")
                key, value = line.split("=", 1)
                entries[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    return entries


def _apply_config(subparser: _Parser, entries: dict[str, str]) -> None:
    actions = {a.dest: a for a in subparser._actions}
    defaults = {}
    for key, value in entries.items():
        action = actions.get(key)
        if action is None or key in ("config", "help", "command"):
            raise UsageError(f"unknown config key {key!r}")
        if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            defaults[key] = _parse_bool(value)
        elif action.type is not None:
            try:
                defaults[key] = action.type(value)
            except ValueError as exc:
                raise UsageError(f"config key {key!r}: {exc}") from exc
        else:
            defaults[key] = value
        if action.choices is not None and defaults[key] not in action.choices:
            raise UsageError(f"config key {key!r}: must be one of {sorted(action.choices)}")
        action.required = False  # the config value satisfies this flag
    subparser.set_defaults(**defaults)


def _info(ns, message: str) -> None:
    if not ns.quiet:
        print(message, file=sys.stderr)


def _validated(factory, *args, **kwargs):
    """Build a config object, reporting validation failures as usage errors."""
    try:
        return factory(*args, **kwargs)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _check_fraction(value: float) -> float:
    if not 0 < value < 1:
        raise UsageError("--train-fraction must be strictly between 0 and 1")
    return value


def _cmd_build_dataset(ns) -> int:
    cfg = _validated(dataset.FilterConfig, rows_per_class=ns.rows_per_class, seed=ns.seed)
    examples = dataset.build(
        ns.jokes, ns.news, cfg, jokes_column=ns.jokes_column, news_column=ns.news_column
    )
    dataset.write_dataset_csv(ns.out, examples)
    _info(ns, f"wrote {len(examples)} rows to {ns.out}")
    return EXIT_OK


def _cmd_stats(ns) -> int:
    examples = dataset.read_dataset_csv(ns.data)
    stats = dataset.compute_stats(examples)
    print(dataset.stats_json(stats) if ns.json else dataset.stats_table(stats))
    return EXIT_OK


def _cmd_encode(ns) -> int:
    examples = dataset.read_dataset_csv(ns.data)
    if ns.backend == "file":
        if ns.from_store is None:
            raise UsageError("--backend file requires --from-store")
        source = store_open(ns.from_store)
        if source.dim != ns.dim:
            raise DimMismatch(f"source store dim {source.dim} != --dim {ns.dim}")
        with StoreWriter(ns.store, _validated(EncoderConfig, dim=source.dim, max_sentences=ns.s_max)) as writer:
            for i in range(len(examples)):
                writer.append(source.get(i))
        _info(ns, f"copied {len(examples)} records from {ns.from_store} to {ns.store}")
        return EXIT_OK
    cfg = _validated(EncoderConfig, dim=ns.dim, max_sentences=ns.s_max)
    encoder = MockEncoder(dim=ns.dim)
    empty = 0
    with StoreWriter(ns.store, cfg) as writer:
        for i, ex in enumerate(examples):
            clean = textprep.preprocess(ex.text)
            if clean.sentences:
                writer.append(encode_record(encoder, clean, cfg, example_id=i))
            else:
                writer.append(zero_record(cfg, example_id=i))
                empty += 1
    _info(ns, f"encoded {len(examples)} records to {ns.store} ({empty} empty after cleaning)")
    return EXIT_OK


def _aligned_items(store, labels_path):
    examples = dataset.read_dataset_csv(labels_path)
    if len(examples) != store.count:
        raise DataError(
            f"store has {store.count} records but {labels_path} has {len(examples)} rows"
        )
    return list(enumerate(examples))


def _cmd_train(ns) -> int:
    store = store_open(ns.store)
    items = _aligned_items(store, ns.labels)
    train_items, _ = dataset.split(items, _check_fraction(ns.train_fraction), ns.seed)
    records = [store.get(i) for i, _ in train_items]
    labels = [ex.label for _, ex in train_items]
    cfg = _validated(model.ModelConfig, dim=store.dim, s_max=ns.s_max, seed=ns.seed)
    params = model.init(cfg)
    train_cfg = _validated(
        model.TrainConfig, epochs=ns.epochs, batch_size=ns.batch, learning_rate=ns.lr, seed=ns.seed
    )
    _info(ns, f"training on {len(records)} records ({store.dim}-dim, s_max={ns.s_max})")
    params, history = model.train(params, records, labels, train_cfg)
    for epoch, value in enumerate(history, 1):
        _info(ns, f"epoch {epoch}/{len(history)}: loss {value:.6f}")
    model.save_params(ns.params_out, params)
    _info(ns, f"wrote parameters to {ns.params_out}")
    return EXIT_OK


def _cmd_eval(ns) -> int:
    if ns.baseline == "nb":
        if ns.data is None:
            raise UsageError("--baseline nb requires --data")
        examples = dataset.read_dataset_csv(ns.data)
        train_part, test_part = dataset.split(examples, _check_fraction(ns.train_fraction), ns.seed)
        nb = evalbench.nb_fit(
            [ex.text for ex in train_part], [ex.label for ex in train_part], alpha=ns.alpha
        )
        metrics = evalbench.evaluate_model(
            lambda ex: evalbench.nb_predict(nb, ex.text),
            test_part,
            name=f"multinomial-nb a={ns.alpha}",
            quiet=True,
        )
        name = f"multinomial-nb a={ns.alpha}"
    else:
        if ns.store is None or ns.labels is None or ns.params is None:
            raise UsageError("eval needs --store, --labels and --params (or --baseline nb)")
        store = store_open(ns.store)
        items = _aligned_items(store, ns.labels)
        _, test_items = dataset.split(items, _check_fraction(ns.train_fraction), ns.seed)
        params, _ = model.load_params(ns.params)
        records = [store.get(i) for i, _ in test_items]
        predictions = [p.label for p in model.predict_batch(params, records)]
        metrics = evalbench.compute_metrics(predictions, [ex.label for _, ex in test_items])
        name = "head"
    if ns.json:
        print(evalbench.metrics_json(metrics))
    else:
        print(evalbench.metrics_header())
        print(evalbench.metrics_row(name, metrics))
    return EXIT_OK


def _cmd_predict(ns) -> int:
    params, cfg = model.load_params(ns.params)
    encoder_cfg = EncoderConfig(dim=cfg.dim, max_sentences=cfg.s_max)
    clean = textprep.preprocess(ns.text)
    if clean.sentences:
        record = encode_record(MockEncoder(cfg.dim), clean, encoder_cfg)
    else:
        record = zero_record(encoder_cfg)
    prediction = model.predict(params, record)
    print(f"{prediction.probability:.6f} {'true' if prediction.label else 'false'}")
    return EXIT_OK


_COMMANDS = {
    "build-dataset": _cmd_build_dataset,
    "stats": _cmd_stats,
    "encode": _cmd_encode,
    "train": _cmd_train,
    "eval": _cmd_eval,
    "predict": _cmd_predict,
}


def _prescan(argv: list[str]) -> tuple[str | None, str | None]:
    """Find the subcommand and --config path without a full parse."""
    command = None
    config = None
    i = 0
    while i < len(argv):
        token = argv[i]
        if token == "--config" and i + 1 < len(argv):
            config = argv[i + 1]
            i += 2
            continue
        if token.startswith("--config="):
            config = token.split("=", 1)[1]
        elif command is None and not token.startswith("-"):
            command = token
        i += 1
    return command, config


def run(argv: list[str] | None = None) -> int:
    """Parse argv, dispatch, and map exceptions to exit codes."""
    if argv is None:
        argv = sys.argv[1:]
    parser, subparsers = _build_parser()
    try:
        command, config = _prescan(argv)
        if config is not None and command in subparsers:
            _apply_config(subparsers[command], _load_config(config))
        ns = parser.parse_args(argv)
        return _COMMANDS[ns.command](ns)
    except UsageError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())

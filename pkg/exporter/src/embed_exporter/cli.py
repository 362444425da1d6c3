"""Command line front end for the exporter."""

from __future__ import annotations

import argparse
import logging
import sys

from .exporter import BadCsv, ExportJob, ModelLoadFailure, export
from .store import DimMismatch


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="humor-embed-export",
        description="Export frozen-encoder embeddings for a dataset CSV",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--data", required=True, help="dataset CSV (text,humor)")
    parser.add_argument("--store", required=True, help="output embedding store")
    parser.add_argument("--model", default="bert-base-uncased")
    parser.add_argument("--revision", default=None, help="model revision to pin")
    parser.add_argument("--max-seq-len", type=int, default=100)
    parser.add_argument("--dim", type=int, default=768)
    parser.add_argument("--s-max", type=int, default=3)
    parser.add_argument("--batch-size", type=int, default=32)
    parser.add_argument("--device", default="cpu")
    parser.add_argument("--quiet", action="store_true")
    return parser


def main() -> None:
    args = build_parser().parse_args()
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO, stream=sys.stderr
    )
    job = ExportJob(
        input_csv=args.data,
        output_store=args.store,
        model_name=args.model,
        revision=args.revision,
        max_seq_len=args.max_seq_len,
        dim=args.dim,
        s_max=args.s_max,
        batch_size=args.batch_size,
        device=args.device,
    )
    try:
        summary = export(job)
    except (BadCsv, DimMismatch, ModelLoadFailure) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        sys.exit(2)
    print(
        f"wrote {summary.records_written} records "
        f"({summary.truncated_texts} truncated, {summary.empty_rows} empty rows)"
    )


if __name__ == "__main__":
    main()

"""Humor detection for short texts.

Pipeline pieces: deterministic text cleaning (`textprep`), balanced dataset
construction and statistics (`dataset`), embedding backends and the binary
vector store (`encoder`), the parallel-path classifier head with from-scratch
training (`model`), metrics and the Naive Bayes baseline (`evalbench`), and a
CLI tying them together (`cli`).
"""

__version__ = "0.1.0"

"""Offline feature extraction: frozen pretrained BERT into the embedding store.

Kept deliberately independent of the classifier package; the two meet only at
the store file format and the dataset CSV schema.
"""

__version__ = "0.1.0"

"""Text cleaning for the exporter.

Independent re-implementation of the classifier package's preprocessing,
byte-compatible with it: contraction expansion, special-character aliasing,
quote normalization, punctuation separation, terminator-based sentence
splitting, in that order. Parity is enforced against the shared golden
corpus by the test suite.
"""

from __future__ import annotations

import re

CONTRACTIONS = {
    "ain't": "is not", "aren't": "are not", "can't": "cannot",
    "couldn't": "could not", "daren't": "dare not", "didn't": "did not",
    "doesn't": "does not", "don't": "do not", "hadn't": "had not",
    "hasn't": "has not", "haven't": "have not", "isn't": "is not",
    "mightn't": "might not", "mustn't": "must not", "needn't": "need not",
    "oughtn't": "ought not", "shan't": "shall not",
    "shouldn't": "should not", "wasn't": "was not", "weren't": "were not",
    "won't": "will not", "wouldn't": "would not",
    "i'll": "i will", "you'll": "you will", "he'll": "he will",
    "she'll": "she will", "it'll": "it will", "we'll": "we will",
    "they'll": "they will", "that'll": "that will",
    "there'll": "there will", "who'll": "who will", "what'll": "what will",
    "you're": "you are", "we're": "we are", "they're": "they are",
    "who're": "who are", "what're": "what are",
    "i've": "i have", "you've": "you have", "we've": "we have",
    "they've": "they have", "who've": "who have",
    "would've": "would have", "could've": "could have",
    "should've": "should have", "might've": "might have",
    "must've": "must have",
    "i'm": "i am",
    "i'd": "i would", "you'd": "you would", "he'd": "he would",
    "she'd": "she would", "it'd": "it would", "we'd": "we would",
    "they'd": "they would", "who'd": "who would", "that'd": "that would",
    "there'd": "there would",
    "it's": "it is", "he's": "he is", "she's": "she is",
    "that's": "that is", "what's": "what is", "who's": "who is",
    "there's": "there is", "here's": "here is", "where's": "where is",
    "how's": "how is", "when's": "when is", "why's": "why is",
    "let's": "let us", "y'all": "you all",
}

CHAR_ALIASES = {
    "α": "alpha", "β": "beta", "γ": "gamma", "δ": "delta",
    "ε": "epsilon", "ζ": "zeta", "η": "eta", "θ": "theta",
    "ι": "iota", "κ": "kappa", "λ": "lambda", "μ": "mu",
    "ν": "nu", "ξ": "xi", "ο": "omicron", "π": "pi",
    "ρ": "rho", "σ": "sigma", "τ": "tau", "υ": "upsilon",
    "φ": "phi", "χ": "chi", "ψ": "psi", "ω": "omega",
    "&": "and", "%": "percent", "$": "dollar", "@": "at",
}

_ALIASES = str.maketrans(CHAR_ALIASES)
_QUOTES = str.maketrans({"‘": "'", "’": "'", "“": '"', "”": '"'})

_CONTRACTION_RE = re.compile(
    "(?<![\\w'’])(?:"
    + "|".join(
        re.escape(key).replace("'", "['’]")
        for key in sorted(CONTRACTIONS, key=len, reverse=True)
    )
    + ")(?![\\w'’])",
    re.IGNORECASE,
)

_MARK_RE = re.compile(r"\.{3,}|[.,?\-–()'…\":;!‘’“”]")

_TERMINATORS = {".", "?", "!", "…"}


def _expand_one(match: re.Match) -> str:
    token = match.group(0)
    expansion = CONTRACTIONS[token.replace("’", "'").lower()]
    if token[0].isupper():
        expansion = expansion[0].upper() + expansion[1:]
    return expansion


def clean(text: str) -> tuple[str, list[str]]:
    """Return (cleaned text, cleaned sentences)."""
    out = _CONTRACTION_RE.sub(_expand_one, text)
    out = out.translate(_ALIASES)
    out = out.translate(_QUOTES)
    out = " ".join(_MARK_RE.sub(lambda match: f" {match.group(0)} ", out).split())

    sentences: list[str] = []
    pending: list[str] = []
    for token in out.split():
        pending.append(token)
        terminal = token in _TERMINATORS or (len(token) >= 3 and set(token) == {"."})
        if terminal:
            sentences.append(" ".join(pending))
            pending = []
    if pending:
        sentences.append(" ".join(pending))
    return out, sentences

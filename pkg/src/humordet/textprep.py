"""Deterministic text normalization and sentence segmentation.

The cleaning pipeline runs fixed passes in a fixed order: contraction
expansion, special-character aliasing, quote normalization, punctuation
separation, sentence splitting. Contractions must be expanded before
apostrophes get space-separated, which is why the order matters.

All functions are pure; calling them from multiple threads is safe.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

# Punctuation marks that get whitespace-separated from words: period, comma,
# question mark, hyphen, dash, parentheses, apostrophe, ellipsis, quotation
# mark, colon, semicolon, exclamation point.
PUNCTUATION_MARKS = frozenset(".,?-–()'…\":;!")

# Curly quote forms are separated like their straight equivalents so the op
# behaves sensibly on raw input, even though preprocess() normalizes them
# away beforehand.
_SEPARATE_RE = re.compile(r"\.{3,}|[.,?\-–()'…\":;!‘’“”]")

_QUOTE_TRANSLATION = str.maketrans({"‘": "'", "’": "'", "“": '"', "”": '"'})

_SENTENCE_TERMINATORS = frozenset({".", "?", "!", "…"})

# Greek lowercase alphabet plus a few symbols that commonly survive into
# short informal texts. Aliases substitute in place, without added spacing.
SPECIAL_CHAR_ALIASES: dict[str, str] = {
    "α": "alpha", "β": "beta", "γ": "gamma", "δ": "delta",
    "ε": "epsilon", "ζ": "zeta", "η": "eta", "θ": "theta",
    "ι": "iota", "κ": "kappa", "λ": "lambda", "μ": "mu",
    "ν": "nu", "ξ": "xi", "ο": "omicron", "π": "pi",
    "ρ": "rho", "σ": "sigma", "τ": "tau", "υ": "upsilon",
    "φ": "phi", "χ": "chi", "ψ": "psi", "ω": "omega",
    "&": "and", "%": "percent", "$": "dollar", "@": "at",
}

_ALIAS_TRANSLATION = str.maketrans({ord(k): v for k, v in SPECIAL_CHAR_ALIASES.items()})

# Common English contractions, keyed lowercase. Word-specific "'s" forms
# (it's, that's, ...) are included; the bare possessive "'s" is deliberately
# not expanded because it is ambiguous.
_DEFAULT_CONTRACTIONS: dict[str, str] = {
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


@dataclass(frozen=True)
class ContractionTable:
    """Case-insensitive map from contraction form to its expansion."""

    entries: dict[str, str]
    _pattern: re.Pattern = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        folded = {k.casefold(): v for k, v in self.entries.items()}
        if len(folded) != len(self.entries):
            raise ValueError("contraction keys collide after case-folding")
        for key in folded:
            for expansion in folded.values():
                if key in expansion.casefold():
                    raise ValueError(f"expansion contains contraction key {key!r}")
        object.__setattr__(self, "entries", folded)
        # Longest keys first so "wouldn't" wins over a hypothetical "would".
        # Both straight and curly apostrophes are accepted in the input.
        alternatives = "|".join(
            re.escape(k).replace("'", "['’]")
            for k in sorted(folded, key=len, reverse=True)
        )
        pattern = re.compile(
            rf"(?<![\w'’])(?:{alternatives})(?![\w'’])",
            re.IGNORECASE,
        )
        object.__setattr__(self, "_pattern", pattern)

    def expand(self, text: str) -> str:
        def replace(match: re.Match) -> str:
            matched = match.group(0)
            expansion = self.entries[matched.replace("’", "'").casefold()]
            if matched[0].isupper():
                return expansion[0].upper() + expansion[1:]
            return expansion

        return self._pattern.sub(replace, text)


DEFAULT_CONTRACTIONS = ContractionTable(_DEFAULT_CONTRACTIONS)


@dataclass(frozen=True)
class CleanText:
    """A text together with its cleaned form and cleaned sentences.

    Joining ``sentences`` with single spaces reproduces ``cleaned`` exactly,
    and ``sentences`` is non-empty whenever ``cleaned`` is.
    """

    original: str
    cleaned: str
    sentences: tuple[str, ...]


def expand_contractions(text: str, table: ContractionTable = DEFAULT_CONTRACTIONS) -> str:
    """Replace each whole-token contraction with its expansion.

    Matching is case-insensitive and accepts curly apostrophes; the casing of
    the first character is preserved. Apostrophe forms not in the table pass
    through unchanged.
    """
    return table.expand(text)


def replace_special_chars(text: str) -> str:
    """Substitute aliased special characters (Greek letters, &, %, $, @)."""
    return text.translate(_ALIAS_TRANSLATION)


def normalize_quotes(text: str) -> str:
    """Map curly single/double quotes to their straight forms."""
    return text.translate(_QUOTE_TRANSLATION)


def separate_punctuation(text: str) -> str:
    """Surround every punctuation mark with single spaces.

    Runs of three or more dots stay together as one ellipsis token; all other
    marks separate individually. Whitespace runs collapse to one space and
    the result is trimmed.
    """
    spaced = _SEPARATE_RE.sub(lambda m: f" {m.group(0)} ", text)
    return " ".join(spaced.split())


def _is_terminator(token: str) -> bool:
    if token in _SENTENCE_TERMINATORS:
        return True
    return len(token) >= 3 and set(token) == {"."}


def split_sentences(cleaned: str) -> list[str]:
    """Split punctuation-separated text at standalone terminator tokens.

    A boundary falls after each ".", "?", "!", "…" or ellipsis token; the
    terminator stays with its sentence. Trailing text without a terminator
    forms a final sentence. Never returns empty strings.
    """
    sentences: list[str] = []
    current: list[str] = []
    for token in cleaned.split():
        current.append(token)
        if _is_terminator(token):
            sentences.append(" ".join(current))
            current = []
    if current:
        sentences.append(" ".join(current))
    return sentences


def to_sentence_case(text: str) -> str:
    """Upper-case the first alphabetic character, lower-case the rest."""
    out = []
    seen_alpha = False
    for ch in text:
        if ch.isalpha():
            out.append(ch.lower() if seen_alpha else ch.upper())
            seen_alpha = True
        else:
            out.append(ch)
    return "".join(out)


def preprocess(text: str, table: ContractionTable = DEFAULT_CONTRACTIONS) -> CleanText:
    """Run the full cleaning pipeline and segment into sentences."""
    cleaned = expand_contractions(text, table)
    cleaned = replace_special_chars(cleaned)
    cleaned = normalize_quotes(cleaned)
    cleaned = separate_punctuation(cleaned)
    return CleanText(original=text, cleaned=cleaned, sentences=tuple(split_sentences(cleaned)))

import json
import random
from pathlib import Path

import pytest

from humordet import textprep as tp
from humordet.textprep import (
    ContractionTable,
    DEFAULT_CONTRACTIONS,
    expand_contractions,
    preprocess,
    replace_special_chars,
    separate_punctuation,
    split_sentences,
    to_sentence_case,
)

from fuzzutil import fuzz_string

GOLDEN = json.loads(
    (Path(__file__).parent / "data" / "golden_preprocess.json").read_text(encoding="utf-8")
)


class TestExpandContractions:
    def test_basic(self):
        assert expand_contractions("isn't") == "is not"

    def test_empty(self):
        assert expand_contractions("") == ""

    def test_case_preserved(self):
        assert expand_contractions("Isn't it? It isn't.") == "Is not it? It is not."

    def test_curly_apostrophe(self):
        assert expand_contractions("don’t") == "do not"

    def test_unknown_form_passes_through(self):
        assert expand_contractions("fo'c's'le") == "fo'c's'le"

    def test_not_inside_longer_word(self):
        assert expand_contractions("don'tish") == "don'tish"

    def test_possessive_not_expanded(self):
        assert expand_contractions("John's hat") == "John's hat"

    def test_all_caps_first_char(self):
        assert expand_contractions("WON'T") == "Will not"


class TestContractionTable:
    def test_keys_unique_after_casefold(self):
        with pytest.raises(ValueError):
            ContractionTable({"isn't": "is not", "ISN'T": "is not"})

    def test_expansion_may_not_contain_key(self):
        with pytest.raises(ValueError):
            ContractionTable({"a'b": "x a'b y"})

    def test_default_table_invariants(self):
        entries = DEFAULT_CONTRACTIONS.entries
        assert len(entries) >= 70
        for key, expansion in entries.items():
            assert "'" in key
            assert "'" not in expansion


class TestSeparatePunctuation:
    def test_paper_example(self):
        assert separate_punctuation("This is' (fun).") == "This is ' ( fun ) ."

    def test_no_marks(self):
        assert separate_punctuation("abc") == "abc"

    def test_adjacent_marks(self):
        assert separate_punctuation("a,b,,c") == "a , b , , c"

    def test_whitespace_collapse_and_trim(self):
        assert separate_punctuation("  a   b . ") == "a b ."

    def test_ellipsis_stays_one_token(self):
        assert separate_punctuation("well...ok") == "well ... ok"
        assert separate_punctuation("a….b") == "a … . b"

    def test_idempotent_on_golden(self):
        for case in GOLDEN:
            cleaned = case["cleaned"]
            assert separate_punctuation(cleaned) == cleaned


class TestReplaceSpecialChars:
    def test_alpha(self):
        assert replace_special_chars("α") == "alpha"

    def test_plain_ascii(self):
        assert replace_special_chars("plain ascii") == "plain ascii"

    def test_beta_in_word(self):
        assert replace_special_chars("β-test") == "beta-test"

    def test_symbols(self):
        assert replace_special_chars("5% & $2 @ home") == "5percent and dollar2 at home"


class TestSplitSentences:
    def test_three_terminators(self):
        assert split_sentences("a . b ? c !") == ["a .", "b ?", "c !"]

    def test_no_terminator(self):
        assert split_sentences("no terminator here") == ["no terminator here"]

    def test_empty(self):
        assert split_sentences("") == []

    def test_joke_splits_after_question_mark(self):
        text = "“ Is the doctor at home ? ” the patient asked in his bronchial whisper ."
        parts = split_sentences(text)
        assert len(parts) == 2
        assert parts[0].endswith("?")

    def test_ellipsis_token_terminates(self):
        assert split_sentences("wait ... go") == ["wait ...", "go"]
        assert split_sentences("wait … go") == ["wait …", "go"]


class TestSentenceCase:
    def test_headline(self):
        assert to_sentence_case("Trump Breaks Another Record") == "Trump breaks another record"

    def test_single_char(self):
        assert to_sentence_case("a") == "A"

    def test_first_alphabetic_char(self):
        assert to_sentence_case("9 TO 5") == "9 To 5"

    def test_idempotent(self):
        rng = random.Random(7)
        for _ in range(300):
            s = fuzz_string(rng)
            once = to_sentence_case(s)
            assert to_sentence_case(once) == once


class TestPreprocess:
    def test_composed_example(self):
        clean = preprocess("isn't (fun).")
        assert clean.cleaned == "is not ( fun ) ."
        assert clean.sentences == ("is not ( fun ) .",)

    def test_empty(self):
        clean = preprocess("")
        assert clean.cleaned == ""
        assert clean.sentences == ()

    def test_contraction_then_split(self):
        clean = preprocess("I won't go. Why?")
        assert clean.sentences == ("I will not go .", "Why ?")

    def test_golden_corpus_byte_exact(self):
        for case in GOLDEN:
            clean = preprocess(case["input"])
            assert clean.cleaned == case["cleaned"], case["input"]
            assert list(clean.sentences) == case["sentences"], case["input"]


class TestProperties:
    def test_idempotence(self):
        rng = random.Random(1234)
        for _ in range(2000):
            text = fuzz_string(rng)
            first = preprocess(text)
            second = preprocess(first.cleaned)
            assert second.cleaned == first.cleaned
            assert second.sentences == first.sentences

    def test_sentence_concatenation_reconstructs_cleaned(self):
        rng = random.Random(99)
        for _ in range(2000):
            clean = preprocess(fuzz_string(rng))
            assert " ".join(clean.sentences) == clean.cleaned
            assert all(s for s in clean.sentences)
            if clean.cleaned:
                assert clean.sentences

    def test_no_contractions_survive(self):
        rng = random.Random(5)
        pattern = DEFAULT_CONTRACTIONS._pattern
        for _ in range(1000):
            clean = preprocess(fuzz_string(rng))
            assert pattern.search(clean.cleaned) is None

    def test_expand_and_alias_commute(self):
        rng = random.Random(17)
        for _ in range(1000):
            text = fuzz_string(rng)
            a = replace_special_chars(expand_contractions(text))
            b = expand_contractions(replace_special_chars(text))
            assert a == b

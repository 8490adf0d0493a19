# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Tests for words, embeddings and the loss distribution.
"""

from fractions import Fraction

import numpy as np
import pytest

from nplcs.exceptions import TooLargeError
from nplcs.models.core import Configuration, enumerate_words
from nplcs.models.upsets import UpSet
from nplcs.models.words import (
    as_word,
    count_embeddings,
    is_subword,
    loss_distribution,
    p_lost,
    subwords,
    word_text,
)

HALF = Fraction(1, 2)


@pytest.mark.unit
class TestSubwordOrder:
    def test_empty_word_is_below_everything(self):
        assert is_subword("", "abc")
        assert is_subword("", "")

    def test_deletion_gives_subword(self):
        assert is_subword("ac", "abc")
        assert not is_subword("ca", "abc")
        assert not is_subword("abcd", "abc")

    def test_multi_letter_messages(self):
        assert as_word("req.ack") == ("req", "ack")
        assert is_subword("ack.", "req.ack")


@pytest.mark.unit
class TestEmbeddings:
    @pytest.mark.parametrize(
        "w, sub, expected",
        [
            ("aaba", "", 1),
            ("aaba", "a", 3),
            ("aaba", "aa", 3),
            ("aaba", "ab", 2),
            ("aaba", "aba", 2),
            ("aaba", "aaba", 1),
            ("aaba", "bb", 0),
            ("ab", "ba", 0),
        ],
    )
    def test_counts(self, w, sub, expected):
        assert count_embeddings(w, sub) == expected

    def test_count_is_zero_exactly_for_non_subwords(self):
        for w in enumerate_words("ab", 4):
            for u in enumerate_words("ab", 3):
                assert (count_embeddings(w, u) > 0) == is_subword(u, w)


@pytest.mark.unit
class TestLossDistribution:
    def test_aaba_coefficients(self):
        coefficients = {
            "": 1, "a": 3, "b": 1, "aa": 3, "ab": 2, "ba": 1,
            "aaa": 1, "aab": 1, "aba": 2, "aaba": 1,
        }
        dist = loss_distribution(HALF, "aaba")
        assert len(dist) == len(coefficients)
        for word, coefficient in coefficients.items():
            assert dist.probability(word) == Fraction(coefficient, 16)
        assert sum(coefficients.values()) == 16

    def test_single_subword_probability(self):
        assert p_lost(HALF, "aaba", "aa") == Fraction(3, 16)
        assert p_lost(Fraction(1, 4), "ab", "") == Fraction(1, 16)
        assert p_lost(HALF, "ab", "ba") == 0

    def test_empty_word_stays_empty(self):
        dist = loss_distribution(Fraction(1, 3), "")
        assert dist.support == (((), Fraction(1)),)

    @pytest.mark.parametrize("tau", [Fraction(1, 4), Fraction(1, 2), Fraction(9, 10)])
    def test_normalized_for_short_words(self, tau):
        for w in enumerate_words("ab", 4):
            assert loss_distribution(tau, w).total == 1

    @pytest.mark.slow
    def test_normalized_up_to_length_eight(self):
        for tau in (Fraction(1, 4), Fraction(1, 2)):
            for w in enumerate_words("ab", 8):
                assert loss_distribution(tau, w).total == 1

    def test_subwords_are_ordered_longest_first(self):
        found = subwords("ab")
        assert found == [("a", "b"), ("a",), ("b",), ()]

    def test_subword_limit(self):
        with pytest.raises(TooLargeError):
            subwords("ab" * 10, limit=100)


@pytest.mark.unit
class TestWordText:
    @pytest.mark.parametrize(
        "word, text",
        [((), ""), (("a", "b"), "ab"), (("req", "ack"), "req.ack"), (("req",), "req.")],
    )
    def test_text_reads_back(self, word, text):
        assert word_text(word) == text
        assert as_word(text) == word


@pytest.mark.unit
class TestHigman:
    def test_long_random_sequence_has_an_increasing_pair(self):
        rng = np.random.default_rng(2000)
        words = [
            tuple("abc"[int(i)] for i in rng.integers(3, size=int(rng.integers(1, 9))))
            for _ in range(2000)
        ]
        pair = next(
            (
                (i, j)
                for j in range(len(words))
                for i in range(j)
                if is_subword(words[i], words[j])
            ),
            None,
        )
        assert pair is not None
        i, j = pair
        assert i < j and is_subword(words[i], words[j])

    def test_minimal_words_form_a_small_antichain(self):
        rng = np.random.default_rng(2001)
        configs = [
            Configuration.make("q", {"c": "".join("abc"[int(i)] for i in rng.integers(3, size=n))})
            for n in rng.integers(1, 9, size=2000)
        ]
        upset = UpSet(configs)
        assert all(upset.contains(s) for s in configs)
        generators = [g.word("c") for g in upset]
        assert len(generators) < 2000
        assert not any(
            is_subword(u, v) for u in generators for v in generators if u != v
        )

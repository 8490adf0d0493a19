# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Words over the message alphabet: subword order, embedding counts and the
message-loss distribution.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from nplcs.config import get_config
from nplcs.exceptions import TooLargeError

Word = Tuple[str, ...]
WordLike = Union[str, Sequence[str]]

EMPTY: Word = ()


def as_word(value: WordLike) -> Word:
    """
    Normalize a word given as a string or a sequence of message names.

    A plain string is read one message per character unless it contains dots,
    in which case it is split on them ("req.ack" is two messages).
    """
    if isinstance(value, str):
        if "." in value:
            return tuple(part for part in value.split(".") if part)
        return tuple(value)
    return tuple(value)


def word_text(word: Word) -> str:
    """Inverse of ``as_word``; a lone multi-letter message keeps a trailing dot."""
    if all(len(letter) == 1 for letter in word):
        return "".join(word)
    if len(word) == 1:
        return word[0] + "."
    return ".".join(word)


def is_subword(u: WordLike, v: WordLike) -> bool:
    """True iff ``u`` is obtained from ``v`` by deleting letters."""
    u, v = as_word(u), as_word(v)
    if len(u) > len(v):
        return False
    i = 0
    for letter in v:
        if i < len(u) and u[i] == letter:
            i += 1
    return i == len(u)


def count_embeddings(w: WordLike, sub: WordLike) -> int:
    """Number of index-monotone embeddings of ``sub`` into ``w``."""
    w, sub = as_word(w), as_word(sub)
    ways = [1] + [0] * len(sub)
    for letter in w:
        for j in range(len(sub), 0, -1):
            if sub[j - 1] == letter:
                ways[j] += ways[j - 1]
    return ways[len(sub)]


def subwords(w: WordLike, limit: Optional[int] = None) -> List[Word]:
    """
    All distinct subwords of ``w``, longest first, then lexicographic.

    Raises:
        TooLargeError: if more than ``limit`` subwords exist
    """
    w = as_word(w)
    if limit is None:
        limit = get_config().SUBWORD_LIMIT
    found = {EMPTY}
    for letter in w:
        found |= {prefix + (letter,) for prefix in found}
        if len(found) > limit:
            raise TooLargeError(
                f"word of length {len(w)} has more than {limit} subwords"
            )
    return sorted(found, key=lambda u: (-len(u), u))


def p_lost(tau: Fraction, w: WordLike, sub: WordLike) -> Fraction:
    """Probability that losses turn ``w`` into exactly ``sub``."""
    w, sub = as_word(w), as_word(sub)
    coefficient = count_embeddings(w, sub)
    if coefficient == 0:
        return Fraction(0)
    tau = Fraction(tau)
    return coefficient * tau ** (len(w) - len(sub)) * (1 - tau) ** len(sub)


def p_lost_contents(
    tau: Fraction, contents: Iterable[Word], reduced: Iterable[Word]
) -> Fraction:
    """Multi-channel loss probability: product of the per-channel values."""
    probability = Fraction(1)
    for w, sub in zip(contents, reduced):
        probability *= p_lost(tau, w, sub)
    return probability


@dataclass(frozen=True)
class LossDistribution:
    """Exact distribution of the word left after losses."""

    base: Word
    support: Tuple[Tuple[Word, Fraction], ...]

    @property
    def total(self) -> Fraction:
        return sum((p for _, p in self.support), Fraction(0))

    def probability(self, word: WordLike) -> Fraction:
        target = as_word(word)
        for candidate, p in self.support:
            if candidate == target:
                return p
        return Fraction(0)

    def __len__(self) -> int:
        return len(self.support)


def loss_distribution(
    tau: Fraction, w: WordLike, limit: Optional[int] = None
) -> LossDistribution:
    """Loss distribution of ``w`` at fault rate ``tau``."""
    w = as_word(w)
    support = tuple((sub, p_lost(tau, w, sub)) for sub in subwords(w, limit))
    return LossDistribution(base=w, support=support)

# Words (monomials) and the degree-lexicographical order
from enum import IntEnum
from itertools import product
from typing import Iterator

# A word is a tuple of 1-based variable indices; () is the empty word.
Word = tuple[int, ...]

EMPTY: Word = ()


class Ordering(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def deglex_key(word: Word) -> tuple[int, Word]:
    """Sort key realizing deg-lex: degree first, then indices left to right."""
    return (len(word), word)


def deglex_cmp(a: Word, b: Word) -> Ordering:
    """Compare two words in the degree-lexicographical order."""
    ka, kb = deglex_key(a), deglex_key(b)
    if ka < kb:
        return Ordering.LESS
    if ka > kb:
        return Ordering.GREATER
    return Ordering.EQUAL


def check_word(word: Word, nvars: int) -> None:
    """Raise ValueError unless every index lies in 1..nvars."""
    for index in word:
        if not 1 <= index <= nvars:
            raise ValueError(f"variable index {index} outside 1..{nvars}")


def enumerate_words(nvars: int, degree: int) -> Iterator[Word]:
    """All words of exactly the given degree, in deg-lex order."""
    return product(range(1, nvars + 1), repeat=degree)


def words_up_to(nvars: int, max_degree: int) -> Iterator[Word]:
    """All nonempty words of degree at most max_degree, in deg-lex order."""
    for degree in range(1, max_degree + 1):
        yield from enumerate_words(nvars, degree)


def count_words_up_to(nvars: int, max_degree: int) -> int:
    """Number of nonempty words of degree <= max_degree: Σ_{d=1..D} N^d."""
    return sum(nvars**degree for degree in range(1, max_degree + 1))


def contains_variable_at_most(word: Word, bound: int) -> bool:
    """Check whether some letter of word has index <= bound."""
    return any(index <= bound for index in word)


def permute_word(word: Word, relabel: dict[int, int]) -> Word:
    return tuple(relabel[index] for index in word)

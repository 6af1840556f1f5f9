"""Group words as strings of single-character letters.

A lowercase letter is a generator and the matching uppercase letter is its
inverse, so ``"aB"`` means ``a * b^-1``.  Words act on the left: the last
letter is applied first.
"""

__all__ = [
    "LETTER_ORDER",
    "inverse",
    "free_reduce",
    "power",
    "conjugate",
    "shortlex_key",
    "reduced_words",
]

LETTER_ORDER = "aAbBcCdDfFkKrRsStTxXyY"


def inverse(word):
    return word[::-1].swapcase()


def free_reduce(word):
    out = []
    for ch in word:
        if out and out[-1] == ch.swapcase():
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def power(word, k):
    if k >= 0:
        return word * k
    return inverse(word) * (-k)


def conjugate(g, x):
    """Return the word ``g x g^-1`` (not reduced)."""
    return g + x + inverse(g)


def _letter_rank(ch):
    i = LETTER_ORDER.find(ch)
    return i if i >= 0 else len(LETTER_ORDER) + ord(ch)


def shortlex_key(word):
    return (len(word), tuple(_letter_rank(c) for c in word))


def reduced_words(letters, max_length):
    """Yield freely reduced words over ``letters`` and their inverses, shortlex."""
    alphabet = sorted(set(letters) | {c.swapcase() for c in letters}, key=_letter_rank)
    layer = [""]
    yield ""
    for _ in range(max_length):
        # extending a lex-sorted layer letter by letter keeps lex order
        layer = [w + c for w in layer for c in alphabet if not w or w[-1] != c.swapcase()]
        yield from layer

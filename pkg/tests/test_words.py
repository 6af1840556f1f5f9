from hypothesis import given, strategies as st

from windmills.words import conjugate, free_reduce, inverse, power, reduced_words, shortlex_key

words = st.text(alphabet="aAbB", max_size=12)


def test_inverse_and_power():
    assert inverse("aB") == "bA"
    assert power("ab", 2) == "abab"
    assert power("ab", -1) == "BA"
    assert power("a", 0) == ""


def test_conjugate_is_unreduced():
    assert conjugate("a", "b") == "abA"
    assert free_reduce(conjugate("a", "a")) == "a"


def test_reduced_word_counts():
    # 1 + 4 + 4*3 + 4*9 words of length <= 3 in a free group of rank 2
    ws = list(reduced_words("ab", 3))
    assert len(ws) == 1 + 4 + 12 + 36
    assert ws == sorted(ws, key=shortlex_key)
    assert all(free_reduce(w) == w for w in ws)


@given(words)
def test_free_reduce_idempotent(w):
    r = free_reduce(w)
    assert free_reduce(r) == r
    assert free_reduce(w + inverse(w)) == ""


@given(words, words)
def test_free_reduce_is_a_homomorphism(u, v):
    assert free_reduce(u + v) == free_reduce(free_reduce(u) + free_reduce(v))

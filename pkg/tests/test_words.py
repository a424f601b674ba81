import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freeradial.errors import DomainError, FormatError, ResourceCapError
from freeradial.words import (
    IDENTITY,
    ball_size,
    enumerate_ball,
    format_word,
    global_index,
    inverse,
    is_reduced,
    left_multiply_word,
    multiply,
    parse_word,
    power,
    reduce_word,
    sphere_rank,
    sphere_size,
    word_from_rank,
)


def naive_reduce(letters):
    """Delete the first cancelling pair until none is left."""
    w = list(letters)
    i = 0
    while i < len(w) - 1:
        if w[i] == -w[i + 1]:
            del w[i:i + 2]
            i = max(i - 1, 0)
        else:
            i += 1
    return tuple(w)


def letters(r=3, max_size=24):
    gen = st.integers(1, r).flatmap(lambda g: st.sampled_from([g, -g]))
    return st.lists(gen, max_size=max_size)


def reduced_words(r=3, max_size=12):
    return letters(r, max_size).map(reduce_word)


@given(letters())
def test_reduce_matches_naive_and_is_idempotent(ls):
    w = reduce_word(ls)
    assert w == naive_reduce(ls)
    assert is_reduced(w)
    assert reduce_word(w) == w


@given(reduced_words(), reduced_words(), reduced_words())
def test_multiplication_is_associative(u, v, w):
    assert multiply(multiply(u, v), w) == multiply(u, multiply(v, w))


@given(reduced_words(), reduced_words())
def test_length_parity_and_triangle(u, v):
    uv = multiply(u, v)
    assert (len(uv) - len(u) - len(v)) % 2 == 0
    assert abs(len(u) - len(v)) <= len(uv) <= len(u) + len(v)


@given(reduced_words())
def test_inverse_laws(w):
    assert multiply(w, inverse(w)) == IDENTITY
    assert multiply(inverse(w), w) == IDENTITY
    assert inverse(inverse(w)) == w


def test_power():
    assert power((1, 2), 3) == (1, 2, 1, 2, 1, 2)
    assert power((1, 2), -1) == (-2, -1)
    assert power((1, 2, -1), 2) == (1, 2, 2, -1)
    assert power((1,), 0) == IDENTITY


def test_reduce_rejects_bad_letters():
    with pytest.raises(DomainError):
        reduce_word([0])
    with pytest.raises(DomainError):
        reduce_word([3], r=2)


@pytest.mark.parametrize("r", [2, 3, 4])
def test_sphere_sizes_match_enumeration(r):
    ball = enumerate_ball(r, 5)
    counts = np.bincount(ball.lengths, minlength=6)
    assert list(counts) == [sphere_size(r, n) for n in range(6)]
    assert ball.size == ball_size(r, 5) == 1 + r * ((2 * r - 1) ** 5 - 1) // (r - 1)


def test_sphere_size_values():
    assert [sphere_size(2, n) for n in range(4)] == [1, 4, 12, 36]
    assert sphere_size(3, 2) == 30


def test_ball_words_are_distinct_reduced_and_ordered():
    ball = enumerate_ball(2, 4)
    words = ball.words
    assert len(set(words)) == len(words)
    assert all(is_reduced(w) for w in words)
    assert [len(w) for w in words] == sorted(len(w) for w in words)
    brute = {reduce_word(ls) for n in range(5) for ls in itertools.product([1, -1, 2, -2], repeat=n)}
    assert set(words) == {w for w in brute if len(w) <= 4}


@given(st.integers(2, 4), st.data())
def test_rank_round_trip(r, data):
    n = data.draw(st.integers(0, 7))
    rank = data.draw(st.integers(0, sphere_size(r, n) - 1))
    w = word_from_rank(n, rank, r)
    assert len(w) == n and is_reduced(w)
    assert sphere_rank(w, r) == rank


def test_index_word_bijection():
    ball = enumerate_ball(3, 3)
    for i, w in enumerate(ball.words):
        assert ball.index(w) == i
        assert ball.word(i) == w


def test_ball_cap():
    with pytest.raises(ResourceCapError):
        enumerate_ball(2, 12, cap=1000)


@settings(max_examples=50)
@given(reduced_words(r=2, max_size=5))
def test_vectorized_left_multiplication_matches_words(g):
    ball = enumerate_ball(2, 4)
    n2, rank2 = left_multiply_word(g, ball.lengths, ball.ranks, 2)
    expected = [multiply(g, w) for w in ball.words]
    assert list(n2) == [len(w) for w in expected]
    assert list(rank2) == [sphere_rank(w, 2) for w in expected]
    big = enumerate_ball(2, 9)
    idx = global_index(n2, rank2, 2)
    assert [big.word(int(i)) for i in idx] == expected


def test_format_and_parse():
    assert format_word(IDENTITY) == "e"
    assert format_word((1, -2, 1)) == "a+b-a+"
    assert parse_word("a+b-a+") == (1, -2, 1)
    assert parse_word("e") == IDENTITY
    assert parse_word("a+a-b+") == (2,)
    for bad in ("a", "a*", "+a", "z+"):
        with pytest.raises(FormatError):
            parse_word(bad, 2)


@given(reduced_words(r=4))
def test_format_parse_round_trip(w):
    assert parse_word(format_word(w)) == w

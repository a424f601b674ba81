"""Reduced words in the free group F_r and balls of its Cayley tree.

A word is a tuple of nonzero ints: ``+i`` is the i-th generator, ``-i`` its
inverse (``1 <= i <= r``). The empty tuple is the identity.

Vertices of a ball are numbered in BFS order, and inside a sphere
lexicographically with letters ordered ``a+ < a- < b+ < b- < ...``. Indices
can be computed arithmetically from ``(length, rank-in-sphere)`` pairs, which
is what lets :mod:`freeradial.opnorm` act on balls with millions of vertices
without materializing the words.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DomainError, FormatError, ResourceCapError

Word = tuple[int, ...]

IDENTITY: Word = ()
DEFAULT_BALL_CAP = 2_000_000

_LETTERS = string.ascii_lowercase


def _check_rank(r: int) -> None:
    if r < 2:
        raise DomainError(f"rank must be >= 2, got {r}")


def letter_code(letter: int) -> int:
    """Position of a signed letter in the order a+, a-, b+, b-, ..."""
    return 2 * (abs(letter) - 1) + (letter < 0)


def code_letter(code: int) -> int:
    gen = code // 2 + 1
    return -gen if code % 2 else gen


def reduce_word(letters, r: int | None = None) -> Word:
    """Freely reduce a sequence of signed letters (single stack pass)."""
    out: list[int] = []
    for s in letters:
        s = int(s)
        if s == 0 or (r is not None and abs(s) > r):
            raise DomainError(f"generator index {s} out of range for rank {r}")
        if out and out[-1] == -s:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


def is_reduced(w) -> bool:
    return all(w[k] != -w[k + 1] for k in range(len(w) - 1))


def multiply(w1: Word, w2: Word) -> Word:
    # only the junction can cancel when both inputs are reduced
    k = 0
    n1, n2 = len(w1), len(w2)
    while k < n1 and k < n2 and w1[n1 - 1 - k] == -w2[k]:
        k += 1
    return tuple(w1[: n1 - k]) + tuple(w2[k:])


def inverse(w: Word) -> Word:
    return tuple(-s for s in reversed(w))


def power(w: Word, k: int) -> Word:
    if k < 0:
        w, k = inverse(w), -k
    out: Word = IDENTITY
    for _ in range(k):
        out = multiply(out, w)
    return out


def format_word(w: Word) -> str:
    """``(1, -2, 1)`` -> ``'a+b-a+'``; the identity is written ``'e'``."""
    if not w:
        return "e"
    return "".join(_LETTERS[abs(s) - 1] + ("+" if s > 0 else "-") for s in w)


def parse_word(text: str, r: int | None = None) -> Word:
    """Inverse of :func:`format_word`; also accepts ``''`` for the identity.

    The result is freely reduced.
    """
    text = text.strip()
    if text in ("", "e"):
        return IDENTITY
    if len(text) % 2:
        raise FormatError(f"cannot parse word {text!r}")
    letters = []
    for k in range(0, len(text), 2):
        ch, sign = text[k], text[k + 1]
        if ch not in _LETTERS or sign not in "+-":
            raise FormatError(f"cannot parse word {text!r}")
        gen = _LETTERS.index(ch) + 1
        letters.append(gen if sign == "+" else -gen)
    try:
        return reduce_word(letters, r)
    except DomainError as exc:
        raise FormatError(str(exc)) from None


def sphere_size(r: int, n: int) -> int:
    """Number of reduced words of length ``n``: 1, 2r, 2r(2r-1), ..."""
    _check_rank(r)
    if n < 0:
        raise DomainError("length must be >= 0")
    if n == 0:
        return 1
    return 2 * r * (2 * r - 1) ** (n - 1)


def ball_size(r: int, N: int) -> int:
    _check_rank(r)
    if N < 0:
        raise DomainError("radius must be >= 0")
    return 1 + (2 * r * ((2 * r - 1) ** N - 1)) // (2 * r - 2)


def sphere_offsets(r: int, N: int) -> np.ndarray:
    """Start index of each sphere 0..N+1 inside the BFS numbering."""
    sizes = [sphere_size(r, n) for n in range(N + 1)]
    return np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)


def sphere_rank(w: Word, r: int) -> int:
    """Lexicographic position of ``w`` among the words of its length."""
    q = 2 * r - 1
    if not w:
        return 0
    rank = letter_code(w[0])
    prev = letter_code(w[0])
    for s in w[1:]:
        c = letter_code(s)
        rank = rank * q + c - (c > (prev ^ 1))
        prev = c
    return rank


def word_from_rank(n: int, rank: int, r: int) -> Word:
    q = 2 * r - 1
    if n == 0:
        return IDENTITY
    digits = []
    for _ in range(n - 1):
        rank, d = divmod(rank, q)
        digits.append(d)
    codes = [rank]
    for d in reversed(digits):
        forbidden = codes[-1] ^ 1
        codes.append(d + (d >= forbidden))
    return tuple(code_letter(c) for c in codes)


@dataclass(frozen=True)
class BallIndex:
    """Vertices of the ball of radius ``N`` in the (2r)-regular tree."""

    r: int
    N: int
    offsets: np.ndarray = field(repr=False, compare=False)

    @property
    def size(self) -> int:
        return int(self.offsets[-1])

    @property
    def sphere_sizes(self) -> list[int]:
        return [int(v) for v in np.diff(self.offsets)]

    def index(self, w: Word) -> int:
        n = len(w)
        if n > self.N:
            raise KeyError(w)
        return int(self.offsets[n]) + sphere_rank(w, self.r)

    def word(self, i: int) -> Word:
        n = int(np.searchsorted(self.offsets, i, side="right")) - 1
        if not 0 <= n <= self.N:
            raise IndexError(i)
        return word_from_rank(n, i - int(self.offsets[n]), self.r)

    def sphere(self, n: int) -> range:
        return range(int(self.offsets[n]), int(self.offsets[n + 1]))

    @cached_property
    def words(self) -> list[Word]:
        """Explicit BFS enumeration (append letters in code order)."""
        r = self.r
        layer: list[Word] = [IDENTITY]
        out = [IDENTITY]
        for _ in range(self.N):
            nxt = []
            for w in layer:
                for c in range(2 * r):
                    s = code_letter(c)
                    if w and w[-1] == -s:
                        continue
                    nxt.append(w + (s,))
            out.extend(nxt)
            layer = nxt
        return out

    @cached_property
    def ordinal(self) -> dict[Word, int]:
        return {w: i for i, w in enumerate(self.words)}

    @cached_property
    def lengths(self) -> np.ndarray:
        return np.repeat(np.arange(self.N + 1, dtype=np.int64), np.diff(self.offsets))

    @cached_property
    def ranks(self) -> np.ndarray:
        return np.arange(self.size, dtype=np.int64) - self.offsets[self.lengths]


def enumerate_ball(r: int, N: int, cap: int = DEFAULT_BALL_CAP) -> BallIndex:
    _check_rank(r)
    if N < 0:
        raise DomainError("radius must be >= 0")
    size = ball_size(r, N)
    if size > cap:
        raise ResourceCapError(f"ball of radius {N} in F_{r} has {size} vertices (cap {cap})")
    return BallIndex(r, N, sphere_offsets(r, N))


def left_multiply_codes(n: np.ndarray, rank: np.ndarray, codes, r: int):
    """Vectorized ``s * w`` on words given as (length, sphere rank) arrays.

    ``codes`` is one letter code or an array of them (``-1`` leaves that
    entry untouched). Returns new ``(n, rank)`` arrays.
    """
    q = 2 * r - 1
    n = np.asarray(n, dtype=np.int64)
    rank = np.asarray(rank, dtype=np.int64)
    codes = np.broadcast_to(np.asarray(codes, dtype=np.int64), n.shape)
    active = codes >= 0
    pw = q ** np.arange(int(n.max(initial=0)) + 2, dtype=np.int64)

    nm1 = np.maximum(n - 1, 0)
    head_pow = pw[nm1]
    first = np.where(n > 0, rank // head_pow, -1)
    tail = np.where(n > 0, rank % head_pow, 0)
    cancel = active & (n > 0) & (first == (codes ^ 1))
    grow = active & ~cancel

    new_n = n.copy()
    new_rank = rank.copy()

    # prepend: new first letter s, old first letter re-encoded relative to s
    second = np.where(n > 0, first - (first > (codes ^ 1)), 0)
    grown = codes * pw[n] + np.where(n > 0, second * head_pow + tail, 0)
    new_n[grow] = n[grow] + 1
    new_rank[grow] = grown[grow]

    # cancel: drop the first letter, re-encode the second one absolutely
    nm2 = np.maximum(n - 2, 0)
    a2 = np.where(n > 1, tail // pw[nm2], 0)
    rest = np.where(n > 1, tail % pw[nm2], 0)
    c2 = a2 + (a2 >= (first ^ 1))
    shrunk = np.where(n > 1, c2 * pw[nm2] + rest, 0)
    new_n[cancel] = n[cancel] - 1
    new_rank[cancel] = shrunk[cancel]
    return new_n, new_rank


def left_multiply_word(g: Word, n: np.ndarray, rank: np.ndarray, r: int):
    """Vectorized ``g * w`` for one word ``g``."""
    for s in reversed(g):
        n, rank = left_multiply_codes(n, rank, letter_code(s), r)
    return n, rank


def global_index(n: np.ndarray, rank: np.ndarray, r: int) -> np.ndarray:
    offsets = sphere_offsets(r, int(np.max(n, initial=0)))
    return offsets[n] + rank

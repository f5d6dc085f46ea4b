"""Exact word algebra in the free group F(a, b).

Letters are encoded as single characters: ``a``, ``b`` and ``A``, ``B`` for
the inverses.  The canonical letter order ``a < A < b < B`` drives every
tie-break and the enumeration order of balls.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

LETTERS = "aAbB"
LETTER_RANK = {c: i for i, c in enumerate(LETTERS)}
INVERSE_LETTER = {"a": "A", "A": "a", "b": "B", "B": "b"}


class WordError(ValueError):
    pass


def _check_letters(letters: str) -> None:
    for c in letters:
        if c not in LETTER_RANK:
            raise WordError(f"invalid letter {c!r} (expected one of {LETTERS})")


def free_reduce(letters: Iterable[str]) -> str:
    """Cancel adjacent inverse pairs until none remain."""
    stack: list[str] = []
    for c in letters:
        if c not in LETTER_RANK:
            raise WordError(f"invalid letter {c!r} (expected one of {LETTERS})")
        if stack and stack[-1] == INVERSE_LETTER[c]:
            stack.pop()
        else:
            stack.append(c)
    return "".join(stack)


@dataclass(frozen=True, order=False)
class ReducedWord:
    """A freely reduced word; construct through :func:`reduce` or :meth:`parse`."""

    letters: str = ""

    def __post_init__(self):
        _check_letters(self.letters)
        for x, y in zip(self.letters, self.letters[1:]):
            if INVERSE_LETTER[x] == y:
                raise WordError(f"{self.letters!r} is not freely reduced")

    @classmethod
    def parse(cls, text: str) -> "ReducedWord":
        text = text.strip()
        if text in ("e", "1"):
            text = ""
        return cls(free_reduce(text))

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return self.letters or "e"

    def __repr__(self) -> str:
        return f"ReducedWord({str(self)!r})"

    def __mul__(self, other: "ReducedWord") -> "ReducedWord":
        u, v = self.letters, other.letters
        i = 0
        while i < min(len(u), len(v)) and INVERSE_LETTER[u[len(u) - 1 - i]] == v[i]:
            i += 1
        return ReducedWord(u[: len(u) - i] + v[i:])

    def inverse(self) -> "ReducedWord":
        return ReducedWord("".join(INVERSE_LETTER[c] for c in reversed(self.letters)))

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def sort_key(self) -> tuple:
        return (len(self.letters), tuple(LETTER_RANK[c] for c in self.letters))

    def __lt__(self, other: "ReducedWord") -> bool:
        return self.sort_key() < other.sort_key()


IDENTITY = ReducedWord("")
GEN_A = ReducedWord("a")
GEN_B = ReducedWord("b")


def reduce(letters: Iterable[str] | str) -> ReducedWord:
    return ReducedWord(free_reduce(letters))


def group_op(u: ReducedWord, v: ReducedWord, mode: str = "multiply") -> ReducedWord:
    """``u*v`` for mode ``multiply``, ``u^-1 * v`` for mode ``invert-left``."""
    if mode == "multiply":
        return u * v
    if mode == "invert-left":
        return u.inverse() * v
    raise ValueError(f"unknown mode {mode!r}")


def word_key(letters: str) -> tuple:
    return (len(letters), tuple(LETTER_RANK[c] for c in letters))


def iter_ball(L: int) -> Iterator[str]:
    """Reduced words of length <= L as strings, by length then lexicographically."""
    if L < 0:
        raise ValueError("L must be non-negative")
    layer = [""]
    yield ""
    for _ in range(L):
        nxt = []
        for w in layer:
            for c in LETTERS:
                if w and INVERSE_LETTER[w[-1]] == c:
                    continue
                nxt.append(w + c)
        # prefixes are in order and letters are appended in order, so nxt is sorted
        yield from nxt
        layer = nxt


def enumerate_ball(L: int) -> list[ReducedWord]:
    return [ReducedWord(w) for w in iter_ball(L)]


def ball_size(L: int) -> int:
    return 1 + sum(4 * 3 ** (l - 1) for l in range(1, L + 1))


@dataclass(frozen=True)
class SyllableForm:
    """``w = a^{k[n]} b^{l[n]} ... a^{k[0]} b^{l[0]}``.

    Entries ``k[0..n-1]`` and ``l[1..n]`` are nonzero; ``k[n]`` (leftmost
    a-syllable) and ``l[0]`` (rightmost b-syllable) may vanish.
    """

    n: int
    k: tuple[int, ...]
    l: tuple[int, ...]

    def reassemble(self) -> ReducedWord:
        parts = []
        for i in range(self.n, -1, -1):
            ki, li = self.k[i], self.l[i]
            parts.append(("a" if ki > 0 else "A") * abs(ki))
            parts.append(("b" if li > 0 else "B") * abs(li))
        return reduce("".join(parts))

    @property
    def length(self) -> int:
        return sum(map(abs, self.k)) + sum(map(abs, self.l))


def _syllables(letters: str) -> list[tuple[str, int]]:
    out: list[tuple[str, int]] = []
    for c in letters:
        gen = c.lower()
        step = 1 if c.islower() else -1
        if out and out[-1][0] == gen:
            out[-1] = (gen, out[-1][1] + step)
        else:
            out.append((gen, step))
    return out


def syllable_decomposition(w: ReducedWord) -> SyllableForm:
    if w.is_identity:
        raise WordError("the identity has no syllable decomposition")
    syl = _syllables(w.letters)[::-1]  # rightmost syllable first
    pos = 0
    l = []
    k = []
    if syl[0][0] == "b":
        l.append(syl[0][1])
        pos = 1
    else:
        l.append(0)
    while True:
        if pos == len(syl):
            k.append(0)
            break
        k.append(syl[pos][1])
        pos += 1
        if pos == len(syl):
            break
        l.append(syl[pos][1])
        pos += 1
    n = len(k) - 1
    form = SyllableForm(n=n, k=tuple(k), l=tuple(l))
    assert len(form.k) == len(form.l) == n + 1
    return form


def standard_paradox():
    """The classical four-piece paradoxical decomposition of F2.

    ``P1 = aF ∪ N``, ``P2 = AF ∖ N`` with translators ``e`` and ``a``;
    ``Q1 = bF``, ``Q2 = BF`` with translators ``e`` and ``b``, where
    ``N = {a^-n : n >= 0}``.
    """
    from .pieces import Piece
    from .paradox import ParadoxicalDecomposition

    neg = Piece.neg_powers_of_a()
    p1 = Piece.union(Piece.starts_with("a"), neg)
    p2 = Piece.difference(Piece.starts_with("A"), neg)
    q1 = Piece.starts_with("b")
    q2 = Piece.starts_with("B")
    return ParadoxicalDecomposition(
        p_family=((p1, IDENTITY), (p2, GEN_A)),
        q_family=((q1, IDENTITY), (q2, GEN_B)),
    )


@dataclass(frozen=True)
class ProductElement:
    """Element ``(w, c)`` of ``F2 x C_n``; ``C_n`` is written additively."""

    word: ReducedWord
    c: int
    n: int

    def __post_init__(self):
        if self.n < 1 or not 0 <= self.c < self.n:
            raise ValueError(f"bad cyclic coordinate {self.c} mod {self.n}")

    def __mul__(self, other: "ProductElement") -> "ProductElement":
        if other.n != self.n:
            raise ValueError("cyclic factors differ")
        return ProductElement(self.word * other.word, (self.c + other.c) % self.n, self.n)

    def inverse(self) -> "ProductElement":
        return ProductElement(self.word.inverse(), (-self.c) % self.n, self.n)

    @property
    def is_identity(self) -> bool:
        return self.word.is_identity and self.c == 0

    def __len__(self) -> int:
        return len(self.word)

    def __str__(self) -> str:
        return f"({self.word},{self.c})"

    def sort_key(self) -> tuple:
        return (self.word.sort_key(), self.c)

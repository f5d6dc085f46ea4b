"""Intensional subsets of group models.

A :class:`Piece` is a small expression tree whose membership test works for
any element, so identities such as ``F2 = P1 ⊔ aP2`` can be checked at every
word length without truncating the pieces themselves.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .free_group import LETTER_RANK, ProductElement, ReducedWord

KINDS = (
    "all",
    "empty",
    "starts_with",
    "neg_powers_of_a",
    "singleton",
    "union",
    "intersection",
    "difference",
    "preimage",
    "product_with_finite",
)


def element_to_json(g) -> Any:
    if isinstance(g, ReducedWord):
        return str(g)
    if isinstance(g, ProductElement):
        return [str(g.word), g.c]
    raise TypeError(f"cannot encode {g!r}")


def element_from_json(obj, n: int | None = None):
    if isinstance(obj, str):
        return ReducedWord.parse(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        if n is None:
            raise ValueError("product element needs the cyclic order n")
        return ProductElement(ReducedWord.parse(obj[0]), int(obj[1]) % n, n)
    raise ValueError(f"cannot decode element {obj!r}")


# Maps usable in ``preimage`` pieces: ("id",), ("proj1",), ("lmul", g).
def apply_map(map_id: tuple, x):
    kind = map_id[0]
    if kind == "id":
        return x
    if kind == "proj1":
        return x.word
    if kind == "lmul":
        return map_id[1] * x
    raise ValueError(f"unknown map {map_id!r}")


def _map_to_json(map_id: tuple):
    if map_id[0] == "lmul":
        return ["lmul", element_to_json(map_id[1])]
    return [map_id[0]]


def _map_from_json(obj, n):
    if obj[0] == "lmul":
        return ("lmul", element_from_json(obj[1], n))
    return (obj[0],)


@dataclass(frozen=True)
class Piece:
    kind: str
    args: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown piece kind {self.kind!r}")

    # constructors
    @classmethod
    def all(cls) -> "Piece":
        return cls("all")

    @classmethod
    def empty(cls) -> "Piece":
        return cls("empty")

    @classmethod
    def starts_with(cls, letter: str) -> "Piece":
        if letter not in LETTER_RANK:
            raise ValueError(f"bad letter {letter!r}")
        return cls("starts_with", (letter,))

    @classmethod
    def neg_powers_of_a(cls) -> "Piece":
        return cls("neg_powers_of_a")

    @classmethod
    def singleton(cls, g) -> "Piece":
        return cls("singleton", (g,))

    @classmethod
    def union(cls, *parts: "Piece") -> "Piece":
        return cls("union", tuple(parts))

    @classmethod
    def intersection(cls, *parts: "Piece") -> "Piece":
        return cls("intersection", tuple(parts))

    @classmethod
    def difference(cls, a: "Piece", b: "Piece") -> "Piece":
        return cls("difference", (a, b))

    @classmethod
    def preimage(cls, map_id: tuple, p: "Piece") -> "Piece":
        return cls("preimage", (tuple(map_id), p))

    @classmethod
    def translate(cls, g, p: "Piece") -> "Piece":
        """The set ``gP``: x belongs iff ``g^-1 x`` is in ``P``."""
        return cls.preimage(("lmul", g.inverse()), p)

    @classmethod
    def product_with_finite(cls, p: "Piece", components) -> "Piece":
        return cls("product_with_finite", (p, tuple(sorted(set(components)))))

    def contains(self, x) -> bool:
        k, a = self.kind, self.args
        if k == "all":
            return True
        if k == "empty":
            return False
        if k == "starts_with":
            return x.letters[:1] == a[0]
        if k == "neg_powers_of_a":
            return set(x.letters) <= {"A"}
        if k == "singleton":
            return x == a[0]
        if k == "union":
            return any(p.contains(x) for p in a)
        if k == "intersection":
            return all(p.contains(x) for p in a)
        if k == "difference":
            return a[0].contains(x) and not a[1].contains(x)
        if k == "preimage":
            return a[1].contains(apply_map(a[0], x))
        if k == "product_with_finite":
            return x.c in a[1] and a[0].contains(x.word)
        raise AssertionError(k)

    __contains__ = contains

    def to_json(self) -> dict:
        k, a = self.kind, self.args
        if k in ("union", "intersection", "difference"):
            args = [p.to_json() for p in a]
        elif k == "singleton":
            args = [element_to_json(a[0])]
        elif k == "preimage":
            args = [_map_to_json(a[0]), a[1].to_json()]
        elif k == "product_with_finite":
            args = [a[0].to_json(), list(a[1])]
        else:
            args = list(a)
        return {"kind": k, "args": args}

    @classmethod
    def from_json(cls, obj: dict, n: int | None = None) -> "Piece":
        k, a = obj["kind"], obj.get("args", [])
        if k in ("union", "intersection", "difference"):
            return cls(k, tuple(cls.from_json(p, n) for p in a))
        if k == "singleton":
            return cls(k, (element_from_json(a[0], n),))
        if k == "preimage":
            return cls(k, (_map_from_json(a[0], n), cls.from_json(a[1], n)))
        if k == "product_with_finite":
            return cls(k, (cls.from_json(a[0], n), tuple(a[1])))
        return cls(k, tuple(a))

    def __str__(self) -> str:
        k, a = self.kind, self.args
        if k == "starts_with":
            return f"{a[0]}F"
        if k == "neg_powers_of_a":
            return "N"
        if k == "singleton":
            return "{" + str(a[0]) + "}"
        if k in ("union", "intersection"):
            op = " ∪ " if k == "union" else " ∩ "
            return "(" + op.join(map(str, a)) + ")"
        if k == "difference":
            return f"({a[0]} ∖ {a[1]})"
        if k == "preimage":
            m = a[0]
            name = f"lmul[{m[1]}]" if m[0] == "lmul" else m[0]
            return f"{name}^-1{a[1]}"
        if k == "product_with_finite":
            return f"{a[0]} × {set(a[1])}"
        return k

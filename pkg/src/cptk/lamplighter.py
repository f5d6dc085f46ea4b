"""The lamplighter group ``Sym(n) wr Z`` acting on the integers.

Blocks ``[nk, nk + n)`` are lamps; ``(alpha, m)`` shifts blocks by ``m`` and
then permutes inside the landing block with ``alpha`` at that position.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field


def _identity(n: int) -> tuple[int, ...]:
    return tuple(range(n))


@dataclass(frozen=True)
class LamplighterElement:
    n: int
    lamps: tuple[tuple[int, tuple[int, ...]], ...] = ()  # sorted (pos, perm), no identity perms
    shift: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        for pos, perm in self.lamps:
            if sorted(perm) != list(range(self.n)):
                raise ValueError(f"lamp at {pos} is not a permutation of 0..{self.n - 1}")

    @classmethod
    def make(cls, n: int, lamps: dict | None = None, shift: int = 0) -> "LamplighterElement":
        ident = _identity(n)
        items = sorted((int(p), tuple(q)) for p, q in (lamps or {}).items() if tuple(q) != ident)
        return cls(n, tuple(items), shift)

    @property
    def lamp_map(self) -> dict[int, tuple[int, ...]]:
        return dict(self.lamps)

    def lamp(self, pos: int) -> tuple[int, ...]:
        return self.lamp_map.get(pos, _identity(self.n))

    def to_json(self) -> dict:
        return {"n": self.n, "lamps": [[p, list(q)] for p, q in self.lamps], "shift": self.shift}

    @classmethod
    def from_json(cls, obj: dict) -> "LamplighterElement":
        return cls.make(obj["n"], {p: q for p, q in obj.get("lamps", [])}, obj.get("shift", 0))


def lamplighter_act(g: LamplighterElement, z: int) -> int:
    k, r = divmod(z, g.n)
    pos = g.shift + k
    return g.n * pos + g.lamp(pos)[r]


def lamplighter_compose(g: LamplighterElement, h: LamplighterElement) -> LamplighterElement:
    """``g ∘ h``, so that acting by it equals acting by ``h`` then ``g``."""
    if g.n != h.n:
        raise ValueError(f"cannot compose elements of Sym({g.n}) wr Z and Sym({h.n}) wr Z")
    positions = set(g.lamp_map) | {p + g.shift for p in h.lamp_map}
    lamps = {}
    for p in positions:
        a, b = g.lamp(p), h.lamp(p - g.shift)
        lamps[p] = tuple(a[b[r]] for r in range(g.n))
    return LamplighterElement.make(g.n, lamps, g.shift + h.shift)


def displacement_bound(g: LamplighterElement) -> int:
    return g.n * (abs(g.shift) + 1)


def random_element(rng: random.Random, n: int, max_shift: int = 5, max_support: int = 4, span: int = 10):
    lamps = {}
    for _ in range(rng.randint(0, max_support)):
        perm = list(range(n))
        rng.shuffle(perm)
        lamps[rng.randint(-span, span)] = tuple(perm)
    return LamplighterElement.make(n, lamps, rng.randint(-max_shift, max_shift))


@dataclass
class HomomorphismCheck:
    trials: int
    failures: list = field(default_factory=list)
    max_displacement_ratio: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures


def check_action(n: int = 3, trials: int = 1000, seed: int = 0, zmax: int = 100) -> HomomorphismCheck:
    """Seeded test of ``act(g∘h, z) = act(g, act(h, z))`` and the displacement bound."""
    rng = random.Random(seed)
    out = HomomorphismCheck(trials)
    for _ in range(trials):
        g, h = random_element(rng, n), random_element(rng, n)
        z = rng.randint(-zmax, zmax)
        gh = lamplighter_compose(g, h)
        if lamplighter_act(gh, z) != lamplighter_act(g, lamplighter_act(h, z)):
            out.failures.append({"kind": "homomorphism", "g": g.to_json(), "h": h.to_json(), "z": z})
        for el in (g, h, gh):
            d = abs(lamplighter_act(el, z) - z)
            if d > displacement_bound(el):
                out.failures.append({"kind": "displacement", "g": el.to_json(), "z": z})
            out.max_displacement_ratio = max(out.max_displacement_ratio, d / displacement_bound(el))
    return out

"""Bounded-displacement permutations and the free-group embedding.

``lemma42_generators`` builds two permutations of ``{0..2|w|}`` that move
``0`` to ``2|w|`` under ``w`` while every generator moves points by at most
2.  ``embed_f2`` copies those pairs onto disjoint paths of a window, one
path per nontrivial word of length ``<= L``, and glues them into two window
permutations.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .coarse import (
    CoarseWindow,
    PreconditionError,
    WindowError,
    components,
    entourage_power_neighborhood,
)
from .config import DEFAULT_BUDGET, Budget
from .free_group import ReducedWord, SyllableForm, enumerate_ball, syllable_decomposition
from .reports import Report


class CapacityError(PreconditionError):
    pass


# --------------------------------------------------------------------------
# permutations of windows


def _invert(forward: Sequence[int]) -> tuple[int, ...]:
    inv = [-1] * len(forward)
    for x, y in enumerate(forward):
        if not 0 <= y < len(forward) or inv[y] != -1:
            raise PreconditionError("table is not a permutation")
        inv[y] = x
    return tuple(inv)


def displacement(window: CoarseWindow, forward: Sequence[int], limit: int | None = None) -> int | None:
    """Largest window distance ``d(x, forward(x))``; ``None`` if some pair is disconnected or beyond ``limit``."""
    worst = 0
    for x, y in enumerate(forward):
        if x == y:
            continue
        d = window.distance(x, y, limit)
        if d is None:
            return None
        worst = max(worst, d)
    return worst


@dataclass(frozen=True, eq=False)
class BoundedPermutation:
    window: CoarseWindow
    forward: tuple[int, ...]
    inverse: tuple[int, ...]
    displacement_power: int

    @classmethod
    def from_table(cls, window: CoarseWindow, forward: Sequence[int], power: int | None = None):
        """Checks bijectivity; computes the displacement radius unless ``power`` is given and verified."""
        forward = tuple(forward)
        if len(forward) != window.size:
            raise PreconditionError("table length differs from the window size")
        inverse = _invert(forward)
        d = displacement(window, forward, power)
        if d is None:
            if power is not None:
                raise PreconditionError(f"graph not inside E^{power}")
            raise PreconditionError("permutation moves a point to another component")
        return cls(window, forward, inverse, power if power is not None else d)

    @classmethod
    def from_label_map(cls, window: CoarseWindow, fn: Callable, power: int | None = None):
        idx = window.index
        return cls.from_table(window, [idx[fn(lab)] for lab in window.labels], power)

    @classmethod
    def identity(cls, window: CoarseWindow):
        t = tuple(range(window.size))
        return cls(window, t, t, 0)

    def __call__(self, x: int) -> int:
        return self.forward[x]

    def inv(self) -> "BoundedPermutation":
        return BoundedPermutation(self.window, self.inverse, self.forward, self.displacement_power)

    def compose(self, other: "BoundedPermutation") -> "BoundedPermutation":
        """``self ∘ other``."""
        fwd = tuple(self.forward[other.forward[x]] for x in range(len(self.forward)))
        return BoundedPermutation(
            self.window, fwd, _invert(fwd), self.displacement_power + other.displacement_power
        )

    def moved(self) -> list[int]:
        return [x for x, y in enumerate(self.forward) if x != y]

    def check(self) -> bool:
        if any(self.inverse[y] != x for x, y in enumerate(self.forward)):
            return False
        return displacement(self.window, self.forward, self.displacement_power) is not None

    def to_json(self) -> list:
        labels = self.window.labels
        return [[labels[x], labels[y]] for x, y in enumerate(self.forward)]


def translation_permutation(window: CoarseWindow, shift: int) -> BoundedPermutation:
    """``x -> x + shift`` on an integer window, wrapping around its ends."""
    labels = list(window.labels)
    if labels != list(range(labels[0], labels[0] + len(labels))):
        raise PreconditionError("translation needs a window of consecutive integers")
    n, lo = len(labels), labels[0]
    return BoundedPermutation.from_table(window, [(x + shift) % n for x in range(n)])


def pair_swap_permutation(window: CoarseWindow) -> BoundedPermutation:
    """Swap ``2i`` with ``2i+1`` on an integer window; an unpaired end stays fixed."""
    labs = set(window.labels)

    def fn(x):
        y = x + 1 if x % 2 == 0 else x - 1
        return y if y in labs else x

    return BoundedPermutation.from_label_map(window, fn)


# --------------------------------------------------------------------------
# the two permutations attached to a word


@dataclass(frozen=True)
class LemmaPermPair:
    w: ReducedWord
    M_size: int
    phi_a: tuple[int, ...]
    phi_b: tuple[int, ...]
    alpha: tuple[int, ...]
    beta: tuple[int, ...]
    syllables: SyllableForm

    @property
    def phi_A(self) -> tuple[int, ...]:
        return _invert(self.phi_a)

    @property
    def phi_B(self) -> tuple[int, ...]:
        return _invert(self.phi_b)

    def table(self, letter: str) -> tuple[int, ...]:
        return {"a": self.phi_a, "b": self.phi_b, "A": self.phi_A, "B": self.phi_B}[letter]

    def to_json(self) -> dict:
        return {
            "w": str(self.w),
            "M": self.M_size,
            "phi_a": [[i, y] for i, y in enumerate(self.phi_a)],
            "phi_b": [[i, y] for i, y in enumerate(self.phi_b)],
            "alpha": list(self.alpha),
            "beta": list(self.beta),
        }


def _block(table: list, lo: int, hi: int, positive: bool) -> None:
    """Fill ``table`` on ``[lo, hi]`` (``lo`` even, length ``2|k|``) with the
    three-cycle-like shuttle: evens march one way, odds come back."""
    for i in range(lo, hi + 1):
        if positive:
            if i % 2 == 0 and i <= hi - 2:
                y = i + 2
            elif i == hi:
                y = i - 1
            elif i % 2 == 1 and i >= lo + 3:
                y = i - 2
            else:  # i == lo + 1
                y = i - 1
        else:
            if i % 2 == 0 and i >= lo + 2:
                y = i - 2
            elif i == lo:
                y = i + 1
            elif i % 2 == 1 and i <= hi - 3:
                y = i + 2
            else:  # i == hi - 1
                y = i + 1
        if table[i] is not None:
            raise AssertionError(f"point {i} assigned twice")
        table[i] = y


def lemma42_generators(w: ReducedWord) -> LemmaPermPair:
    if w.is_identity:
        raise PreconditionError("w must not be the identity")
    s = syllable_decomposition(w)
    n = s.n
    K = [abs(x) for x in s.k]
    Lb = [abs(x) for x in s.l]
    alpha = tuple(sum(K[:i]) + sum(Lb[: i + 1]) for i in range(n + 1))
    beta = tuple(sum(K[:i]) + sum(Lb[:i]) for i in range(n + 1)) + (len(w),)
    size = 2 * len(w) + 1
    ta: list = [None] * size
    tb: list = [None] * size
    for j in range(n + 1):
        if s.k[j] != 0:
            _block(ta, 2 * alpha[j], 2 * beta[j + 1], s.k[j] > 0)
        if s.l[j] != 0:
            _block(tb, 2 * beta[j], 2 * alpha[j], s.l[j] > 0)
    ta = [i if y is None else y for i, y in enumerate(ta)]
    tb = [i if y is None else y for i, y in enumerate(tb)]
    _invert(ta)
    _invert(tb)
    return LemmaPermPair(w, size, tuple(ta), tuple(tb), alpha, beta, s)


def act_word(pair: LemmaPermPair, v: ReducedWord, i: int) -> int:
    """``φ*(v)(i)``: letters of ``v`` act right to left."""
    if not 0 <= i < pair.M_size:
        raise PreconditionError(f"index {i} outside 0..{pair.M_size - 1}")
    for c in reversed(v.letters):
        i = pair.table(c)[i]
    return i


# --------------------------------------------------------------------------
# paths and the embedding


def _path_order(words: Iterable[ReducedWord]) -> list[ReducedWord]:
    return sorted(words, key=lambda w: (-len(w), w.sort_key()))


def disjoint_path_family(
    window: CoarseWindow,
    words: Sequence[ReducedWord],
    budget: Budget = DEFAULT_BUDGET,
) -> dict[ReducedWord, tuple[int, ...]]:
    """Pairwise disjoint injective paths of ``2|w|+1`` interior points, one per word."""
    words = list(words)
    if len(set(words)) != len(words):
        raise PreconditionError("words must be pairwise distinct")
    if any(w.is_identity for w in words):
        raise PreconditionError("the identity gets no path")
    need = sum(2 * len(w) + 1 for w in words)
    have = len(window.interior)
    if need > have:
        raise CapacityError(f"paths need {need} interior points, window has {have}")
    order = _path_order(words)
    interior = window.interior
    free = set(interior)
    out: dict[ReducedWord, tuple[int, ...]] = {}
    nodes = [0]

    def paths_of_length(m):
        # all injective paths with m points inside ``free``, canonical order
        for start in sorted(free):
            stack = [(start, [start])]
            while stack:
                x, path = stack.pop()
                nodes[0] += 1
                if nodes[0] > budget.dfs_nodes:
                    return
                if len(path) == m:
                    yield tuple(path)
                    continue
                for y in sorted(window.neighbors(x), reverse=True):
                    if y in free and y not in path:
                        stack.append((y, path + [y]))

    def place(k):
        if k == len(order):
            return True
        w = order[k]
        for path in paths_of_length(2 * len(w) + 1):
            free.difference_update(path)
            out[w] = path
            if place(k + 1):
                return True
            free.update(path)
            del out[w]
        return False

    if not place(0):
        if nodes[0] > budget.dfs_nodes:
            raise CapacityError(f"path search exceeded {budget.dfs_nodes} nodes")
        raise CapacityError("no disjoint path family fits in the window interior")
    return {w: out[w] for w in order}


@dataclass
class Embedding:
    gens: dict[str, BoundedPermutation]
    paths: dict[ReducedWord, tuple[int, ...]]
    certificate: list[dict] = field(default_factory=list)
    report: Report | None = None

    def act(self, v: ReducedWord, x: int) -> int:
        for c in reversed(v.letters):
            g = self.gens[c.lower()]
            x = g.forward[x] if c.islower() else g.inverse[x]
        return x

    def to_json(self) -> dict:
        labels = next(iter(self.gens.values())).window.labels
        return {
            "L": max((len(w) for w in self.paths), default=0),
            "paths": {str(w): [labels[x] for x in p] for w, p in self.paths.items()},
            "generators": {k: g.to_json() for k, g in self.gens.items()},
            "certificate": self.certificate,
            "report": self.report.to_json() if self.report else None,
        }


def embed_f2(window: CoarseWindow, L: int, budget: Budget = DEFAULT_BUDGET) -> Embedding:
    if L < 1:
        raise PreconditionError("L must be >= 1")
    words = [w for w in enumerate_ball(L) if not w.is_identity]
    paths = disjoint_path_family(window, words, budget)
    fa = list(range(window.size))
    fb = list(range(window.size))
    for w, path in paths.items():
        pair = lemma42_generators(w)
        for i, x in enumerate(path):
            fa[x] = path[pair.phi_a[i]]
            fb[x] = path[pair.phi_b[i]]
    gens = {
        "a": BoundedPermutation.from_table(window, fa, 2),
        "b": BoundedPermutation.from_table(window, fb, 2),
    }
    emb = Embedding(gens, paths)
    rep = Report("embed_f2", True)
    support = sorted({x for p in paths.values() for x in p})
    labels = window.labels
    for v in words:
        path = paths[v]
        x0, target = path[0], path[-1]
        moved_to = emb.act(v, x0)
        entry = {"word": str(v), "witness": labels[x0], "image": labels[moved_to]}
        if moved_to != target:
            rep.fail("witness", word=str(v), point=labels[x0], expected=labels[target], got=labels[moved_to])
        r = 2 * len(v)
        ok = True
        for x in support:
            y = emb.act(v, x)
            if y != x and y not in entourage_power_neighborhood(window, r, (x,)):
                rep.fail("displacement", word=str(v), point=labels[x], image=labels[y], power=r)
                ok = False
                break
        entry["in_E_power"] = r if ok else None
        emb.certificate.append(entry)
    rep.details = {"words": len(words), "support": len(support)}
    emb.report = rep
    return emb


def _word_perm(gens: Mapping[str, BoundedPermutation], v: ReducedWord, x: int) -> int:
    for c in reversed(v.letters):
        g = gens[c.lower()]
        x = g.forward[x] if c.islower() else g.inverse[x]
    return x


def semiregular_check(
    gens: Mapping[str, BoundedPermutation], L: int, region: Iterable[int], mode: str = "fixed_points"
) -> Report:
    """Bounded-length fixed-point test for the words ``1 <= |v| <= L``.

    ``fixed_points``: no ``φ(v)`` may fix a point of ``region``.
    ``witness``: every ``φ(v)`` must move at least one point of ``region``
    (the right reading for ``embed_f2``, whose generators are the identity
    off the paths).
    """
    if L < 1:
        raise PreconditionError("L must be >= 1")
    if mode not in ("fixed_points", "witness"):
        raise PreconditionError(f"unknown mode {mode!r}")
    region = sorted(set(region))
    window = next(iter(gens.values())).window
    labels = window.labels
    rep = Report("semiregular", True)
    per_word = {}
    for v in enumerate_ball(L):
        if v.is_identity:
            continue
        moves = []
        fixed = None
        for x in region:
            y = _word_perm(gens, v, x)
            if y == x:
                if fixed is None:
                    fixed = x
            else:
                moves.append(window.distance(x, y))
        if mode == "fixed_points" and fixed is not None:
            rep.fail("fixed point", word=str(v), point=labels[fixed])
        if mode == "witness" and not moves:
            rep.fail("acts trivially", word=str(v))
        known = [m for m in moves if m is not None]
        per_word[str(v)] = min(known) if known else 0
    rep.details = {"mode": mode, "L": L, "region": len(region), "min_displacement": per_word}
    return rep


# --------------------------------------------------------------------------
# local finiteness


def _closure_order(gens: list[tuple[int, ...]], cap: int) -> int | None:
    m = len(gens[0]) if gens else 0
    e = tuple(range(m))
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(g[i] for i in p)
                if q not in seen:
                    seen.add(q)
                    if len(seen) > cap:
                        return None
                    nxt.append(q)
        frontier = nxt
    return len(seen)


def local_finiteness_certificate(
    window: CoarseWindow, S: Sequence[BoundedPermutation], cap: int = 100_000
) -> Report:
    """Certify that ``<S>`` is finite when the orbit components of ``S`` are settled.

    A component of ``[D]`` (``D`` the union of the graphs) is settled when it
    lies inside the interior, so a larger window cannot grow it.  The
    certificate is issued when some component is settled and no unsettled
    one is larger than the largest settled one.
    """
    rep = Report("local_finiteness", True)
    n = window.size
    # union-find over orbit steps
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in S:
        for x, y in enumerate(g.forward):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
    comps: dict[int, list[int]] = {}
    for x in range(n):
        comps.setdefault(find(x), []).append(x)
    comp_list = sorted(comps.values())
    settled = [c for c in comp_list if all(x in window.interior for x in c)]
    unsettled = [c for c in comp_list if c not in settled]
    biggest = max((len(c) for c in settled), default=0)
    stable = bool(settled) and all(len(c) <= biggest for c in unsettled)
    rep.details = {
        "components": len(comp_list),
        "max_settled": biggest,
        "max_unsettled": max((len(c) for c in unsettled), default=0),
    }
    if not stable:
        rep.passed = False
        rep.certified = False
        rep.fail("unstable components", detail="no certificate")
        return rep
    # generator restrictions per component, relabelled to 0..m-1
    types: dict[tuple, int] = {}
    for c in comp_list:
        pos = {x: i for i, x in enumerate(c)}
        key = tuple(tuple(pos[g.forward[x]] for x in c) for g in S)
        types.setdefault(key, 0)
        types[key] += 1
    orders = []
    for key in sorted(types):
        orders.append(_closure_order(list(key), cap) if key else 1)
    # exact order of the diagonal action on one representative of each type
    reps = sorted(types)
    offset = 0
    glued = [[] for _ in S]
    for key in reps:
        m = len(key[0]) if key else 0
        for gi, gk in enumerate(key):
            glued[gi].extend(offset + y for y in gk)
        offset += m
    exact = _closure_order([tuple(g) for g in glued], cap) if S else 1
    bound = 1
    for o in orders:
        bound = bound * o if o is not None and bound is not None else None
    rep.details.update(
        {
            "component_sizes": sorted({len(c) for c in comp_list}),
            "types": len(types),
            "type_orders": orders,
            "order": exact,
            "order_bound": bound,
        }
    )
    if exact is None:
        rep.fail("order exceeds cap", cap=cap)
    return rep


# --------------------------------------------------------------------------
# Z -> N transport


def zn_bijection(n: int) -> int:
    return 2 * n if n >= 0 else 2 * abs(n) - 1


def zn_inverse(y: int) -> int:
    if y < 0:
        raise ValueError("y must be a natural number")
    return y // 2 if y % 2 == 0 else -(y + 1) // 2


def zn_transport(alpha: BoundedPermutation, target: CoarseWindow) -> BoundedPermutation:
    """Conjugate a permutation of an integer window into a half-line window."""
    idx = target.index
    src = alpha.window
    for lab in src.labels:
        if zn_bijection(lab) not in idx:
            raise WindowError(f"f({lab}) = {zn_bijection(lab)} escapes the target window")
    image = {zn_bijection(lab) for lab in src.labels}
    src_idx = src.index

    def fn(y):
        if y not in image:
            return y
        x = src_idx[zn_inverse(y)]
        return zn_bijection(src.labels[alpha.forward[x]])

    return BoundedPermutation.from_label_map(target, fn)

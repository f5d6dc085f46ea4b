"""Finite windows onto coarse spaces.

A window is a finite ball of an (infinite) gallery space together with the
one-step generating entourage ``E`` restricted to it.  Powers ``E^n`` are
computed on demand.  ``interior`` holds the points whose full ambient
one-step neighbourhood lies inside the window; anything computed from
interior points with enough margin is exact, everything else is clipped.

All counts are exact and every ratio is a :class:`fractions.Fraction`.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

from .config import DEFAULT_BUDGET, Budget
from .free_group import INVERSE_LETTER, LETTERS, iter_ball


class PreconditionError(ValueError):
    """An operation was called outside its exact domain."""


class WindowError(ValueError):
    pass


# --------------------------------------------------------------------------
# relations


@dataclass(frozen=True)
class EntourageRel:
    """A finite relation on window indices; ``R[F]`` is :meth:`image`."""

    pairs: frozenset
    power_of_base: int | None = None

    @cached_property
    def _succ(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for x, y in self.pairs:
            out.setdefault(x, []).append(y)
        return {x: tuple(sorted(ys)) for x, ys in out.items()}

    def row(self, x: int) -> tuple[int, ...]:
        """``R[x]`` in ascending order."""
        return self._succ.get(x, ())

    def image(self, F: Iterable[int]) -> frozenset:
        out: set[int] = set()
        for x in F:
            out.update(self._succ.get(x, ()))
        return frozenset(out)

    def inverse(self) -> "EntourageRel":
        return EntourageRel(frozenset((y, x) for x, y in self.pairs), self.power_of_base)

    def compose(self, other: "EntourageRel") -> "EntourageRel":
        """Pairs ``(x, z)`` with ``(x, y)`` in self and ``(y, z)`` in other."""
        out = set()
        for x, y in self.pairs:
            for z in other.row(y):
                out.add((x, z))
        power = None
        if self.power_of_base is not None and other.power_of_base is not None:
            power = self.power_of_base + other.power_of_base
        return EntourageRel(frozenset(out), power)

    def union(self, other: "EntourageRel") -> "EntourageRel":
        return EntourageRel(self.pairs | other.pairs)

    def minus_diagonal(self) -> "EntourageRel":
        return EntourageRel(frozenset(p for p in self.pairs if p[0] != p[1]))

    def is_symmetric(self) -> bool:
        return all((y, x) in self.pairs for x, y in self.pairs)

    def is_irreflexive(self) -> bool:
        return all(x != y for x, y in self.pairs)

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)


# --------------------------------------------------------------------------
# windows


@dataclass(frozen=True, eq=False)
class CoarseWindow:
    labels: tuple
    adjacency: tuple  # adjacency[i] = sorted indices of E[i], i included
    interior: frozenset
    ambient: dict
    interior_margin: int = 1
    basepoint: int | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.labels)
        if len(self.adjacency) != n:
            raise WindowError("adjacency length does not match the point count")
        for i, row in enumerate(self.adjacency):
            if i not in row:
                raise WindowError(f"diagonal missing at point {self.labels[i]!r}")
            for j in row:
                if not 0 <= j < n:
                    raise WindowError(f"neighbour index {j} out of range")
                if i not in self.adjacency[j]:
                    raise WindowError(
                        f"relation not symmetric: {self.labels[i]!r} -> {self.labels[j]!r}"
                    )
        if not self.interior <= frozenset(range(n)):
            raise WindowError("interior is not a subset of the points")
        if self.interior_margin < 0:
            raise WindowError("interior_margin must be non-negative")

    # construction helpers
    @classmethod
    def from_pairs(
        cls,
        labels: Sequence[Hashable],
        pairs: Iterable[tuple[int, int]],
        interior: Iterable[int] | None = None,
        ambient: dict | None = None,
        **kw,
    ) -> "CoarseWindow":
        """Window from index pairs; the diagonal and symmetric closure are added."""
        n = len(labels)
        rows = [{i} for i in range(n)]
        for x, y in pairs:
            rows[x].add(y)
            rows[y].add(x)
        interior = frozenset(range(n)) if interior is None else frozenset(interior)
        return cls(
            labels=tuple(labels),
            adjacency=tuple(tuple(sorted(r)) for r in rows),
            interior=interior,
            ambient=ambient or {"kind": "custom"},
            **kw,
        )

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    @cached_property
    def index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.labels)}

    def ids(self, labels: Iterable[Hashable]) -> frozenset:
        """Indices of the given point labels."""
        try:
            return frozenset(self.index[x] for x in labels)
        except KeyError as exc:
            raise WindowError(f"point {exc.args[0]!r} is not in the window") from None

    def names(self, indices: Iterable[int]) -> list:
        return [self.labels[i] for i in sorted(indices)]

    def neighbors(self, i: int) -> tuple[int, ...]:
        """``E[i]`` without ``i`` itself."""
        return tuple(j for j in self.adjacency[i] if j != i)

    @cached_property
    def relation(self) -> EntourageRel:
        pairs = frozenset((i, j) for i, row in enumerate(self.adjacency) for j in row)
        return EntourageRel(pairs, power_of_base=1)

    def power_relation(self, n: int) -> EntourageRel:
        pairs = set()
        for i in range(self.size):
            for j in entourage_power_neighborhood(self, n, (i,)):
                pairs.add((i, j))
        return EntourageRel(frozenset(pairs), power_of_base=n)

    def distance(self, i: int, j: int, limit: int | None = None) -> int | None:
        """Graph distance inside the window (``None`` if beyond ``limit``)."""
        if i == j:
            return 0
        seen = {i}
        frontier = [i]
        d = 0
        while frontier:
            d += 1
            if limit is not None and d > limit:
                return None
            nxt = []
            for x in frontier:
                for y in self.adjacency[x]:
                    if y == j:
                        return d
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return None

    def boundary(self) -> frozenset:
        return frozenset(range(self.size)) - self.interior

    def subwindow(self, keep: Iterable[int]) -> "CoarseWindow":
        """Induced window on ``keep``; interior shrinks to points that lost no neighbour."""
        keep = sorted(set(keep))
        remap = {old: new for new, old in enumerate(keep)}
        adjacency = []
        interior = set()
        for old in keep:
            row = tuple(remap[j] for j in self.adjacency[old] if j in remap)
            adjacency.append(row)
            if old in self.interior and len(row) == len(self.adjacency[old]):
                interior.add(remap[old])
        return CoarseWindow(
            labels=tuple(self.labels[i] for i in keep),
            adjacency=tuple(adjacency),
            interior=frozenset(interior),
            ambient=dict(self.ambient),
            interior_margin=self.interior_margin,
            basepoint=remap.get(self.basepoint) if self.basepoint is not None else None,
            metadata=dict(self.metadata),
        )


def permute_window(window: CoarseWindow, perm: Sequence[int]) -> CoarseWindow:
    """The same window with old index ``i`` moved to ``perm[i]``."""
    n = window.size
    if sorted(perm) != list(range(n)):
        raise WindowError("perm is not a permutation of the point indices")
    inv = [0] * n
    for old, new in enumerate(perm):
        inv[new] = old
    return CoarseWindow(
        labels=tuple(window.labels[inv[i]] for i in range(n)),
        adjacency=tuple(tuple(sorted(perm[j] for j in window.adjacency[inv[i]])) for i in range(n)),
        interior=frozenset(perm[i] for i in window.interior),
        ambient=dict(window.ambient),
        interior_margin=window.interior_margin,
        basepoint=perm[window.basepoint] if window.basepoint is not None else None,
        metadata=dict(window.metadata),
    )


# --------------------------------------------------------------------------
# gallery


def interval_of(x: int) -> int:
    """Index j >= 1 of the interval of length j containing x (points start at 1)."""
    if x < 1:
        raise ValueError("interval space points start at 1")
    j = 1
    while j * (j + 1) // 2 < x:
        j += 1
    return j


def interval_metric(x: int, y: int) -> int:
    """The metric of the interval space with interval lengths 1, 2, 3, ..."""
    if interval_of(x) == interval_of(y):
        return abs(x - y)
    return max(x, y)


SPACE_ALIASES = {
    "line": {"kind": "line"},
    "z": {"kind": "line"},
    "halfline": {"kind": "halfline"},
    "n": {"kind": "halfline"},
    "grid": {"kind": "grid"},
    "z2": {"kind": "grid"},
    "tree": {"kind": "tree", "degree": 4},
    "tree4": {"kind": "tree", "degree": 4},
    "interval": {"kind": "interval_space"},
    "interval_space": {"kind": "interval_space"},
    "schreier": {"kind": "schreier"},
}


def parse_space(space_cfg) -> dict:
    if isinstance(space_cfg, str):
        try:
            return dict(SPACE_ALIASES[space_cfg.lower()])
        except KeyError:
            raise WindowError(f"unknown space {space_cfg!r}") from None
    cfg = dict(space_cfg)
    kind = cfg.get("kind")
    if kind in SPACE_ALIASES:
        return {**SPACE_ALIASES[kind], **cfg}
    raise WindowError(f"unknown space {space_cfg!r}")


def _window_from_neighbor_fn(
    labels: list, nbr_fn: Callable, ambient: dict, basepoint=None, radius=None
) -> CoarseWindow:
    index = {lab: i for i, lab in enumerate(labels)}
    adjacency = []
    interior = set()
    for i, lab in enumerate(labels):
        amb = list(nbr_fn(lab))
        row = {i}
        inside = True
        for y in amb:
            j = index.get(y)
            if j is None:
                inside = False
            else:
                row.add(j)
        adjacency.append(tuple(sorted(row)))
        if inside:
            interior.add(i)
    meta = {"radius": radius}
    if not interior:
        meta["empty_interior"] = True
    return CoarseWindow(
        labels=tuple(labels),
        adjacency=tuple(adjacency),
        interior=frozenset(interior),
        ambient=ambient,
        interior_margin=1,
        basepoint=index.get(basepoint) if basepoint is not None else None,
        metadata=meta,
    )


def make_window(space_cfg, radius: int) -> CoarseWindow:
    """Ball of the given radius around the basepoint of a gallery space.

    ``space_cfg`` is a name (``line``, ``grid``, ``tree4``, ``interval``,
    ``halfline``, ``schreier``) or a dict with a ``kind`` key and parameters.
    ``interval_space`` takes ``k`` (number of intervals, default ``radius``)
    and covers the first ``k`` intervals, of lengths ``1..k``.  ``schreier``
    takes ``generators`` (permutations of ``0..m-1`` in one-line notation)
    and an optional ``basepoint``.
    """
    cfg = parse_space(space_cfg)
    if radius < 1:
        raise WindowError("radius must be >= 1")
    kind = cfg["kind"]

    if kind == "line":
        labels = list(range(-radius, radius + 1))
        return _window_from_neighbor_fn(
            labels, lambda x: (x - 1, x + 1), cfg, basepoint=0, radius=radius
        )

    if kind == "halfline":
        labels = list(range(0, radius + 1))
        return _window_from_neighbor_fn(
            labels,
            lambda x: (x - 1, x + 1) if x > 0 else (1,),
            cfg,
            basepoint=0,
            radius=radius,
        )

    if kind == "grid":
        labels = sorted(
            (x, y)
            for x in range(-radius, radius + 1)
            for y in range(-radius, radius + 1)
            if abs(x) + abs(y) <= radius
        )
        return _window_from_neighbor_fn(
            labels,
            lambda p: ((p[0] - 1, p[1]), (p[0] + 1, p[1]), (p[0], p[1] - 1), (p[0], p[1] + 1)),
            cfg,
            basepoint=(0, 0),
            radius=radius,
        )

    if kind == "tree":
        if cfg.get("degree", 4) != 4:
            raise WindowError("only the 4-regular tree (Cayley graph of F2) is available")

        def tree_nbrs(w):
            for c in LETTERS:
                if w and w[-1] == INVERSE_LETTER[c]:
                    yield w[:-1]
                else:
                    yield w + c

        return _window_from_neighbor_fn(
            list(iter_ball(radius)), tree_nbrs, cfg, basepoint="", radius=radius
        )

    if kind == "interval_space":
        k = int(cfg.get("k", radius))
        cfg = {**cfg, "k": k}
        total = k * (k + 1) // 2

        def interval_nbrs(x):
            return [y for y in (x - 1, x + 1) if y >= 1 and interval_metric(x, y) <= 1]

        return _window_from_neighbor_fn(
            list(range(1, total + 1)), interval_nbrs, cfg, basepoint=1, radius=k
        )

    if kind == "schreier":
        gens = [tuple(g) for g in cfg.get("generators", ())]
        if not gens:
            raise WindowError("schreier space needs generators")
        m = len(gens[0])
        invs = []
        for g in gens:
            if sorted(g) != list(range(m)):
                raise WindowError(f"generator {g} is not a permutation of 0..{m - 1}")
            inv = [0] * m
            for i, gi in enumerate(g):
                inv[gi] = i
            invs.append(tuple(inv))
        base = int(cfg.get("basepoint", 0))
        cfg = {**cfg, "generators": [list(g) for g in gens], "basepoint": base}

        def action_nbrs(x):
            return [g[x] for g in gens] + [g[x] for g in invs]

        dist = {base: 0}
        frontier = [base]
        for d in range(1, radius + 1):
            nxt = []
            for x in frontier:
                for y in action_nbrs(x):
                    if y not in dist:
                        dist[y] = d
                        nxt.append(y)
            frontier = nxt
        return _window_from_neighbor_fn(
            sorted(dist), action_nbrs, cfg, basepoint=base, radius=radius
        )

    raise WindowError(f"unknown space kind {kind!r}")


def shrink_window(window: CoarseWindow) -> CoarseWindow:
    """A smaller concentric window: the gallery ball one step smaller, else the interior."""
    radius = window.metadata.get("radius")
    if window.ambient.get("kind") in ("line", "halfline", "grid", "tree", "interval_space", "schreier") and radius and radius > 1:
        cfg = dict(window.ambient)
        if cfg["kind"] == "interval_space":
            cfg["k"] = radius - 1
        return make_window(cfg, radius - 1)
    return window.subwindow(window.interior)


# --------------------------------------------------------------------------
# entourage calculus


def entourage_power_neighborhood(window: CoarseWindow, n: int, F: Iterable[int]) -> frozenset:
    """``E^n[F]`` computed inside the window (clipped at the boundary)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    reached = set(F)
    frontier = list(reached)
    for _ in range(n):
        nxt = []
        for x in frontier:
            for y in window.adjacency[x]:
                if y not in reached:
                    reached.add(y)
                    nxt.append(y)
        if not nxt:
            break
        frontier = nxt
    return frozenset(reached)


def neighborhood_is_exact(window: CoarseWindow, n: int, F: Iterable[int]) -> bool:
    """True when ``E^n[F]`` provably agrees with the ambient space."""
    F = frozenset(F)
    if n == 0:
        return True
    # every point expanded in steps 1..n must be interior
    inner = entourage_power_neighborhood(window, n - 1, F)
    return inner <= window.interior


def _require_interior(window: CoarseWindow, F: Iterable[int]) -> frozenset:
    F = frozenset(F)
    if not F:
        raise PreconditionError("F must be nonempty")
    for x in sorted(F):
        if x not in window.interior:
            raise PreconditionError(f"point {window.labels[x]!r} is not in the interior")
    return F


def expansion_ratio(window: CoarseWindow, F: Iterable[int]) -> Fraction:
    """``|E[F]| / |F|`` for a nonempty interior set ``F``."""
    F = _require_interior(window, F)
    return Fraction(len(entourage_power_neighborhood(window, 1, F)), len(F))


# --------------------------------------------------------------------------
# Følner search


@dataclass
class FolnerResult:
    witness: frozenset | None
    ratio: Fraction | None
    theta: Fraction
    method: str | None
    explored: dict
    certified: bool = True

    @property
    def found(self) -> bool:
        return self.witness is not None

    @property
    def verdict(self) -> str:
        # a window can never prove non-amenability
        return "witness found" if self.found else "no witness within budget"


def _e2_neighbors(window: CoarseWindow, allowed: frozenset) -> dict[int, tuple[int, ...]]:
    out = {}
    for x in allowed:
        two = entourage_power_neighborhood(window, 2, (x,))
        out[x] = tuple(sorted(y for y in two if y in allowed and y != x))
    return out


def _greedy_grow(window, seed, theta, allowed, limit):
    F = {seed}
    EF = set(window.adjacency[seed])
    while True:
        if len(EF) <= theta * len(F):
            return frozenset(F)
        if limit is not None and len(F) >= limit:
            return None
        best = None
        for y in sorted({z for z in EF if z in allowed} - F):
            gain = sum(1 for z in window.adjacency[y] if z not in EF)
            if best is None or gain < best[0]:
                best = (gain, y)
        if best is None:
            return None
        F.add(best[1])
        EF.update(window.adjacency[best[1]])


def _exhaustive_connected(window, theta, allowed, max_size, stats):
    """Search E^2-connected interior sets of size <= max_size.

    Restricting to E^2-connected sets loses nothing: if F splits into parts
    with disjoint E-neighbourhoods, its ratio is a mediant of theirs.  Any
    partial set with ``|E[F]| > theta*max_size`` is pruned, since supersets
    of bounded size cannot recover.
    """
    adj2 = _e2_neighbors(window, allowed)
    cap = theta * max_size

    def extend(sub, ext, root, EF):
        stats["sets"] += 1
        if len(EF) <= theta * len(sub):
            return frozenset(sub)
        if len(sub) == max_size:
            return None
        ext = list(ext)
        while ext:
            w = ext.pop()
            new_EF = EF | set(window.adjacency[w])
            if len(new_EF) > cap:
                continue
            closed = set(sub)
            for s in sub:
                closed.update(adj2[s])
            ext2 = ext + [u for u in adj2[w] if u > root and u not in closed and u not in ext]
            found = extend(sub | {w}, ext2, root, new_EF)
            if found is not None:
                return found
        return None

    for v in sorted(allowed):
        EF = set(window.adjacency[v])
        if len(EF) > cap:
            continue
        found = extend({v}, sorted((u for u in adj2[v] if u > v), reverse=True), v, EF)
        if found is not None:
            return found
    return None


def folner_search(window: CoarseWindow, theta, budget: Budget = DEFAULT_BUDGET) -> FolnerResult:
    """Look for a finite interior ``F`` with ``|E[F]| <= theta*|F|``.

    Tries singletons, then greedy connected growth from every seed (the
    basepoint first), then an exhaustive search over sets of size up to
    ``budget.exhaustive_size``.  Absence of a witness is reported as such and
    never as non-amenability.
    """
    theta = Fraction(theta)
    if theta <= 1:
        raise PreconditionError("theta must be > 1")
    allowed = window.interior
    stats = {"singletons": 0, "greedy_seeds": 0, "sets": 0}

    def result(F, method):
        ratio = expansion_ratio(window, F) if F is not None else None
        return FolnerResult(F, ratio, theta, method, stats)

    for x in sorted(allowed):
        stats["singletons"] += 1
        if len(window.adjacency[x]) <= theta:
            return result(frozenset({x}), "singleton")

    seeds = sorted(allowed)
    if window.basepoint in allowed:
        seeds.remove(window.basepoint)
        seeds.insert(0, window.basepoint)
    for s in seeds:
        stats["greedy_seeds"] += 1
        F = _greedy_grow(window, s, theta, allowed, budget.greedy_size)
        if F is not None:
            return result(F, "greedy")

    if budget.exhaustive_size > 0:
        F = _exhaustive_connected(window, theta, allowed, budget.exhaustive_size, stats)
        if F is not None:
            return result(F, "exhaustive")
    return result(None, None)


# --------------------------------------------------------------------------
# asymptotic dimension zero probe


def components(window: CoarseWindow, restrict: Iterable[int] | None = None) -> list[tuple[int, ...]]:
    """Connected components of ``E`` (the classes of ``[E]``), ordered by least point."""
    allowed = set(range(window.size)) if restrict is None else set(restrict)
    seen: set[int] = set()
    out = []
    for s in sorted(allowed):
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in window.adjacency[x]:
                if y in allowed and y not in seen:
                    seen.add(y)
                    comp.append(y)
                    queue.append(y)
        out.append(tuple(sorted(comp)))
    return out


def _eccentricity(window: CoarseWindow, s: int, comp: set) -> int:
    dist = {s: 0}
    queue = deque([s])
    far = 0
    while queue:
        x = queue.popleft()
        for y in window.adjacency[x]:
            if y in comp and y not in dist:
                dist[y] = dist[x] + 1
                far = max(far, dist[y])
                queue.append(y)
    return far


@dataclass
class AsdimProbe:
    component_sizes: list[int]
    max_component: int
    stabilization_step: int
    smaller_max_component: int
    touches_boundary: bool
    verdict: str
    certified: bool

    def to_json(self) -> dict:
        return {
            "component_sizes": self.component_sizes,
            "max_component": self.max_component,
            "stabilization_step": self.stabilization_step,
            "smaller_max_component": self.smaller_max_component,
            "touches_boundary": self.touches_boundary,
            "verdict": self.verdict,
            "certified": self.certified,
        }


def asdim_zero_probe(window: CoarseWindow) -> AsdimProbe:
    """Classes of ``[E]`` in the window versus a smaller concentric window.

    ``stabilization_step`` is the least ``n >= 1`` with ``E^n = E^(n+1)`` on
    the window, i.e. the largest component diameter (at least 1).
    """
    comps = components(window)
    sizes = sorted(len(c) for c in comps)
    biggest = max(sizes)
    step = 1
    for c in comps:
        cs = set(c)
        if len(c) > 1:
            step = max(step, max(_eccentricity(window, s, cs) for s in c))
    boundary = window.boundary()
    touches = any(len(c) == biggest and boundary.intersection(c) for c in comps)
    smaller = shrink_window(window)
    small_max = max(len(c) for c in components(smaller)) if smaller.size else 0
    bounded = small_max == biggest and not touches
    return AsdimProbe(
        component_sizes=sizes,
        max_component=biggest,
        stabilization_step=step,
        smaller_max_component=small_max,
        touches_boundary=touches,
        verdict="bounded-components" if bounded else "growing-components",
        certified=not touches,
    )


# --------------------------------------------------------------------------
# injective paths


@dataclass
class PathResult:
    path: tuple[int, ...]
    optimal: bool
    nodes_expanded: int

    def __len__(self) -> int:
        return len(self.path)


def _longest_from(window, start, blocked, upper, node_budget, stats):
    best = [start]
    if upper <= 1:
        return best, True
    path = [start]
    on_path = {start}
    stack = [iter(window.neighbors(start))]
    while stack:
        advanced = False
        for y in stack[-1]:
            if y in on_path or y in blocked:
                continue
            path.append(y)
            on_path.add(y)
            stack.append(iter(window.neighbors(y)))
            stats["nodes"] += 1
            if len(path) > len(best):
                best = list(path)
                if len(best) == upper:
                    return best, True
            advanced = True
            break
        if not advanced:
            stack.pop()
            on_path.discard(path.pop())
        if stats["nodes"] >= node_budget:
            return best, False
    return best, True


def longest_injective_path(
    window: CoarseWindow,
    start: int | None = None,
    forbidden: Iterable[int] = (),
    budget: Budget = DEFAULT_BUDGET,
) -> PathResult:
    """Longest injective ``E``-step path avoiding ``forbidden``.

    Depth-first with neighbours in ascending index order.  ``optimal`` is
    True when the search finished (or hit the component-size bound) within
    ``budget.dfs_nodes`` expansions.
    """
    blocked = frozenset(forbidden)
    if start is not None and start in blocked:
        raise PreconditionError(f"start {window.labels[start]!r} is forbidden")
    allowed = [i for i in range(window.size) if i not in blocked]
    comp_of = {}
    for comp in components(window, allowed):
        for x in comp:
            comp_of[x] = comp
    stats = {"nodes": 0}
    starts = [start] if start is not None else allowed
    best: list[int] = []
    optimal = True
    done_comps: set = set()
    for s in starts:
        comp = comp_of[s]
        if comp in done_comps or len(comp) <= len(best):
            continue
        path, finished = _longest_from(window, s, blocked, len(comp), budget.dfs_nodes, stats)
        if len(path) > len(best):
            best = path
        if len(path) == len(comp):
            done_comps.add(comp)
        if not finished:
            optimal = False
            break
    return PathResult(tuple(best), optimal, stats["nodes"])


# --------------------------------------------------------------------------
# serialisation


def _label_to_json(x):
    return list(x) if isinstance(x, tuple) else x


def _label_from_json(x):
    return tuple(x) if isinstance(x, list) else x


def window_to_json(window: CoarseWindow) -> dict:
    pairs = sorted(window.relation.pairs)
    return {
        "ambient": window.ambient,
        "points": [_label_to_json(x) for x in window.labels],
        "relation": [list(p) for p in pairs],
        "interior": [_label_to_json(window.labels[i]) for i in sorted(window.interior)],
        "interior_margin": window.interior_margin,
    }


def window_from_json(obj: dict) -> CoarseWindow:
    labels = [_label_from_json(x) for x in obj["points"]]
    index = {lab: i for i, lab in enumerate(labels)}
    interior = [index[_label_from_json(x)] for x in obj["interior"]]
    ambient = obj.get("ambient", {"kind": "custom"})
    w = CoarseWindow.from_pairs(
        labels,
        [tuple(p) for p in obj["relation"]],
        interior=interior,
        ambient=ambient,
        interior_margin=obj.get("interior_margin", 1),
    )
    return w


def all_pairs_triangle_check(points: Sequence[int], metric: Callable[[int, int], int]) -> list:
    """Triples violating the triangle inequality (empty when the metric is sound)."""
    bad = []
    for x, y, z in itertools.product(points, repeat=3):
        if metric(x, y) > metric(x, z) + metric(z, y):
            bad.append((x, y, z))
    return bad

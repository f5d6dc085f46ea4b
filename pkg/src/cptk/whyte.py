"""Periodic-point elimination ``f -> f*`` and forest certification.

Given a fixed-point-free ``f`` whose fibres have size ``d-1``, every
periodic cycle is broken by splicing two backward rays ``g(z, .)`` and
``h(z, .)`` through it.  On a finite window the rays stop at the edge of
the certified set, so ``f*`` is a partial table and the region on which the
forest claims hold is reported explicitly.

Any total map on a finite set has cycles, so the splicing branches are
always exercised on real windows.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .coarse import CoarseWindow, PreconditionError, entourage_power_neighborhood
from .harem import HaremFunction
from .reports import Report


def _table(f) -> tuple[dict[int, int], frozenset | None]:
    if isinstance(f, HaremFunction):
        return dict(enumerate(f.map)), f.certified
    return dict(f), None


def periodic_points(f) -> tuple[frozenset, list[tuple[int, ...]]]:
    """``P(f)`` and its cycles, each cycle listed from its smallest point.

    Accepts a :class:`HaremFunction` or a (possibly partial) dict; an orbit
    that leaves the domain of a partial table is not periodic.
    """
    table, _ = _table(f)
    state: dict[int, int] = {}  # 1 = on current walk, 2 = done
    cycles = []
    for start in sorted(table):
        if start in state:
            continue
        walk = []
        x = start
        while x in table and x not in state:
            state[x] = 1
            walk.append(x)
            x = table[x]
        if x in state and state[x] == 1:
            cyc = walk[walk.index(x):]
            i = cyc.index(min(cyc))
            cycles.append(tuple(cyc[i:] + cyc[:i]))
        for y in walk:
            state[y] = 2
    cycles.sort()
    return frozenset(x for c in cycles for x in c), cycles


@dataclass
class RaySystem:
    p_set: frozenset
    p0: tuple[int, ...]
    g_ray: dict[int, list[int]]  # z -> [g(z,0), g(z,1), ...]
    h_ray: dict[int, list[int]]
    abandoned: tuple[int, ...] = ()

    @property
    def truncation_depth(self) -> dict[int, int]:
        return {z: len(self.g_ray[z]) - 1 for z in self.p0}

    def g(self, z: int, n: int) -> int | None:
        ray = self.g_ray.get(z, [])
        return ray[n] if 0 <= n < len(ray) else None

    def h(self, z: int, n: int) -> int | None:
        ray = self.h_ray.get(z, [])
        return ray[n] if 0 <= n < len(ray) else None

    def check(self, table: Mapping[int, int]) -> list[str]:
        """Re-verify the ray invariants; returns a list of problems."""
        problems = []
        seen: set[int] = set()
        for z in self.p0:
            g, h = self.g_ray[z], self.h_ray[z]
            if g[0] != z:
                problems.append(f"g({z},0) != {z}")
            if h[0] != table[z]:
                problems.append(f"h({z},0) != f({z})")
            for name, ray in (("g", g), ("h", h)):
                for n in range(1, len(ray)):
                    x = ray[n]
                    if x in self.p_set:
                        problems.append(f"{name}({z},{n}) is periodic")
                    if table.get(x) != ray[n - 1]:
                        problems.append(f"f({name}({z},{n})) != {name}({z},{n - 1})")
                    if x in seen:
                        problems.append(f"{name}({z},{n}) reused")
                    seen.add(x)
        return problems

    def to_json(self, labels=None) -> dict:
        lab = (lambda i: labels[i]) if labels is not None else (lambda i: i)
        return {
            "p0": [lab(z) for z in self.p0],
            "g": {str(lab(z)): [lab(x) for x in self.g_ray[z]] for z in self.p0},
            "h": {str(lab(z)): [lab(x) for x in self.h_ray[z]] for z in self.p0},
            "abandoned": [lab(z) for z in self.abandoned],
        }


@dataclass
class Elimination:
    f_star: dict[int, int]
    rays: RaySystem
    certified_region: frozenset
    warnings: list[str] = field(default_factory=list)

    def __iter__(self):
        # allows ``f_star, rays, region = eliminate_periodic(f)`` style unpacking
        return iter((self.f_star, self.rays, self.certified_region))


def _preimages(table: Mapping[int, int]) -> dict[int, list[int]]:
    pre: dict[int, list[int]] = {}
    for x in sorted(table):
        pre.setdefault(table[x], []).append(x)
    return pre


def _grow_ray(start: int, pre, p_set, used, certified, max_depth=None) -> list[int]:
    ray = [start]
    while certified is None or ray[-1] in certified:
        if max_depth is not None and len(ray) > max_depth:
            break
        nxt = next((y for y in pre.get(ray[-1], ()) if y not in p_set and y not in used), None)
        if nxt is None:
            break
        used.add(nxt)
        ray.append(nxt)
    return ray


def eliminate_periodic(f, certified=None, max_depth: int | None = None) -> Elimination:
    """Build ``f*`` from ``f`` by the ray-splicing case table.

    ``certified`` defaults to ``f.certified`` for a :class:`HaremFunction` and
    to the whole domain for a dict.  Rays grow while their frontier is
    certified; ``max_depth`` caps them (for tests).
    """
    table, cert = _table(f)
    if certified is not None:
        cert = frozenset(certified)
    if cert is None:
        cert = frozenset(table)
    p_set, cycles = periodic_points(table)
    pre = _preimages(table)
    used: set[int] = set()
    p0 = tuple(c[0] for c in cycles)
    g_ray, h_ray = {}, {}
    warnings = []
    abandoned = []
    for z in p0:
        g_ray[z] = _grow_ray(z, pre, p_set, used, cert, max_depth)
        h_ray[z] = _grow_ray(table[z], pre, p_set, used, cert, max_depth)
        if len(g_ray[z]) < 3:
            abandoned.append(z)
            warnings.append(f"cycle through {z}: ray g reached depth {len(g_ray[z]) - 1} < 2, cycle kept")
    rays = RaySystem(p_set, p0, g_ray, h_ray, tuple(abandoned))

    # where each point sits on a ray
    role: dict[int, tuple[str, int, int]] = {}
    for z in p0:
        if z in abandoned:
            continue
        for n, x in enumerate(g_ray[z]):
            role[x] = ("g", z, n)
        for n, x in enumerate(h_ray[z]):
            if n >= 1:
                role[x] = ("h", z, n)

    f_star: dict[int, int] = {}
    for x in sorted(table):
        r = role.get(x)
        if r is None:
            f_star[x] = table[x]
            continue
        kind, z, n = r
        if kind == "g" and n % 2 == 0:
            y = rays.g(z, n + 2)
            if y is not None:
                f_star[x] = y
        elif kind == "g" and n >= 3:
            f_star[x] = g_ray[z][n - 2]
        elif kind == "h" and n >= 2:
            if table[x] in table:
                f_star[x] = table[table[x]]
        else:
            f_star[x] = table[x]

    # entries the inverse table needs at each special point
    lost = {x for c in cycles if c[0] in abandoned for x in c}
    region = set()
    first_step = {table[z]: z for z in p0 if z not in abandoned}
    for x in sorted(cert):
        if x not in f_star or x in lost:
            continue
        needs: list[int | None] = []
        r = role.get(x)
        if r is not None:
            kind, z, n = r
            if kind == "g" and n % 2 == 0 and n >= 2:
                needs = [rays.g(z, n + 1)]
            elif kind == "g" and n % 2 == 1:
                needs = [rays.g(z, n + 1), rays.g(z, n + 2)]
            elif kind == "h":
                needs = [rays.h(z, n + 1), rays.h(z, n + 2)]
        if x in first_step:
            needs.append(rays.h(first_step[x], 2))
        if all(y is not None for y in needs):
            region.add(x)
    return Elimination(f_star, rays, frozenset(region), warnings)


class _DSU:
    def __init__(self):
        self.parent: dict[int, int] = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[rx] = ry
        return True


def verify_forest(
    f_star: Mapping[int, int],
    window: CoarseWindow,
    d: int,
    certified_region,
) -> Report:
    """Periodicity, fibres, ``E^2`` inclusion and acyclicity on the region."""
    rep = Report("forest", True)
    region = frozenset(certified_region)
    labels = window.labels
    # (a) periodic points
    for x in sorted(region):
        y = f_star.get(x)
        for _ in range(len(f_star) + 1):
            if y is None or y == x:
                break
            y = f_star.get(y)
        if y == x:
            rep.fail("periodic point", point=labels[x])
    # (b) fibres
    fib: dict[int, int] = {}
    for x, y in f_star.items():
        fib[y] = fib.get(y, 0) + 1
    for x in sorted(region):
        if fib.get(x, 0) != d - 1:
            rep.fail("fiber size", point=labels[x], size=fib.get(x, 0), target=d - 1)
    # (c) two-step inclusion
    for x in sorted(region):
        if x not in f_star:
            rep.fail("undefined on region", point=labels[x])
            continue
        if f_star[x] not in entourage_power_neighborhood(window, 2, (x,)):
            rep.fail("not in E^2", point=labels[x], image=labels[f_star[x]])
    # (d) acyclic restriction; a 2-cycle counts as a doubled edge
    dsu = _DSU()
    for x in sorted(region):
        y = f_star.get(x)
        if y in region and not dsu.union(x, y):
            rep.fail("cycle", edge=[labels[x], labels[y]])
    rep.details = {"region": len(region), "points": window.size, "d": d}
    return rep


def forest_certificate(window: CoarseWindow, elim: Elimination, d: int, report: Report) -> dict:
    labels = window.labels
    return {
        "f_star": [[labels[x], labels[y]] for x, y in sorted(elim.f_star.items())],
        "certified": [labels[x] for x in sorted(elim.certified_region)],
        "d": d,
        "checks": report.to_json(),
    }


@dataclass
class IsoperimetryResult:
    min_ratio: Fraction
    worst: frozenset
    samples: int
    bound: int

    @property
    def ok(self) -> bool:
        return self.min_ratio >= self.bound


def random_connected_subset(window: CoarseWindow, rng: random.Random, size: int) -> frozenset:
    interior = sorted(window.interior)
    start = rng.choice(interior)
    F = {start}
    frontier = {y for y in window.neighbors(start) if y in window.interior}
    while len(F) < size and frontier:
        y = rng.choice(sorted(frontier))
        F.add(y)
        frontier |= {z for z in window.neighbors(y) if z in window.interior}
        frontier -= F
    return frozenset(F)


def tree_isoperimetry_check(
    window: CoarseWindow, samples: int = 100, seed: int = 0, degree: int = 4
) -> IsoperimetryResult:
    """Minimum of ``|E[F]|/|F|`` over seeded random connected interior sets."""
    if not window.interior:
        raise PreconditionError("window interior is empty")
    if samples < 1:
        raise PreconditionError("samples must be >= 1")
    rng = random.Random(seed)
    best = None
    worst = frozenset()
    cap = len(window.interior)
    for _ in range(samples):
        F = random_connected_subset(window, rng, rng.randint(1, cap))
        ratio = Fraction(len(entourage_power_neighborhood(window, 1, F)), len(F))
        if best is None or ratio < best:
            best, worst = ratio, F
    return IsoperimetryResult(best, worst, samples, degree - 1)

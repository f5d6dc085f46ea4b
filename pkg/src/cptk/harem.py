"""Hall harem matchings on windows.

``harem_matching`` finds ``f`` with ``gr(f) ⊆ R`` and ``|f^-1(x)| = d-1`` on
the certified core by solving a feasible-flow problem with lower bounds.

The core is the set of interior points whose ``R``-neighbours are all
interior.  Fibres elsewhere are left unbounded: a boundary point of a tree
ball has a single neighbour and must map into it, and with every interior
fibre pinned to ``d-1`` the forced choices propagate down to the root and
make the problem infeasible for every radius.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import networkx as nx
from networkx.algorithms.flow import preflow_push

from .coarse import CoarseWindow, EntourageRel, PreconditionError
from .config import DEFAULT_BUDGET, Budget
from .reports import Report


@dataclass(frozen=True, eq=False)
class HaremFunction:
    window: CoarseWindow
    map: tuple[int, ...]
    fiber_target: int
    certified: frozenset
    relation_used: EntourageRel

    def __call__(self, x: int) -> int:
        return self.map[x]

    def fibers(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {x: [] for x in range(len(self.map))}
        for x, y in enumerate(self.map):
            out[y].append(x)
        return out

    def to_json(self) -> dict:
        labels = self.window.labels
        return {
            "map": [[_j(labels[x]), _j(labels[y])] for x, y in enumerate(self.map)],
            "d": self.fiber_target + 1,
            "certified": [_j(labels[x]) for x in sorted(self.certified)],
        }


def _j(label):
    return list(label) if isinstance(label, tuple) else label


class HallViolation(Exception):
    """The flow problem is infeasible; carries a min-cut witness.

    ``kind == "demand"``: ``witness`` is an interior set ``F`` with
    ``|R[F]| < (d-1)|F|``.  ``kind == "supply"``: ``witness`` is a set ``X``
    whose ``R``-neighbourhood cannot absorb it, ``(d-1)|R[X]| < |X|``.
    """

    def __init__(self, kind: str, witness: frozenset, neighborhood: frozenset, d: int):
        self.kind = kind
        self.witness = witness
        self.neighborhood = neighborhood
        self.d = d
        super().__init__(
            f"{kind} Hall violation: |F|={len(witness)}, |R[F]|={len(neighborhood)}, d-1={d - 1}"
        )


def hall_check_small(
    window: CoarseWindow,
    R: EntourageRel,
    multiplier: int,
    max_size: int,
    budget: Budget = DEFAULT_BUDGET,
) -> list[frozenset]:
    """Every interior ``F`` with ``1 <= |F| <= max_size`` and ``|R[F]| < multiplier*|F|``.

    Enumerates all subsets while their number stays within
    ``budget.hall_subsets``; past that, only sets connected under
    ``R^-1∘R`` are listed (a violating set always has such a violating part).
    """
    if multiplier < 1:
        raise PreconditionError("multiplier must be >= 1")
    interior = sorted(window.interior)
    if max_size <= 0 or not interior:
        return []
    count = sum(_comb(len(interior), s) for s in range(1, max_size + 1))
    out = []
    if count <= budget.hall_subsets:
        for s in range(1, max_size + 1):
            for F in itertools.combinations(interior, s):
                if len(R.image(F)) < multiplier * s:
                    out.append(frozenset(F))
        return out
    for F in _connected_sets(window, R, interior, max_size):
        if len(R.image(F)) < multiplier * len(F):
            out.append(F)
    return sorted(out, key=lambda F: (len(F), sorted(F)))


def _comb(n, k):
    from math import comb

    return comb(n, k)


def _connected_sets(window, R, allowed, max_size):
    allowed_set = set(allowed)
    Rinv = R.inverse()
    adj = {}
    for x in allowed:
        near = set()
        for y in R.row(x):
            near.update(Rinv.row(y))
        adj[x] = sorted(z for z in near if z in allowed_set and z != x)
    seen = set()
    out = []

    def grow(sub, frontier):
        key = frozenset(sub)
        if key in seen:
            return
        seen.add(key)
        out.append(key)
        if len(sub) == max_size:
            return
        for w in sorted(frontier):
            if w not in sub:
                grow(sub | {w}, (frontier | set(adj[w])) - sub - {w})

    for v in allowed:
        grow({v}, set(adj[v]))
    return out


def harem_core(window: CoarseWindow, R: EntourageRel) -> frozenset:
    """Interior points all of whose possible preimages are interior."""
    return frozenset(
        y for y in window.interior if all(x in window.interior for x in R.row(y))
    )


def _flow_network(window: CoarseWindow, R: EntourageRel, d: int, core: frozenset):
    n = window.size
    G = nx.DiGraph()
    S, T = "S*", "T*"
    G.add_node(S)
    # canonical insertion order keeps the preflow deterministic
    for x in range(n):
        G.add_edge(S, ("L", x), capacity=1)
    G.add_edge(S, "t", capacity=(d - 1) * len(core))
    for x in range(n):
        for y in R.row(x):
            G.add_edge(("L", x), ("T", y), capacity=1)
    for y in range(n):
        if y in core:
            G.add_edge(("T", y), T, capacity=d - 1)
        else:
            G.add_edge(("T", y), "t")  # uncapped
    G.add_edge("t", "s")  # infinite: the return arc of the circulation
    G.add_edge("s", T, capacity=n)
    required = n + (d - 1) * len(core)
    return G, S, T, required


def _source_side(residual, S):
    side = {S}
    stack = [S]
    while stack:
        u = stack.pop()
        for v, attr in residual[u].items():
            if v not in side and attr["flow"] < attr["capacity"]:
                side.add(v)
                stack.append(v)
    return side


def harem_matching(window: CoarseWindow, R: EntourageRel, d: int) -> HaremFunction:
    """``f`` with ``gr(f) ⊆ R`` and fibres of size exactly ``d-1`` on :func:`harem_core`.

    Lower-bounded circulation (each point sends one unit; core targets
    absorb exactly ``d-1``) reduced to plain max-flow by moving the lower
    bounds into a super source and sink.  Raises :class:`HallViolation` with
    a cut witness when infeasible.
    """
    if d < 3:
        raise PreconditionError("d must be >= 3")
    if not R.is_irreflexive():
        raise PreconditionError("R must be irreflexive")
    if not R.is_symmetric():
        raise PreconditionError("R must be symmetric")
    core = harem_core(window, R)
    G, S, T, required = _flow_network(window, R, d, core)
    residual = preflow_push(G, S, T)
    value = residual.graph["flow_value"]
    if value < required:
        raise _extract_violation(window, R, d, residual, S, core)
    fmap = [-1] * window.size
    for x in range(window.size):
        for v, attr in residual[("L", x)].items():
            if isinstance(v, tuple) and v[0] == "T" and attr["flow"] == 1:
                fmap[x] = v[1]
    assert all(y >= 0 for y in fmap)
    return HaremFunction(window, tuple(fmap), d - 1, core, R)


def _extract_violation(window, R, d, residual, S, core) -> HallViolation:
    side = _source_side(residual, S)
    if "t" in side:
        F = frozenset(y for y in core if ("T", y) not in side)
        nb = R.image(F)
        assert len(nb) < (d - 1) * len(F), "cut did not yield a demand violation"
        return HallViolation("demand", F, nb, d)
    Xs = {x for x in range(window.size) if ("L", x) in side}
    Ys = {y for y in range(window.size) if ("T", y) in side}
    X = frozenset(x for x in Xs if set(R.row(x)) <= Ys)
    nb = R.image(X)
    assert (d - 1) * len(nb) < len(X), "cut did not yield a supply violation"
    return HallViolation("supply", X, nb, d)


def verify_harem(f: HaremFunction) -> Report:
    """Recount graph inclusion, fixed points and certified fibres."""
    rep = Report("harem", True)
    labels = f.window.labels
    irreflexive = f.relation_used.is_irreflexive()
    for x, y in enumerate(f.map):
        if (x, y) not in f.relation_used:
            rep.fail("graph", point=_j(labels[x]), image=_j(labels[y]))
        if irreflexive and x == y:
            rep.fail("fixed point", point=_j(labels[x]))
    fibers = f.fibers()
    for x in sorted(f.certified):
        size = len(fibers[x])
        if size != f.fiber_target:
            kind = "overfull fiber" if size > f.fiber_target else "underfull fiber"
            rep.fail(kind, point=_j(labels[x]), size=size, target=f.fiber_target)
    total = sum(len(fibers[x]) for x in f.certified)
    rep.details = {
        "points": len(f.map),
        "certified": len(f.certified),
        "fiber_target": f.fiber_target,
        "preimages_of_certified": total,
    }
    if total > len(f.map):
        rep.fail("fiber sum exceeds point count", total=total)
    return rep

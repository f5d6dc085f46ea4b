"""Piecewise translations on group models and paradoxical decompositions.

Models are ``F2`` itself, ``F2 x C_n`` (an open finite cyclic subgroup with
quotient ``F2``) and explicit finite actions.  Pieces are classifiers from
:mod:`cptk.pieces`, so a covering identity can be checked at every element
of a ball without truncating the pieces.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .free_group import IDENTITY, ProductElement, ReducedWord, enumerate_ball
from .pieces import Piece, element_from_json, element_to_json
from .reports import Report


class TransferError(ValueError):
    pass


# --------------------------------------------------------------------------
# group models


@dataclass(frozen=True)
class GroupModel:
    kind: str  # "free2" | "free2_times_cyclic"
    n: int = 1

    def __post_init__(self):
        if self.kind not in ("free2", "free2_times_cyclic"):
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("n must be >= 1")

    @classmethod
    def parse(cls, text: str) -> "GroupModel":
        t = text.lower()
        if t in ("f2", "free2"):
            return cls("free2")
        if t.startswith("f2xc"):
            return cls("free2_times_cyclic", int(t[4:]))
        raise ValueError(f"unknown model {text!r} (expected f2 or f2xc<n>)")

    @property
    def name(self) -> str:
        return "f2" if self.kind == "free2" else f"f2xc{self.n}"

    def identity(self):
        return IDENTITY if self.kind == "free2" else ProductElement(IDENTITY, 0, self.n)

    def embed_word(self, w: ReducedWord):
        """``w`` as an element; in ``F2 x C_n`` the cyclic coordinate is 0."""
        return w if self.kind == "free2" else ProductElement(w, 0, self.n)

    def elements(self, L: int) -> list:
        ball = enumerate_ball(L)
        if self.kind == "free2":
            return ball
        return [ProductElement(w, c, self.n) for w in ball for c in range(self.n)]

    def project(self, x) -> ReducedWord:
        return x if self.kind == "free2" else x.word

    def element_from_json(self, obj):
        return element_from_json(obj, None if self.kind == "free2" else self.n)


# --------------------------------------------------------------------------
# piecewise translations


def _word_len(x) -> int:
    return len(x)


@dataclass(frozen=True)
class PiecewiseTranslation:
    model: GroupModel
    pieces: tuple[tuple[Piece, object], ...]

    @classmethod
    def translation(cls, model: GroupModel, g) -> "PiecewiseTranslation":
        return cls(model, ((Piece.all(), g),))

    @classmethod
    def identity(cls, model: GroupModel) -> "PiecewiseTranslation":
        return cls.translation(model, model.identity())

    def piece_index(self, x) -> int:
        hits = [i for i, (p, _) in enumerate(self.pieces) if p.contains(x)]
        if len(hits) != 1:
            raise TransferError(f"{x} lies in {len(hits)} pieces")
        return hits[0]

    def __call__(self, x):
        p, g = self.pieces[self.piece_index(x)]
        return g * x

    def inverse(self) -> "PiecewiseTranslation":
        return PiecewiseTranslation(
            self.model, tuple((Piece.translate(g, p), g.inverse()) for p, g in self.pieces)
        )

    @property
    def max_translator_length(self) -> int:
        return max((_word_len(g) for _, g in self.pieces), default=0)

    def verify(self, L: int) -> Report:
        """Pieces partition the ball and translated pieces partition it too."""
        rep = Report("piecewise_translation", True)
        for x in self.model.elements(L):
            n_src = sum(p.contains(x) for p, _ in self.pieces)
            if n_src != 1:
                rep.fail("pieces", element=element_to_json(x), count=n_src)
            n_img = sum(p.contains(g.inverse() * x) for p, g in self.pieces)
            if n_img != 1:
                rep.fail("images", element=element_to_json(x), count=n_img)
            if len(rep.violations) > 20:
                break
        rep.details = {"L": L, "pieces": len(self.pieces)}
        return rep

    def to_json(self) -> list:
        return [{"piece": p.to_json(), "g": element_to_json(g)} for p, g in self.pieces]


def compose_piecewise(alpha: PiecewiseTranslation, beta: PiecewiseTranslation) -> PiecewiseTranslation:
    """``alpha ∘ beta``: on ``Q ∩ h^-1 P`` it is left translation by ``g h``."""
    if alpha.model != beta.model:
        raise TransferError("models differ")
    pieces = []
    for q, h in beta.pieces:
        for p, g in alpha.pieces:
            pulled = p if p.kind == "all" else Piece.preimage(("lmul", h), p)
            if q.kind == "all":
                piece = pulled
            elif pulled.kind == "all":
                piece = q
            else:
                piece = Piece.intersection(q, pulled)
            pieces.append((piece, g * h))
    return PiecewiseTranslation(alpha.model, tuple(pieces))


def lift_quotient(model: GroupModel, quotient_pt: PiecewiseTranslation, L_verify: int = 4) -> PiecewiseTranslation:
    """Pull a piecewise translation of ``F2`` back to ``F2 x C_n``."""
    if model.kind != "free2_times_cyclic":
        raise TransferError("lift_quotient needs an F2 x C_n model")
    if quotient_pt.model.kind != "free2":
        raise TransferError("the quotient translation must live on F2")
    rep = quotient_pt.verify(L_verify)
    if not rep.passed:
        raise TransferError(f"input is not a piecewise translation: {rep.violations[0]}")
    comps = range(model.n)
    return PiecewiseTranslation(
        model,
        tuple((Piece.product_with_finite(p, comps), model.embed_word(g)) for p, g in quotient_pt.pieces),
    )


def word_image(phi: dict, word: ReducedWord, model: GroupModel) -> PiecewiseTranslation:
    """``φ(word)`` from generator images, composing letter by letter."""
    out = PiecewiseTranslation.identity(model)
    for c in word.letters:
        step = phi[c] if c in phi else phi[c.lower()].inverse()
        out = compose_piecewise(out, step)
    return out


# --------------------------------------------------------------------------
# paradoxical decompositions


@dataclass(frozen=True)
class ParadoxicalDecomposition:
    p_family: tuple[tuple[Piece, object], ...]
    q_family: tuple[tuple[Piece, object], ...]
    form: str = "classical"

    def to_json(self) -> dict:
        return {
            "form": self.form,
            "P": [{"piece": p.to_json(), "g": element_to_json(g)} for p, g in self.p_family],
            "Q": [{"piece": q.to_json(), "g": element_to_json(h)} for q, h in self.q_family],
        }

    @classmethod
    def from_json(cls, obj: dict, n: int | None = None) -> "ParadoxicalDecomposition":
        fam = lambda key: tuple(
            (Piece.from_json(e["piece"], n), element_from_json(e["g"], n)) for e in obj[key]
        )
        return cls(fam("P"), fam("Q"), obj.get("form", "classical"))

    def to_joint(self) -> "ParadoxicalDecomposition":
        """Swap to the dual form: pieces ``gP`` with translators ``g^-1``."""
        flip = lambda fam: tuple((Piece.translate(g, p), g.inverse()) for p, g in fam)
        other = "joint" if self.form == "classical" else "classical"
        return ParadoxicalDecomposition(flip(self.p_family), flip(self.q_family), other)


def verify_paradoxical(pdec: ParadoxicalDecomposition, model: GroupModel, L: int, form: str | None = None) -> Report:
    """Exhaustive check on every element of word length ``<= L``.

    ``classical``: ``P ∪ Q`` is a partition, ``⊔ g_P P = G`` and
    ``⊔ h_Q Q = G``.  ``joint``: ``P`` and ``Q`` are each partitions and all
    translates together tile ``G`` once.  Translate membership ``y ∈ gP`` is
    tested as ``g^-1 y ∈ P`` on the classifier, which is exact at any length.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    form = form or pdec.form
    rep = Report("paradoxical", True)
    P, Q = pdec.p_family, pdec.q_family
    p_inv = [(p, g.inverse()) for p, g in P]
    q_inv = [(q, h.inverse()) for q, h in Q]
    counted = 0
    for x in model.elements(L):
        counted += 1
        in_p = sum(p.contains(x) for p, _ in P)
        in_q = sum(q.contains(x) for q, _ in Q)
        tp = sum(p.contains(gi * x) for p, gi in p_inv)
        tq = sum(q.contains(hi * x) for q, hi in q_inv)
        ex = element_to_json(x)
        if form == "classical":
            if in_p + in_q != 1:
                rep.fail("pieces", element=ex, count=in_p + in_q)
            if tp != 1:
                rep.fail("P translates", element=ex, count=tp)
            if tq != 1:
                rep.fail("Q translates", element=ex, count=tq)
        elif form == "joint":
            if in_p != 1:
                rep.fail("P partition", element=ex, count=in_p)
            if in_q != 1:
                rep.fail("Q partition", element=ex, count=in_q)
            if tp + tq != 1:
                rep.fail("translates", element=ex, count=tp + tq)
        else:
            raise ValueError(f"unknown form {form!r}")
        if len(rep.violations) >= 50:
            break
    c = max((_word_len(g) for _, g in list(P) + list(Q)), default=0)
    rep.details = {"form": form, "L": L, "elements": counted, "max_translator_length": c, "model": model.name}
    return rep


# --------------------------------------------------------------------------
# equivariant maps and transfer


@dataclass(frozen=True)
class PsiMap:
    """``ψ: G -> F2`` pointwise, with its preimage operator on pieces."""

    name: str
    point: Callable
    pullback: Callable[[Piece], Piece]


def psi_identity() -> PsiMap:
    return PsiMap("identity", lambda x: x, lambda p: p)


def psi_first_coordinate(n: int) -> PsiMap:
    comps = tuple(range(n))
    return PsiMap(
        "first-coordinate",
        lambda x: x.word,
        lambda p: Piece.product_with_finite(p, comps),
    )


def left_translations(model: GroupModel) -> dict:
    """``φ(a), φ(b)``: translation by the generators (lifted to ``F2 x C_n``)."""
    a, b = ReducedWord("a"), ReducedWord("b")
    if model.kind == "free2":
        return {c: PiecewiseTranslation.translation(model, g) for c, g in (("a", a), ("b", b))}
    base = GroupModel("free2")
    return {
        "a": lift_quotient(model, PiecewiseTranslation.translation(base, a)),
        "b": lift_quotient(model, PiecewiseTranslation.translation(base, b)),
    }


def check_equivariance(model: GroupModel, phi: dict, psi: PsiMap, L: int) -> list:
    bad = []
    for x in model.elements(L):
        for c in "ab":
            g = ReducedWord(c)
            if psi.point(phi[c](x)) != g * psi.point(x):
                bad.append({"element": element_to_json(x), "generator": c})
    return bad


def _refine(maps: Sequence[PiecewiseTranslation]) -> list[tuple[Piece, tuple]]:
    """Common refinement: one cell per choice of piece in every map."""
    cells = []
    for combo in itertools.product(*[range(len(m.pieces)) for m in maps]):
        parts = [m.pieces[i][0] for m, i in zip(maps, combo) if m.pieces[i][0].kind != "all"]
        if not parts:
            cell = Piece.all()
        elif len(parts) == 1:
            cell = parts[0]
        else:
            cell = Piece.intersection(*parts)
        cells.append((cell, tuple(m.pieces[i][1] for m, i in zip(maps, combo))))
    return cells


@dataclass
class Transfer:
    decomposition: ParadoxicalDecomposition
    refinement_size: int
    equivariance_checked: int
    notes: list = field(default_factory=list)


def transfer_paradox(
    model: GroupModel,
    phi: dict,
    psi: PsiMap,
    f2_pdec: ParadoxicalDecomposition,
    check_L: int = 3,
    check: bool = True,
) -> Transfer:
    """Pull a decomposition of ``F2`` back along an equivariant ``ψ``.

    With ``R`` the common refinement of the partitions of every ``φ(g_P)``
    and ``φ(h_Q)``, the new pieces are ``ψ^-1(P) ∩ R`` translated by the
    element ``φ(g_P)`` uses on ``R``.
    """
    checked = 0
    if check:
        bad = check_equivariance(model, phi, psi, check_L)
        checked = len(model.elements(check_L))
        if bad:
            raise TransferError(f"ψ∘φ(g) != λ_g∘ψ at {bad[0]}")
    words = []
    for _, g in list(f2_pdec.p_family) + list(f2_pdec.q_family):
        if g not in words:
            words.append(g)
    images = [word_image(phi, g, model) for g in words]
    if check:
        for g, im in zip(words, images):
            rep = im.verify(check_L)
            if not rep.passed:
                raise TransferError(f"φ({g}) is not bijective: {rep.violations[0]}")
    cells = _refine(images)
    slot = {g: i for i, g in enumerate(words)}

    def family(fam):
        out = []
        for piece, g in fam:
            pulled = psi.pullback(piece)
            for cell, translators in cells:
                part = pulled if cell.kind == "all" else Piece.intersection(pulled, cell)
                out.append((part, translators[slot[g]]))
        return tuple(out)

    pdec = ParadoxicalDecomposition(family(f2_pdec.p_family), family(f2_pdec.q_family), f2_pdec.form)
    return Transfer(pdec, len(cells), checked)


# --------------------------------------------------------------------------
# finite actions and cross-sections


@dataclass(frozen=True)
class FiniteAction:
    """A group (listed elements) acting on points; ``act(g, x)``."""

    elements: tuple
    points: tuple
    act: Callable
    identity: object
    label: Callable = str

    @classmethod
    def from_permutations(cls, perms: dict, names_identity: str = "e") -> "FiniteAction":
        """Elements given as ``{name: one-line permutation}``."""
        m = len(next(iter(perms.values())))
        return cls(
            tuple(perms),
            tuple(range(m)),
            lambda g, x: perms[g][x],
            names_identity,
        )


class CrossSectionError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def equivariant_from_cross_section(action: FiniteAction, sigma: Callable | Sequence, mul: Callable | None = None) -> dict:
    """The ``ψ`` with ``ψ(x)·σ(x) = x``; ``ψ(gx) = gψ(x)`` is checked on all pairs.

    ``mul(g, h)`` is the group law (needed for the equivariance check); when
    omitted it is recovered from the action on points.
    """
    sig = sigma if callable(sigma) else (lambda x: sigma[x])
    act, G, X = action.act, action.elements, action.points
    for g in G:
        if g == action.identity:
            continue
        for x in X:
            if act(g, x) == x:
                raise CrossSectionError(f"{action.label(g)} fixes {x}: action is not semi-regular", (g, x))
    psi = {}
    for x in X:
        s = sig(x)
        hits = [g for g in G if act(g, s) == x]
        if len(hits) != 1:
            raise CrossSectionError(f"σ({x}) = {s} is not in the orbit of {x}", x)
        for g in G:
            if sig(act(g, x)) != s:
                raise CrossSectionError(f"σ is not constant on the orbit of {x}", x)
        psi[x] = hits[0]
    if mul is None:
        def mul(g, h):
            for k in G:
                if all(act(k, x) == act(g, act(h, x)) for x in X):
                    return k
            raise CrossSectionError("action is not closed under composition")
    for g in G:
        for x in X:
            if psi[act(g, x)] != mul(g, psi[x]):
                raise CrossSectionError(f"equivariance fails at g={action.label(g)}, x={x}", (g, x))
    return psi


def free_orbit_action(k: int, L: int) -> tuple[FiniteAction, Callable]:
    """``F2`` acting on ``F2 x {0..k-1}`` by left multiplication, cut to the ball of radius ``L``.

    Returns the truncated action (only pairs staying inside the ball) and the
    cross-section ``σ(w, i) = (e, i)``.
    """
    ball = enumerate_ball(L)
    pts = tuple((w, i) for w in ball for i in range(k))
    return (
        FiniteAction(tuple(ball), pts, lambda g, x: (g * x[0], x[1]), IDENTITY),
        lambda x: (IDENTITY, x[1]),
    )


def psi_free_orbits(k: int, L: int) -> dict:
    """``ψ(w, i) = w`` solved from the cross-section, with equivariance on in-ball pairs."""
    action, sigma = free_orbit_action(k, L)
    psi = {}
    for x in action.points:
        s = sigma(x)
        # ψ(x) s = x  =>  ψ(x) = x_word * s_word^-1
        psi[x] = x[0] * s[0].inverse()
    inside = set(action.points)
    for g in action.elements:
        for x in action.points:
            y = action.act(g, x)
            if y in inside and psi[y] != g * psi[x]:
                raise CrossSectionError("equivariance fails", (g, x))
    return psi

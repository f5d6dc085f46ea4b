"""Graphviz DOT text for windows, forests and permutations."""
from __future__ import annotations

from typing import Iterable, Mapping

from .coarse import CoarseWindow
from .embeddings import BoundedPermutation


def _q(label) -> str:
    if isinstance(label, str):
        text = label or "e"
    elif isinstance(label, tuple):
        text = ",".join(map(str, label))
    else:
        text = str(label)
    return '"' + text.replace('"', r"\"") + '"'


def _nodes(window: CoarseWindow, styled: Iterable[int] = (), style: str = "") -> list[str]:
    styled = set(styled)
    out = []
    for i, lab in enumerate(window.labels):
        attrs = f" [{style}]" if i in styled and style else ""
        out.append(f"  {_q(lab)}{attrs};")
    return out


def window_dot(window: CoarseWindow, name: str = "window") -> str:
    """``Γ(E)``: one undirected edge per unordered non-diagonal pair."""
    lines = [f"graph {name} {{"]
    lines += _nodes(window, window.interior, "shape=box")
    for i in range(window.size):
        for j in window.adjacency[i]:
            if i < j:
                lines.append(f"  {_q(window.labels[i])} -- {_q(window.labels[j])};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def forest_dot(window: CoarseWindow, f_star: Mapping[int, int], certified: Iterable[int], name: str = "forest") -> str:
    """Edges ``x -> f*(x)``; certified nodes are filled."""
    lines = [f"digraph {name} {{"]
    lines += _nodes(window, certified, "style=filled, fillcolor=lightblue")
    for x in sorted(f_star):
        lines.append(f"  {_q(window.labels[x])} -> {_q(window.labels[f_star[x]])};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def permutation_dot(perm: BoundedPermutation, name: str = "perm") -> str:
    """One edge per moved point."""
    w = perm.window
    lines = [f"digraph {name} {{"]
    lines += _nodes(w)
    for x in perm.moved():
        lines.append(f"  {_q(w.labels[x])} -> {_q(w.labels[perm.forward[x]])};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(obj, **options) -> str:
    if isinstance(obj, CoarseWindow):
        return window_dot(obj, **options)
    if isinstance(obj, BoundedPermutation):
        return permutation_dot(obj, **options)
    if isinstance(obj, tuple) and len(obj) == 3 and isinstance(obj[0], CoarseWindow):
        return forest_dot(*obj, **options)
    raise TypeError(f"cannot render {type(obj).__name__} as DOT")

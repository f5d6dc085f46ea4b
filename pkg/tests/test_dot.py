import pytest

from cptk.coarse import make_window
from cptk.dot import export_dot
from cptk.embeddings import BoundedPermutation, pair_swap_permutation
from cptk.harem import harem_matching
from cptk.whyte import eliminate_periodic


def _edges(text, sep):
    return [ln for ln in text.splitlines() if sep in ln]


def test_tree_window_dot():
    w = make_window("tree4", 2)
    text = export_dot(w)
    assert text.startswith("graph window {")
    assert len(_edges(text, " -- ")) == 16
    nodes = [ln for ln in text.splitlines() if ln.strip().endswith(";") and "--" not in ln]
    assert len(nodes) == 17
    assert export_dot(w) == text  # deterministic


def test_identity_permutation_has_no_edges():
    w = make_window("line", 4)
    assert _edges(export_dot(BoundedPermutation.identity(w)), " -> ") == []
    assert len(_edges(export_dot(pair_swap_permutation(w)), " -> ")) == 8


def test_forest_dot_styles_certified():
    w = make_window("tree4", 4)
    f = harem_matching(w, w.relation.minus_diagonal(), 4)
    elim = eliminate_periodic(f)
    text = export_dot((w, elim.f_star, elim.certified_region))
    styled = [ln for ln in text.splitlines() if "fillcolor" in ln]
    assert len(styled) == len(elim.certified_region)
    assert len(_edges(text, " -> ")) == len(elim.f_star)
    node_lines = [ln for ln in text.splitlines() if ln.strip().endswith(";") and "->" not in ln]
    assert len(node_lines) == w.size


def test_unsupported_object():
    with pytest.raises(TypeError):
        export_dot(42)

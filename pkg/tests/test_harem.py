from dataclasses import replace

import pytest

from cptk.coarse import PreconditionError, make_window, permute_window
from cptk.harem import HallViolation, hall_check_small, harem_core, harem_matching, verify_harem


@pytest.fixture(scope="module")
def tree5():
    return make_window("tree4", 5)


def test_tree_matching_passes(tree5):
    R = tree5.relation.minus_diagonal()
    f = harem_matching(tree5, R, 4)
    rep = verify_harem(f)
    assert rep.passed, rep.summary()
    fibers = f.fibers()
    assert all(len(fibers[x]) == 3 for x in f.certified)
    assert f.certified == harem_core(tree5, R)
    assert all((x, f(x)) in R for x in range(tree5.size))


def test_core_is_interior_minus_its_rim(tree5):
    core = harem_core(tree5, tree5.relation.minus_diagonal())
    # radius-5 ball: interior is radius 4, core is radius 3
    assert len(core) == 1 + 4 * (3**3 - 1) // 2


def test_line_is_infeasible_with_demand_witness():
    w = make_window("line", 12)
    R = w.relation.minus_diagonal()
    with pytest.raises(HallViolation) as info:
        harem_matching(w, R, 4)
    exc = info.value
    assert exc.kind == "demand"
    assert exc.witness
    assert len(R.image(exc.witness)) < 3 * len(exc.witness)


def test_line_fails_already_for_d3():
    # an interval of n points only reaches n + 2 points
    w = make_window("line", 8)
    R = w.relation.minus_diagonal()
    with pytest.raises(HallViolation) as info:
        harem_matching(w, R, 3)
    F = info.value.witness
    assert len(R.image(F)) < 2 * len(F)


def test_preconditions(tree5):
    R = tree5.relation.minus_diagonal()
    with pytest.raises(PreconditionError):
        harem_matching(tree5, R, 2)
    with pytest.raises(PreconditionError):
        harem_matching(tree5, tree5.relation, 4)  # reflexive


def test_planted_fixed_point(tree5):
    f = harem_matching(tree5, tree5.relation.minus_diagonal(), 4)
    x = min(f.certified)
    bad = replace(f, map=f.map[:x] + (x,) + f.map[x + 1:])
    kinds = {v["kind"] for v in verify_harem(bad).violations}
    assert "fixed point" in kinds
    assert "graph" in kinds  # (x, x) is not in R minus the diagonal


def test_planted_fiber_defect(tree5):
    f = harem_matching(tree5, tree5.relation.minus_diagonal(), 4)
    # send one preimage of a core point elsewhere: that fibre drops to 2
    y = min(f.certified)
    x = f.fibers()[y][0]
    other = next(z for z in tree5.neighbors(x) if z != y)
    bad = replace(f, map=f.map[:x] + (other,) + f.map[x + 1:])
    rep = verify_harem(bad)
    assert not rep.passed
    assert any(v["kind"] == "underfull fiber" and v["size"] == 2 for v in rep.violations)


def test_relabeling_keeps_matching_valid(tree5):
    perm = list(reversed(range(tree5.size)))
    w = permute_window(tree5, perm)
    f = harem_matching(w, w.relation.minus_diagonal(), 4)
    assert verify_harem(f).passed
    assert len(f.certified) == len(harem_core(tree5, tree5.relation.minus_diagonal()))


def test_hall_check_small_agrees_with_flow():
    w = make_window("line", 6)
    R = w.relation.minus_diagonal()
    bad = hall_check_small(w, R, 3, 3)
    assert frozenset(w.ids([0])) in bad  # a single point has only 2 neighbours
    assert all(len(R.image(F)) < 3 * len(F) for F in bad)
    t = make_window("tree4", 3)
    assert hall_check_small(t, t.relation.minus_diagonal(), 3, 3) == []


def test_hall_violation_message():
    exc = HallViolation("demand", frozenset({1, 2}), frozenset({0, 3}), 4)
    assert "|F|=2" in str(exc) and "d-1=3" in str(exc)


def test_hall_check_small_examples():
    w = make_window("line", 6)
    R = w.relation.minus_diagonal()
    F = frozenset(w.ids([0, 1]))
    assert w.names(R.image(F)) == [-1, 0, 1, 2]
    assert F in hall_check_small(w, R, 3, 2)
    t = make_window("tree4", 3)
    assert hall_check_small(t, t.relation.minus_diagonal(), 3, 4) == []
    assert hall_check_small(w, R, 3, 0) == []


def test_empty_interior_is_unconstrained():
    from cptk.coarse import CoarseWindow

    w = CoarseWindow.from_pairs([0, 1, 2], [(0, 1), (1, 2)], interior=[])
    f = harem_matching(w, w.relation.minus_diagonal(), 4)
    assert f.certified == frozenset()
    assert verify_harem(f).passed

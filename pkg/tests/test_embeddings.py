from dataclasses import replace

import pytest

from cptk.coarse import PreconditionError, make_window
from cptk.config import Budget
from cptk.embeddings import (
    BoundedPermutation,
    CapacityError,
    act_word,
    disjoint_path_family,
    embed_f2,
    lemma42_generators,
    local_finiteness_certificate,
    pair_swap_permutation,
    semiregular_check,
    translation_permutation,
    zn_bijection,
    zn_inverse,
    zn_transport,
)
from cptk.free_group import ReducedWord, enumerate_ball


def W(text):
    return ReducedWord.parse(text)


def test_lemma_pair_for_abA():
    pair = lemma42_generators(W("abA"))
    assert pair.M_size == 7
    assert sorted(pair.phi_a) == list(range(7))
    assert sorted(pair.phi_b) == list(range(7))
    assert act_word(pair, W("abA"), 0) == 6


@pytest.mark.parametrize("text", ["a", "A", "b", "B", "ab", "aB", "Ab", "BAba", "aabbAA", "bbbb"])
def test_word_reaches_the_far_end(text):
    w = W(text)
    pair = lemma42_generators(w)
    assert pair.M_size == 2 * len(w) + 1
    assert act_word(pair, w, 0) == 2 * len(w)
    for letter in "aAbB":
        table = pair.table(letter)
        assert all(abs(y - i) <= 2 for i, y in enumerate(table))


def test_inverse_tables():
    pair = lemma42_generators(W("aBBa"))
    for i in range(pair.M_size):
        assert pair.phi_A[pair.phi_a[i]] == i
        assert pair.phi_B[pair.phi_b[i]] == i


def test_identity_word_rejected():
    with pytest.raises(PreconditionError):
        lemma42_generators(W(""))
    pair = lemma42_generators(W("a"))
    with pytest.raises(PreconditionError):
        act_word(pair, W("a"), 99)


def test_corrupted_table_is_caught():
    # "ab" acts by b first; redirect the a-step the walk actually uses
    pair = lemma42_generators(W("ab"))
    x = pair.phi_b[0]
    a = list(pair.phi_a)
    k = (x + 1) % len(a)
    a[x], a[k] = a[k], a[x]
    broken = replace(pair, phi_a=tuple(a))
    assert act_word(pair, W("ab"), 0) == 4
    assert act_word(broken, W("ab"), 0) != 4


def test_bounded_permutation_basics():
    w = make_window("line", 5)
    t = translation_permutation(w, 1)
    assert t.check()
    assert t.compose(t.inv()).moved() == []
    assert BoundedPermutation.identity(w).moved() == []
    with pytest.raises(PreconditionError):
        BoundedPermutation.from_table(w, [0] * w.size)
    with pytest.raises(PreconditionError):
        BoundedPermutation.from_table(w, t.forward, power=0)


def test_pair_swap():
    w = make_window("line", 4)
    s = pair_swap_permutation(w)
    assert s.displacement_power == 1
    assert s.compose(s).moved() == []


def test_disjoint_paths_capacity():
    w = make_window("line", 3)
    with pytest.raises(CapacityError):
        disjoint_path_family(w, [W("a"), W("b"), W("ab")])
    with pytest.raises(PreconditionError):
        disjoint_path_family(w, [W("a"), W("a")])


def test_disjoint_paths_on_tree():
    t = make_window("tree4", 4)
    words = [v for v in enumerate_ball(1) if not v.is_identity]
    paths = disjoint_path_family(t, words)
    used = [x for p in paths.values() for x in p]
    assert len(used) == len(set(used))
    for v, p in paths.items():
        assert len(p) == 2 * len(v) + 1
        assert all(p[i + 1] in t.neighbors(p[i]) for i in range(len(p) - 1))


def test_path_budget():
    t = make_window("tree4", 4)
    words = [v for v in enumerate_ball(2) if not v.is_identity]
    with pytest.raises(CapacityError):
        disjoint_path_family(t, words, Budget(dfs_nodes=3))


def test_embed_small_line():
    w = make_window("line", 60)
    emb = embed_f2(w, 1)
    assert emb.report.passed
    assert len(emb.certificate) == 4
    assert all(c["in_E_power"] == 2 for c in emb.certificate)
    # generators move only path points, so fixed points exist off the paths
    assert semiregular_check(emb.gens, 1, range(w.size), "witness").passed
    assert not semiregular_check(emb.gens, 1, range(w.size)).passed


def test_semiregular_modes():
    w = make_window("line", 6)
    gens = {"a": translation_permutation(w, 1), "b": translation_permutation(w, 2)}
    assert semiregular_check(gens, 1, range(w.size)).passed
    # aBa shifts by 1 - 2 + 1 = 0, so it fixes every point
    rep = semiregular_check(gens, 3, range(w.size))
    assert not rep.passed
    with pytest.raises(PreconditionError):
        semiregular_check(gens, 1, range(3), mode="sometimes")


def test_local_finiteness():
    w = make_window("line", 30)
    swaps = local_finiteness_certificate(w, [pair_swap_permutation(w)])
    assert swaps.passed and swaps.details["order"] == 2
    shift = local_finiteness_certificate(w, [translation_permutation(w, 1)])
    assert not shift.certified


def test_local_finiteness_two_swaps():
    # swaps of (2i, 2i+1) and (2i+1, 2i+2) generate an infinite dihedral-like group
    w = make_window("line", 20)
    s1 = pair_swap_permutation(w)
    lab = set(w.labels)
    s2 = BoundedPermutation.from_label_map(
        w, lambda x: (x + 1 if x % 2 else x - 1) if (x + 1 if x % 2 else x - 1) in lab else x
    )
    rep = local_finiteness_certificate(w, [s1, s2])
    assert not rep.certified


def test_zn_bijection():
    assert [zn_bijection(n) for n in (0, -1, 1, -2, 2)] == [0, 1, 2, 3, 4]
    assert all(zn_inverse(zn_bijection(n)) == n for n in range(-50, 51))
    with pytest.raises(ValueError):
        zn_inverse(-1)


def test_zn_transport_bounded():
    line = make_window("line", 5)
    half = make_window("halfline", 20)
    t = zn_transport(translation_permutation(line, 1), half)
    assert t.displacement_power <= 2
    assert t.check()

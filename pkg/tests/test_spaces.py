from fractions import Fraction

import pytest

from dbl.errors import NotClopen, NotContinuous, SizeExceeded
from dbl.fixtures import double_sierpinski, glued_pairs
from dbl.spaces import (
    FiniteSpace,
    PointMap,
    UltrametricSpace,
    ball_tree,
    banaschewski,
    clopen_closure,
    inclusion_map,
    ultrafilters,
    zeta_embedding_check,
)


def brute_clopens(space):
    # oracle: scan every subset for being simultaneously open and closed
    from itertools import combinations

    out = []
    for size in range(space.n + 1):
        for c in combinations(range(space.n), size):
            U = frozenset(c)
            if space.is_open(U) and space.is_closed(U):
                out.append(U)
    return sorted(out, key=lambda u: tuple(sorted(u)))


def test_clopens_examples():
    assert len(FiniteSpace.discrete(3).clopens) == 8
    sier = FiniteSpace.sierpinski()
    assert sorted(map(sorted, sier.clopens)) == [[], [0, 1]]
    glued = glued_pairs()
    assert sorted(map(sorted, glued.clopens)) == [[], [0, 1], [0, 1, 2, 3], [2, 3]]


def test_clopens_match_brute_force():
    for space in (FiniteSpace.discrete(3), FiniteSpace.sierpinski(), glued_pairs(), double_sierpinski()):
        assert sorted(space.clopens, key=lambda u: tuple(sorted(u))) == brute_clopens(space)


def test_quasi_components():
    assert [sorted(b) for b in FiniteSpace.discrete(3).quasi_components] == [[0], [1], [2]]
    assert [sorted(b) for b in FiniteSpace.sierpinski().quasi_components] == [[0, 1]]
    assert [sorted(b) for b in double_sierpinski().quasi_components] == [[0, 1], [2, 3]]


def test_component_is_meet_of_clopens():
    for space in (glued_pairs(), double_sierpinski(), FiniteSpace.sierpinski()):
        for x in range(space.n):
            block = frozenset(range(space.n))
            for U in space.clopens:
                if x in U:
                    block &= U
            assert block == space.quasi_components[space.component_index(x)]


def test_banaschewski():
    disc = FiniteSpace.discrete(3)
    zeta, iota = banaschewski(disc)
    assert zeta.n == 3 and iota.images == (0, 1, 2)
    zeta, iota = banaschewski(FiniteSpace.sierpinski())
    assert zeta.n == 1
    zeta, iota = banaschewski(glued_pairs())
    assert zeta.n == 2 and iota.images == (0, 0, 1, 1)


def test_banaschewski_idempotent():
    space = FiniteSpace.discrete(4)
    zeta, iota = banaschewski(space)
    assert zeta == space and iota.images == tuple(range(4))


def test_clopen_closure_uniqueness():
    for space in (FiniteSpace.discrete(3), glued_pairs(), double_sierpinski()):
        zeta, iota = banaschewski(space)
        for U in space.clopens:
            bar = clopen_closure(space, U)
            pre = frozenset(x for x in range(space.n) if iota(x) in bar)
            assert pre == U
            # uniqueness: no other clopen of the component space pulls back to U
            others = [
                V
                for V in zeta.clopens
                if frozenset(x for x in range(space.n) if iota(x) in V) == U
            ]
            assert others == [bar]


def test_clopen_closure_rejects_non_clopen():
    with pytest.raises(NotClopen):
        clopen_closure(FiniteSpace.sierpinski(), frozenset({1}))


def test_ultrafilters():
    assert len(ultrafilters(FiniteSpace.discrete(2))) == 2
    sier = ultrafilters(FiniteSpace.sierpinski())
    assert sier == [frozenset({frozenset({0, 1})})]
    glued = ultrafilters(glued_pairs())
    assert len(glued) == 2
    # bijection with the component space
    for space in (FiniteSpace.discrete(3), glued_pairs(), double_sierpinski()):
        zeta, _ = banaschewski(space)
        assert len(ultrafilters(space)) == zeta.n


def test_ultrafilter_laws():
    for space in (glued_pairs(), double_sierpinski()):
        full = frozenset(range(space.n))
        for filt in ultrafilters(space):
            assert full in filt and frozenset() not in filt
            for U in space.clopens:
                comp = full - U
                assert (U in filt) != (comp in filt)


def test_size_cap():
    with pytest.raises(SizeExceeded):
        FiniteSpace(13)
    FiniteSpace.discrete(17)  # discrete fast path is allowed
    with pytest.raises(SizeExceeded):
        FiniteSpace.discrete(25)


def test_point_map_continuity():
    sier = FiniteSpace.sierpinski()
    disc = FiniteSpace.discrete(2)
    # identity on points: sierpinski -> discrete is NOT continuous
    j = PointMap(sier, disc, (0, 1))
    assert not j.is_continuous()
    # discrete -> sierpinski always continuous
    assert PointMap(disc, sier, (0, 1)).is_continuous()


def test_zeta_embedding_check():
    disc2 = FiniteSpace.discrete(2)
    disc1 = FiniteSpace.discrete(1)
    sub, incl = inclusion_map({0}, disc2)
    assert zeta_embedding_check(incl) == (True, None)
    collapse = PointMap(disc2, disc1, (0, 0))
    ok, witness = zeta_embedding_check(collapse)
    assert not ok and witness == (0, 1)
    # sierpinski into discrete 2 collapsing both points: zeta(K) is a point
    sier = FiniteSpace.sierpinski()
    j = PointMap(sier, disc2, (0, 0))
    assert j.is_continuous()
    assert zeta_embedding_check(j) == (True, None)


def test_zeta_embedding_requires_continuity():
    sier = FiniteSpace.sierpinski()
    j = PointMap(sier, FiniteSpace.discrete(2), (0, 1))
    with pytest.raises(NotContinuous):
        zeta_embedding_check(j)


def three_point_um():
    return UltrametricSpace(
        [[0, 1, 2], [1, 0, 2], [2, 2, 0]]
    )


def test_ultrametric_validation():
    with pytest.raises(ValueError):
        UltrametricSpace([[0, 3], [3, 1]])  # nonzero diagonal
    with pytest.raises(ValueError):
        UltrametricSpace([[0, 1, 5], [1, 0, 1], [5, 1, 0]])  # not ultrametric


def test_ball_tree_examples():
    single = ball_tree(UltrametricSpace([[0]]))
    assert single.points == frozenset({0}) and single.is_leaf()

    tree = ball_tree(three_point_um())
    assert tree.points == frozenset({0, 1, 2})
    kids = [sorted(c.points) for c in tree.children]
    assert kids == [[0, 1], [2]]
    inner = tree.children[0]
    assert [sorted(c.points) for c in inner.children] == [[0], [1]]

    # all pairwise distances equal: root with n singleton children
    um = UltrametricSpace([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    tree = ball_tree(um)
    assert [sorted(c.points) for c in tree.children] == [[0], [1], [2]]
    assert all(c.is_leaf() for c in tree.children)


def test_ball_tree_nested_or_disjoint():
    from dbl.fixtures import seeded_ultrametric

    for seed in range(6):
        um = seeded_ultrametric(seed, max_points=10)
        tree = ball_tree(um)
        nodes = [n.points for n in tree.all_nodes()]
        for a in nodes:
            for b in nodes:
                assert a & b in (a, b, frozenset())
        for node in tree.all_nodes():
            if node.children:
                assert frozenset().union(*(c.points for c in node.children)) == node.points


def test_space_json_roundtrip():
    for space in (FiniteSpace.discrete(3), glued_pairs(), FiniteSpace.sierpinski()):
        again = FiniteSpace.from_json(space.to_json())
        assert again == space


def test_ultrametric_json_roundtrip():
    um = UltrametricSpace([[0, Fraction(1, 2)], [Fraction(1, 2), 0]])
    again = UltrametricSpace.from_json(um.to_json())
    assert again.dist == um.dist

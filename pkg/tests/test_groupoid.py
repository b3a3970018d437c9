import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from corpus import family, fg_heap, i2_subset_closures, one_heap, sim
from heapmorita.finsemi import brandt_b2, iso_search, partial_injections
from heapmorita.groupoid import (
    LEFT,
    RIGHT,
    build_left,
    build_right,
    check_groupoid,
    check_pregroupoid,
    pregroupoid_view,
)
from heapmorita.heap import atlas_closure, gh_of


def assert_matches_concrete(G, elems):
    """Classes of ``G`` correspond to concrete maps, products to composition, order to restriction."""
    dicts = [oracles.as_dict(f) for f in elems]
    concrete = oracles.concrete_groupoid(dicts, G.side)
    assert sorted(concrete) == [tuple(p) for p in G.pairs.tolist()]
    image = {}
    for (x, y), f in concrete.items():
        c = G.cls(x, y)
        assert image.setdefault(c, f) == f, "class is not a single concrete map"
    assert len(set(image.values())) == G.size == len(image)
    as_map = {c: dict(f) for c, f in image.items()}
    mul = G.semigroup.mul
    for a in range(G.size):
        for b in range(G.size):
            assert oracles.key(oracles.compose(as_map[a], as_map[b])) == image[mul[a, b]]
            # natural order of partial maps is restriction
            restricts = all(as_map[b].get(s) == t for s, t in as_map[a].items())
            assert bool(G.order_leq[a, b]) == restricts


# -- pregroupoid


@pytest.mark.parametrize(
    "X", [gh_of(sim(2)[0]), one_heap(), fg_heap()[0]], ids=["GH(I2)", "one", "atlas"]
)
def test_pregroupoid_laws(X):
    report = check_pregroupoid(pregroupoid_view(X))
    assert report.passed
    assert report.names() == ["PG1", "PG2-left", "PG2-right", "PG3-left", "PG3-right"]


def test_fg_definedness():
    V = pregroupoid_view(fg_heap()[0])
    empty, f, g = 0, 1, 2
    assert V.q.class_of[f] == V.q.class_of[g]
    assert V.p.class_of[g] != V.p.class_of[empty]
    assert not V.defined(f, g, empty)
    assert V.defined(f, g, g)


def test_one_element_heap_has_one_defined_triple():
    assert pregroupoid_view(one_heap()).defined_mask().sum() == 1


# -- X^-1 X and X X^-1


@pytest.mark.parametrize("build", [build_left, build_right], ids=["left", "right"])
def test_gh_i2_gives_i2(build):
    S = sim(2)[0]
    G = build(gh_of(S))
    assert G.size == 7
    assert iso_search(G.semigroup, S)
    assert check_groupoid(G).passed


def test_fg_right_side_is_two_chain():
    G = build_right(fg_heap()[0])
    assert G.size == 2
    # only the diagonal is admissible since p separates all three elements
    assert [tuple(p) for p in G.pairs.tolist()] == [(0, 0), (1, 1), (2, 2)]
    # (f, f) and (g, g) share a class
    assert G.cls(1, 1) == G.cls(2, 2) != G.cls(0, 0)
    assert G.semigroup.mul.tolist() == [[0, 0], [0, 1]]


def test_fg_left_side_is_brandt():
    G = build_left(fg_heap()[0])
    assert G.size == 5
    admissible = [tuple(p) for p in G.pairs.tolist()]
    assert admissible == [(0, 0), (1, 1), (1, 2), (2, 1), (2, 2)]
    assert iso_search(G.semigroup, brandt_b2()[0])


@pytest.mark.parametrize("build", [build_left, build_right], ids=["left", "right"])
def test_one_element_heap_gives_one_element(build):
    assert build(one_heap()).size == 1


@pytest.mark.parametrize("side", [LEFT, RIGHT])
def test_fg_matches_concrete_maps(side):
    X, elems = fg_heap()
    G = build_left(X) if side == LEFT else build_right(X)
    assert_matches_concrete(G, elems)


@pytest.mark.parametrize("side", [LEFT, RIGHT])
def test_i2_subset_closures_match_concrete_maps(side):
    for _, X, elems in i2_subset_closures():
        G = build_left(X) if side == LEFT else build_right(X)
        assert_matches_concrete(G, elems)


@pytest.mark.parametrize("name", sorted(family()) + ["I3"])
def test_groupoid_checks_on_family(name):
    S = sim(3)[0] if name == "I3" else family()[name]
    X = gh_of(S)
    for G in (build_left(X), build_right(X)):
        report = check_groupoid(G)
        assert report.passed, report.render()
        assert G.semigroup.inv[G.cls(0, 0)] == G.cls(0, 0)


def test_inverse_swaps_pairs():
    G = build_right(gh_of(sim(2)[0]))
    for x, y in G.pairs.tolist():
        assert G.semigroup.inv[G.cls(x, y)] == G.cls(y, x)


def test_identities_track_quotients():
    X = fg_heap()[0]
    L, R = build_left(X), build_right(X)
    assert L.base_quotient().size == 3 and R.base_quotient().size == 2
    assert L.identity_of(1) != L.identity_of(2)
    assert R.identity_of(1) == R.identity_of(2)


def test_members_and_bad_pair():
    G = build_right(fg_heap()[0])
    assert G.members(G.cls(1, 1)).tolist() == [[1, 1], [2, 2]]
    with pytest.raises(KeyError):
        build_left(fg_heap()[0]).cls(0, 1)


def test_seed_does_not_change_result():
    X = gh_of(sim(2)[0])
    a, b = build_left(X, seed=0), build_left(X, seed=99)
    assert a.semigroup.equals(b.semigroup)
    assert np.array_equal(a.order_leq, b.order_leq)


atlas_maps = st.integers(1, 3).flatmap(
    lambda src: st.integers(1, 3).flatmap(
        lambda dst: st.lists(st.sampled_from(partial_injections(src, dst)), min_size=1, max_size=3)
    )
)


@settings(max_examples=30, deadline=None)
@given(atlas_maps)
def test_random_atlases_match_concrete_maps(maps):
    X, elems = atlas_closure(maps)
    for G in (build_left(X, rounds=10), build_right(X, rounds=10)):
        assert_matches_concrete(G, elems)
        assert check_groupoid(G).passed

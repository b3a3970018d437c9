import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from corpus import family, fg_atlas, fg_heap, one_heap, sim
from heapmorita.finsemi import PartialBijection, SizeLimitError, cyclic_group, partial_injections, semilattice_chain
from heapmorita.heap import (
    ConfigurationError,
    GeneralizedHeap,
    atlas_closure,
    band_report,
    classes_from_relation,
    derive_bands,
    gh_of,
    heap_table_of_maps,
    l_triviality_check,
    p_quotient,
    q_quotient,
    validate_heap,
)
from heapmorita.report import InternalInconsistencyError, MalformedTableError


def test_one_element_heap_passes():
    report = validate_heap(GeneralizedHeap(np.zeros((1, 1, 1), dtype=int)))
    assert report.passed and report.names() == ["A1", "A2", "A3", "A4"]


def test_gh_i2_passes_exhaustively():
    report = validate_heap(gh_of(sim(2)[0]))
    assert report.passed
    assert report["A2"].checked == report["A2"].total == 7**5
    assert all(c.mode == "exhaustive" for c in report.checks)


def test_a1_violation_at_one():
    ter = np.zeros((2, 2, 2), dtype=int)
    ter[1] = 1  # {xyz} = x
    ter[1, 1, 1] = 0
    report = validate_heap(GeneralizedHeap(ter))
    assert report["A1"].witness == (1,) == oracles.first_heap_failure(ter, "A1")


@pytest.mark.parametrize("axiom", ["A1", "A2", "A3", "A4"])
def test_witnesses_match_brute_force_on_mutations(axiom):
    base = gh_of(sim(2)[0]).ter
    rng = np.random.default_rng(7)
    found = 0
    for i in range(30):
        ter = base.copy()
        # every third mutation lands on the diagonal so A1 is exercised too
        idx = (i % 7,) * 3 if i % 3 == 0 else tuple(rng.integers(0, 7, 3))
        ter[idx] = (ter[idx] + rng.integers(1, 7)) % 7
        w = validate_heap(GeneralizedHeap(ter))[axiom].witness
        assert w == oracles.first_heap_failure(ter, axiom)
        found += w is not None
    assert found > 0


def test_malformed_heap_table():
    with pytest.raises(MalformedTableError):
        GeneralizedHeap(np.full((2, 2, 2), 2))
    with pytest.raises(MalformedTableError):
        GeneralizedHeap(np.zeros((2, 2, 3), dtype=int))


# -- sampled mode


def test_sampled_mode_needs_seed():
    X = gh_of(sim(2)[0])
    with pytest.raises(ConfigurationError):
        validate_heap(X, mode="sampled", threshold=0)


def test_small_heaps_stay_exhaustive_in_sampled_mode():
    X = gh_of(sim(2)[0])
    report = validate_heap(X, mode="sampled", threshold=40)
    assert all(c.mode == "exhaustive" for c in report.checks)


def test_sampled_mode_is_labelled_and_deterministic():
    X = gh_of(sim(2)[0])
    a = validate_heap(X, mode="sampled", samples=500, seed=3, threshold=0)
    b = validate_heap(X, mode="sampled", samples=500, seed=3, threshold=0)
    assert a.passed and a.to_dict() == b.to_dict()
    assert a["A2"].mode == "sampled(samples=500, seed=3)"
    assert a["A2"].checked == 500 and a["A2"].total == 7**5
    # spaces smaller than the sample count are still scanned in full
    assert a["A1"].mode == "exhaustive"


def test_sampled_witness_refails():
    ter = gh_of(sim(2)[0]).ter.copy()
    ter[5, 0, 5] = 5  # breaks A2 on 293 of the 7^5 quintuples
    report = validate_heap(GeneralizedHeap(ter), mode="sampled", samples=2000, seed=1, threshold=0)
    c = report["A2"]
    assert not c.passed
    assert not oracles.heap_axiom_holds(ter.tolist(), "A2", c.witness)


def test_unknown_mode():
    with pytest.raises(ConfigurationError):
        validate_heap(one_heap(), mode="fast")


# -- GH(S)


def test_gh_of_semilattice_is_min():
    X = gh_of(semilattice_chain(2))
    for x, y, z in np.ndindex(2, 2, 2):
        assert X(x, y, z) == min(x, y, z)


def test_gh_of_z2():
    X = gh_of(cyclic_group(2))
    for x, y, z in np.ndindex(2, 2, 2):
        assert X(x, y, z) == (x - y + z) % 2 == (x + y + z) % 2


@pytest.mark.parametrize("name", sorted(family()))
def test_gh_of_matches_oracle(name):
    S = family()[name]
    X = gh_of(S)
    assert X.ter.tolist() == oracles.heap_of_semigroup(S.mul, S.inv.tolist())
    # {xxz} = (x x^-1) z, an idempotent times z
    for x in range(S.n):
        e = S.mul[x, S.inv[x]]
        assert S.mul[e, e] == e
        assert all(X(x, x, z) == S.mul[e, z] for z in range(S.n))


# -- atlas closure


def test_single_map_closes_to_itself():
    f = PartialBijection(2, 3, ((0, 1), (1, 2)))
    X, elems = atlas_closure([f])
    assert elems == [f] and X.n == 1


def test_fg_closure_adds_empty_map():
    X, elems = fg_heap()
    assert [str(f) for f in elems] == ["map", "map 0:0", "map 0:1"]
    assert len(oracles.closure([oracles.as_dict(f) for f in fg_atlas()])) == 3
    assert validate_heap(X).passed


def test_i2_is_closed():
    S, elems = sim(2)
    X, closed = atlas_closure(elems)
    assert closed == elems
    assert X.equals(gh_of(S))


def test_closure_cap():
    with pytest.raises(SizeLimitError):
        atlas_closure(partial_injections(3, 3)[:10], max_elements=5)


def test_closure_rejects_mixed_sizes():
    with pytest.raises(ValueError):
        atlas_closure([PartialBijection(1, 2), PartialBijection(2, 2)])


def test_table_of_unclosed_maps_rejected():
    with pytest.raises(ValueError):
        heap_table_of_maps(fg_atlas())


atlas_maps = st.integers(1, 2).flatmap(
    lambda src: st.integers(1, 3).flatmap(
        lambda dst: st.lists(st.sampled_from(partial_injections(src, dst)), min_size=1, max_size=3)
    )
)


@settings(max_examples=40, deadline=None)
@given(atlas_maps)
def test_atlas_closure_matches_naive_closure(maps):
    X, elems = atlas_closure(maps)
    dicts = [oracles.as_dict(f) for f in elems]
    assert {oracles.key(f) for f in dicts} == {
        oracles.key(f) for f in oracles.closure([oracles.as_dict(f) for f in maps])
    }
    index = {oracles.key(f): i for i, f in enumerate(dicts)}
    t = X.ter.tolist()
    for i, x in enumerate(dicts):
        for j, y in enumerate(dicts):
            for k, z in enumerate(dicts):
                assert t[i][j][k] == index[oracles.key(oracles.compose(x, oracles.compose(oracles.invert(y), z)))]
    assert validate_heap(X).passed


# -- bands and quotients


def test_semilattice_bands_are_min():
    B = derive_bands(gh_of(semilattice_chain(3)))
    xs = np.arange(3)
    assert np.array_equal(B.circ, np.minimum.outer(xs, xs))
    assert np.array_equal(B.bullet, np.minimum.outer(xs, xs))


def test_group_bands_are_projections():
    B = derive_bands(gh_of(cyclic_group(2)))
    assert B.circ.tolist() == [[0, 1], [0, 1]]  # x o y = y
    assert B.bullet.tolist() == [[0, 0], [1, 1]]  # x * y = x


@pytest.mark.parametrize("name", sorted(family()) + ["I3"])
def test_band_laws(name):
    S = sim(3)[0] if name == "I3" else family()[name]
    B = derive_bands(gh_of(S))
    assert band_report(B).passed
    assert all(B.circ[x, x] == x for x in range(S.n))


def test_band_failure_raises_with_witness():
    ter = np.zeros((2, 2, 2), dtype=int)
    ter[1, 1, 1] = 0
    with pytest.raises(InternalInconsistencyError) as exc:
        derive_bands(GeneralizedHeap(ter))
    assert not exc.value.report.passed


def test_semilattice_p_is_injective():
    B = derive_bands(gh_of(semilattice_chain(2)))
    p = p_quotient(B)
    assert p.size == 2 and p.class_of.tolist() == [0, 1]


def test_group_quotients_are_trivial():
    B = derive_bands(gh_of(cyclic_group(2)))
    assert p_quotient(B).size == 1 and q_quotient(B).size == 1


def test_fg_quotients():
    B = derive_bands(fg_heap()[0])
    p, q = p_quotient(B), q_quotient(B)
    # elements: 0 = empty, 1 = f, 2 = g
    assert p.classes == ((0,), (1,), (2,))
    assert q.classes == ((0,), (1, 2))
    assert q.class_of[1] == q.class_of[2] != q.class_of[0]


@pytest.mark.parametrize("name", sorted(family()) + ["atlas"])
def test_quotient_meets_are_well_defined(name):
    X = fg_heap()[0] if name == "atlas" else gh_of(family()[name])
    B = derive_bands(X)
    for quot, op in ((p_quotient(B), B.circ), (q_quotient(B), B.bullet)):
        c = quot.class_of.tolist()
        op = op.tolist()
        n = X.n
        for x, x2, y, y2 in np.ndindex(n, n, n, n):
            if c[x] == c[x2] and c[y] == c[y2]:
                assert c[op[x][y]] == c[op[x2][y2]]
        # classes numbered by least member
        assert [cl[0] for cl in quot.classes] == sorted(cl[0] for cl in quot.classes)


def test_p_relation_matches_definition():
    B = derive_bands(gh_of(sim(2)[0]))
    p = p_quotient(B)
    c = B.circ
    for x in range(7):
        for y in range(7):
            same = c[y, x] == x and c[x, y] == y
            assert (p.class_of[x] == p.class_of[y]) == same


@pytest.mark.parametrize("X", [gh_of(sim(2)[0]), gh_of(cyclic_group(2)), one_heap()], ids=["I2", "Z2", "one"])
def test_l_triviality(X):
    assert l_triviality_check(derive_bands(X)).passed


def test_classes_from_relation_rejects_non_equivalence():
    rel = np.array([[1, 1, 0], [1, 1, 1], [0, 1, 1]], dtype=bool)
    with pytest.raises(InternalInconsistencyError):
        classes_from_relation(rel)

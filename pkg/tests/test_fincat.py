import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from polarhull import fincat, posets
from polarhull.fincat import (BudgetExceeded, CategoryError, Diagram, FiniteCategory, Functor,
                              compose_functors, find_universal, is_epic, is_iso, is_monic,
                              opposite, validate_category, validate_functor)


def one_object():
    return FiniteCategory(["*"], [(0, 0)], [0], {(0, 0): 0})


def arrow(univ, src, tgt, pred=lambda m: True):
    C = univ.category
    x, y = C.obj(src), C.obj(tgt)
    hits = [f for f in C.hom(x, y) if pred(univ.map_of(f))]
    assert len(hits) == 1, hits
    return hits[0]


def bottom_inclusion(univ):
    P = univ.posets[univ.category.obj("2-chain")]
    bottom = P.least(P.full_mask)
    return arrow(univ, "1-chain", "2-chain", lambda m: m.values == (bottom,))


def test_one_object_category_is_valid():
    assert validate_category(one_object()) == []


def test_associativity_violation_reported():
    # monoid {1, a, b} with a table that breaks associativity on (a, a, b)
    table = {(0, 0): 0, (0, 1): 1, (0, 2): 2, (1, 0): 1, (2, 0): 2,
             (1, 1): 2, (1, 2): 1, (2, 1): 2, (2, 2): 2}
    C = FiniteCategory(["*"], [(0, 0)] * 3, [0], table)
    issues = validate_category(C)
    assert any("associativ" in s for s in issues)


def test_missing_composite_reported():
    C = FiniteCategory(["x", "y"], [(0, 0), (1, 1), (0, 1)], [0, 1], {(0, 0): 0, (1, 1): 1})
    assert validate_category(C)


def test_poset_category_is_valid(small_poset_universe):
    C = small_poset_universe.category
    assert validate_category(C) == []
    # oracle: composition agrees with function composition on every pair
    for g in C.arrows():
        for f in C.arrows():
            if C.tgt[f] == C.src[g]:
                gf = C.compose(g, f)
                assert C.data[gf] == tuple(C.data[g][i] for i in C.data[f])


def test_identity_is_monic_epic_iso(small_poset_universe):
    C = small_poset_universe.category
    for x in range(C.n_objects):
        i = C.identity(x)
        assert is_monic(C, i) and is_epic(C, i) and is_iso(C, i)


def test_collapse_epic_not_monic(small_poset_universe):
    C = small_poset_universe.category
    f = arrow(small_poset_universe, "2-chain", "1-chain")
    assert is_epic(C, f) and not is_monic(C, f)


def test_bottom_inclusion_monic_not_epic(small_poset_universe):
    C = small_poset_universe.category
    f = bottom_inclusion(small_poset_universe)
    assert is_monic(C, f) and not is_epic(C, f)


def _brute_monic(C, f):
    for a in range(C.n_objects):
        for g, h in itertools.product(C.hom(a, C.src[f]), repeat=2):
            if g != h and C.compose(f, g) == C.compose(f, h):
                return False
    return True


def test_monic_detector_matches_brute_force(poset_spec):
    C = poset_spec.C
    for f in C.arrows():
        assert is_monic(C, f) == _brute_monic(C, f)


def test_unknown_arrow_rejected():
    with pytest.raises(CategoryError):
        is_monic(one_object(), 5)


def _brute_orthogonal(C, a, b):
    for g in C.hom(C.src[a], C.src[b]):
        for h in C.hom(C.tgt[a], C.tgt[b]):
            if C.compose(b, g) != C.compose(h, a):
                continue
            fillers = [t for t in C.hom(C.tgt[a], C.src[b])
                       if C.compose(t, a) == g and C.compose(b, t) == h]
            if len(fillers) != 1:
                return False
    return True


def test_orthogonality(small_poset_universe):
    C = small_poset_universe.category
    for b in C.arrows():
        for x in range(C.n_objects):
            assert fincat.is_left_orthogonal(C, C.identity(x), b)
    split = arrow(small_poset_universe, "2-chain", "1-chain")
    for b in fincat.monics(C):
        assert fincat.is_left_orthogonal(C, split, b)
    for a in C.arrows():
        for b in C.arrows():
            assert fincat.is_left_orthogonal(C, a, b) == _brute_orthogonal(C, a, b)


def test_strong_monic_epic_invariants(mid_poset_universe):
    univ = mid_poset_universe
    C = univ.category
    for f in C.arrows():
        if fincat.is_strong_epic(C, f) and is_monic(C, f):
            assert is_iso(C, f)
        if posets.is_embedding(univ.map_of(f)):
            assert fincat.is_strong_monic(C, f)


def test_regular_implies_strong_implies_monic(mid_poset_universe):
    C = mid_poset_universe.category
    assert C.n_arrows <= 500
    for f in C.arrows():
        if fincat.is_regular_monic(C, f):
            assert fincat.is_strong_monic(C, f)
        if fincat.is_strong_monic(C, f):
            assert is_monic(C, f)


def test_regular_monics_are_embeddings(poset_spec):
    C = poset_spec.C
    univ = poset_spec.extras["universe"]
    emb = univ.arrows_where(posets.is_embedding)
    assert frozenset(f for f in C.arrows() if fincat.is_regular_monic(C, f)) == emb


def test_injection_not_embedding_is_not_regular(small_poset_universe):
    C = small_poset_universe.category
    f = arrow(small_poset_universe, "2-antichain", "2-chain", lambda m: m.values == (1, 0))
    assert is_monic(C, f) and not fincat.is_regular_monic(C, f)


def test_isos_have_every_property(poset_spec):
    C = poset_spec.C
    for f in fincat.isos(C):
        assert fincat.is_split_monic(C, f) and fincat.is_split_epic(C, f)
        assert fincat.is_regular_monic(C, f) and fincat.is_regular_epic(C, f)


def test_terminal_is_one_chain(small_poset_universe):
    C = small_poset_universe.category
    res = find_universal(C, "terminal")
    assert not res.absent and C.objects[res.apex] == "1-chain"


def test_equalizer_of_equal_pair(small_poset_universe):
    C = small_poset_universe.category
    f = bottom_inclusion(small_poset_universe)
    res = find_universal(C, "equalizer", (f, f))
    assert res.apex == C.src[f] and is_iso(C, res.legs[0])


def test_pullback_of_inclusions_is_intersection():
    P = posets.FinPoset.chain(3)
    univ = posets.materialize_poset_universe([posets.FinPoset.chain(1), posets.FinPoset.chain(2), P])
    C = univ.category
    c3 = univ.posets[C.obj("3-chain")]
    order = sorted(range(3), key=lambda i: sum(c3.leq[j][i] for j in range(3)))
    low, mid, top = order
    c2 = univ.posets[C.obj("2-chain")]
    b2, t2 = sorted(range(2), key=lambda i: sum(c2.leq[j][i] for j in range(2)))

    def inc(lo_img, hi_img):
        vals = [None, None]
        vals[b2], vals[t2] = lo_img, hi_img
        return arrow(univ, "2-chain", "3-chain", lambda m: m.values == tuple(vals))

    res = find_universal(C, "pullback", (inc(low, mid), inc(mid, top)), cross_check=True)
    # the two subchains meet in {mid}
    assert C.objects[res.apex] == "1-chain"


def test_kernel_pair_of_monic_has_equal_legs(small_poset_universe):
    C = small_poset_universe.category
    f = bottom_inclusion(small_poset_universe)
    res = fincat.kernel_pair(C, f)
    assert not res.absent and res.legs[0] == res.legs[1]


def test_kernel_pair_of_identity(small_poset_universe):
    C = small_poset_universe.category
    for x in range(C.n_objects):
        res = fincat.kernel_pair(C, C.identity(x))
        assert not res.absent
        assert any(is_iso(C, u) for u in C.hom(res.apex, x))


def test_kernel_pair_of_collapse_is_product():
    univ = posets.materialize_poset_universe(
        [posets.FinPoset.chain(1), posets.FinPoset.chain(2),
         posets.named(posets.FinPoset.from_pairs(range(4), [(0, 1), (0, 2), (1, 3), (2, 3), (0, 3)]))])
    C = univ.category
    f = arrow(univ, "2-chain", "1-chain")
    res = fincat.kernel_pair(C, f)
    prod = find_universal(C, "product", (C.obj("2-chain"), C.obj("2-chain")))
    assert not res.absent and res.apex == prod.apex
    assert C.objects[res.apex] == "diamond"


def test_regular_comparison_of_iso(small_poset_universe):
    C = small_poset_universe.category
    for f in fincat.isos(C):
        rho = fincat.regular_comparison(C, f)
        if rho is not None:
            assert is_iso(C, rho)


def test_opposite_twice_is_identity(small_poset_universe):
    C = small_poset_universe.category
    D = opposite(opposite(C))
    assert D.src == C.src and D.tgt == C.tgt
    assert D.composition_table() == C.composition_table()


def test_contravariant_composite_is_covariant(small_poset_universe):
    C = small_poset_universe.category
    Cop = opposite(C)
    ids = {f: f for f in C.arrows()}
    F = Functor(C, Cop, list(range(C.n_objects)), ids, contravariant=True)
    G = Functor(Cop, C, list(range(C.n_objects)), ids, contravariant=True)
    assert validate_functor(F) == [] and validate_functor(G) == []
    H = compose_functors(F, G)
    assert not H.contravariant and validate_functor(H) == []


def test_json_round_trip(small_poset_universe):
    C = small_poset_universe.category
    doc = json.loads(json.dumps(C.to_json()))
    D = FiniteCategory.from_json(doc)
    assert validate_category(D) == []
    assert D.composition_table() == C.composition_table()
    assert D.arrow_labels == C.arrow_labels


def test_budget_guard():
    with pytest.raises(BudgetExceeded):
        FiniteCategory(["*"], [(0, 0)] * 5, [0], {}, budget=3)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=2, max_value=4), st.data())
def test_random_monoid_tables_checked(n, data):
    # random n-element tables on one object: validation agrees with a direct law check
    table = {(g, f): data.draw(st.integers(0, n - 1)) for g in range(n) for f in range(n)}
    for x in range(n):
        table[(0, x)] = x
        table[(x, 0)] = x
    C = FiniteCategory(["*"], [(0, 0)] * n, [0], table)
    assoc = all(table[(table[(h, g)], f)] == table[(h, table[(g, f)])]
                for h in range(n) for g in range(n) for f in range(n))
    assert (validate_category(C) == []) == assoc

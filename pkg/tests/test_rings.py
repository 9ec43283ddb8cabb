import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from polarhull import capacitor as cap
from polarhull import rings
from polarhull.rings import RingError, RingHom


def small_rings():
    return [R for R in rings.unital_test_rings() if R.size <= 4] + [rings.zero_mult(2)]


def _brute_homs(A, B):
    return sorted(v for v in itertools.product(range(B.size), repeat=A.size)
                  if RingHom(A, B, v).is_additive() and RingHom(A, B, v).is_multiplicative())


def _brute_ideals(R):
    out = []
    for mask in range(1 << R.size):
        I = frozenset(i for i in range(R.size) if mask >> i & 1)
        if R.zero in I and all(R.add[x][y] in I and R.mul[r][x] in I and R.mul[x][r] in I
                               for x in I for y in I for r in range(R.size)):
            out.append(I)
    return out


def _sums(B, xs):
    # every finite sum of the given elements
    got = {B.zero}
    while True:
        more = {B.add[s][x] for s in got for x in xs} | got
        if more == got:
            return got
        got = more


def test_test_rings_are_unital_rings():
    rs = rings.unital_test_rings()
    assert len(rs) == 14 and all(R.size <= 8 for R in rs)
    for R in rs:
        assert rings.validate_ring(R) == []
        assert R.is_unital and rings.is_non_degenerate(R)


def test_validate_reports_violating_triple():
    R = rings.zmod(3)
    mul = [list(row) for row in R.mul]
    mul[1][2] = 1
    with pytest.raises(RingError, match=r"at \("):
        rings.make_ring(R.elements, R.add, mul)


def test_make_ring_unknown_element():
    with pytest.raises(RingError, match="unknown"):
        rings.make_ring([0, 1], [[0, 1], [1, 7]], [[0, 0], [0, 1]])


def test_json_round_trip():
    for R in rings.unital_test_rings()[:8]:
        doc = json.loads(json.dumps(rings.ring_to_json(R)))
        S = rings.ring_from_json(doc)
        assert S.add == R.add and S.mul == R.mul


@pytest.mark.parametrize("A", small_rings(), ids=lambda R: R.name)
def test_homs_match_brute_force(A):
    for B in small_rings():
        assert rings.ring_homs(A, B) == _brute_homs(A, B)


def test_ideals_match_brute_force():
    for R in rings.unital_test_rings() + [rings.column_ring()]:
        assert sorted(rings.ideals(R), key=sorted) == sorted(_brute_ideals(R), key=sorted)


def test_annihilator_and_degeneracy():
    Z = rings.zero_mult(2)
    assert rings.annihilator(Z) == frozenset(range(2))
    assert not rings.is_non_degenerate(Z)
    with pytest.raises(RingError, match="degenerate"):
        rings.multiplier_ring(Z)
    with pytest.raises(RingError, match="degenerate"):
        rings.materialize_ring_universe([rings.f2(), Z])


def test_column_ring_properties():
    col = rings.column_ring()
    assert col.size == 4 and not col.is_unital
    assert rings.is_non_degenerate(col)
    rep = rings.local_units_report(col)
    # e21 has no left local unit: every product e·e21 vanishes
    assert not rep.per_element and not rep.whole_carrier and not rings.has_local_units(col)


def test_unital_rings_have_local_units():
    assert all(rings.has_local_units(R) for R in rings.unital_test_rings())


@pytest.mark.parametrize("R", rings.unital_test_rings() + [rings.column_ring()],
                         ids=lambda R: R.name)
def test_multiplier_pairs_match_oracle(R):
    assert rings.multiplier_pairs(R) == rings.multiplier_pairs_oracle(R)


def test_unital_multiplier_ring_is_itself():
    for R in rings.unital_test_rings():
        MR = rings.multiplier_ring(R)
        assert rings.validate_ring(MR.ring) == []
        assert rings.is_isomorphic(MR.ring, R)
        assert len(set(MR.embedding.values)) == R.size


def test_multiplier_ring_of_column_ring():
    col = rings.column_ring()
    MR = rings.multiplier_ring(col, pairs=rings.multiplier_pairs_oracle(col))
    assert MR.ring.size == 8 and MR.ring.is_unital
    assert rings.is_isomorphic(MR.ring, rings.upper_triangular())
    emb = MR.embedding
    assert emb.is_injective() and emb.is_additive() and emb.is_multiplicative()
    assert rings.is_essential_ideal(MR.ring, emb.image())


def test_pseudocomplement_in_product():
    F2 = rings.f2()
    R = rings.product(F2, F2)
    idx = {e: i for i, e in enumerate(R.elements)}
    left = frozenset({idx[(0, 0)], idx[(1, 0)]})
    right = frozenset({idx[(0, 0)], idx[(0, 1)]})
    assert rings.pseudocomplement(R, left) == right
    assert not rings.is_essential_ideal(R, left)
    assert rings.is_essential_ideal(R, frozenset(range(4)))


def test_pseudocomplement_brute_force():
    for R in rings.unital_test_rings():
        ids = _brute_ideals(R)
        for I in ids:
            orth = [J for J in ids if I & J == {R.zero}]
            largest = [J for J in orth if all(K <= J for K in orth)]
            assert rings.pseudocomplement(R, I) == (largest[0] if largest else None)


def test_quotient_by_ideal():
    Z4 = rings.zmod(4)
    Q, p = rings.quotient(Z4, {0, 2})
    assert Q.size == 2 and p.kernel() == {0, 2}
    assert p.is_additive() and p.is_multiplicative()
    with pytest.raises(RingError):
        rings.quotient(Z4, {0, 1})


def test_non_degenerate_hom_examples():
    F2 = rings.f2()
    R = rings.product(F2, F2)
    idx = {e: i for i, e in enumerate(R.elements)}
    diag = RingHom(F2, R, (idx[(0, 0)], idx[(1, 1)]))
    corner = RingHom(F2, R, (idx[(0, 0)], idx[(1, 0)]))
    assert rings.is_non_degenerate_hom(diag)
    assert not rings.is_non_degenerate_hom(corner)


def test_non_degenerate_hom_brute_force():
    rs = [R for R in rings.unital_test_rings() if R.size <= 4] + [rings.column_ring()]
    for A in rs:
        for B in rs:
            for v in rings.ring_homs(A, B):
                f = RingHom(A, B, v)
                left = _sums(B, {B.mul[x][b] for x in v for b in range(B.size)})
                right = _sums(B, {B.mul[b][x] for x in v for b in range(B.size)})
                assert rings.is_non_degenerate_hom(f) == (len(left) == len(right) == B.size)


def test_extend_multiplier_hom():
    col = rings.column_ring()
    MC = rings.multiplier_ring(col)
    count = 0
    for v in rings.ring_homs(col, col):
        f = RingHom(col, col, v)
        if not rings.is_non_degenerate_hom(f):
            with pytest.raises(RingError):
                rings.extend_multiplier_hom(f, MC, MC)
            continue
        phi = rings.extend_multiplier_hom(f, MC, MC)
        count += 1
        assert phi.is_unital() and phi.is_multiplicative()
        assert all(phi(MC.embedding(a)) == MC.embedding(f(a)) for a in range(col.size))
    assert count >= 1


def test_lift_requires_ideal_embedding():
    F2 = rings.f2()
    Z4 = rings.zmod(4)
    with pytest.raises(RingError, match="injective"):
        rings.lift_ideal_embedding(RingHom(Z4, F2, (0, 1, 0, 1)))
    R = rings.product(F2, F2)
    idx = {e: i for i, e in enumerate(R.elements)}
    diag = RingHom(F2, R, (idx[(0, 0)], idx[(1, 1)]))
    with pytest.raises(RingError, match="ideal"):
        rings.lift_ideal_embedding(diag)


def test_lift_of_essential_embedding_is_injective():
    col = rings.column_ring()
    MC = rings.multiplier_ring(col)
    psi = rings.lift_ideal_embedding(MC.embedding)
    assert psi.is_injective() and psi.is_unital()


def test_lemma_checks_on_small_rings():
    for R in [rings.zmod(4), rings.zmod(6), rings.column_ring(), rings.upper_triangular()]:
        for I in rings.ideals(R):
            if rings.pseudocomplement(R, I) is not None:
                assert rings.check_quotient_kernel(R, I).holds
            assert rings.check_trivial_complement(R, I).holds


def test_lemma_check_rejects_non_ideal():
    with pytest.raises(RingError):
        rings.check_quotient_kernel(rings.zmod(4), {0, 1})
    with pytest.raises(RingError):
        rings.check_trivial_complement(rings.zmod(4), {0, 1})


def test_ideal_lattice_is_lattice():
    from polarhull import posets

    for R in rings.unital_test_rings():
        P, ids = rings.ideal_lattice(R)
        assert P.validate() == [] and posets.is_complete_lattice(P)


def test_ring_capacitor_shape(ring_spec):
    C = ring_spec.C
    assert set(C.objects) == {"F2", "F2xF2", "col", "M(col)"}
    assert ring_spec.extras["strict_topology"] == "discrete"
    col = C.obj("col")
    assert C.objects[ring_spec.EX(col)] == "M(col)"


def test_derived_negative_class_contains_non_degenerate(ring_spec):
    # degenerate homs out of col can still have a unital filler through M(col),
    # e.g. the zero map to F2 extends by a corner projection
    univ = ring_spec.extras["universe"]
    C = ring_spec.C
    neg, jm = cap.derive_negative_class(ring_spec)
    nd = univ.arrows_where(rings.is_non_degenerate_hom)
    assert nd < neg
    assert all(C.objects[C.src[f]] == "col" for f in neg - nd)
    col, F2 = C.obj("col"), C.obj("F2")
    zero = C.data_index[(col, F2, (0, 0, 0, 0))]
    assert zero in neg and univ.hom_of(ring_spec.U(jm[zero])).is_unital()


def test_normal_monics_are_ideal_embeddings(ring_spec):
    univ = ring_spec.extras["universe"]
    C = ring_spec.C
    assert univ.monopole.positive == frozenset(
        f for f in C.arrows()
        if univ.hom_of(f).is_injective() and rings.is_ideal(univ.hom_of(f).target,
                                                             univ.hom_of(f).image()))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(rings.unital_test_rings()), st.sampled_from(rings.unital_test_rings()))
def test_product_is_a_ring(R, S):
    if R.size * S.size > 16:
        return
    P = rings.product(R, S)
    assert rings.validate_ring(P) == [] and P.is_unital
    assert len(rings.ideals(P)) == len(rings.ideals(R)) * len(rings.ideals(S))

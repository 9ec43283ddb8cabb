import json
import sys
from pathlib import Path

import pytest

from polarhull import capacitor as cap
from polarhull import fincat, hulls, posets
from polarhull import polarity as pol
from polarhull.capacitor import CapacitorError, CapacitorSpec

sys.path.insert(0, str(Path(__file__).parent))
from conftest import small_posets  # noqa: E402


def raw_doc():
    path = Path(cap.__file__).parent / "data" / "raw_rigidity.json"
    return json.loads(path.read_text())["capacitor"]


def items(spec):
    return {e.item: e for e in cap.verify_theorem_main(spec)}


@pytest.mark.parametrize("which", ["poset_spec", "ba_spec", "ring_spec"])
def test_builtin_capacitors_verify(which, request):
    spec = request.getfixturevalue(which)
    report = cap.verify_capacitor(spec)
    assert report.ok, report.lines()
    assert cap.is_faithful(spec.U)


@pytest.mark.parametrize("which", ["poset_spec", "ba_spec", "ring_spec"])
def test_family_matches_computed_completions(which, request):
    spec = request.getfixturevalue(which)
    C = spec.C
    computed = cap.family_from_completions(spec.monopole, spec.H, spec.E, spec.U)
    for x in range(C.n_objects):
        assert computed[x] is not None
        eta = computed[x][0]
        # any two completions differ by an iso commuting with the units
        assert any(fincat.is_iso(C, i) and C.compose(i, spec.unit(x)) == eta
                   for i in C.hom(spec.EX(x), C.tgt[eta]))


def test_boolean_ledger_all_hold(ba_spec):
    ledger = items(ba_spec)
    assert [e.item for e in ledger.values()] == list(range(1, 13))
    assert all(e.holds for e in ledger.values()), [e.witness for e in ledger.values()]
    assert cap.verify_corollary_main(ba_spec).equivalent


def test_boolean_derived_class_is_everything(ba_spec):
    neg, _ = cap.derive_negative_class(ba_spec)
    assert neg == frozenset(ba_spec.C.arrows())


def test_poset_derived_class_is_continuous_extension(poset_spec):
    univ = poset_spec.extras["universe"]
    neg, jm = cap.derive_negative_class(poset_spec)
    assert neg == univ.arrows_where(posets.extends_continuously)
    assert neg < univ.arrows_where(posets.is_continuous_map)


def test_poset_J_minus_is_macneille_extension(poset_spec):
    # J-f sends the join of η_x[A] to the join of η_y[f[A]] for every closed A,
    # which is the closure extension A ↦ ↓↑f[A] read through the units
    univ = poset_spec.extras["universe"]
    C = poset_spec.C
    neg, jm = cap.derive_negative_class(poset_spec)
    for f in sorted(neg):
        x, y = C.src[f], C.tgt[f]
        m = univ.map_of(f)
        g = univ.map_of(poset_spec.U(jm[f]))
        ex, ey = univ.map_of(poset_spec.unit(x)), univ.map_of(poset_spec.unit(y))
        for A in posets.macneille(m.source).carrier:
            a = ex.target.sup(ex.image_mask(A))
            b = ey.target.sup(ey.image_mask(m.image_mask(A)))
            assert g.values[a] == b


def test_poset_fullness_fails_by_counting(poset_spec):
    # E- sends endomorphisms of the 2-antichain into those of the diamond, but
    # the diamond has more negative endomorphisms than the antichain
    C = poset_spec.C
    neg, _ = cap.derive_negative_class(poset_spec)
    x = C.obj("2-antichain")
    d = poset_spec.EX(x)
    assert C.objects[d] == "diamond"
    assert len([f for f in C.hom(x, x) if f in neg]) < len([g for g in C.hom(d, d) if g in neg])
    ledger = items(poset_spec)
    assert not ledger[8].holds and "diamond->diamond" in ledger[8].witness
    assert all(e.holds for i, e in ledger.items() if i != 8)


def test_ring_ledger_matches_posets(ring_spec):
    ledger = items(ring_spec)
    assert not ledger[8].holds
    assert all(e.holds for i, e in ledger.items() if i != 8)
    assert cap.verify_corollary_main(ring_spec).equivalent


def test_hom_bijection_clean(ba_spec, poset_spec):
    assert cap.check_hom_bijection(ba_spec) == []
    assert cap.check_hom_bijection(poset_spec) == []


def test_J_plus_only_on_H(poset_spec):
    jp = cap.J_plus(poset_spec)
    assert set(jp) == set(poset_spec.H)


def test_voltage_units(poset_spec):
    dv = cap.build_voltage(poset_spec)
    assert pol.validate_voltage(dv.voltage) == []
    assert dv.eta == tuple(poset_spec.unit(x) for x in range(poset_spec.C.n_objects))


def test_missing_completions_fail_existence():
    spec = posets.build_poset_capacitor(small_posets(), closure=False)
    report = cap.verify_capacitor(spec)
    assert "existence" in report.clauses()
    with pytest.raises(CapacitorError):
        cap.derive_negative_class(spec)


def test_overridden_unit_caught_by_rigidity(poset_spec):
    C = poset_spec.C
    one, d = C.obj("1-chain"), C.obj("diamond")
    univ = poset_spec.extras["universe"]
    D = univ.posets[d]
    bottom = D.least(D.full_mask)
    unit = C.data_index[(one, d, (bottom,))]
    family = dict(poset_spec.family)
    family[one] = (unit, poset_spec.E.obj("diamond"))
    broken = CapacitorSpec(poset_spec.monopole, poset_spec.H, poset_spec.E, poset_spec.U,
                           family, name="broken", kind="poset")
    rig = cap.is_rigid_family(broken)
    assert "rigid(2)" in rig.clauses()
    assert not cap.verify_capacitor(broken).ok


def test_rigidity_brute_force(poset_spec):
    # rigid(1): at most one filler for every square, checked by direct search
    C, E, U = poset_spec.C, poset_spec.E, poset_spec.U
    for f in C.arrows()[::5]:
        x, y = C.src[f], C.tgt[f]
        target = C.compose(poset_spec.unit(y), f)
        found = [p for p in E.hom(poset_spec.J(x), poset_spec.J(y))
                 if C.compose(U(p), poset_spec.unit(x)) == target]
        assert found == cap.fillers(poset_spec, f)
        assert len(found) <= 1


def test_raw_capacitor_from_json():
    spec = cap.capacitor_from_json(raw_doc(), name="raw")
    report = cap.verify_capacitor(spec)
    assert {"rigid(2)", "terminal"} <= report.clauses()
    assert "rigid(1)" in report.clauses()


def test_raw_capacitor_default_family():
    doc = raw_doc()
    del doc["family"]
    spec = cap.capacitor_from_json(doc)
    C = spec.C
    # the only candidate target y has the involution s fixing u, so no completion
    assert spec.family[C.obj("x")] is None
    assert hulls.completion_wrt_functor(spec.monopole, C.obj("x"), spec.U, spec.H) is None


def test_raw_capacitor_unknown_arrow():
    doc = raw_doc()
    doc["H"] = ["nope"]
    with pytest.raises(fincat.CategoryError):
        cap.capacitor_from_json(doc)


def test_wrong_codomain_reported(poset_spec, ba_spec):
    broken = CapacitorSpec(poset_spec.monopole, poset_spec.H, ba_spec.E, ba_spec.U,
                           poset_spec.family)
    assert "functor" in cap.verify_capacitor(broken).clauses()


def test_ledger_json_shape(ba_spec):
    doc = cap.verify_theorem_main(ba_spec)[0].to_json()
    assert set(doc) == {"item", "name", "holds", "witness"}

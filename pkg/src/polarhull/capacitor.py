"""Capacitors: rigid completion families through a faithful functor, and the
voltage they induce.

Every conclusion about the induced voltage has its own checker so a broken
instance pinpoints the failing clause.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from . import fincat, hulls, polarity as pol
from .fincat import CategoryError, FiniteCategory, Functor
from .polarity import Polarity, PolarFunctor, Voltage


class CapacitorError(ValueError):
    """Raised when an operation needs a verified capacitor."""


@dataclass
class Report:
    """Itemized verification outcome: (clause, message) pairs."""

    issues: list = field(default_factory=list)

    def add(self, clause: str, message: str) -> None:
        self.issues.append((clause, message))

    @property
    def ok(self) -> bool:
        return not self.issues

    def clauses(self) -> set:
        return {c for c, _ in self.issues}

    def lines(self) -> list[str]:
        return [f"{c}: {m}" for c, m in self.issues]


@dataclass
class CapacitorSpec:
    monopole: Polarity
    H: frozenset
    E: FiniteCategory
    U: Functor
    family: dict  # object of C -> (unit arrow, object of E) or None
    name: str = ""
    kind: str = "raw"
    extras: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def C(self) -> FiniteCategory:
        return self.monopole.category

    def unit(self, x: int) -> int:
        return self.family[x][0]

    def J(self, x: int) -> int:
        return self.family[x][1]

    def EX(self, x: int) -> int:
        """The object U(Jx) of C."""
        return self.U.obj_map[self.family[x][1]]


def family_from_completions(M: Polarity, H, E, U) -> dict:
    """Assign to each object its functor-relative completion, or None."""
    family = {}
    for x in range(M.category.n_objects):
        res = hulls.completion_wrt_functor(M, x, U, H)
        family[x] = None if res is None else (res.unit, res.object)
    return family


def inclusion_functor(C: FiniteCategory, objects: Iterable[int], arrows: Iterable[int] | None = None):
    """A subcategory E of C together with its inclusion U: E → C."""
    objects = sorted(objects)
    if arrows is None:
        keep = set(objects)
        arrows = [a for a in C.arrows() if C.src[a] in keep and C.tgt[a] in keep]
    return C.subcategory(objects, arrows, name=f"E({C.name})")


# -- rigidity --------------------------------------------------------------


def _filler_table(spec: CapacitorSpec) -> dict:
    """(x, y, Uψ∘η_x) -> [ψ] for every ψ: Jx → Jy in E."""
    if "fillers" in spec._cache:
        return spec._cache["fillers"]
    C, E, U = spec.C, spec.E, spec.U
    table: dict = {}
    objs = [x for x in range(C.n_objects) if spec.family.get(x)]
    for x in objs:
        ex = spec.unit(x)
        for y in objs:
            for psi in E.hom(spec.J(x), spec.J(y)):
                key = (x, y, C.compose(U(psi), ex))
                table.setdefault(key, []).append(psi)
    spec._cache["fillers"] = table
    return table


def fillers(spec: CapacitorSpec, f: int) -> list[int]:
    """E-arrows ψ with Uψ∘η_x = η_y∘f."""
    C = spec.C
    x, y = C.src[f], C.tgt[f]
    if not (spec.family.get(x) and spec.family.get(y)):
        return []
    return _filler_table(spec).get((x, y, C.compose(spec.unit(y), f)), [])


def reverse_fillers(spec: CapacitorSpec, f: int) -> list[int]:
    """E-arrows ψ: Jy → Jx with Uψ∘η_y∘f = η_x."""
    C, E, U = spec.C, spec.E, spec.U
    x, y = C.src[f], C.tgt[f]
    if not (spec.family.get(x) and spec.family.get(y)):
        return []
    ef = C.compose(spec.unit(y), f)
    return [psi for psi in E.hom(spec.J(y), spec.J(x)) if C.compose(U(psi), ef) == spec.unit(x)]


def is_rigid_family(spec: CapacitorSpec) -> Report:
    C = spec.C
    report = Report()
    for f in C.arrows():
        found = fillers(spec, f)
        if len(found) > 1:
            report.add("rigid(1)", f"{C.arrow_labels[f]} has {len(found)} fillers "
                       f"{[spec.E.arrow_labels[p] for p in found]}")
    for x in range(C.n_objects):
        if not spec.family.get(x):
            continue
        ex, z = spec.unit(x), spec.EX(x)
        for e in C.hom(z, z):
            if e != C.identity(z) and C.compose(e, ex) == ex:
                report.add("rigid(2)", f"{C.arrow_labels[e]} fixes the unit of {C.objects[x]}")
    return report


# -- capacitor verification ------------------------------------------------


def is_faithful(U: Functor) -> bool:
    E = U.domain
    for x in range(E.n_objects):
        for y in range(E.n_objects):
            hs = E.hom(x, y)
            if len({U(a) for a in hs}) != len(hs):
                return False
    return True


def J_plus(spec: CapacitorSpec) -> dict:
    """f ↦ J₊f on H-arrows where the reverse filler is unique."""
    if "J_plus" not in spec._cache:
        out = {}
        for f in sorted(spec.H):
            found = reverse_fillers(spec, f)
            if len(found) == 1:
                out[f] = found[0]
        spec._cache["J_plus"] = out
    return spec._cache["J_plus"]


def verify_capacitor(spec: CapacitorSpec) -> Report:
    if "verify" in spec._cache:
        return spec._cache["verify"]
    C, E, U, M = spec.C, spec.E, spec.U, spec.monopole
    report = Report()
    for msg in fincat.validate_functor(U):
        report.add("functor", msg)
    if U.codomain is not C or U.contravariant:
        report.add("functor", "U must be a covariant functor into the underlying category")
    if not report.ok:
        spec._cache["verify"] = report
        return report
    if not is_faithful(U):
        report.add("faithful", "U is not faithful")
    for msg in pol.validate_refinement(C, spec.H):
        report.add("refinement", msg)
    if not spec.H <= M.positive:
        report.add("refinement", "H is not contained in the positive arrows")
    for x in range(C.n_objects):
        entry = spec.family.get(x)
        label = C.objects[x]
        if entry is None:
            if hulls.completion_wrt_functor(M, x, U, spec.H) is None:
                report.add("existence", f"{label} has no completion with respect to U")
            else:
                report.add("existence", f"family omits {label}")
            continue
        eta, b = entry
        if C.src[eta] != x or C.tgt[eta] != U.obj_map[b]:
            report.add("family", f"unit of {label} is ill-typed")
            continue
        if eta not in spec.H:
            report.add("family", f"unit of {label} is not in H")
        for c in range(E.n_objects):
            for g in C.hom(x, U.obj_map[c]):
                if g not in spec.H:
                    continue
                n = sum(1 for phi in E.hom(c, b) if C.compose(U(phi), g) == eta)
                if n != 1:
                    report.add("terminal", f"({E.objects[c]}, {C.arrow_labels[g]}) has {n} "
                               f"arrows to the unit of {label}")
    report.issues += is_rigid_family(spec).issues
    if report.ok:
        jp = J_plus(spec)
        for f in sorted(spec.H):
            if f not in jp:
                report.add("J+", f"no unique J+ for {C.arrow_labels[f]}")
        F = Functor(C, E, tuple(spec.J(x) for x in range(C.n_objects)), jp, contravariant=True)
        for msg in fincat.validate_functor(F):
            report.add("J+", msg)
        for f, psi in jp.items():
            x, y = C.src[f], C.tgt[f]
            if C.compose_path(U(psi), spec.unit(y), f) != spec.unit(x):
                report.add("naturality", f"unit square for {C.arrow_labels[f]} fails")
    spec._cache["verify"] = report
    return report


def _require_verified(spec: CapacitorSpec) -> None:
    report = verify_capacitor(spec)
    if not report.ok:
        raise CapacitorError("capacitor does not verify: " + "; ".join(report.lines()[:5]))


def derive_negative_class(spec: CapacitorSpec) -> tuple[frozenset, dict]:
    """Arrows whose unit square has an E-filler, with f ↦ J₋f."""
    _require_verified(spec)
    if "negative" not in spec._cache:
        jm = {}
        for f in spec.C.arrows():
            found = fillers(spec, f)
            if found:
                jm[f] = found[0]
        spec._cache["negative"] = (frozenset(jm), jm)
    return spec._cache["negative"]


@dataclass
class DerivedVoltage:
    polarity: Polarity  # positives H, negatives the derived class
    J_plus: dict
    J_minus: dict
    E_plus: Functor
    E_minus: Functor
    eta: tuple
    voltage: Voltage
    ledger: list = field(default_factory=list)


def build_voltage(spec: CapacitorSpec) -> DerivedVoltage:
    if "voltage" in spec._cache:
        return spec._cache["voltage"]
    C, U = spec.C, spec.U
    neg, jm = derive_negative_class(spec)
    jp = J_plus(spec)
    P = pol.polarity(C, spec.H, neg, name=f"{spec.name}±")
    obj = tuple(spec.EX(x) for x in range(C.n_objects))
    E_plus = Functor(C, C, obj, {f: U(p) for f, p in jp.items()}, contravariant=True, name="E+")
    E_minus = Functor(C, C, obj, {f: U(p) for f, p in jm.items()}, name="E-")
    E = PolarFunctor(P, pol.everything(C), "negative", E_plus, E_minus, "E")
    eta = tuple(spec.unit(x) for x in range(C.n_objects))
    V = Voltage(P, E, eta)
    dv = DerivedVoltage(P, jp, jm, E_plus, E_minus, eta, V)
    spec._cache["voltage"] = dv
    return dv


# -- the twelve conclusions ------------------------------------------------


@dataclass
class LedgerEntry:
    item: int
    name: str
    holds: bool
    witness: str = ""

    def to_json(self) -> dict:
        return {"item": self.item, "name": self.name, "holds": self.holds,
                "witness": self.witness}


def _first(issues) -> str:
    issues = list(issues)
    if not issues:
        return ""
    more = f" (+{len(issues) - 1} more)" if len(issues) > 1 else ""
    return f"{issues[0]}{more}"


def check_hom_bijection(spec: CapacitorSpec) -> list[str]:
    """Hom_E(Jx, e) ≅ Hom_{C-}(x, Ue) via ψ ↦ Uψ∘η_x, natural in both slots."""
    C, E, U = spec.C, spec.E, spec.U
    dv = build_voltage(spec)
    neg = dv.polarity.negative
    issues = []
    bij = {}
    for x in range(C.n_objects):
        ex = spec.unit(x)
        for e in range(E.n_objects):
            image = {}
            for psi in E.hom(spec.J(x), e):
                g = C.compose(U(psi), ex)
                if g not in neg:
                    issues.append(f"U({E.arrow_labels[psi]})∘η at {C.objects[x]} is not negative")
                if g in image:
                    issues.append(f"not injective at ({C.objects[x]}, {E.objects[e]})")
                image[g] = psi
            for g in C.hom(x, U.obj_map[e]):
                if g in neg and g not in image:
                    issues.append(f"{C.arrow_labels[g]} is not a transpose")
            bij[(x, e)] = image
    if issues:
        return issues
    # naturality: f: x' → x in C-, φ: e → e' in E
    for f in sorted(neg):
        xp, x = C.src[f], C.tgt[f]
        jf = dv.J_minus[f]
        for e in range(E.n_objects):
            for psi in E.hom(spec.J(x), e):
                for phi in E.out_arrows(e):
                    lhs = C.compose(U(E.compose_path(phi, psi, jf)), spec.unit(xp))
                    rhs = C.compose_path(U(phi), U(psi), spec.unit(x), f)
                    if lhs != rhs:
                        issues.append(f"naturality fails at {C.arrow_labels[f]}, "
                                      f"{E.arrow_labels[psi]}, {E.arrow_labels[phi]}")
    return issues


def verify_theorem_main(spec: CapacitorSpec) -> list[LedgerEntry]:
    _require_verified(spec)
    C, E, U = spec.C, spec.E, spec.U
    dv = build_voltage(spec)
    P = dv.polarity
    neg = P.negative
    names = {x: C.objects[x] for x in range(C.n_objects)}
    ledger = []

    def record(item, name, issues):
        issues = list(issues)
        ledger.append(LedgerEntry(item, name, not issues, _first(issues)))

    record(1, "negative class is a refinement", pol.validate_refinement(C, neg))
    Jm = Functor(C, E, tuple(spec.J(x) for x in range(C.n_objects)), dv.J_minus)
    record(2, "J- is a functor", fincat.validate_functor(Jm))
    record(3, "E is a negative polar endofunctor", pol.validate_polar_functor(dv.voltage.E))
    record(4, "unit is natural",
           pol.validate_polar_nat_trans(pol.unit_transformation(dv.voltage)))
    record(5, "voltage axioms", pol.validate_voltage(dv.voltage))

    HM = pol.monopole(C, spec.H)
    record(6, "units are completions relative to H",
           [f"unit of {names[x]} is not amphi-terminal" for x in range(C.n_objects)
            if not hulls.is_completion(HM, x, dv.eta[x])])

    issues = []
    for x in range(C.n_objects):
        if not fincat.is_monic(C, dv.eta[x]):
            issues.append(f"unit of {names[x]} is not monic")
        if not pol.is_negatively_epic(P, dv.eta[x]):
            issues.append(f"unit of {names[x]} is not negatively epic")
    record(7, "units monic and negatively epic", issues)

    issues = []
    Em = dv.E_minus
    for x in range(C.n_objects):
        for y in range(C.n_objects):
            src = [f for f in C.hom(x, y) if f in neg]
            images = [Em(f) for f in src]
            if len(set(images)) != len(images):
                issues.append(f"E- not faithful on ({names[x]}, {names[y]})")
            target = {g for g in C.hom(Em.obj_map[x], Em.obj_map[y]) if g in neg}
            outside = [g for g in images if g not in neg]
            if outside:
                issues.append(f"E- leaves the negative class on ({names[x]}, {names[y]})")
            missed = sorted(target - set(images))
            if missed:
                issues.append(f"E- not full on ({names[x]}, {names[y]}): "
                              f"{C.arrow_labels[missed[0]]} is not E-f of any f")
    record(8, "E- full and faithful on the negative class", issues)

    issues = []
    for f in sorted(neg):
        x, y = C.src[f], C.tgt[f]
        target = C.compose(dv.eta[y], f)
        sols = [g for g in C.hom(Em.obj_map[x], Em.obj_map[y])
                if g in neg and C.compose(g, dv.eta[x]) == target]
        if sols != [Em(f)]:
            issues.append(f"{C.arrow_labels[f]}: square solutions {len(sols)}")
    record(9, "E-f is the unique negative filler", issues)

    record(10, "hom-set bijection natural in both slots", check_hom_bijection(spec))

    issues = []
    for a in range(E.n_objects):
        for b in range(E.n_objects):
            imgs = [U(p) for p in E.hom(a, b)]
            if any(g not in neg for g in imgs):
                issues.append(f"U leaves the negative class on ({E.objects[a]}, {E.objects[b]})")
            if len(set(imgs)) != len(imgs):
                issues.append(f"U not faithful on ({E.objects[a]}, {E.objects[b]})")
            ua, ub = U.obj_map[a], U.obj_map[b]
            if {g for g in C.hom(ua, ub) if g in neg} - set(imgs):
                issues.append(f"U not full on ({E.objects[a]}, {E.objects[b]})")
    # reflectivity: η_x is a universal arrow from x to U restricted to C-
    for x in range(C.n_objects):
        if dv.eta[x] not in neg:
            issues.append(f"unit of {names[x]} is not negative")
        for b in range(E.n_objects):
            for g in C.hom(x, U.obj_map[b]):
                if g not in neg:
                    continue
                n = sum(1 for p in E.hom(spec.J(x), b)
                        if C.compose(U(p), dv.eta[x]) == g)
                if n != 1:
                    issues.append(f"{C.arrow_labels[g]} factors {n} times through the unit")
    record(11, "U fully faithful with reflective image", issues)

    issues = []
    P_orig = pol.polarity(C, spec.monopole.positive, neg)
    for x in range(C.n_objects):
        complete = hulls.is_complete(HM, x)
        for label, Q in (("C+", P_orig), ("H", P)):
            inj = hulls.is_injective_polarity(Q, x)
            if inj != complete:
                issues.append(f"{names[x]}: injective for positives {label} = {inj}, "
                              f"complete = {complete}")
    record(12, "injective iff complete", issues)
    dv.ledger = ledger
    return ledger


@dataclass
class CorollaryReport:
    enough_injectives: bool
    complete_are_injective: bool
    injective_equals_complete: bool

    @property
    def equivalent(self) -> bool:
        return len({self.enough_injectives, self.complete_are_injective,
                    self.injective_equals_complete}) == 1

    def to_json(self) -> dict:
        return {"enough_injectives": self.enough_injectives,
                "complete_are_injective": self.complete_are_injective,
                "injective_equals_complete": self.injective_equals_complete,
                "equivalent": self.equivalent}


def verify_corollary_main(spec: CapacitorSpec) -> CorollaryReport:
    """The three assertions evaluated independently on the positive monopole."""
    M = spec.monopole
    C = M.category
    HM = pol.monopole(C, spec.H)
    injective = {x for x in range(C.n_objects) if hulls.is_injective_monopole(M, x)}
    complete = {x for x in range(C.n_objects) if hulls.is_complete(HM, x)}
    return CorollaryReport(
        hulls.has_enough_injectives(M),
        complete <= injective,
        complete == injective,
    )


# -- raw capacitor files ---------------------------------------------------


def capacitor_from_json(doc: dict, *, name: str = "") -> CapacitorSpec:
    """Raw capacitor: a category plus positive, H, E and optional family.

    ``E_objects`` names the objects of E (a subcategory of C, included by U);
    ``E_arrows`` defaults to every arrow between them; ``family`` maps object
    labels to [unit arrow id, E object label] and defaults to the computed
    completions.
    """
    C = FiniteCategory.from_json(doc["category"], name=name)
    ids = {label: i for i, label in enumerate(C.arrow_labels)}
    try:
        positive = [ids[str(a)] for a in doc.get("positive", C.arrow_labels)]
        H = [ids[str(a)] for a in doc.get("H", doc.get("positive", C.arrow_labels))]
        e_objs = [C.obj(o) for o in doc["E_objects"]]
        e_arrows = doc.get("E_arrows")
        if e_arrows is not None:
            e_arrows = [ids[str(a)] for a in e_arrows]
    except KeyError as exc:
        raise CategoryError(f"unknown arrow or field {exc}") from None
    E, U = inclusion_functor(C, e_objs, e_arrows)
    M = pol.monopole(C, positive)
    if "family" in doc:
        family = {x: None for x in range(C.n_objects)}
        for label, (eta, J) in doc["family"].items():
            family[C.obj(label)] = (ids[str(eta)], E.obj(J))
    else:
        family = family_from_completions(M, frozenset(H), E, U)
    return CapacitorSpec(M, frozenset(H), E, U, family, name=name, kind="raw")

"""Monopoles, polarities, polar functors, and voltages over finite categories.

A polarity carries two arrow classes; a monopole is stored as a polarity
whose negative class is every arrow, so one code path serves both.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from . import fincat
from .fincat import CategoryError, FiniteCategory, Functor


@dataclass(frozen=True, eq=False)
class Polarity:
    category: FiniteCategory
    positive: frozenset
    negative: frozenset
    sign: str = "positive"  # display metadata for monopoles only
    name: str = ""

    @property
    def is_monopole(self) -> bool:
        return len(self.negative) == self.category.n_arrows

    def restrict(self, H: Iterable[int], name: str = "") -> "Polarity":
        """The monopole with positives replaced by H."""
        return monopole(self.category, H, name=name or f"{self.name}|H")

    def to_json(self) -> dict:
        doc = self.category.to_json()
        labels = self.category.arrow_labels
        doc["positive"] = [labels[f] for f in sorted(self.positive)]
        doc["negative"] = [labels[f] for f in sorted(self.negative)]
        return doc


Monopole = Polarity


def monopole(C: FiniteCategory, positive: Iterable[int], *, sign: str = "positive",
             name: str = "") -> Polarity:
    return Polarity(C, frozenset(positive), frozenset(C.arrows()), sign, name)


def polarity(C: FiniteCategory, positive: Iterable[int], negative: Iterable[int],
             *, name: str = "") -> Polarity:
    return Polarity(C, frozenset(positive), frozenset(negative), "positive", name)


def everything(C: FiniteCategory) -> Polarity:
    """The polarization where every arrow is positive and negative."""
    return polarity(C, C.arrows(), C.arrows(), name=f"all({C.name})")


def polarity_from_json(doc: dict, *, name: str = "") -> Polarity:
    C = FiniteCategory.from_json(doc, name=name)
    ids = {label: i for i, label in enumerate(C.arrow_labels)}
    pos = [ids[str(a)] for a in doc.get("positive", C.arrow_labels)]
    neg = [ids[str(a)] for a in doc.get("negative", C.arrow_labels)]
    return polarity(C, pos, neg, name=name)


# -- refinements -----------------------------------------------------------


def validate_refinement(C: FiniteCategory, S: Iterable[int]) -> list[str]:
    """Missing identities, missing isomorphisms, and composition failures."""
    S = frozenset(S)
    issues = [f"unknown arrow {a!r}" for a in sorted(S, key=repr)
              if not (isinstance(a, int) and 0 <= a < C.n_arrows)]
    if issues:
        return issues
    for x, i in enumerate(C.identities):
        if i not in S:
            issues.append(f"identity {C.arrow_labels[i]} missing")
    for f in sorted(fincat.isos(C)):
        if f not in S and not C.is_identity(f):
            issues.append(f"isomorphism {C.arrow_labels[f]} missing")
    for f in sorted(S):
        for g in C.out_arrows(C.tgt[f]):
            if g in S and C.compose(g, f) not in S:
                issues.append(
                    f"not closed: {C.arrow_labels[g]}∘{C.arrow_labels[f]} missing")
    return issues


def validate_monopole(M: Polarity) -> list[str]:
    return validate_refinement(M.category, M.positive)


def validate_polarity(P: Polarity) -> list[str]:
    return ([f"positive: {m}" for m in validate_refinement(P.category, P.positive)]
            + [f"negative: {m}" for m in validate_refinement(P.category, P.negative)])


def _same_category(A: Polarity, B: Polarity) -> None:
    if A.category is not B.category:
        raise CategoryError("polarities live on different categories")


def is_sub_monopole(M1: Polarity, M2: Polarity) -> bool:
    _same_category(M1, M2)
    return M1.positive <= M2.positive


def is_sub_polarity(P1: Polarity, P2: Polarity) -> bool:
    _same_category(P1, P2)
    return P1.positive <= P2.positive and P1.negative <= P2.negative


def is_negatively_epic(P: Polarity, f: int) -> bool:
    """Negative arrows p, q with p∘f = q∘f are equal."""
    C = P.category
    C.check_arrow(f)
    y = C.tgt[f]
    for z in range(C.n_objects):
        seen = set()
        for p in C.hom(y, z):
            if p in P.negative:
                pf = C.compose(p, f)
                if pf in seen:
                    return False
                seen.add(pf)
    return True


# -- hereditary cores ------------------------------------------------------


def left_hereditary_violations(M: Polarity, *, relative: bool = False) -> list[tuple[int, int]]:
    """Pairs (f, g) with g∘f positive but g not positive.

    With ``relative`` only pairs where f is itself positive count.
    """
    C = M.category
    out = []
    for f in C.arrows():
        if relative and f not in M.positive:
            continue
        for g in C.out_arrows(C.tgt[f]):
            if g not in M.positive and C.compose(g, f) in M.positive:
                out.append((f, g))
    return out


def is_left_hereditary(M: Polarity, *, relative: bool = False) -> bool:
    return not left_hereditary_violations(M, relative=relative)


def left_hereditary_core(M: Polarity) -> Polarity:
    """Positive f such that every g with g∘f positive is itself positive."""
    C = M.category
    core = [
        f for f in sorted(M.positive)
        if all(g in M.positive for g in C.out_arrows(C.tgt[f])
               if C.compose(g, f) in M.positive)
    ]
    return monopole(C, core, sign=M.sign, name=f"L({M.name})")


def maximality_scan(M: Polarity, *, relative: bool = True, limit: int = 20):
    """Search for a left-hereditary sub-monopole of M not contained in L(M).

    Candidates are M's isomorphisms plus every subset of its remaining
    positive arrows; returns the first offending class or None.  Refuses
    when more than ``limit`` arrows would be enumerated.
    """
    C = M.category
    core = left_hereditary_core(M).positive
    base = frozenset(fincat.isos(C)) | frozenset(C.identities)
    free = sorted(M.positive - base)
    if len(free) > limit:
        raise ValueError(f"maximality scan over {len(free)} arrows exceeds limit {limit}")
    for r in range(1, len(free) + 1):
        for extra in combinations(free, r):
            S = base | frozenset(extra)
            if S <= core:
                continue
            if validate_refinement(C, S):
                continue
            if is_left_hereditary(monopole(C, S), relative=relative):
                return S
    return None


def essential_monics(C: FiniteCategory) -> frozenset:
    if "essential_monics" not in C._cache:
        C._cache["essential_monics"] = left_hereditary_core(
            monopole(C, fincat.monics(C))).positive
    return C._cache["essential_monics"]


def regular_monics(C: FiniteCategory) -> frozenset:
    if "regular_monics" not in C._cache:
        C._cache["regular_monics"] = frozenset(
            f for f in C.arrows() if fincat.is_regular_monic(C, f))
    return C._cache["regular_monics"]


def essential_regular_monics(C: FiniteCategory) -> frozenset:
    return left_hereditary_core(monopole(C, regular_monics(C))).positive


# -- normal monics ---------------------------------------------------------


def _factor(C: FiniteCategory, target: int, through: int) -> int | None:
    """Some k with through∘k = target."""
    for k in C.hom(C.src[target], C.src[through]):
        if C.compose(through, k) == target:
            return k
    return None


def _pair(C: FiniteCategory, legs: tuple, a: int, b: int) -> int | None:
    """The arrow ⟨a, b⟩ into a product with projections ``legs``."""
    for u in C.hom(C.src[a], C.src[legs[0]]):
        if C.compose(legs[0], u) == a and C.compose(legs[1], u) == b:
            return u
    return None


def is_normal_monic(C: FiniteCategory, f: int):
    """Three-valued: True, False, or None when needed limits are missing.

    A category may carry a ``normal_monic_rule`` attribute (an exact
    instance-level predicate), which then takes precedence.
    """
    C.check_arrow(f)
    rule = getattr(C, "normal_monic_rule", None)
    if rule is not None:
        return bool(rule(f))
    if not fincat.is_monic(C, f):
        return False
    X, Y = C.src[f], C.tgt[f]
    XX = fincat.find_universal(C, "product", (X, X))
    YY = fincat.find_universal(C, "product", (Y, Y))
    if XX.absent or YY.absent:
        return None
    p0, p1 = XX.legs
    q0, q1 = YY.legs
    ff = _pair(C, YY.legs, C.compose(f, p0), C.compose(f, p1))
    diag = _pair(C, YY.legs, C.identity(Y), C.identity(Y))
    swap = _pair(C, YY.legs, q1, q0)
    undecided = False
    for r in C.in_arrows(YY.apex):
        if not fincat.is_monic(C, r):
            continue
        d0, d1 = C.compose(q0, r), C.compose(q1, r)
        if _factor(C, diag, r) is None or _factor(C, C.compose(swap, r), r) is None:
            continue
        if not fincat.is_iso(C, r):
            # the total relation is transitive without consulting R ×_Y R
            pb = fincat.find_universal(C, "pullback", (d1, d0))
            if pb.absent:
                undecided = True
                continue
            s, t = pb.legs
            trans = _pair(C, YY.legs, C.compose(d0, s), C.compose(d1, t))
            if _factor(C, trans, r) is None:
                continue
        xi = _factor(C, ff, r)
        if xi is None:
            continue
        if fincat.is_pullback_square(C, xi, p0, d0, f):
            return True
    return None if undecided else False


# -- polar functors and transformations ------------------------------------


@dataclass
class PolarFunctor:
    """F₊ on the positive arrows (contravariant when negative) and F₋ on the
    negative arrows, agreeing on objects."""

    source: Polarity
    target: Polarity
    sign: str
    plus_part: Functor
    minus_part: Functor
    name: str = ""

    def on_object(self, x: int) -> int:
        return self.plus_part.obj_map[x]


def restrict_functor(F: Functor, source: Polarity, target: Polarity) -> PolarFunctor:
    """The positive polar functor obtained by restricting an ordinary functor."""
    plus = Functor(F.domain, F.codomain, F.obj_map,
                   {f: F.arrow_map[f] for f in source.positive}, name=f"{F.name}+")
    minus = Functor(F.domain, F.codomain, F.obj_map,
                    {f: F.arrow_map[f] for f in source.negative}, name=f"{F.name}-")
    return PolarFunctor(source, target, "positive", plus, minus, F.name)


def identity_polar_functor(P: Polarity) -> PolarFunctor:
    return restrict_functor(fincat.identity_functor(P.category), P, P)


def validate_polar_functor(F: PolarFunctor) -> list[str]:
    issues = []
    if F.sign not in ("positive", "negative"):
        return [f"unknown sign {F.sign!r}"]
    P, Q = F.source, F.target
    if F.plus_part.obj_map != F.minus_part.obj_map:
        issues.append("plus and minus parts disagree on objects")
    if F.plus_part.contravariant != (F.sign == "negative"):
        issues.append("plus part has the wrong variance for the sign")
    if F.minus_part.contravariant:
        issues.append("minus part must be covariant")
    if set(F.plus_part.arrow_map) != set(P.positive):
        issues.append("plus part is not defined exactly on the positive arrows")
    if set(F.minus_part.arrow_map) != set(P.negative):
        issues.append("minus part is not defined exactly on the negative arrows")
    if issues:
        return issues
    issues += [f"plus: {m}" for m in fincat.validate_functor(F.plus_part)]
    issues += [f"minus: {m}" for m in fincat.validate_functor(F.minus_part)]
    for f, Ff in F.plus_part.arrow_map.items():
        if Ff not in Q.positive:
            issues.append(f"plus: image of {P.category.arrow_labels[f]} not positive")
    for f, Ff in F.minus_part.arrow_map.items():
        if Ff not in Q.negative:
            issues.append(f"minus: image of {P.category.arrow_labels[f]} not negative")
    return issues


@dataclass
class PolarNatTrans:
    source: PolarFunctor
    target: PolarFunctor
    components: tuple  # components[x] : F x → G x
    name: str = ""


def _square_issue(D: FiniteCategory, lhs, rhs, what: str) -> str | None:
    try:
        a, b = lhs(), rhs()
    except CategoryError as exc:
        return f"{what}: {exc}"
    if a != b:
        return f"{what}: square does not commute"
    return None


def validate_polar_nat_trans(t: PolarNatTrans) -> list[str]:
    """Check every naturality square, reversed ones for mixed signs."""
    F, G = t.source, t.target
    P = F.source
    D = F.target.category
    C = P.category
    eta = t.components
    issues = []
    if G.source is not P or G.target.category is not D:
        return ["functors have different source or target"]
    for x in range(C.n_objects):
        e = eta[x]
        if D.src[e] != F.on_object(x) or D.tgt[e] != G.on_object(x):
            issues.append(f"component at {C.objects[x]} is ill-typed")
    if issues:
        return issues
    comp = D.compose
    for f in sorted(P.positive):
        A, B = C.src[f], C.tgt[f]
        Ff, Gf = F.plus_part(f), G.plus_part(f)
        label = f"positive {C.arrow_labels[f]}"
        if F.sign == G.sign == "positive":
            check = (lambda: comp(eta[B], Ff), lambda: comp(Gf, eta[A]))
        elif F.sign == G.sign == "negative":
            check = (lambda: comp(eta[A], Ff), lambda: comp(Gf, eta[B]))
        elif F.sign == "positive":
            check = (lambda: comp(Gf, comp(eta[B], Ff)), lambda: eta[A])
        else:
            check = (lambda: comp(Gf, comp(eta[A], Ff)), lambda: eta[B])
        msg = _square_issue(D, *check, label)
        if msg:
            issues.append(msg)
    for f in sorted(P.negative):
        A, B = C.src[f], C.tgt[f]
        Ff, Gf = F.minus_part(f), G.minus_part(f)
        msg = _square_issue(D, lambda: comp(eta[B], Ff), lambda: comp(Gf, eta[A]),
                            f"negative {C.arrow_labels[f]}")
        if msg:
            issues.append(msg)
    return issues


def vertical_compose(s: PolarNatTrans, t: PolarNatTrans) -> PolarNatTrans:
    """t∘s for s: F ⇒ G and t: G ⇒ K, componentwise."""
    if s.target is not t.source:
        raise CategoryError("transformations are not composable")
    D = s.source.target.category
    comps = tuple(D.compose(b, a) for a, b in zip(s.components, t.components))
    return PolarNatTrans(s.source, t.target, comps, f"{t.name}∘{s.name}")


# -- voltages --------------------------------------------------------------


@dataclass
class Voltage:
    """A polarity with a negative functor E into the underlying category and
    a unit η: 1 ⇒ E."""

    polarity: Polarity
    E: PolarFunctor
    eta: tuple  # eta[x] : x → E x
    notes: dict = field(default_factory=dict)

    @property
    def E_plus(self) -> Functor:
        return self.E.plus_part

    @property
    def E_minus(self) -> Functor:
        return self.E.minus_part


def validate_voltage(V: Voltage) -> list[str]:
    P = V.polarity
    C = P.category
    E = V.E
    issues = []
    if E.sign != "negative":
        issues.append("E must be a negative polar functor")
    if E.source is not P or E.target.category is not C:
        issues.append("E must be an endofunctor of the underlying category")
    if issues:
        return issues
    issues += [f"E: {m}" for m in validate_polar_functor(E)]
    for x in range(C.n_objects):
        e = V.eta[x]
        if C.src[e] != x or C.tgt[e] != E.on_object(x):
            issues.append(f"unit at {C.objects[x]} is ill-typed")
    if issues:
        return issues
    for x in range(C.n_objects):
        if not fincat.is_iso(C, V.eta[E.on_object(x)]):
            issues.append(f"(1) unit at E({C.objects[x]}) is not an isomorphism")
    for f in sorted(P.positive):
        A, B = C.src[f], C.tgt[f]
        if C.compose_path(E.plus_part(f), V.eta[B], f) != V.eta[A]:
            issues.append(f"(2) square for positive {C.arrow_labels[f]} fails")
    for f in sorted(P.negative):
        A, B = C.src[f], C.tgt[f]
        if C.compose(E.minus_part(f), V.eta[A]) != C.compose(V.eta[B], f):
            issues.append(f"(3) square for negative {C.arrow_labels[f]} fails")
    return issues


def unit_transformation(V: Voltage) -> PolarNatTrans:
    """η viewed as a mixed-sign transformation from the identity to E."""
    P = V.polarity
    target = everything(P.category)
    ident = restrict_functor(fincat.identity_functor(P.category), P, target)
    E = PolarFunctor(P, target, V.E.sign, V.E.plus_part, V.E.minus_part, V.E.name)
    return PolarNatTrans(ident, E, tuple(V.eta), "eta")

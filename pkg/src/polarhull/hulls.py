"""Amphi-terminal objects, coslice and comma categories, completions, and
injectivity over finite categories."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from . import fincat
from .fincat import CategoryError, Diagram, FiniteCategory, Functor
from .polarity import Polarity, monopole, validate_refinement


# -- amphi-terminal objects ------------------------------------------------


def is_weakly_terminal(D: FiniteCategory, z: int) -> bool:
    return all(D.hom(x, z) for x in range(D.n_objects))


def is_quasi_initial(D: FiniteCategory, z: int) -> bool:
    return all(len(D.hom(z, y)) <= 1 for y in range(D.n_objects))


def is_amphi_terminal(D: FiniteCategory, z: int) -> bool:
    return is_weakly_terminal(D, z) and is_quasi_initial(D, z)


def is_amphi_initial(D: FiniteCategory, z: int) -> bool:
    return is_amphi_terminal(fincat.opposite(D), z)


def find_amphi_terminal(D: FiniteCategory) -> int | None:
    """Lowest-id amphi-terminal object; all witnesses are checked isomorphic."""
    found = [z for z in range(D.n_objects) if is_amphi_terminal(D, z)]
    if not found:
        return None
    z = found[0]
    for w in found[1:]:
        if not any(fincat.is_iso(D, u) for u in D.hom(w, z)):
            raise AssertionError("two amphi-terminal objects are not isomorphic")
    return z


# -- cone, coslice and comma categories -----------------------------------


def _assemble(objects, arrows, identities, compose, labels, name, budget):
    return FiniteCategory(objects, arrows, identities, compose, arrow_labels=labels,
                          name=name, budget=budget)


def cone_category(C: FiniteCategory, F: Diagram, *, budget=fincat.DEFAULT_ARROW_BUDGET):
    """Category of cones over F; objects are (apex, legs) pairs."""
    objs = [(w, legs) for w in range(C.n_objects) for legs in fincat.cones(C, F, w)]
    index = {o: i for i, o in enumerate(objs)}
    arrows, data, labels = [], [], []
    lookup = {}
    for i, (w, legs) in enumerate(objs):
        for j, (v, legs2) in enumerate(objs):
            for u in C.hom(w, v):
                if all(C.compose(l2, u) == l for l, l2 in zip(legs, legs2)):
                    lookup[(i, j, u)] = len(arrows)
                    arrows.append((i, j))
                    data.append(u)
                    labels.append(C.arrow_labels[u])
                    if budget is not None and len(arrows) > budget:
                        raise fincat.BudgetExceeded("cone category exceeds arrow budget")
    identities = [lookup[(i, i, C.identity(w))] for i, (w, _) in enumerate(objs)]

    def comp(g, f):
        return lookup[(arrows[f][0], arrows[g][1], C.compose(data[g], data[f]))]

    K = _assemble(objs, arrows, identities, comp, labels, f"cones({C.name})", None)
    K.data = data
    return K


@dataclass
class Coslice:
    """x↓M: objects are positive arrows out of x (slice: into x)."""

    base: Polarity
    x: int
    arrows_of: tuple  # object id -> arrow of the base category
    category: FiniteCategory
    monopole: Polarity
    underlying: tuple  # coslice arrow id -> base arrow


def _slice_like(M: Polarity, x: int, dual: bool, budget) -> Coslice:
    C = M.category
    if not 0 <= x < C.n_objects:
        raise CategoryError(f"unknown object {x!r}")
    objs = sorted(C.in_arrows(x) if dual else C.out_arrows(x))
    objs = [f for f in objs if f in M.positive]
    index = {f: i for i, f in enumerate(objs)}
    arrows, data, labels, positive = [], [], [], []
    lookup = {}
    for i, f in enumerate(objs):
        if dual:
            # ξ: f → g means f = g∘ξ, so ξ runs from src f to src g
            candidates = C.out_arrows(C.src[f])
        else:
            candidates = C.out_arrows(C.tgt[f])
        for xi in candidates:
            if dual:
                for g in C.hom(C.tgt[xi], x):
                    if g in index and C.compose(g, xi) == f:
                        j = index[g]
                        lookup[(i, j, xi)] = len(arrows)
                        arrows.append((i, j))
                        data.append(xi)
            else:
                g = C.compose(xi, f)
                if g in index:
                    j = index[g]
                    lookup[(i, j, xi)] = len(arrows)
                    arrows.append((i, j))
                    data.append(xi)
            if budget is not None and len(arrows) > budget:
                raise fincat.BudgetExceeded("coslice exceeds arrow budget")
    for a, xi in enumerate(data):
        labels.append(C.arrow_labels[xi])
        if xi in M.positive:
            positive.append(a)
    identities = [lookup[(i, i, C.identity(C.src[f] if dual else C.tgt[f]))]
                  for i, f in enumerate(objs)]

    def comp(g, f):
        return lookup[(arrows[f][0], arrows[g][1], C.compose(data[g], data[f]))]

    kind = "slice" if dual else "coslice"
    K = _assemble([C.arrow_labels[f] for f in objs], arrows, identities, comp, labels,
                  f"{kind}({C.objects[x]})", None)
    return Coslice(M, x, tuple(objs), K, monopole(K, positive), tuple(data))


def coslice_monopole(M: Polarity, x: int, *, budget=fincat.DEFAULT_ARROW_BUDGET) -> Coslice:
    return _slice_like(M, x, False, budget)


def slice_monopole(M: Polarity, x: int, *, budget=fincat.DEFAULT_ARROW_BUDGET) -> Coslice:
    return _slice_like(M, x, True, budget)


@dataclass
class CommaCategory:
    """x↓_H U: objects (b, f) with f: x → U b in H; arrows φ with Uφ∘f = g."""

    x: int
    U: Functor
    H: frozenset
    objects: tuple  # (b, f) pairs
    category: FiniteCategory
    underlying: tuple  # comma arrow id -> arrow of E


def comma_category(C: FiniteCategory, x: int, U: Functor, H: Iterable[int],
                   *, budget=fincat.DEFAULT_ARROW_BUDGET) -> CommaCategory:
    H = frozenset(H)
    E = U.domain
    objs = [(b, f) for b in range(E.n_objects) for f in C.hom(x, U.obj_map[b]) if f in H]
    index = {o: i for i, o in enumerate(objs)}
    arrows, data, lookup = [], [], {}
    for i, (b, f) in enumerate(objs):
        for phi in E.out_arrows(b):
            g = C.compose(U(phi), f)
            j = index.get((E.tgt[phi], g))
            if j is None:
                continue
            lookup[(i, j, phi)] = len(arrows)
            arrows.append((i, j))
            data.append(phi)
            if budget is not None and len(arrows) > budget:
                raise fincat.BudgetExceeded("comma category exceeds arrow budget")
    identities = [lookup[(i, i, E.identity(b))] for i, (b, _) in enumerate(objs)]

    def comp(g, f):
        return lookup[(arrows[f][0], arrows[g][1], E.compose(data[g], data[f]))]

    K = _assemble([f"({E.objects[b]},{C.arrow_labels[f]})" for b, f in objs], arrows,
                  identities, comp, [E.arrow_labels[p] for p in data],
                  f"{C.objects[x]}↓U", None)
    return CommaCategory(x, U, H, tuple(objs), K, tuple(data))


# -- completions -----------------------------------------------------------


@dataclass
class CompletionResult:
    unit: int
    object: int
    existence: dict = field(default_factory=dict)  # coslice object -> arrow into apex
    uniqueness: dict = field(default_factory=dict)  # coslice object -> hom-set size out of apex

    def to_json(self, C: FiniteCategory, U: Functor | None = None) -> dict:
        """Serialize; pass U when ``object`` is an object of U's domain."""
        obj = self.object if U is None else U.obj_map[self.object]
        return {
            "unit": C.arrow_labels[self.unit],
            "object": str(C.objects[obj]),
            "witness_counts": {
                "existence": len(self.existence),
                "max_out": max(self.uniqueness.values(), default=0),
            },
        }


def _coslice_scan(C: FiniteCategory, positive: frozenset, x: int, eta: int):
    """Existence and uniqueness witnesses for eta in the coslice under x."""
    z = C.tgt[eta]
    existence, uniqueness = {}, {}
    for g in C.out_arrows(x):
        if g not in positive:
            continue
        b = C.tgt[g]
        into = [xi for xi in C.hom(b, z) if C.compose(xi, g) == eta]
        if into:
            existence[g] = into[0]
        uniqueness[g] = sum(1 for xi in C.hom(z, b) if C.compose(xi, eta) == g)
    return existence, uniqueness


def is_completion(M: Polarity, x: int, eta: int) -> bool:
    """Is the positive arrow eta amphi-terminal in x↓M?"""
    C = M.category
    if C.src[eta] != x or eta not in M.positive:
        return False
    existence, uniqueness = _coslice_scan(C, M.positive, x, eta)
    return len(existence) == len(uniqueness) and all(n <= 1 for n in uniqueness.values())


def completion(M: Polarity, x: int) -> CompletionResult | None:
    """Lowest-id amphi-terminal object of the coslice x↓M, if any."""
    C = M.category
    if not 0 <= x < C.n_objects:
        raise CategoryError(f"unknown object {x!r}")
    for eta in sorted(C.out_arrows(x)):
        if eta in M.positive and is_completion(M, x, eta):
            ex, un = _coslice_scan(C, M.positive, x, eta)
            return CompletionResult(eta, C.tgt[eta], ex, un)
    return None


def is_complete(M: Polarity, x: int) -> bool:
    return is_completion(M, x, M.category.identity(x))


def relative_completion(M: Polarity, x: int, H: Iterable[int]) -> CompletionResult | None:
    H = frozenset(H)
    problems = validate_refinement(M.category, H)
    if problems or not H <= M.positive:
        raise ValueError("H must be a refinement contained in the positives: "
                         + "; ".join(problems or ["not contained"]))
    return completion(monopole(M.category, H), x)


def completion_wrt_functor(M: Polarity, x: int, U: Functor, H: Iterable[int] | None = None):
    """Terminal object of x↓_H U, as a CompletionResult whose ``object`` is
    an object of U's domain."""
    C = M.category
    H = M.positive if H is None else frozenset(H)
    if fincat.validate_functor(U):
        raise CategoryError("U is not a functor")
    E = U.domain
    comma = [(b, f) for b in range(E.n_objects) for f in C.hom(x, U.obj_map[b]) if f in H]
    for b, eta in comma:
        existence, uniqueness = {}, {}
        ok = True
        for c, g in comma:
            into = [phi for phi in E.hom(c, b) if C.compose(U(phi), g) == eta]
            uniqueness[g] = len(into)
            if len(into) != 1:
                ok = False
                break
            existence[(c, g)] = into[0]
        if ok:
            return CompletionResult(eta, b, existence, uniqueness)
    return None


# -- injectivity -----------------------------------------------------------


def is_injective_polarity(P: Polarity, x: int) -> bool:
    """Every negative f: a → x extends along every positive g: a → b."""
    C = P.category
    for g in sorted(P.positive):
        a, b = C.src[g], C.tgt[g]
        extended = {C.compose(h, g) for h in C.hom(b, x)}
        for f in C.hom(a, x):
            if f in P.negative and f not in extended:
                return False
    return True


def is_injective_monopole(M: Polarity, x: int) -> bool:
    return is_injective_polarity(monopole(M.category, M.positive), x)


def injective_objects(P: Polarity) -> list[int]:
    return [x for x in range(P.category.n_objects) if is_injective_polarity(P, x)]


def has_enough_injectives(P: Polarity) -> bool:
    C = P.category
    inj = set(injective_objects(P))
    return all(any(f in P.positive and C.tgt[f] in inj for f in C.out_arrows(x))
               for x in range(C.n_objects))


def amphi_limit(C: FiniteCategory, F: Diagram):
    """Amphi-terminal cone over F as (apex, legs), or None."""
    K = cone_category(C, F)
    z = find_amphi_terminal(K)
    return None if z is None else K.objects[z]

"""Explicit finite categories.

Objects and arrows are both numbered from zero; labels are kept only for
display and interchange.  Composition is either a dense table keyed by
``(g, f)`` pairs or, for concrete categories whose arrows are functions
between finite carriers, function composition followed by an index lookup.

All detectors here work by exhaustive enumeration of hom-sets.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

DEFAULT_ARROW_BUDGET = 20_000


class CategoryError(ValueError):
    """Malformed category data or an arrow/object that does not exist."""


class BudgetExceeded(RuntimeError):
    """Raised when a category would exceed the configured arrow budget."""


class FiniteCategory:
    """A category with finitely many objects and arrows.

    ``arrows`` is a sequence of ``(source, target)`` object indices, the
    arrow id being the position in that sequence.  ``composition`` is either
    a mapping ``(g, f) -> g∘f`` or a callable with the same signature.
    """

    def __init__(
        self,
        objects: Sequence,
        arrows: Sequence[tuple[int, int]],
        identities: Sequence[int],
        composition: Mapping[tuple[int, int], int] | Callable[[int, int], int],
        *,
        arrow_labels: Sequence | None = None,
        name: str = "",
        budget: int | None = DEFAULT_ARROW_BUDGET,
    ):
        if budget is not None and len(arrows) > budget:
            raise BudgetExceeded(
                f"category {name!r} has {len(arrows)} arrows, budget is {budget}"
            )
        self.name = name
        self.objects = tuple(objects)
        self.src = tuple(a[0] for a in arrows)
        self.tgt = tuple(a[1] for a in arrows)
        self.identities = tuple(identities)
        if len(self.identities) != len(self.objects):
            raise CategoryError("one identity arrow per object is required")
        if arrow_labels is None:
            arrow_labels = [f"a{i}" for i in range(len(arrows))]
        self.arrow_labels = tuple(str(x) for x in arrow_labels)
        if callable(composition):
            self._table = None
            self._compose_fn = composition
        else:
            self._table = dict(composition)
            self._compose_fn = None
        self._obj_index = {o: i for i, o in enumerate(self.objects)}
        self._hom: dict[tuple[int, int], list[int]] = {}
        self._out: list[list[int]] = [[] for _ in self.objects]
        self._in: list[list[int]] = [[] for _ in self.objects]
        for a, (s, t) in enumerate(zip(self.src, self.tgt)):
            if not (0 <= s < len(self.objects) and 0 <= t < len(self.objects)):
                raise CategoryError(f"arrow {a} has unknown endpoint")
            self._hom.setdefault((s, t), []).append(a)
            self._out[s].append(a)
            self._in[t].append(a)
        self._cache: dict = {}

    # -- basic access -----------------------------------------------------

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_arrows(self) -> int:
        return len(self.src)

    def arrows(self) -> range:
        return range(len(self.src))

    def obj(self, label) -> int:
        """Index of the object with the given label."""
        try:
            return self._obj_index[label]
        except KeyError:
            raise CategoryError(f"unknown object {label!r}") from None

    def hom(self, x: int, y: int) -> list[int]:
        return self._hom.get((x, y), [])

    def out_arrows(self, x: int) -> list[int]:
        return self._out[x]

    def in_arrows(self, y: int) -> list[int]:
        return self._in[y]

    def identity(self, x: int) -> int:
        return self.identities[x]

    def is_identity(self, f: int) -> bool:
        return self.identities[self.src[f]] == f

    def check_arrow(self, f: int) -> None:
        if not (isinstance(f, int) and 0 <= f < len(self.src)):
            raise CategoryError(f"unknown arrow {f!r}")

    def compose(self, g: int, f: int) -> int:
        """Return g∘f (f first)."""
        if self.tgt[f] != self.src[g]:
            raise CategoryError(f"arrows {g} and {f} are not composable")
        if self._table is not None:
            try:
                return self._table[(g, f)]
            except KeyError:
                raise CategoryError(f"composition table lacks ({g}, {f})") from None
        return self._compose_fn(g, f)

    def compose_path(self, *arrows: int) -> int:
        """Compose right to left: compose_path(h, g, f) = h∘g∘f."""
        result = arrows[-1]
        for a in reversed(arrows[:-1]):
            result = self.compose(a, result)
        return result

    def __repr__(self):
        return (
            f"FiniteCategory({self.name!r}, objects={self.n_objects}, "
            f"arrows={self.n_arrows})"
        )

    # -- derived categories -------------------------------------------------

    def subcategory(self, objects: Iterable[int], arrows: Iterable[int], name=""):
        """Sub-category on the given objects and arrows, with its inclusion.

        The arrow set must contain the identities of the chosen objects and
        be closed under composition; violations surface as CategoryError
        when the offending composite is requested.
        """
        objs = sorted(set(objects))
        obj_new = {o: i for i, o in enumerate(objs)}
        arrs = sorted(set(arrows))
        for o in objs:
            if self.identities[o] not in set(arrs):
                arrs = sorted(set(arrs) | {self.identities[o]})
        arr_new = {a: i for i, a in enumerate(arrs)}
        for a in arrs:
            if self.src[a] not in obj_new or self.tgt[a] not in obj_new:
                raise CategoryError(f"arrow {a} leaves the chosen objects")
        parent = self

        def comp(g, f):
            h = parent.compose(arrs[g], arrs[f])
            try:
                return arr_new[h]
            except KeyError:
                raise CategoryError(
                    f"subcategory not closed: {parent.arrow_labels[h]}"
                ) from None

        sub = FiniteCategory(
            [self.objects[o] for o in objs],
            [(obj_new[self.src[a]], obj_new[self.tgt[a]]) for a in arrs],
            [arr_new[self.identities[o]] for o in objs],
            comp,
            arrow_labels=[self.arrow_labels[a] for a in arrs],
            name=name or f"sub({self.name})",
            budget=None,
        )
        inclusion = Functor(sub, self, tuple(objs), dict(enumerate(arrs)), name="inclusion")
        return sub, inclusion

    def full_subcategory(self, objects: Iterable[int], name=""):
        objs = set(objects)
        arrs = [a for a in self.arrows() if self.src[a] in objs and self.tgt[a] in objs]
        return self.subcategory(objs, arrs, name=name)

    def composition_table(self) -> dict[tuple[int, int], int]:
        """Materialize the full composition table (may be large)."""
        table = {}
        for f in self.arrows():
            for g in self._out[self.tgt[f]]:
                table[(g, f)] = self.compose(g, f)
        return table

    # -- interchange --------------------------------------------------------

    def to_json(self) -> dict:
        labels = self.arrow_labels
        return {
            "objects": [str(o) for o in self.objects],
            "arrows": [
                {"id": labels[a], "src": str(self.objects[self.src[a]]),
                 "tgt": str(self.objects[self.tgt[a]])}
                for a in self.arrows()
            ],
            "compose": [
                {"g": labels[g], "f": labels[f], "gf": labels[gf]}
                for (g, f), gf in sorted(self.composition_table().items())
            ],
            "identities": {
                str(o): labels[self.identities[i]] for i, o in enumerate(self.objects)
            },
        }

    @classmethod
    def from_json(cls, doc: Mapping, *, name="", budget=DEFAULT_ARROW_BUDGET):
        """Build from the interchange document.

        Missing or ill-typed composition entries are not rejected here;
        :func:`validate_category` reports them.
        """
        try:
            objects = [str(o) for o in doc["objects"]]
            obj_index = {o: i for i, o in enumerate(objects)}
            arrow_ids = [str(a["id"]) for a in doc["arrows"]]
            arr_index = {a: i for i, a in enumerate(arrow_ids)}
            if len(arr_index) != len(arrow_ids):
                raise CategoryError("duplicate arrow ids")
            arrows = [(obj_index[str(a["src"])], obj_index[str(a["tgt"])]) for a in doc["arrows"]]
            identities = [arr_index[str(doc["identities"][o])] for o in objects]
            table = {
                (arr_index[str(c["g"])], arr_index[str(c["f"])]): arr_index[str(c["gf"])]
                for c in doc["compose"]
            }
        except KeyError as exc:
            raise CategoryError(f"malformed category document: missing {exc}") from None
        return cls(objects, arrows, identities, table, arrow_labels=arrow_ids,
                   name=name, budget=budget)


def concrete_category(
    objects: Sequence,
    sizes: Sequence[int],
    homs: Mapping[tuple[int, int], Sequence[tuple]],
    *,
    name: str = "",
    budget: int | None = DEFAULT_ARROW_BUDGET,
) -> FiniteCategory:
    """Category whose arrows are maps between finite carriers.

    ``sizes[x]`` is the carrier size of object x and ``homs[(x, y)]`` lists
    the maps x → y as tuples of target indices.  Composition is function
    composition, so the hom collections must contain identities and be
    closed under it.
    """
    arrows, data, labels = [], [], []
    index: dict[tuple, int] = {}
    for (x, y) in sorted(homs):
        for m in homs[(x, y)]:
            m = tuple(m)
            key = (x, y, m)
            if key in index:
                continue
            index[key] = len(arrows)
            arrows.append((x, y))
            data.append(m)
            labels.append(f"{objects[x]}->{objects[y]}:{','.join(map(str, m))}")
    if budget is not None and len(arrows) > budget:
        raise BudgetExceeded(f"category {name!r} has {len(arrows)} arrows, budget is {budget}")
    identities = []
    for x in range(len(objects)):
        key = (x, x, tuple(range(sizes[x])))
        if key not in index:
            raise CategoryError(f"identity of {objects[x]!r} missing")
        identities.append(index[key])

    def comp(g, f):
        gm = data[g]
        h = tuple(gm[i] for i in data[f])
        try:
            return index[(arrows[f][0], arrows[g][1], h)]
        except KeyError:
            raise CategoryError("hom collections not closed under composition") from None

    cat = FiniteCategory(objects, arrows, identities, comp, arrow_labels=labels,
                         name=name, budget=None)
    cat.data = data
    cat.data_index = index
    return cat


@dataclass
class Functor:
    """A functor given by explicit object and arrow maps.

    ``arrow_map`` may cover only part of the domain (a functor defined on a
    wide subcategory); laws are checked on the arrows it covers.
    """

    domain: FiniteCategory
    codomain: FiniteCategory
    obj_map: tuple
    arrow_map: dict
    contravariant: bool = False
    name: str = ""

    def __call__(self, f: int) -> int:
        return self.arrow_map[f]

    def on_object(self, x: int) -> int:
        return self.obj_map[x]


def validate_functor(F: Functor) -> list[str]:
    """List every violated functor law on the arrows F is defined on."""
    D, C = F.domain, F.codomain
    issues = []
    defined = F.arrow_map
    for f, Ff in defined.items():
        s, t = F.obj_map[D.src[f]], F.obj_map[D.tgt[f]]
        if F.contravariant:
            s, t = t, s
        if C.src[Ff] != s or C.tgt[Ff] != t:
            issues.append(f"typing: {D.arrow_labels[f]} maps to ill-typed {C.arrow_labels[Ff]}")
    for x in range(D.n_objects):
        i = D.identities[x]
        if i in defined and defined[i] != C.identities[F.obj_map[x]]:
            issues.append(f"identity: id of {D.objects[x]} not preserved")
    if issues:
        return issues
    for f in defined:
        for g in D.out_arrows(D.tgt[f]):
            if g not in defined:
                continue
            gf = D.compose(g, f)
            if gf not in defined:
                issues.append(f"closure: {D.arrow_labels[g]}∘{D.arrow_labels[f]} outside domain")
                continue
            if F.contravariant:
                expected = C.compose(defined[f], defined[g])
            else:
                expected = C.compose(defined[g], defined[f])
            if defined[gf] != expected:
                issues.append(
                    f"composition: {D.arrow_labels[g]}∘{D.arrow_labels[f]} not preserved"
                )
    return issues


def identity_functor(C: FiniteCategory) -> Functor:
    return Functor(C, C, tuple(range(C.n_objects)), {a: a for a in C.arrows()}, name="id")


def opposite(C: FiniteCategory) -> FiniteCategory:
    """The opposite category; arrow ids are shared with C."""
    if "opposite" in C._cache:
        return C._cache["opposite"]
    op = FiniteCategory(
        C.objects,
        list(zip(C.tgt, C.src)),
        C.identities,
        lambda g, f: C.compose(f, g),
        arrow_labels=C.arrow_labels,
        name=f"op({C.name})",
        budget=None,
    )
    op._cache["opposite"] = C
    C._cache["opposite"] = op
    return op


def compose_functors(F: Functor, G: Functor) -> Functor:
    """G∘F; the composite is contravariant iff exactly one factor is."""
    if F.codomain is not G.codomain and F.codomain is not G.domain:
        raise CategoryError("functors are not composable")
    if F.codomain is not G.domain:
        raise CategoryError("functors are not composable")
    arrow_map = {f: G.arrow_map[Ff] for f, Ff in F.arrow_map.items() if Ff in G.arrow_map}
    return Functor(
        F.domain,
        G.codomain,
        tuple(G.obj_map[o] for o in F.obj_map),
        arrow_map,
        contravariant=F.contravariant != G.contravariant,
        name=f"{G.name}∘{F.name}",
    )


# -- validation ------------------------------------------------------------


def validate_category(C: FiniteCategory) -> list[str]:
    """Every violated category axiom; empty iff C is a category."""
    issues = []
    for x, i in enumerate(C.identities):
        if not (0 <= i < C.n_arrows) or C.src[i] != x or C.tgt[i] != x:
            issues.append(f"identity of {C.objects[x]} is ill-typed")
    if issues:
        return issues
    if C._table is not None:
        for (g, f), gf in C._table.items():
            if not (0 <= g < C.n_arrows and 0 <= f < C.n_arrows and 0 <= gf < C.n_arrows):
                issues.append(f"table entry ({g}, {f}) refers to unknown arrows")
            elif C.tgt[f] != C.src[g]:
                issues.append(
                    f"table entry for non-composable pair ({C.arrow_labels[g]}, {C.arrow_labels[f]})"
                )
    comp = {}
    for f in C.arrows():
        for g in C.out_arrows(C.tgt[f]):
            try:
                gf = C.compose(g, f)
            except CategoryError as exc:
                issues.append(f"missing composite: {exc}")
                continue
            if C.src[gf] != C.src[f] or C.tgt[gf] != C.tgt[g]:
                issues.append(f"typing: {C.arrow_labels[g]}∘{C.arrow_labels[f]} ill-typed")
            comp[(g, f)] = gf
    if issues:
        return issues
    for f in C.arrows():
        if comp[(C.identities[C.tgt[f]], f)] != f:
            issues.append(f"left identity fails at {C.arrow_labels[f]}")
        if comp[(f, C.identities[C.src[f]])] != f:
            issues.append(f"right identity fails at {C.arrow_labels[f]}")
    for f in C.arrows():
        for g in C.out_arrows(C.tgt[f]):
            gf = comp[(g, f)]
            for h in C.out_arrows(C.tgt[g]):
                if comp[(h, gf)] != comp[(comp[(h, g)], f)]:
                    issues.append(
                        "associativity fails at "
                        f"({C.arrow_labels[h]}, {C.arrow_labels[g]}, {C.arrow_labels[f]})"
                    )
    return issues


# -- arrow detectors -------------------------------------------------------


def is_monic(C: FiniteCategory, f: int) -> bool:
    C.check_arrow(f)
    x = C.src[f]
    for w in range(C.n_objects):
        seen = set()
        for g in C.hom(w, x):
            fg = C.compose(f, g)
            if fg in seen:
                return False
            seen.add(fg)
    return True


def is_epic(C: FiniteCategory, f: int) -> bool:
    return is_monic(opposite(C), f)


def inverses(C: FiniteCategory, f: int) -> list[int]:
    C.check_arrow(f)
    s, t = C.src[f], C.tgt[f]
    return [
        g for g in C.hom(t, s)
        if C.compose(g, f) == C.identities[s] and C.compose(f, g) == C.identities[t]
    ]


def is_iso(C: FiniteCategory, f: int) -> bool:
    return bool(inverses(C, f))


def is_split_monic(C: FiniteCategory, f: int) -> bool:
    C.check_arrow(f)
    s = C.src[f]
    return any(C.compose(r, f) == C.identities[s] for r in C.hom(C.tgt[f], s))


def is_split_epic(C: FiniteCategory, f: int) -> bool:
    return is_split_monic(opposite(C), f)


def monics(C: FiniteCategory) -> frozenset:
    if "monics" not in C._cache:
        C._cache["monics"] = frozenset(f for f in C.arrows() if is_monic(C, f))
    return C._cache["monics"]


def epics(C: FiniteCategory) -> frozenset:
    return monics(opposite(C))


def isos(C: FiniteCategory) -> frozenset:
    if "isos" not in C._cache:
        C._cache["isos"] = frozenset(f for f in C.arrows() if is_iso(C, f))
    return C._cache["isos"]


def is_left_orthogonal(C: FiniteCategory, a: int, b: int) -> bool:
    """a ⊥ b: every square b∘g = h∘a has exactly one t with t∘a = g, b∘t = h."""
    C.check_arrow(a)
    C.check_arrow(b)
    A, B = C.src[a], C.tgt[a]
    X, Y = C.src[b], C.tgt[b]
    fillers: dict[tuple[int, int], int] = {}
    for t in C.hom(B, X):
        key = (C.compose(t, a), C.compose(b, t))
        fillers[key] = fillers.get(key, 0) + 1
    by_composite: dict[int, list[int]] = {}
    for h in C.hom(B, Y):
        by_composite.setdefault(C.compose(h, a), []).append(h)
    for g in C.hom(A, X):
        for h in by_composite.get(C.compose(b, g), ()):
            if fillers.get((g, h), 0) != 1:
                return False
    return True


def is_strong_epic(C: FiniteCategory, f: int) -> bool:
    return all(is_left_orthogonal(C, f, m) for m in sorted(monics(C)))


def is_strong_monic(C: FiniteCategory, f: int) -> bool:
    return all(is_left_orthogonal(C, e, f) for e in sorted(epics(C)))


def _equalized_classes(C: FiniteCategory, f: int) -> list[list[list[int]]]:
    """For each object z, hom(tgt f, z) partitioned by the value of p∘f."""
    y = C.tgt[f]
    classes = []
    for z in range(C.n_objects):
        groups: dict[int, list[int]] = {}
        for p in C.hom(y, z):
            groups.setdefault(C.compose(p, f), []).append(p)
        classes.extend(g for g in groups.values() if len(g) > 1)
    return classes


def is_regular_monic(C: FiniteCategory, f: int) -> bool:
    """Limit-free test: f is monic and every g equalizing what f equalizes
    factors through f."""
    C.check_arrow(f)
    if not is_monic(C, f):
        return False
    x, y = C.src[f], C.tgt[f]
    classes = _equalized_classes(C, f)
    for w in range(C.n_objects):
        through = {C.compose(f, k) for k in C.hom(w, x)}
        for g in C.hom(w, y):
            if g in through:
                continue
            if all(len({C.compose(p, g) for p in cls}) == 1 for cls in classes):
                return False
    return True


def is_regular_epic(C: FiniteCategory, f: int) -> bool:
    return is_regular_monic(opposite(C), f)


# -- universal constructions ----------------------------------------------


@dataclass
class UniversalResult:
    """Outcome of a brute-force universal search."""

    apex: int | None
    legs: tuple = ()
    unique: bool = False
    absent: bool = True
    others: list = field(default_factory=list)

    @classmethod
    def missing(cls):
        return cls(None, (), False, True)


@dataclass(frozen=True)
class Diagram:
    """A finite diagram: a list of objects and arrows between its vertices.

    ``arrows`` holds triples ``(i, j, a)`` meaning arrow a of the ambient
    category from vertex i to vertex j.
    """

    vertices: tuple
    arrows: tuple = ()


def cones(C: FiniteCategory, D: Diagram, w: int) -> list[tuple]:
    """All cones with apex w over D, as tuples of legs."""
    choices = [C.hom(w, v) for v in D.vertices]
    out = []
    for legs in itertools.product(*choices):
        if all(C.compose(a, legs[i]) == legs[j] for i, j, a in D.arrows):
            out.append(legs)
    return out


def is_limit_cone(C: FiniteCategory, D: Diagram, apex: int, legs: tuple) -> bool:
    """Every cone factors through (apex, legs) in exactly one way."""
    for w in range(C.n_objects):
        image = {}
        for u in C.hom(w, apex):
            key = tuple(C.compose(l, u) for l in legs)
            if key in image:
                return False
            image[key] = u
        for cone in cones(C, D, w):
            if cone not in image:
                return False
    return True


def find_limit(C: FiniteCategory, D: Diagram, *, cross_check: bool = False) -> UniversalResult:
    """Brute-force limit search, apexes tried in object order."""
    found = []
    for p in range(C.n_objects):
        for legs in cones(C, D, p):
            if is_limit_cone(C, D, p, legs):
                found.append((p, legs))
                break
        if found and not cross_check:
            break
    if not found:
        return UniversalResult.missing()
    apex, legs = found[0]
    result = UniversalResult(apex, legs, unique=True, absent=False, others=found[1:])
    if cross_check:
        for q, qlegs in found[1:]:
            if not _cones_isomorphic(C, D, apex, legs, q, qlegs):
                raise AssertionError("two limit cones are not isomorphic")
    return result


def _cones_isomorphic(C, D, p, plegs, q, qlegs) -> bool:
    for u in C.hom(q, p):
        if tuple(C.compose(l, u) for l in plegs) == tuple(qlegs) and is_iso(C, u):
            return True
    return False


def find_colimit(C: FiniteCategory, D: Diagram, *, cross_check: bool = False) -> UniversalResult:
    flipped = Diagram(D.vertices, tuple((j, i, a) for i, j, a in D.arrows))
    return find_limit(opposite(C), flipped, cross_check=cross_check)


_KINDS = {
    "terminal", "initial", "product", "coproduct", "equalizer",
    "coequalizer", "pullback", "pushout",
}


def find_universal(C: FiniteCategory, kind: str, data=(), *, cross_check: bool = False) -> UniversalResult:
    """Search C for a universal object of the given kind.

    data: nothing for terminal/initial, an object pair for (co)products, a
    parallel arrow pair for (co)equalizers, a cospan (f, g) with common
    target for pullbacks, a span (f, g) with common source for pushouts.
    """
    if kind not in _KINDS:
        raise CategoryError(f"unknown universal kind {kind!r}")
    data = tuple(data)
    if kind in ("terminal", "initial"):
        if data:
            raise CategoryError(f"{kind} takes no data")
        D = Diagram(())
    elif kind in ("product", "coproduct"):
        if len(data) != 2:
            raise CategoryError(f"{kind} needs two objects")
        D = Diagram(tuple(data))
    elif kind in ("equalizer", "coequalizer"):
        if len(data) != 2:
            raise CategoryError(f"{kind} needs a parallel pair")
        f, g = data
        C.check_arrow(f)
        C.check_arrow(g)
        if (C.src[f], C.tgt[f]) != (C.src[g], C.tgt[g]):
            raise CategoryError("arrows are not parallel")
        if kind == "equalizer":
            D = Diagram((C.src[f], C.tgt[f]), ((0, 1, f), (0, 1, g)))
        else:
            D = Diagram((C.tgt[f], C.src[f]), ((1, 0, f), (1, 0, g)))
    else:
        if len(data) != 2:
            raise CategoryError(f"{kind} needs two arrows")
        f, g = data
        C.check_arrow(f)
        C.check_arrow(g)
        if kind == "pullback":
            if C.tgt[f] != C.tgt[g]:
                raise CategoryError("pullback needs a cospan")
            D = Diagram((C.src[f], C.src[g], C.tgt[f]), ((0, 2, f), (1, 2, g)))
        else:
            if C.src[f] != C.src[g]:
                raise CategoryError("pushout needs a span")
            D = Diagram((C.tgt[f], C.tgt[g], C.src[f]), ((2, 0, f), (2, 1, g)))
    if kind in ("initial", "coproduct", "coequalizer", "pushout"):
        res = find_colimit(C, D, cross_check=cross_check)
    else:
        res = find_limit(C, D, cross_check=cross_check)
    if kind in ("equalizer", "coequalizer") and not res.absent:
        res.legs = res.legs[:1]
    if kind in ("pullback", "pushout") and not res.absent:
        res.legs = res.legs[:2]
    return res


def kernel_pair(C: FiniteCategory, f: int) -> UniversalResult:
    return find_universal(C, "pullback", (f, f))


def cokernel_pair(C: FiniteCategory, f: int) -> UniversalResult:
    return find_universal(C, "pushout", (f, f))


def image(C: FiniteCategory, f: int) -> UniversalResult:
    """Equalizer of the cokernel pair of f."""
    ck = cokernel_pair(C, f)
    if ck.absent:
        return UniversalResult.missing()
    return find_universal(C, "equalizer", ck.legs)


def coimage(C: FiniteCategory, f: int) -> UniversalResult:
    """Coequalizer of the kernel pair of f."""
    kp = kernel_pair(C, f)
    if kp.absent:
        return UniversalResult.missing()
    return find_universal(C, "coequalizer", kp.legs)


def regular_comparison(C: FiniteCategory, f: int) -> int | None:
    """The arrow CoIm(f) → Im(f) closing the canonical factorization of f."""
    im, co = image(C, f), coimage(C, f)
    if im.absent or co.absent:
        return None
    (m,), (q,) = im.legs, co.legs
    found = [r for r in C.hom(co.apex, im.apex) if C.compose_path(m, r, q) == f]
    if len(found) != 1:
        raise AssertionError(f"factorization of {C.arrow_labels[f]} not unique: {found}")
    rho = found[0]
    if not (is_monic(C, rho) and is_epic(C, rho)):
        raise AssertionError(f"comparison map of {C.arrow_labels[f]} is not monic and epic")
    return rho


def is_regular(C: FiniteCategory, f: int) -> bool:
    rho = regular_comparison(C, f)
    if rho is None:
        raise CategoryError("comparison undefined: image or coimage absent")
    return is_iso(C, rho)


def is_pullback_square(C: FiniteCategory, top: int, left: int, right: int, bottom: int) -> bool:
    """Is the square  P -top-> B, P -left-> A, B -right-> D, A -bottom-> D  a pullback?"""
    if C.compose(right, top) != C.compose(bottom, left):
        return False
    D = Diagram((C.tgt[left], C.tgt[top], C.tgt[right]),
                ((0, 2, bottom), (1, 2, right)))
    return is_limit_cone(C, D, C.src[top], (left, top, C.compose(right, top)))


def dump_category(C: FiniteCategory, path) -> None:
    with open(path, "w") as fh:
        json.dump(C.to_json(), fh, indent=1)

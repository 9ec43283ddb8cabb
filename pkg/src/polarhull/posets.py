"""Finite posets, their MacNeille completions, and the poset capacitor.

Subsets of a poset are handled as bitmasks over element indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .fincat import DEFAULT_ARROW_BUDGET, concrete_category

MAX_CONTINUITY_SIZE = 12


class PosetError(ValueError):
    pass


class NoExtension(ValueError):
    """A continuous map that admits no continuous MacNeille extension."""


def _mask(A: Iterable[int]) -> int:
    m = 0
    for a in A:
        m |= 1 << a
    return m


def _members(mask: int) -> list[int]:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@dataclass(frozen=True, eq=False)
class FinPoset:
    elements: tuple
    leq: tuple  # leq[i][j] is True iff element i <= element j
    name: str = ""

    @classmethod
    def from_pairs(cls, elements: Sequence, pairs: Iterable, name: str = "") -> "FinPoset":
        """Build from ``(x, y)`` pairs meaning x <= y; reflexive pairs are implied."""
        elements = tuple(elements)
        index = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        rel = [[i == j for j in range(n)] for i in range(n)]
        for x, y in pairs:
            try:
                rel[index[x]][index[y]] = True
            except KeyError as exc:
                raise PosetError(f"unknown element {exc}") from None
        P = cls(elements, tuple(tuple(r) for r in rel), name)
        problems = P.validate()
        if problems:
            raise PosetError("; ".join(problems))
        return P

    @classmethod
    def chain(cls, n: int, name: str = "") -> "FinPoset":
        return cls(tuple(range(n)), tuple(tuple(i <= j for j in range(n)) for i in range(n)),
                   name or f"{n}-chain")

    @classmethod
    def antichain(cls, n: int, name: str = "") -> "FinPoset":
        return cls(tuple(range(n)), tuple(tuple(i == j for j in range(n)) for i in range(n)),
                   name or f"{n}-antichain")

    def validate(self) -> list[str]:
        n = len(self.elements)
        problems = []
        for i in range(n):
            if not self.leq[i][i]:
                problems.append(f"not reflexive at {self.elements[i]!r}")
            for j in range(n):
                if i != j and self.leq[i][j] and self.leq[j][i]:
                    if i < j:
                        problems.append(
                            f"not antisymmetric at {self.elements[i]!r}, {self.elements[j]!r}")
                for k in range(n):
                    if self.leq[i][j] and self.leq[j][k] and not self.leq[i][k]:
                        problems.append(
                            "not transitive at "
                            f"{self.elements[i]!r} <= {self.elements[j]!r} <= {self.elements[k]!r}")
        return problems

    @property
    def size(self) -> int:
        return len(self.elements)

    def le(self, i: int, j: int) -> bool:
        return self.leq[i][j]

    @cached_property
    def full_mask(self) -> int:
        return (1 << len(self.elements)) - 1

    @cached_property
    def up_masks(self) -> tuple:
        n = len(self.elements)
        return tuple(_mask(j for j in range(n) if self.leq[i][j]) for i in range(n))

    @cached_property
    def down_masks(self) -> tuple:
        n = len(self.elements)
        return tuple(_mask(j for j in range(n) if self.leq[j][i]) for i in range(n))

    def upper_bounds(self, mask: int) -> int:
        out = self.full_mask
        for i in _members(mask):
            out &= self.up_masks[i]
        return out

    def lower_bounds(self, mask: int) -> int:
        out = self.full_mask
        for i in _members(mask):
            out &= self.down_masks[i]
        return out

    def least(self, mask: int) -> int | None:
        """The least element of a subset, if it has one."""
        for i in _members(mask):
            if self.up_masks[i] & mask == mask:
                return i
        return None

    def greatest(self, mask: int) -> int | None:
        for i in _members(mask):
            if self.down_masks[i] & mask == mask:
                return i
        return None

    def sup(self, mask: int) -> int | None:
        return self.least(self.upper_bounds(mask))

    def inf(self, mask: int) -> int | None:
        return self.greatest(self.lower_bounds(mask))

    def covers(self) -> list[tuple[int, int]]:
        """Hasse-diagram edges (i, j) with i < j and nothing strictly between."""
        n = len(self.elements)
        edges = []
        for i in range(n):
            for j in range(n):
                if i != j and self.leq[i][j]:
                    if not any(k not in (i, j) and self.leq[i][k] and self.leq[k][j]
                               for k in range(n)):
                        edges.append((i, j))
        return edges

    def relabel(self, perm: Sequence[int], name: str | None = None) -> "FinPoset":
        """Poset with element i moved to position perm[i]."""
        n = len(self.elements)
        inv = [0] * n
        for i, p in enumerate(perm):
            inv[p] = i
        return FinPoset(
            tuple(self.elements[inv[k]] for k in range(n)),
            tuple(tuple(self.leq[inv[a]][inv[b]] for b in range(n)) for a in range(n)),
            self.name if name is None else name,
        )

    def __repr__(self):
        return f"FinPoset({self.name or '?'}, n={self.size})"


@dataclass(frozen=True)
class MonotoneMap:
    source: FinPoset
    target: FinPoset
    values: tuple

    def __call__(self, i: int) -> int:
        return self.values[i]

    def image_mask(self, mask: int) -> int:
        return _mask(self.values[i] for i in _members(mask))

    def is_monotone(self) -> bool:
        P, Q, v = self.source, self.target, self.values
        return all(Q.le(v[i], v[j]) for i in range(P.size) for j in range(P.size) if P.le(i, j))


def up_set(P: FinPoset, A: Iterable[int]) -> frozenset:
    """All common upper bounds of A."""
    return frozenset(_members(P.upper_bounds(_mask(A))))


def down_set(P: FinPoset, A: Iterable[int]) -> frozenset:
    """All common lower bounds of A."""
    return frozenset(_members(P.lower_bounds(_mask(A))))


def closure_mask(P: FinPoset, mask: int) -> int:
    """↓↑A as a bitmask."""
    return P.lower_bounds(P.upper_bounds(mask))


# -- map predicates --------------------------------------------------------


def is_embedding(f: MonotoneMap) -> bool:
    """Order-isomorphism onto its image."""
    P, Q, v = f.source, f.target, f.values
    n = P.size
    return all(P.le(i, j) == Q.le(v[i], v[j]) for i in range(n) for j in range(n))


def is_join_dense(f: MonotoneMap) -> bool:
    Q = f.target
    img = f.image_mask(f.source.full_mask)
    return all(Q.sup(img & Q.down_masks[b]) == b for b in range(Q.size))


def is_meet_dense(f: MonotoneMap) -> bool:
    Q = f.target
    img = f.image_mask(f.source.full_mask)
    return all(Q.inf(img & Q.up_masks[b]) == b for b in range(Q.size))


def is_dense(f: MonotoneMap) -> bool:
    return is_join_dense(f) and is_meet_dense(f)


def is_dense_embedding(f: MonotoneMap) -> bool:
    return is_embedding(f) and is_dense(f)


def is_complete_lattice(P: FinPoset) -> bool:
    """Every subset has a supremum (finite case: bottom plus binary joins)."""
    if P.sup(0) is None:
        return False
    n = P.size
    return all(P.sup((1 << i) | (1 << j)) is not None for i in range(n) for j in range(i + 1, n))


def is_continuous_map(f: MonotoneMap) -> bool:
    """Preserves every existing infimum and supremum, the empty subset included."""
    P, Q = f.source, f.target
    if P.size > MAX_CONTINUITY_SIZE:
        raise PosetError(f"continuity check refuses posets above {MAX_CONTINUITY_SIZE} elements")
    v = f.values
    for mask in range(1 << P.size):
        img = f.image_mask(mask)
        s = P.sup(mask)
        if s is not None and Q.sup(img) != v[s]:
            return False
        t = P.inf(mask)
        if t is not None and Q.inf(img) != v[t]:
            return False
    return True


# -- enumeration -----------------------------------------------------------


def _linear_extension(P: FinPoset) -> list[int]:
    return sorted(range(P.size), key=lambda i: bin(P.down_masks[i]).count("1"))


def enumerate_monotone_maps(P: FinPoset, Q: FinPoset) -> list[tuple]:
    """All monotone maps P → Q as value tuples, in lexicographic order."""
    order = _linear_extension(P)
    vals = [None] * P.size
    out = []

    def extend(k):
        if k == len(order):
            out.append(tuple(vals))
            return
        i = order[k]
        for v in range(Q.size):
            ok = True
            for j in order[:k]:
                if P.le(j, i) and not Q.le(vals[j], v):
                    ok = False
                    break
                if P.le(i, j) and not Q.le(v, vals[j]):
                    ok = False
                    break
            if ok:
                vals[i] = v
                extend(k + 1)
        vals[i] = None

    extend(0)
    return sorted(out)


def canonical_form(P: FinPoset) -> tuple[tuple, tuple]:
    """Lexicographically minimal relation matrix over all relabelings.

    Returns (key, perm) where perm sends P's element i to position perm[i].
    """
    n = P.size
    best_key, best_perm = None, None
    for order in itertools.permutations(range(n)):
        # order[k] is the old element placed at position k
        key = tuple(P.leq[order[a]][order[b]] for a in range(n) for b in range(n))
        if best_key is None or key < best_key:
            best_key = key
            best_perm = order
    perm = [0] * n
    for k, old in enumerate(best_perm or ()):
        perm[old] = k
    return (n, best_key or ()), tuple(perm)


def canonical(P: FinPoset) -> tuple[FinPoset, tuple]:
    key, perm = canonical_form(P)
    return P.relabel(perm), perm


def is_isomorphic(P: FinPoset, Q: FinPoset) -> bool:
    return P.size == Q.size and canonical_form(P)[0] == canonical_form(Q)[0]


def _shape_table() -> dict:
    def from_covers(n, covers):
        rel = [[i == j for j in range(n)] for i in range(n)]
        for i, j in covers:
            rel[i][j] = True
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    if rel[i][k] and rel[k][j]:
                        rel[i][j] = True
        return FinPoset(tuple(range(n)), tuple(tuple(r) for r in rel))

    shapes = {
        "empty": FinPoset.antichain(0),
        "1-chain": FinPoset.chain(1),
        "2-chain": FinPoset.chain(2),
        "2-antichain": FinPoset.antichain(2),
        "3-chain": FinPoset.chain(3),
        "3-antichain": FinPoset.antichain(3),
        "V": from_covers(3, [(0, 1), (0, 2)]),
        "Lambda": from_covers(3, [(0, 2), (1, 2)]),
        "2-chain+1": from_covers(3, [(0, 1)]),
        "4-chain": FinPoset.chain(4),
        "diamond": from_covers(4, [(0, 1), (0, 2), (1, 3), (2, 3)]),
        "M3": from_covers(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]),
        "N5": from_covers(5, [(0, 1), (1, 2), (0, 3), (2, 4), (3, 4)]),
    }
    return {canonical_form(P)[0]: name for name, P in shapes.items()}


_SHAPES: dict | None = None


def shape_name(P: FinPoset) -> str:
    """A readable name for small shapes, else a size-indexed fallback."""
    global _SHAPES
    if _SHAPES is None:
        _SHAPES = _shape_table()
    key = canonical_form(P)[0]
    return _SHAPES.get(key, f"P{P.size}-" + "".join("1" if b else "0" for b in key[1]))


def named(P: FinPoset, name: str | None = None) -> FinPoset:
    return FinPoset(P.elements, P.leq, name or shape_name(P))


def all_posets(n: int) -> list[FinPoset]:
    """Every poset on n elements up to isomorphism, in canonical form."""
    seen = {}
    pairs = [(i, j) for i in range(n) for j in range(n) if i < j]
    # Restricting to relations contained in the natural order covers every
    # poset (via a linear extension) and avoids antisymmetry failures.
    for bits in range(1 << len(pairs)):
        rel = [[i == j for j in range(n)] for i in range(n)]
        for k, (i, j) in enumerate(pairs):
            if bits >> k & 1:
                rel[i][j] = True
        if any(rel[i][j] and rel[j][k] and not rel[i][k]
               for i in range(n) for j in range(n) for k in range(n)):
            continue
        P = FinPoset(tuple(range(n)), tuple(tuple(r) for r in rel))
        C, _ = canonical(P)
        key = canonical_form(C)[0]
        if key not in seen:
            seen[key] = C
    return [named(seen[k]) for k in sorted(seen)]


# -- MacNeille completion --------------------------------------------------


@dataclass(frozen=True, eq=False)
class MacNeilleLattice:
    """Fixed points of A ↦ ↓↑A ordered by inclusion, with the unit p ↦ ↓p."""

    base: FinPoset
    carrier: tuple  # bitmasks over base elements, increasing as integers
    lattice: FinPoset
    unit: MonotoneMap

    def element(self, mask: int) -> int:
        return self.carrier.index(mask)

    def subsets(self) -> list[frozenset]:
        return [frozenset(_members(m)) for m in self.carrier]


def macneille(P: FinPoset, name: str | None = None) -> MacNeilleLattice:
    if P.size > 16:
        raise PosetError("MacNeille enumeration refuses posets above 16 elements")
    carrier = sorted({closure_mask(P, m) for m in range(1 << P.size)})
    index = {m: k for k, m in enumerate(carrier)}
    n = len(carrier)
    labels = tuple("{" + ",".join(str(P.elements[i]) for i in _members(m)) + "}" for m in carrier)
    leq = tuple(tuple(carrier[a] & carrier[b] == carrier[a] for b in range(n)) for a in range(n))
    L = FinPoset(labels, leq, name if name is not None else f"M({P.name})")
    unit = MonotoneMap(P, L, tuple(index[P.down_masks[p]] for p in range(P.size)))
    return MacNeilleLattice(P, tuple(carrier), L, unit)


def macneille_oracle(P: FinPoset) -> list[int]:
    """Independent enumeration of {A : A = ↓↑A} straight from the definitions."""
    n = P.size
    out = []
    for mask in range(1 << n):
        A = [i for i in range(n) if mask >> i & 1]
        ups = [u for u in range(n) if all(P.leq[a][u] for a in A)]
        downs = [d for d in range(n) if all(P.leq[d][u] for u in ups)]
        if sorted(downs) == A:
            out.append(mask)
    return out


def extends_continuously(f: MonotoneMap) -> bool:
    """Does f extend to a continuous map between the MacNeille completions?

    Only the closure candidate A ↦ ↓↑f[A] can qualify, because an extension
    preserving joins is determined on joins of unit images.
    """
    MP, MQ = macneille(f.source), macneille(f.target)
    g = MonotoneMap(
        MP.lattice, MQ.lattice,
        tuple(MQ.element(closure_mask(f.target, f.image_mask(m))) for m in MP.carrier),
    )
    commutes = all(g.values[MP.unit.values[p]] == MQ.unit.values[f.values[p]]
                   for p in range(f.source.size))
    return commutes and g.is_monotone() and is_continuous_map(g)


def extend_to_macneille(f: MonotoneMap, *, verify: bool = True) -> MonotoneMap:
    """The unique continuous extension M(P) → M(Q) of a continuous f.

    Built as A ↦ ↓↑f[A]; with ``verify`` the result is cross-checked by
    enumerating every continuous map commuting with the units.
    """
    if not is_continuous_map(f):
        raise PosetError("extend_to_macneille needs a continuous map")
    MP, MQ = macneille(f.source), macneille(f.target)
    candidate = MonotoneMap(
        MP.lattice, MQ.lattice,
        tuple(MQ.element(closure_mask(f.target, f.image_mask(m))) for m in MP.carrier),
    )
    commutes = all(
        candidate.values[MP.unit.values[p]] == MQ.unit.values[f.values[p]]
        for p in range(f.source.size)
    )
    ok = candidate.is_monotone() and commutes and is_continuous_map(candidate)
    if verify:
        found = [
            vals for vals in enumerate_monotone_maps(MP.lattice, MQ.lattice)
            if all(vals[MP.unit.values[p]] == MQ.unit.values[f.values[p]]
                   for p in range(f.source.size))
            and is_continuous_map(MonotoneMap(MP.lattice, MQ.lattice, vals))
        ]
        if not found:
            raise NoExtension(f"{f.values} has no continuous extension to the completions")
        if len(found) > 1:
            raise AssertionError(f"continuous extension of {f.values} is not unique")
        if not ok or found[0] != candidate.values:
            raise AssertionError("closure construction disagrees with the search")
    elif not ok:
        raise NoExtension(f"{f.values} has no continuous extension to the completions")
    return candidate


# -- universes and the poset capacitor -------------------------------------


@dataclass
class PosetUniverse:
    category: object
    monopole: object
    posets: list

    def map_of(self, f: int) -> MonotoneMap:
        C = self.category
        return MonotoneMap(self.posets[C.src[f]], self.posets[C.tgt[f]], C.data[f])

    def arrows_where(self, pred) -> frozenset:
        return frozenset(f for f in self.category.arrows() if pred(self.map_of(f)))


def _dedupe(posets: Iterable[FinPoset]) -> list[FinPoset]:
    out, seen = [], set()
    for P in posets:
        key, perm = canonical_form(P)
        if key in seen:
            continue
        seen.add(key)
        out.append(P.relabel(perm, P.name or shape_name(P)))
    return out


def close_under_macneille(posets: Iterable[FinPoset]) -> list[FinPoset]:
    """Append the MacNeille completion of every poset not already present."""
    out = _dedupe(posets)
    keys = {canonical_form(P)[0] for P in out}
    for P in list(out):
        L = macneille(P).lattice
        key, perm = canonical_form(L)
        if key not in keys:
            keys.add(key)
            out.append(named(L.relabel(perm)))
    return out


def materialize_poset_universe(posets: Iterable[FinPoset], *, closure: bool = False,
                               budget: int | None = DEFAULT_ARROW_BUDGET) -> PosetUniverse:
    """Category of the given posets (up to isomorphism) and all monotone maps;
    positives are the embeddings."""
    from .polarity import monopole

    ps = close_under_macneille(posets) if closure else _dedupe(posets)
    names = []
    for P in ps:
        name = P.name or f"poset{len(names)}"
        while name in names:
            name += "'"
        names.append(name)
    homs = {}
    total = 0
    for i, P in enumerate(ps):
        for j, Q in enumerate(ps):
            homs[(i, j)] = enumerate_monotone_maps(P, Q)
            total += len(homs[(i, j)])
            if budget is not None and total > budget:
                from .fincat import BudgetExceeded
                raise BudgetExceeded(f"poset universe exceeds {budget} arrows")
    C = concrete_category(names, [P.size for P in ps], homs, name="posets", budget=budget)
    U = PosetUniverse(C, None, ps)
    U.monopole = monopole(C, U.arrows_where(is_embedding), name="embeddings")
    return U


def _best_unit(P: FinPoset, target: FinPoset) -> tuple | None:
    """Lexicographically least dense embedding P → target that factors as an
    isomorphism after the MacNeille unit; None when target ≇ M(P)."""
    M = macneille(P)
    if not is_isomorphic(M.lattice, target):
        return None
    best = None
    for vals in enumerate_monotone_maps(M.lattice, target):
        iso = MonotoneMap(M.lattice, target, vals)
        if len(set(vals)) == target.size and is_embedding(iso):
            unit = tuple(vals[M.unit.values[p]] for p in range(P.size))
            if best is None or unit < best:
                best = unit
    return best


def build_poset_capacitor(posets: Iterable[FinPoset], *, closure: bool = True,
                          budget: int | None = DEFAULT_ARROW_BUDGET):
    """Capacitor with H = dense embeddings, E = complete lattices and
    continuous maps, U the inclusion, and MacNeille units as the family."""
    from .capacitor import CapacitorSpec, inclusion_functor

    univ = materialize_poset_universe(posets, closure=closure, budget=budget)
    C = univ.category
    H = univ.arrows_where(is_dense_embedding)
    lattices = [i for i, P in enumerate(univ.posets) if is_complete_lattice(P)]
    keep = set(lattices)
    e_arrows = [f for f in C.arrows()
                if C.src[f] in keep and C.tgt[f] in keep and is_continuous_map(univ.map_of(f))]
    E, U = inclusion_functor(C, lattices, e_arrows)
    family = {}
    for x, P in enumerate(univ.posets):
        family[x] = None
        for b, y in enumerate(lattices):
            unit = _best_unit(P, univ.posets[y])
            if unit is not None:
                family[x] = (C.data_index[(x, y, unit)], b)
                break
    spec = CapacitorSpec(univ.monopole, H, E, U, family, name="posets", kind="poset",
                         extras={"universe": univ})
    return spec


def poset_from_json(doc: dict) -> FinPoset:
    try:
        return FinPoset.from_pairs(doc["elements"], [tuple(p) for p in doc.get("leq", [])],
                                   name=str(doc.get("name", "")))
    except KeyError as exc:
        raise PosetError(f"poset entry lacks {exc}") from None


def poset_to_json(P: FinPoset) -> dict:
    n = P.size
    return {
        "name": P.name,
        "elements": list(P.elements),
        "leq": [[P.elements[i], P.elements[j]] for i in range(n) for j in range(n)
                if i != j and P.leq[i][j]],
    }

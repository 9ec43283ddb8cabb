"""Finite Boolean algebras in powerset-of-atoms form.

An algebra with n atoms has elements 0 .. 2**n - 1 read as bitmasks of
atoms, so meet, join and complement are &, | and xor with the top.  A
homomorphism A → B corresponds to a map σ from the atoms of B to the atoms
of A, acting by S ↦ σ⁻¹(S).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .fincat import DEFAULT_ARROW_BUDGET, BudgetExceeded, concrete_category
from .posets import FinPoset, is_isomorphic, macneille


class BooleanError(ValueError):
    pass


@dataclass(frozen=True)
class FinBoolAlg:
    n_atoms: int
    name: str = ""

    @property
    def size(self) -> int:
        return 1 << self.n_atoms

    @property
    def top(self) -> int:
        return self.size - 1

    @property
    def elements(self) -> range:
        return range(self.size)

    def meet(self, a: int, b: int) -> int:
        return a & b

    def join(self, a: int, b: int) -> int:
        return a | b

    def neg(self, a: int) -> int:
        return self.top ^ a

    def le(self, a: int, b: int) -> bool:
        return a & b == a

    def meet_all(self, xs: Iterable[int]) -> int:
        out = self.top
        for x in xs:
            out &= x
        return out

    def join_all(self, xs: Iterable[int]) -> int:
        out = 0
        for x in xs:
            out |= x
        return out

    def tables(self) -> dict:
        els = list(self.elements)
        return {
            "elements": els,
            "meet": [[a & b for b in els] for a in els],
            "join": [[a | b for b in els] for a in els],
            "neg": [self.neg(a) for a in els],
        }

    def as_poset(self) -> FinPoset:
        els = tuple(self.elements)
        return FinPoset(els, tuple(tuple(self.le(a, b) for b in els) for a in els),
                        f"poset({self.name})")


def from_atoms(n: int, name: str = "") -> FinBoolAlg:
    """The powerset algebra on n atoms (2**n elements)."""
    if n < 0:
        raise BooleanError("atom count must be non-negative")
    return FinBoolAlg(n, name or f"B{1 << n}")


def atoms(A: FinBoolAlg) -> list[int]:
    return [1 << i for i in range(A.n_atoms)]


def validate_ba(elements: Sequence, meet, join, neg) -> list[str]:
    """Axiom report for an explicitly tabulated algebra (tables by position)."""
    n = len(elements)
    R = range(n)
    issues = []
    try:
        for a in R:
            if meet[a][a] != a or join[a][a] != a:
                issues.append(f"not idempotent at {elements[a]!r}")
            for b in R:
                if meet[a][b] != meet[b][a] or join[a][b] != join[b][a]:
                    issues.append(f"not commutative at {elements[a]!r}, {elements[b]!r}")
                if meet[a][join[a][b]] != a or join[a][meet[a][b]] != a:
                    issues.append(f"absorption fails at {elements[a]!r}, {elements[b]!r}")
                for c in R:
                    if meet[meet[a][b]][c] != meet[a][meet[b][c]]:
                        issues.append("meet not associative")
                    if join[join[a][b]][c] != join[a][join[b][c]]:
                        issues.append("join not associative")
                    if meet[a][join[b][c]] != join[meet[a][b]][meet[a][c]]:
                        issues.append(
                            f"not distributive at {elements[a]!r}, {elements[b]!r}, {elements[c]!r}")
    except (IndexError, TypeError):
        return ["tables have the wrong shape"]
    if issues:
        return sorted(set(issues))
    zeros = [z for z in R if all(meet[z][b] == z for b in R)]
    ones = [u for u in R if all(join[u][b] == u for b in R)]
    if not zeros or not ones:
        return ["no bottom or top"]
    zero, one = zeros[0], ones[0]
    for a in R:
        c = neg[a]
        if meet[a][c] != zero or join[a][c] != one:
            issues.append(f"{elements[c]!r} is not a complement of {elements[a]!r}")
        comps = [c2 for c2 in R if meet[a][c2] == zero and join[a][c2] == one]
        if len(comps) != 1:
            issues.append(f"complement of {elements[a]!r} not unique")
    return issues


def from_tables(elements: Sequence, meet, join, neg, name: str = "") -> tuple[FinBoolAlg, dict]:
    """Normalize a tabulated algebra; returns it with element → bitmask."""
    problems = validate_ba(elements, meet, join, neg)
    if problems:
        raise BooleanError("; ".join(problems))
    n = len(elements)
    zero = next(z for z in range(n) if all(meet[z][b] == z for b in range(n)))
    atom_ids = [a for a in range(n) if a != zero
                and all(meet[a][b] in (a, zero) for b in range(n))]
    mapping = {}
    for e in range(n):
        mask = 0
        for i, a in enumerate(atom_ids):
            if meet[a][e] == a:
                mask |= 1 << i
        mapping[elements[e]] = mask
    if len(set(mapping.values())) != n or n != 1 << len(atom_ids):
        raise BooleanError("algebra is not atomic of size 2**atoms")
    return FinBoolAlg(len(atom_ids), name), mapping


# -- homomorphisms ---------------------------------------------------------


@dataclass(frozen=True)
class BAHom:
    source: FinBoolAlg
    target: FinBoolAlg
    values: tuple

    def __call__(self, a: int) -> int:
        return self.values[a]

    @classmethod
    def from_atom_map(cls, A: FinBoolAlg, B: FinBoolAlg, sigma: Sequence[int]) -> "BAHom":
        """sigma[j] is the atom of A lying over atom j of B."""
        vals = []
        for S in A.elements:
            vals.append(sum(1 << j for j, i in enumerate(sigma) if S >> i & 1))
        return cls(A, B, tuple(vals))

    def is_hom(self) -> bool:
        A, B, v = self.source, self.target, self.values
        return all(v[a & b] == v[a] & v[b] and v[A.neg(a)] == B.neg(v[a])
                   for a in A.elements for b in A.elements)


def enumerate_homs(A: FinBoolAlg, B: FinBoolAlg) -> list[BAHom]:
    """All homomorphisms A → B, one per atom map, in lexicographic σ order."""
    return [BAHom.from_atom_map(A, B, sigma)
            for sigma in itertools.product(range(A.n_atoms), repeat=B.n_atoms)]


def enumerate_homs_oracle(A: FinBoolAlg, B: FinBoolAlg) -> list[tuple]:
    """Brute force over all maps of carriers, keeping those preserving ∧ and ¬."""
    out = []
    for vals in itertools.product(B.elements, repeat=A.size):
        if BAHom(A, B, vals).is_hom():
            out.append(vals)
    return out


def is_embedding(f: BAHom) -> bool:
    return len(set(f.values)) == f.source.size


def is_surjective(f: BAHom) -> bool:
    return len(set(f.values)) == f.target.size


def is_dense_subalgebra(f: BAHom) -> bool:
    """Every element of the target is the join of image elements below it."""
    B = f.target
    img = set(f.values)
    return all(B.join_all(a for a in img if B.le(a, b)) == b for b in B.elements)


def is_essential_embedding(f: BAHom) -> bool:
    return is_embedding(f) and is_dense_subalgebra(f)


def is_continuous_hom(f: BAHom) -> bool:
    """⋀X = 0 implies ⋀f(X) = 0, for every subset X of the source."""
    A, B = f.source, f.target
    if A.size > 16:
        raise BooleanError("continuity check refuses algebras above 16 elements")
    els = list(A.elements)
    for mask in range(1 << A.size):
        X = [els[i] for i in range(A.size) if mask >> i & 1]
        if A.meet_all(X) == 0 and B.meet_all(f.values[x] for x in X) != 0:
            return False
    return True


def completion(A: FinBoolAlg) -> tuple[FinBoolAlg, BAHom]:
    """A finite algebra is complete; its completion is itself via the identity.

    Cross-checked against the MacNeille completion of the underlying poset.
    """
    ident = BAHom(A, A, tuple(A.elements))
    if not is_isomorphic(macneille(A.as_poset()).lattice, A.as_poset()):
        raise AssertionError("MacNeille completion of a finite algebra is not itself")
    return A, ident


def compose(g: BAHom, f: BAHom) -> BAHom:
    return BAHom(f.source, g.target, tuple(g.values[v] for v in f.values))


def sikorski_extend(f: BAHom, h: BAHom) -> BAHom:
    """Lowest g (in σ order) with g∘f = h, for f an embedding."""
    if not is_embedding(f):
        raise BooleanError("sikorski_extend needs an embedding")
    if f.source != h.source:
        raise BooleanError("f and h must share their source")
    for g in enumerate_homs(f.target, h.target):
        if compose(g, f).values == h.values:
            return g
    raise AssertionError("no extension found")


# -- universe and capacitor ------------------------------------------------


@dataclass
class BAUniverse:
    category: object
    monopole: object
    algebras: list

    def hom_of(self, f: int) -> BAHom:
        C = self.category
        return BAHom(self.algebras[C.src[f]], self.algebras[C.tgt[f]], C.data[f])

    def arrows_where(self, pred) -> frozenset:
        return frozenset(f for f in self.category.arrows() if pred(self.hom_of(f)))


def materialize_ba_universe(algebras: Iterable[FinBoolAlg], *,
                            budget: int | None = DEFAULT_ARROW_BUDGET) -> BAUniverse:
    from .polarity import monopole

    algs, seen = [], set()
    for A in algebras:
        if A.n_atoms not in seen:
            seen.add(A.n_atoms)
            algs.append(A)
    homs, total = {}, 0
    for i, A in enumerate(algs):
        for j, B in enumerate(algs):
            homs[(i, j)] = [h.values for h in enumerate_homs(A, B)]
            total += len(homs[(i, j)])
            if budget is not None and total > budget:
                raise BudgetExceeded(f"algebra universe exceeds {budget} arrows")
    C = concrete_category([A.name or f"B{A.size}" for A in algs], [A.size for A in algs],
                          homs, name="boolean", budget=budget)
    U = BAUniverse(C, None, algs)
    U.monopole = monopole(C, U.arrows_where(is_embedding), name="embeddings")
    return U


def build_ba_capacitor(algebras: Iterable[FinBoolAlg], *,
                       budget: int | None = DEFAULT_ARROW_BUDGET):
    """H = essential embeddings, E = the same algebras with continuous homs,
    U the inclusion, identity units."""
    from .capacitor import CapacitorSpec, inclusion_functor

    univ = materialize_ba_universe(algebras, budget=budget)
    C = univ.category
    H = univ.arrows_where(is_essential_embedding)
    cont = univ.arrows_where(is_continuous_hom)
    E, U = inclusion_functor(C, range(C.n_objects), sorted(cont))
    family = {x: (C.identity(x), x) for x in range(C.n_objects)}
    return CapacitorSpec(univ.monopole, H, E, U, family, name="boolean", kind="boolean",
                         extras={"universe": univ})


def ba_from_json(doc: dict) -> FinBoolAlg:
    name = str(doc.get("name", ""))
    if "atoms" in doc:
        return from_atoms(int(doc["atoms"]), name)
    try:
        els = list(doc["elements"])
        idx = {e: i for i, e in enumerate(els)}
        meet = [[idx[v] for v in row] for row in doc["meet"]]
        join = [[idx[v] for v in row] for row in doc["join"]]
        neg = [idx[v] for v in doc["neg"]]
    except KeyError as exc:
        raise BooleanError(f"algebra entry lacks or misuses {exc}") from None
    A, _ = from_tables(els, meet, join, neg, name)
    return A

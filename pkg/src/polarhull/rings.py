"""Finite (possibly nonunital) rings, ideals, and multiplier rings.

Elements are indices into the carrier; addition and multiplication are
tables.  Multipliers follow the convention λ(ab) = λ(a)b, ρ(ab) = aρ(b),
aλ(b) = ρ(a)b, with ξ ↦ (a ↦ ξa, a ↦ aξ) as the canonical embedding.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .fincat import DEFAULT_ARROW_BUDGET, BudgetExceeded, concrete_category

MAX_RING_SIZE = 16


class RingError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FinRing:
    elements: tuple
    add: tuple
    mul: tuple
    zero: int = 0
    name: str = ""

    @property
    def size(self) -> int:
        return len(self.elements)

    def a(self, x: int, y: int) -> int:
        return self.add[x][y]

    def m(self, x: int, y: int) -> int:
        return self.mul[x][y]

    @cached_property
    def neg(self) -> tuple:
        return tuple(next(y for y in range(self.size) if self.add[x][y] == self.zero)
                     for x in range(self.size))

    def sum(self, xs: Iterable[int]) -> int:
        out = self.zero
        for x in xs:
            out = self.add[out][x]
        return out

    @cached_property
    def one(self) -> int | None:
        n = self.size
        for e in range(n):
            if all(self.mul[e][x] == x and self.mul[x][e] == x for x in range(n)):
                return e
        return None

    @property
    def is_unital(self) -> bool:
        return self.one is not None

    @cached_property
    def generators(self) -> tuple:
        """A generating set of the additive group, chosen greedily by index."""
        gens, span = [], {self.zero}
        for x in range(self.size):
            if x not in span:
                gens.append(x)
                span = self.span(gens)
        return tuple(gens)

    def span(self, xs: Iterable[int]) -> frozenset:
        """Additive subgroup generated by xs."""
        xs = list(xs)
        seen = {self.zero}
        frontier = [self.zero]
        while frontier:
            nxt = []
            for s in frontier:
                for x in xs:
                    y = self.add[s][x]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def __repr__(self):
        return f"FinRing({self.name or '?'}, n={self.size})"


def validate_ring(R: FinRing) -> list[str]:
    """Ring axioms without unit; reports the first violating triple per law."""
    n = R.size
    A, M, z = R.add, R.mul, R.zero
    issues = []
    try:
        if any(len(A[x]) != n or len(M[x]) != n for x in range(n)) or len(A) != n or len(M) != n:
            return ["tables have the wrong shape"]
        if not all(0 <= A[x][y] < n and 0 <= M[x][y] < n for x in range(n) for y in range(n)):
            return ["table entry out of range"]
    except TypeError:
        return ["tables have the wrong shape"]
    E = R.elements
    checks = [
        ("addition not commutative", lambda x, y, w: A[x][y] == A[y][x]),
        ("addition not associative", lambda x, y, w: A[A[x][y]][w] == A[x][A[y][w]]),
        ("multiplication not associative", lambda x, y, w: M[M[x][y]][w] == M[x][M[y][w]]),
        ("left distributivity fails", lambda x, y, w: M[x][A[y][w]] == A[M[x][y]][M[x][w]]),
        ("right distributivity fails", lambda x, y, w: M[A[x][y]][w] == A[M[x][w]][M[y][w]]),
    ]
    for msg, law in checks:
        for x, y, w in itertools.product(range(n), repeat=3):
            if not law(x, y, w):
                issues.append(f"{msg} at ({E[x]!r}, {E[y]!r}, {E[w]!r})")
                break
    if any(A[z][x] != x for x in range(n)):
        issues.append("zero is not an additive identity")
    elif any(all(A[x][y] != z for y in range(n)) for x in range(n)):
        issues.append("some element has no additive inverse")
    return issues


def make_ring(elements: Sequence, add, mul, name: str = "", zero=None) -> FinRing:
    """Build from tables of element labels and validate."""
    elements = tuple(elements)
    idx = {e: i for i, e in enumerate(elements)}
    try:
        A = tuple(tuple(idx[v] for v in row) for row in add)
        M = tuple(tuple(idx[v] for v in row) for row in mul)
    except KeyError as exc:
        raise RingError(f"table refers to unknown element {exc}") from None
    except TypeError:
        raise RingError("tables have the wrong shape") from None
    if zero is None:
        zs = [z for z in range(len(elements))
              if len(A) == len(elements) and all(len(A[z]) > x and A[z][x] == x
                                                 for x in range(len(elements)))]
        zero = zs[0] if zs else 0
    else:
        zero = idx[zero]
    R = FinRing(elements, A, M, zero, name)
    problems = validate_ring(R)
    if problems:
        raise RingError("; ".join(problems))
    return R


# -- constructors ----------------------------------------------------------


def zmod(n: int, name: str = "") -> FinRing:
    els = tuple(range(n))
    return FinRing(els, tuple(tuple((a + b) % n for b in els) for a in els),
                   tuple(tuple((a * b) % n for b in els) for a in els), 0, name or f"Z/{n}")


def f2() -> FinRing:
    return zmod(2, "F2")


def zero_mult(n: int, name: str = "") -> FinRing:
    """Z/n with identically zero multiplication."""
    els = tuple(range(n))
    return FinRing(els, tuple(tuple((a + b) % n for b in els) for a in els),
                   tuple(tuple(0 for _ in els) for _ in els), 0, name or f"Z/{n}0")


def product(R: FinRing, S: FinRing, name: str = "") -> FinRing:
    pairs = [(r, s) for r in range(R.size) for s in range(S.size)]
    idx = {p: i for i, p in enumerate(pairs)}
    add = tuple(tuple(idx[(R.add[a][c], S.add[b][d])] for c, d in pairs) for a, b in pairs)
    mul = tuple(tuple(idx[(R.mul[a][c], S.mul[b][d])] for c, d in pairs) for a, b in pairs)
    els = tuple((R.elements[a], S.elements[b]) for a, b in pairs)
    return FinRing(els, add, mul, idx[(R.zero, S.zero)], name or f"{R.name}x{S.name}")


def polynomial_quotient(p: int, modulus: Sequence[int], name: str = "") -> FinRing:
    """F_p[x]/(modulus) with modulus monic, coefficients listed low degree first."""
    d = len(modulus) - 1
    els = tuple(itertools.product(range(p), repeat=d))
    idx = {e: i for i, e in enumerate(els)}

    def mulpoly(u, v):
        prod = [0] * (2 * d - 1)
        for i, a in enumerate(u):
            for j, b in enumerate(v):
                prod[i + j] = (prod[i + j] + a * b) % p
        for k in range(len(prod) - 1, d - 1, -1):
            c = prod[k]
            if c:
                for i in range(d + 1):
                    prod[k - d + i] = (prod[k - d + i] - c * modulus[i]) % p
        return tuple(prod[:d])

    add = tuple(tuple(idx[tuple((a + b) % p for a, b in zip(u, v))] for v in els) for u in els)
    mul = tuple(tuple(idx[mulpoly(u, v)] for v in els) for u in els)
    return FinRing(els, add, mul, idx[(0,) * d], name)


def _matmul(X, Y):
    n = len(X)
    return tuple(tuple(sum(X[i][k] * Y[k][j] for k in range(n)) % 2 for j in range(n))
                 for i in range(n))


def _matadd(X, Y):
    return tuple(tuple((a + b) % 2 for a, b in zip(r, s)) for r, s in zip(X, Y))


def f2_matrix_ring(generators: Iterable, name: str = "") -> FinRing:
    """Subring (not necessarily unital) of n×n matrices over F2 generated by
    the given matrices."""
    gens = [tuple(tuple(int(v) % 2 for v in row) for row in g) for g in generators]
    if not gens:
        raise RingError("at least one generator is needed")
    n = len(gens[0])
    zero = tuple(tuple(0 for _ in range(n)) for _ in range(n))
    carrier = {zero}
    frontier = set(gens)
    while frontier:
        carrier |= frontier
        nxt = set()
        for X in carrier:
            for Y in carrier:
                for Z in (_matadd(X, Y), _matmul(X, Y)):
                    if Z not in carrier:
                        nxt.add(Z)
        frontier = nxt
    if len(carrier) > MAX_RING_SIZE:
        raise RingError(f"generated ring exceeds {MAX_RING_SIZE} elements")
    els = tuple(sorted(carrier))
    idx = {e: i for i, e in enumerate(els)}
    add = tuple(tuple(idx[_matadd(X, Y)] for Y in els) for X in els)
    mul = tuple(tuple(idx[_matmul(X, Y)] for Y in els) for X in els)
    return FinRing(els, add, mul, idx[zero], name)


def column_ring() -> FinRing:
    """{a·e11 + b·e21} ⊂ 2×2 matrices over F2: non-degenerate, no local units."""
    return f2_matrix_ring([((1, 0), (0, 0)), ((0, 0), (1, 0))], "col")


def upper_triangular() -> FinRing:
    return f2_matrix_ring([((1, 0), (0, 0)), ((0, 1), (0, 0)), ((0, 0), (0, 1))], "T2")


def unital_test_rings() -> list[FinRing]:
    """Unital rings of order at most 8 used throughout the tests."""
    F2 = f2()
    return [
        F2, zmod(3), zmod(4), zmod(5), zmod(6), zmod(7), zmod(8),
        product(F2, F2, "F2xF2"),
        polynomial_quotient(2, (1, 1, 1), "F4"),
        polynomial_quotient(2, (0, 0, 1), "F2[x]/x2"),
        product(product(F2, F2), F2, "F2^3"),
        product(F2, zmod(4), "F2xZ/4"),
        polynomial_quotient(2, (0, 0, 0, 1), "F2[x]/x3"),
        upper_triangular(),
    ]


# -- maps ------------------------------------------------------------------


@dataclass(frozen=True)
class RingHom:
    source: FinRing
    target: FinRing
    values: tuple

    def __call__(self, x: int) -> int:
        return self.values[x]

    def is_additive(self) -> bool:
        A, B, v = self.source, self.target, self.values
        return all(v[A.add[x][y]] == B.add[v[x]][v[y]] for x in range(A.size) for y in range(A.size))

    def is_multiplicative(self) -> bool:
        A, B, v = self.source, self.target, self.values
        return all(v[A.mul[x][y]] == B.mul[v[x]][v[y]] for x in range(A.size) for y in range(A.size))

    def is_unital(self) -> bool:
        A, B = self.source, self.target
        return A.one is not None and B.one is not None and self.values[A.one] == B.one

    def image(self) -> frozenset:
        return frozenset(self.values)

    def is_injective(self) -> bool:
        return len(set(self.values)) == self.source.size

    def kernel(self) -> frozenset:
        return frozenset(x for x, v in enumerate(self.values) if v == self.target.zero)


def additive_homs(A: FinRing, B: FinRing) -> list[tuple]:
    """All additive maps A → B, enumerated by images of A's generators."""
    if A.size > MAX_RING_SIZE or B.size > MAX_RING_SIZE:
        raise RingError(f"rings above {MAX_RING_SIZE} elements are refused")
    gens = A.generators
    out = []
    for imgs in itertools.product(range(B.size), repeat=len(gens)):
        vals = [None] * A.size
        vals[A.zero] = B.zero
        frontier = [A.zero]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for g, ig in zip(gens, imgs):
                    y = A.add[x][g]
                    v = B.add[vals[x]][ig]
                    if vals[y] is None:
                        vals[y] = v
                        nxt.append(y)
                    elif vals[y] != v:
                        ok = False
                        break
                if not ok:
                    break
            frontier = nxt
        if ok and RingHom(A, B, tuple(vals)).is_additive():
            out.append(tuple(vals))
    return sorted(set(out))


def ring_homs(A: FinRing, B: FinRing) -> list[tuple]:
    return [v for v in additive_homs(A, B) if RingHom(A, B, v).is_multiplicative()]


def isomorphisms(A: FinRing, B: FinRing) -> list[tuple]:
    if A.size != B.size:
        return []
    return [v for v in ring_homs(A, B) if len(set(v)) == A.size]


def is_isomorphic(A: FinRing, B: FinRing) -> bool:
    return bool(isomorphisms(A, B))


# -- annihilators, units, ideals -------------------------------------------


def annihilator(R: FinRing) -> frozenset:
    n, z = R.size, R.zero
    return frozenset(x for x in range(n)
                     if all(R.mul[x][y] == z and R.mul[y][x] == z for y in range(n)))


def is_non_degenerate(R: FinRing) -> bool:
    return annihilator(R) == {R.zero}


@dataclass
class LocalUnitsReport:
    per_element: bool  # every a has e, f with ae = fa = a
    whole_carrier: bool  # one e, f serve every element at once

    @property
    def has_local_units(self) -> bool:
        return self.per_element and self.whole_carrier


def local_units_report(R: FinRing) -> LocalUnitsReport:
    n = R.size
    per = all(any(R.mul[a][e] == a for e in range(n)) and any(R.mul[f][a] == a for f in range(n))
              for a in range(n))
    whole = (any(all(R.mul[a][e] == a for a in range(n)) for e in range(n))
             and any(all(R.mul[f][a] == a for a in range(n)) for f in range(n)))
    return LocalUnitsReport(per, whole)


def has_local_units(R: FinRing) -> bool:
    """Every finite subset (here: the carrier itself) has a two-sided local unit."""
    return local_units_report(R).has_local_units


def is_ideal(R: FinRing, I: Iterable[int]) -> bool:
    I = frozenset(I)
    if R.zero not in I:
        return False
    if any(R.add[x][y] not in I for x in I for y in I) or any(R.neg[x] not in I for x in I):
        return False
    return all(R.mul[r][x] in I and R.mul[x][r] in I for r in range(R.size) for x in I)


def ideals(R: FinRing) -> list[frozenset]:
    """All two-sided ideals, sorted by size then members."""
    found = {frozenset({R.zero})}
    frontier = [frozenset({R.zero})]
    while frontier:
        nxt = []
        for I in frontier:
            for x in range(R.size):
                if x in I:
                    continue
                J = ideal_generated(R, I | {x})
                if J not in found:
                    found.add(J)
                    nxt.append(J)
        frontier = nxt
    return sorted(found, key=lambda I: (len(I), sorted(I)))


def ideal_generated(R: FinRing, xs: Iterable[int]) -> frozenset:
    gen = frozenset(xs) | {R.zero}
    while True:
        grown = set(gen)
        for x in gen:
            for r in range(R.size):
                grown.add(R.mul[r][x])
                grown.add(R.mul[x][r])
        closure = R.span(grown)
        if closure == gen:
            return gen
        gen = closure


def ideal_sum(R: FinRing, I: frozenset, J: frozenset) -> frozenset:
    return R.span(I | J)


def is_essential_ideal(R: FinRing, I: Iterable[int]) -> bool:
    """Meets every nonzero ideal nontrivially."""
    I = frozenset(I)
    return all(len(I & J) > 1 for J in ideals(R) if len(J) > 1)


def ideal_lattice(R: FinRing):
    """Ideals ordered by inclusion, as a FinPoset with the ideal list."""
    from .posets import FinPoset

    ids = ideals(R)
    P = FinPoset(tuple(range(len(ids))),
                 tuple(tuple(a <= b for b in ids) for a in ids), f"Ideal({R.name})")
    return P, ids


def pseudocomplement(R: FinRing, I: Iterable[int]) -> frozenset | None:
    """Largest ideal meeting I in zero, when a largest one exists."""
    I = frozenset(I)
    orth = [J for J in ideals(R) if I & J == {R.zero}]
    for J in orth:
        if all(K <= J for K in orth):
            return J
    return None


# -- quotients -------------------------------------------------------------


def quotient(R: FinRing, J: Iterable[int]) -> tuple[FinRing, RingHom]:
    """R/J with the projection."""
    J = frozenset(J)
    if not is_ideal(R, J):
        raise RingError("quotient needs an ideal")
    cosets, of = [], {}
    for x in range(R.size):
        if x in of:
            continue
        c = frozenset(R.add[x][j] for j in J)
        for y in c:
            of[y] = len(cosets)
        cosets.append(c)
    reps = [min(c) for c in cosets]
    add = tuple(tuple(of[R.add[a][b]] for b in reps) for a in reps)
    mul = tuple(tuple(of[R.mul[a][b]] for b in reps) for a in reps)
    Q = FinRing(tuple(R.elements[r] for r in reps), add, mul, of[R.zero], f"{R.name}/J")
    return Q, RingHom(R, Q, tuple(of[x] for x in range(R.size)))


def subring(R: FinRing, S: Iterable[int], name: str = "") -> tuple[FinRing, RingHom]:
    """A subring (e.g. an ideal) as a ring of its own with its inclusion."""
    S = sorted(S)
    idx = {x: i for i, x in enumerate(S)}
    try:
        add = tuple(tuple(idx[R.add[a][b]] for b in S) for a in S)
        mul = tuple(tuple(idx[R.mul[a][b]] for b in S) for a in S)
    except KeyError:
        raise RingError("subset is not closed under the ring operations") from None
    T = FinRing(tuple(R.elements[x] for x in S), add, mul, idx[R.zero], name)
    return T, RingHom(T, R, tuple(S))


# -- multiplier rings ------------------------------------------------------


@dataclass
class MultiplierRing:
    base: FinRing
    pairs: tuple  # (λ, ρ) value tuples, sorted
    ring: FinRing
    embedding: RingHom  # base → ring


def _is_left_multiplier(R: FinRing, lam) -> bool:
    n = R.size
    return all(lam[R.mul[a][b]] == R.mul[lam[a]][b] for a in range(n) for b in range(n))


def _is_right_multiplier(R: FinRing, rho) -> bool:
    n = R.size
    return all(rho[R.mul[a][b]] == R.mul[a][rho[b]] for a in range(n) for b in range(n))


def _compatible(R: FinRing, lam, rho) -> bool:
    n = R.size
    return all(R.mul[a][lam[b]] == R.mul[rho[a]][b] for a in range(n) for b in range(n))


def multiplier_pairs(R: FinRing) -> list[tuple]:
    """Multipliers found by filtering each side before pairing."""
    ends = additive_homs(R, R)
    lams = [e for e in ends if _is_left_multiplier(R, e)]
    rhos = [e for e in ends if _is_right_multiplier(R, e)]
    return sorted((l, r) for l in lams for r in rhos if _compatible(R, l, r))


def multiplier_pairs_oracle(R: FinRing) -> list[tuple]:
    """Unpruned double loop over all additive endomorphism pairs."""
    ends = additive_homs(R, R)
    out = []
    for lam in ends:
        for rho in ends:
            if (_is_left_multiplier(R, lam) and _is_right_multiplier(R, rho)
                    and _compatible(R, lam, rho)):
                out.append((lam, rho))
    return sorted(out)


def multiplier_ring(R: FinRing, *, pairs: Sequence | None = None) -> MultiplierRing:
    if not is_non_degenerate(R):
        raise RingError(f"{R.name or 'ring'} is degenerate; its multiplier embedding is not injective")
    pairs = tuple(sorted(pairs if pairs is not None else multiplier_pairs(R)))
    idx = {p: i for i, p in enumerate(pairs)}
    n = R.size

    def padd(p, q):
        return (tuple(R.add[p[0][a]][q[0][a]] for a in range(n)),
                tuple(R.add[p[1][a]][q[1][a]] for a in range(n)))

    def pmul(p, q):
        return (tuple(p[0][q[0][a]] for a in range(n)), tuple(q[1][p[1][a]] for a in range(n)))

    add = tuple(tuple(idx[padd(p, q)] for q in pairs) for p in pairs)
    mul = tuple(tuple(idx[pmul(p, q)] for q in pairs) for p in pairs)
    zero_pair = (tuple([R.zero] * n), tuple([R.zero] * n))
    labels = tuple(f"m{i}" for i in range(len(pairs)))
    MR = FinRing(labels, add, mul, idx[zero_pair], f"M({R.name})")
    emb = tuple(idx[(tuple(R.mul[x][a] for a in range(n)), tuple(R.mul[a][x] for a in range(n)))]
                for x in range(n))
    return MultiplierRing(R, pairs, MR, RingHom(R, MR, emb))


def is_non_degenerate_hom(f: RingHom) -> bool:
    """f(A)B and Bf(A) both span B."""
    A, B = f.source, f.target
    img = set(f.values)
    left = B.span(B.mul[x][b] for x in img for b in range(B.size))
    right = B.span(B.mul[b][x] for x in img for b in range(B.size))
    return len(left) == B.size and len(right) == B.size


def _decompositions(B: FinRing, terms: dict) -> dict:
    """Express every element of span(terms) as a sum of terms.

    ``terms`` maps a product value to a witness; returns element → list of
    witnesses summing to it.
    """
    rep = {B.zero: []}
    frontier = [B.zero]
    while frontier:
        nxt = []
        for s in frontier:
            for t, w in terms.items():
                y = B.add[s][t]
                if y not in rep:
                    rep[y] = rep[s] + [w]
                    nxt.append(y)
        frontier = nxt
    return rep


def extend_multiplier_hom(f: RingHom, MA: MultiplierRing | None = None,
                          MB: MultiplierRing | None = None) -> RingHom:
    """The unique unital φ: M(A) → M(B) with φ∘μ_A = μ_B∘f.

    Built from b = Σ f(a_i) b_i ↦ Σ f(m a_i) b_i (and the mirror formula),
    then checked unique by searching all unital homs.
    """
    A, B = f.source, f.target
    if not (is_non_degenerate(A) and is_non_degenerate(B)):
        raise RingError("both rings must be non-degenerate")
    if not is_non_degenerate_hom(f):
        raise RingError("f is degenerate")
    MA = MA or multiplier_ring(A)
    MB = MB or multiplier_ring(B)
    left = _decompositions(B, {B.mul[f(a)][b]: (a, b) for a in range(A.size) for b in range(B.size)})
    right = _decompositions(B, {B.mul[b][f(a)]: (b, a) for a in range(A.size) for b in range(B.size)})
    idx = {p: i for i, p in enumerate(MB.pairs)}
    vals = []
    for lam, rho in MA.pairs:
        L = tuple(B.sum(B.mul[f(lam[a])][b] for a, b in left[y]) for y in range(B.size))
        R_ = tuple(B.sum(B.mul[b][f(rho[a])] for b, a in right[y]) for y in range(B.size))
        if (L, R_) not in idx:
            raise AssertionError("constructed extension is not a multiplier")
        vals.append(idx[(L, R_)])
    phi = RingHom(MA.ring, MB.ring, tuple(vals))
    target = tuple(MB.embedding(f(a)) for a in range(A.size))
    found = [v for v in ring_homs(MA.ring, MB.ring)
             if RingHom(MA.ring, MB.ring, v).is_unital()
             and tuple(v[MA.embedding(a)] for a in range(A.size)) == target]
    if found != [phi.values]:
        raise AssertionError(f"extension search found {len(found)} candidates")
    return phi


def lift_ideal_embedding(f: RingHom, MA: MultiplierRing | None = None,
                         MB: MultiplierRing | None = None) -> RingHom:
    """The unital ψ: M(B) → M(A) with ψ∘μ_B∘f = μ_A, from a·ψ(m) = f(a)·m."""
    A, B = f.source, f.target
    if not f.is_injective():
        raise RingError("f must be injective")
    if not is_ideal(B, f.image()):
        raise RingError("image of f is not an ideal")
    MA = MA or multiplier_ring(A)
    MB = MB or multiplier_ring(B)
    inv = {v: a for a, v in enumerate(f.values)}
    idx = {p: i for i, p in enumerate(MA.pairs)}
    vals = []
    for lam, rho in MB.pairs:
        try:
            # m·a is λ(a) and a·m is ρ(a)
            L = tuple(inv[lam[f(a)]] for a in range(A.size))
            R_ = tuple(inv[rho[f(a)]] for a in range(A.size))
        except KeyError:
            raise RingError("image of f is not stable under the multipliers of B") from None
        if (L, R_) not in idx:
            raise AssertionError("lifted pair is not a multiplier")
        vals.append(idx[(L, R_)])
    psi = RingHom(MB.ring, MA.ring, tuple(vals))
    muA = MA.embedding.values
    found = [v for v in ring_homs(MB.ring, MA.ring)
             if RingHom(MB.ring, MA.ring, v).is_unital()
             and all(v[MB.embedding(f(a))] == muA[a] for a in range(A.size))]
    if found != [psi.values]:
        raise AssertionError(f"lift search found {len(found)} candidates")
    return psi


# -- lemma checks ----------------------------------------------------------


@dataclass
class LemmaReport:
    holds: bool
    details: dict = field(default_factory=dict)


def check_quotient_kernel(R: FinRing, I: Iterable[int]) -> LemmaReport:
    """p: R → R/I⊥ composed with the inclusion of I is injective with
    essential-ideal image."""
    I = frozenset(I)
    if not is_ideal(R, I):
        raise RingError("I is not an ideal")
    J = pseudocomplement(R, I)
    if J is None:
        raise RingError("pseudocomplement does not exist")
    Q, p = quotient(R, J)
    xi = tuple(p(x) for x in sorted(I))
    injective = len(set(xi)) == len(I)
    image = frozenset(xi)
    ideal = is_ideal(Q, image)
    essential = ideal and is_essential_ideal(Q, image)
    return LemmaReport(injective and essential,
                       {"injective": injective, "ideal": ideal, "essential": essential,
                        "quotient_size": Q.size})


def check_trivial_complement(R: FinRing, I: Iterable[int]) -> LemmaReport:
    """Three assertions about the inclusion m: I → R, each quantified over
    quotient maps (every homomorphism factors through one)."""
    I = frozenset(I)
    if not is_ideal(R, I):
        raise RingError("I is not an ideal")
    quotients = []
    for J in ideals(R):
        Q, p = quotient(R, J)
        pm = [p(x) for x in sorted(I)]
        quotients.append((J, Q, p, len(set(pm)) == len(I), frozenset(pm)))
    # (1) p∘m monic forces p monic
    essential_monic = all(p.is_injective() for J, Q, p, inj, img in quotients if inj)
    # (2) p∘m a normal monic forces p monic
    pushforward = all(p.is_injective() for J, Q, p, inj, img in quotients
                      if inj and is_ideal(Q, img))
    # (3) every ideal orthogonal to I is zero
    orthogonal = all(len(J) == 1 for J in ideals(R) if I & J == {R.zero})
    vals = (essential_monic, pushforward, orthogonal)
    return LemmaReport(len(set(vals)) == 1,
                       {"essential_monic": essential_monic, "pushforward": pushforward,
                        "orthogonal_trivial": orthogonal})


# -- universe and capacitor ------------------------------------------------


@dataclass
class RingUniverse:
    category: object
    monopole: object
    rings: list

    def hom_of(self, f: int) -> RingHom:
        C = self.category
        return RingHom(self.rings[C.src[f]], self.rings[C.tgt[f]], C.data[f])

    def arrows_where(self, pred) -> frozenset:
        return frozenset(f for f in self.category.arrows() if pred(self.hom_of(f)))


def is_normal_monic_hom(f: RingHom) -> bool:
    """Injective with ideal image."""
    return f.is_injective() and is_ideal(f.target, f.image())


def is_essential_ideal_embedding(f: RingHom) -> bool:
    return is_normal_monic_hom(f) and is_essential_ideal(f.target, f.image())


def _dedupe(rings: Iterable[FinRing]) -> list[FinRing]:
    out = []
    for R in rings:
        if not any(S.size == R.size and is_isomorphic(S, R) for S in out):
            out.append(R)
    return out


def materialize_ring_universe(rings: Iterable[FinRing], *, closure: bool = False,
                              budget: int | None = DEFAULT_ARROW_BUDGET) -> RingUniverse:
    """Category of the rings and all ring homs; positives are injective homs
    with ideal image, which also decide normality of monics."""
    from .polarity import monopole

    rs = _dedupe(rings)
    for R in rs:
        if not is_non_degenerate(R):
            raise RingError(f"{R.name} is degenerate")
    if closure:
        rs = _dedupe(rs + [multiplier_ring(R).ring for R in rs])
    homs, total = {}, 0
    for i, R in enumerate(rs):
        for j, S in enumerate(rs):
            homs[(i, j)] = ring_homs(R, S)
            total += len(homs[(i, j)])
            if budget is not None and total > budget:
                raise BudgetExceeded(f"ring universe exceeds {budget} arrows")
    names = []
    for R in rs:
        name = R.name or f"R{len(names)}"
        while name in names:
            name += "'"
        names.append(name)
    C = concrete_category(names, [R.size for R in rs], homs, name="rings", budget=budget)
    U = RingUniverse(C, None, rs)
    U.monopole = monopole(C, U.arrows_where(is_normal_monic_hom), name="ideal embeddings")
    C.normal_monic_rule = lambda f: f in U.monopole.positive
    return U


def build_ring_capacitor(rings: Iterable[FinRing], *, closure: bool = True,
                         budget: int | None = DEFAULT_ARROW_BUDGET):
    """H = essential-ideal embeddings; E = unital rings (listed ones plus
    multiplier rings) with unital homs; family = multiplier units."""
    from .capacitor import CapacitorSpec, inclusion_functor

    univ = materialize_ring_universe(rings, closure=closure, budget=budget)
    C = univ.category
    H = univ.arrows_where(is_essential_ideal_embedding)
    unital = [i for i, R in enumerate(univ.rings) if R.is_unital]
    keep = set(unital)
    e_arrows = [f for f in C.arrows()
                if C.src[f] in keep and C.tgt[f] in keep and univ.hom_of(f).is_unital()]
    E, U = inclusion_functor(C, unital, e_arrows)
    family = {}
    for x, R in enumerate(univ.rings):
        family[x] = None
        MR = multiplier_ring(R)
        for b, y in enumerate(unital):
            S = univ.rings[y]
            isos = isomorphisms(MR.ring, S)
            if not isos:
                continue
            unit = min(tuple(iso[MR.embedding(a)] for a in range(R.size)) for iso in isos)
            family[x] = (C.data_index[(x, y, unit)], b)
            break
    # every hom between finite rings is strictly continuous (discrete topology)
    return CapacitorSpec(univ.monopole, H, E, U, family, name="rings", kind="ring",
                         extras={"universe": univ, "strict_topology": "discrete"})


def ring_from_json(doc: dict) -> FinRing:
    try:
        return make_ring(doc["elements"], doc["add"], doc["mul"], str(doc.get("name", "")),
                         doc.get("zero"))
    except KeyError as exc:
        raise RingError(f"ring entry lacks {exc}") from None


def ring_to_json(R: FinRing) -> dict:
    def lab(x):
        e = R.elements[x]
        return e if isinstance(e, (int, str)) else str(e)

    n = R.size
    return {
        "name": R.name,
        "elements": [lab(x) for x in range(n)],
        "add": [[lab(R.add[a][b]) for b in range(n)] for a in range(n)],
        "mul": [[lab(R.mul[a][b]) for b in range(n)] for a in range(n)],
    }

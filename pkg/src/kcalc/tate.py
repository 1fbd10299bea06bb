"""Tate cohomology of involutions.

h+(A, t) = ker(1 - t) / im(1 + t) and h-(A, t) = ker(1 + t) / im(1 - t), for a
finitely generated abelian group A given by a presentation and an involution
given on generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

from .errors import PreconditionError, StructuralError
from .exactlin import (FinAbGroup, GroupMap, IntMatrix, Presentation, column_kernel,
                       coordinates_in_basis, lattice_basis, quotient_presentation)


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _kron(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    return [[x * y for x in ra for y in rb] for ra in a for rb in b]


@dataclass(frozen=True)
class InvolutiveModule:
    """An abelian group Z^n/R with an involution T (column j = T(e_j))."""

    presentation: Presentation
    T: IntMatrix

    def __post_init__(self):
        n = self.presentation.gens
        if self.T.rows != n or self.T.cols != n:
            raise StructuralError("involution matrix has the wrong shape")
        t = GroupMap(self.presentation, self.presentation, self.T)
        t.check()
        sq = self.T @ self.T
        for j, col in enumerate(sq.transpose().to_rows()):
            diff = [c - int(i == j) for i, c in enumerate(col)]
            if not self.presentation.is_zero(diff):
                raise StructuralError("T is not an involution: T^2 != id")

    @classmethod
    def free(cls, T: Sequence[Sequence[int]]) -> InvolutiveModule:
        m = IntMatrix.from_rows(T)
        return cls(Presentation.free(m.rows), m)

    @classmethod
    def of(cls, group: FinAbGroup, T: Sequence[Sequence[int]]) -> InvolutiveModule:
        p = group.presentation()
        return cls(p, IntMatrix.from_rows(T, p.gens) if T else IntMatrix.zeros(0, 0))

    @property
    def rank(self) -> int:
        return self.presentation.gens

    def group(self) -> FinAbGroup:
        return self.presentation.group()

    def is_free(self) -> bool:
        return self.group().is_free

    def trace(self) -> int:
        return sum(self.T[i, i] for i in range(self.rank))


@dataclass(frozen=True)
class InvolutiveRing:
    """Involutive module with structure constants: mult[i][j] = coordinates of e_i e_j."""

    module: InvolutiveModule
    mult: tuple[tuple[tuple[int, ...], ...], ...]
    unit: tuple[int, ...]

    def __post_init__(self):
        n = self.module.rank
        if len(self.mult) != n or any(len(r) != n for r in self.mult):
            raise StructuralError("structure constants have the wrong shape")
        p = self.module.presentation

        def eq(a, b):
            return p.is_zero([x - y for x, y in zip(a, b)])

        for i in range(n):
            e = [int(k == i) for k in range(n)]
            if not eq(self.mul(self.unit, e), e):
                raise StructuralError("unit law fails")
            for j in range(n):
                if not eq(self.mult[i][j], self.mult[j][i]):
                    raise StructuralError("multiplication is not commutative")
                for k in range(n):
                    ek = [int(x == k) for x in range(n)]
                    if not eq(self.mul(self.mult[i][j], ek), self.mul(e, self.mult[j][k])):
                        raise StructuralError("multiplication is not associative")
        T = self.module.T
        for i in range(n):
            for j in range(n):
                lhs = T.apply(list(self.mult[i][j]))
                ti = T.apply([int(k == i) for k in range(n)])
                tj = T.apply([int(k == j) for k in range(n)])
                if not eq(lhs, self.mul(ti, tj)):
                    raise StructuralError("T is not a ring map")

    def mul(self, a: Sequence[int], b: Sequence[int]) -> list[int]:
        n = self.module.rank
        out = [0] * n
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        for k, c in enumerate(self.mult[i][j]):
                            out[k] += x * y * c
        return out


@dataclass(frozen=True)
class TateGroup:
    """A Tate group as a subquotient of Z^n, with coordinates for representatives."""

    group: FinAbGroup
    numerator: tuple[tuple[int, ...], ...]  # lattice basis of the cycles (including R)
    quotient: Presentation  # cycles in that basis modulo boundaries

    def coords(self, vec: Sequence[int]) -> tuple[int, ...]:
        c = coordinates_in_basis([list(b) for b in self.numerator], vec)
        if c is None:
            raise StructuralError("vector is not a cycle")
        return self.quotient.decomposition().coords(c)

    def generators(self) -> list[list[int]]:
        """Representatives in Z^n of the canonical generators."""
        dec = self.quotient.decomposition()
        out = []
        for k in range(dec.group.ngens):
            c = dec.generator(k)
            out.append([sum(ci * b[j] for ci, b in zip(c, self.numerator))
                        for j in range(len(self.numerator[0]))])
        return out


def _tate(m: InvolutiveModule, sign: int) -> TateGroup:
    n = m.rank
    I = _identity(n)
    t = m.T.to_rows()
    kmat = [[I[i][j] - sign * t[i][j] for j in range(n)] for i in range(n)]  # 1 - sign t
    imat = [[I[i][j] + sign * t[i][j] for j in range(n)] for i in range(n)]  # 1 + sign t
    p = m.presentation
    kmap = GroupMap(p, p, IntMatrix.from_rows(kmat, n))
    cycles = kmap.preimage_of_relations() + p.rel_rows()
    basis = lattice_basis(cycles, n)
    bounds = [list(c) for c in zip(*imat)] + p.rel_rows() if n else []
    coords = []
    for b in bounds:
        if not any(b):
            continue
        c = coordinates_in_basis(basis, b)
        if c is None:
            raise StructuralError("boundary is not a cycle; T is not an involution")
        coords.append(c)
    q = Presentation(len(basis), IntMatrix.from_rows(coords, len(basis)))
    return TateGroup(q.group(), tuple(map(tuple, basis)), q)


def h_plus_group(m: InvolutiveModule) -> TateGroup:
    return _tate(m, 1)


def h_minus_group(m: InvolutiveModule) -> TateGroup:
    return _tate(m, -1)


def h_plus(m: InvolutiveModule) -> FinAbGroup:
    return _tate(m, 1).group


def h_minus(m: InvolutiveModule) -> FinAbGroup:
    return _tate(m, -1).group


def tensor_involutive(a: InvolutiveModule, b: InvolutiveModule) -> InvolutiveModule:
    na, nb = a.rank, b.rank
    rels = []
    for r in a.presentation.rel_rows():
        for j in range(nb):
            rels.append([x * int(k == j) for x in r for k in range(nb)])
    for r in b.presentation.rel_rows():
        for i in range(na):
            rels.append([int(k == i) * y for k in range(na) for y in r])
    p = Presentation(na * nb, IntMatrix.from_rows(rels, na * nb))
    T = IntMatrix.from_rows(_kron(a.T.to_rows(), b.T.to_rows()), na * nb)
    return InvolutiveModule(p, T)


@dataclass
class KunnethReport:
    plus_lhs: FinAbGroup
    plus_rhs: FinAbGroup
    minus_lhs: FinAbGroup
    minus_rhs: FinAbGroup
    plus_canonical_iso: bool
    minus_canonical_iso: bool

    @property
    def ok(self) -> bool:
        return (self.plus_lhs == self.plus_rhs and self.minus_lhs == self.minus_rhs
                and self.plus_canonical_iso and self.minus_canonical_iso)


def _canonical_map(ga: TateGroup, gb: TateGroup, target: TateGroup, nb: int):
    """Matrix and source relations of ha ⊗ hb -> h(a⊗b), x⊗y -> x⊗y."""
    cols = []
    rels = []
    k = 0
    oa, ob = ga.group.orders(), gb.group.orders()
    reps_a, reps_b = ga.generators(), gb.generators()
    for i, x in enumerate(reps_a):
        for j, y in enumerate(reps_b):
            vec = [xi * yj for xi in x for yj in y]
            cols.append(list(target.coords(vec)))
            o = gcd(oa[i], ob[j])
            rels.append((k, o))
            k += 1
    return cols, rels


def kunneth_check(a: InvolutiveModule | InvolutiveRing, b: InvolutiveModule | InvolutiveRing) -> KunnethReport:
    """Compare h±(a⊗b) with (h+a⊗h±b) ⊕ (h-a⊗h∓b), both abstractly and via the canonical map."""
    ma = a.module if isinstance(a, InvolutiveRing) else a
    mb = b.module if isinstance(b, InvolutiveRing) else b
    if not ma.is_free():
        raise PreconditionError("the first factor must be free as an abelian group")
    ab = tensor_involutive(ma, mb)
    hp = {s: _tate(ma, s) for s in (1, -1)}
    hq = {s: _tate(mb, s) for s in (1, -1)}
    out = {}
    iso = {}
    for s in (1, -1):
        lhs = _tate(ab, s)
        rhs = hp[1].group.tensor(hq[s].group) + hp[-1].group.tensor(hq[-s].group)
        cols, rels = [], []
        for sa, sb in ((1, s), (-1, -s)):
            c, r = _canonical_map(hp[sa], hq[sb], lhs, mb.rank)
            off = len(cols)
            cols += c
            rels += [(k + off, o) for k, o in r]
        k = len(cols)
        src = Presentation(k, IntMatrix.from_rows(
            [[o if j == i else 0 for j in range(k)] for i, o in rels if o], k))
        tgt = lhs.group.presentation()
        mat = IntMatrix.from_rows([[cols[j][i] for j in range(k)] for i in range(tgt.gens)], k) \
            if tgt.gens else IntMatrix.zeros(0, k)
        f = GroupMap(src, tgt, mat)
        iso[s] = f.well_formed() and f.is_iso()
        out[s] = (lhs.group, rhs)
    return KunnethReport(out[1][0], out[1][1], out[-1][0], out[-1][1], iso[1], iso[-1])


@dataclass(frozen=True)
class BousfieldCounts:
    plus: int
    minus: int
    swap: int


def bousfield_decompose(m: InvolutiveModule) -> BousfieldCounts:
    """Counts of trivial, sign and swap summands of a free Z[C2]-lattice.

    The ±1 eigenlattices are saturated sublattices; their sum has index 2^swap.
    """
    if not m.is_free():
        raise PreconditionError("Bousfield decomposition needs a free module")
    if m.presentation.rel_rows():
        raise PreconditionError("give free modules without relations")
    n = m.rank
    t = m.T.to_rows()
    I = _identity(n)
    lp = column_kernel([[t[i][j] - I[i][j] for j in range(n)] for i in range(n)], n)
    lm = column_kernel([[t[i][j] + I[i][j] for j in range(n)] for i in range(n)], n)
    both = lp + lm
    g = quotient_presentation(n, both)
    if g.free_rank or any(x != 2 for x in g.torsion):
        raise StructuralError(f"eigenlattice sum has unexpected cokernel {g}")
    swap = len(g.torsion)
    counts = BousfieldCounts(len(lp) - swap, len(lm) - swap, swap)
    # the invariants that pin the decomposition down
    if h_plus(m) != FinAbGroup(0, (2,) * counts.plus) or h_minus(m) != FinAbGroup(0, (2,) * counts.minus):
        raise StructuralError("Tate groups disagree with the decomposition")
    if m.trace() != counts.plus - counts.minus:
        raise StructuralError("trace disagrees with the decomposition")
    return counts


def permutation_module(n_fixed: int, n_pairs: int, sign: int = 1) -> InvolutiveModule:
    """Fixed basis vectors (acted on by ``sign``) plus swapped pairs."""
    n = n_fixed + 2 * n_pairs
    T = [[0] * n for _ in range(n)]
    for i in range(n_fixed):
        T[i][i] = sign
    for k in range(n_pairs):
        i = n_fixed + 2 * k
        T[i][i + 1] = T[i + 1][i] = 1
    return InvolutiveModule.free(T) if n else InvolutiveModule(Presentation.free(0), IntMatrix.zeros(0, 0))

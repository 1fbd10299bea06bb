"""Exact integer linear algebra.

Smith normal form over Z with transforms, and the small calculus of finitely
generated abelian groups built on it: canonical forms, presentations,
homomorphisms, kernels, images and cokernels.

    >>> quotient_presentation(2, IntMatrix.from_rows([[5, 0], [0, 5]]))
    FinAbGroup(free_rank=0, torsion=(5, 5))
    >>> smith_normal_form(IntMatrix.from_rows([[2, 4], [6, 8]]))[1].to_rows()
    [[2, 0], [0, 4]]
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

from .errors import StructuralError

Rows = list[list[int]]


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise StructuralError("matrix shape must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise StructuralError(
                f"entry count {len(self.entries)} != {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise StructuralError("ragged matrix rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    def to_rows(self) -> Rows:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def transpose(self) -> IntMatrix:
        return IntMatrix.from_rows([list(col) for col in zip(*self.to_rows())] if self.rows else
                                   [[] for _ in range(self.cols)], self.rows)

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise StructuralError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        return IntMatrix.from_rows(matmul(self.to_rows(), other.to_rows(), other.cols), other.cols)

    def apply(self, v: Sequence[int]) -> list[int]:
        """Matrix times column vector."""
        if len(v) != self.cols:
            raise StructuralError("vector length mismatch")
        return [sum(a * b for a, b in zip(row, v)) for row in self.to_rows()]

    def det(self) -> int:
        if self.rows != self.cols:
            raise StructuralError("determinant of a non-square matrix")
        return bareiss_det(self.to_rows())

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "entries": self.to_rows()}


def matmul(a: Rows, b: Rows, bcols: int | None = None) -> Rows:
    if bcols is None:
        bcols = len(b[0]) if b else 0
    bt = list(zip(*b)) if b else [() for _ in range(bcols)]
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def bareiss_det(m: Rows) -> int:
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pk, rk = a[k][k], a[k]
        for i in range(k + 1, n):
            ri, x = a[i], a[i][k]
            a[i] = [(y * pk - x * z) // prev for y, z in zip(ri, rk)]
        prev = pk
    return sign * a[n - 1][n - 1]


def _as_rows(m: IntMatrix | Sequence[Sequence[int]]) -> tuple[Rows, int]:
    if isinstance(m, IntMatrix):
        return m.to_rows(), m.cols
    rows = [list(r) for r in m]
    return rows, (len(rows[0]) if rows else 0)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def snf_rows(a: Rows, ncols: int, track: bool = True):
    """Smith normal form on list-of-lists. Returns (U, D, V) with U a V = D.

    Pivoting is column-driven: the active column is the first one with a
    nonzero entry in the active rows, and the pivot is its entry of smallest
    absolute value (lowest row index on ties).  The diagonal is then brought
    into a divisibility chain by gcd/lcm steps on pairs of diagonal entries.
    With ``track=False`` U and V are None.
    """
    m, n = len(a), ncols
    d = [list(row) for row in a]
    u = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    # V is stored transposed so column operations become row operations
    vt = [[int(i == j) for j in range(n)] for i in range(n)] if track else None

    def row_axpy(rows, dst, src, k):
        rows[dst] = [x + k * y for x, y in zip(rows[dst], rows[src])]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        if track:
            vt[i], vt[j] = vt[j], vt[i]

    rank = 0
    col = 0
    while rank < m and col < n:
        t = rank
        while col < n and not any(d[i][col] for i in range(t, m)):
            col += 1
        if col == n:
            break
        if col != t:
            swap_cols(col, t)
        while True:
            while True:
                piv = None
                for i in range(t, m):
                    x = d[i][t]
                    if x and (piv is None or abs(x) < abs(d[piv][t])):
                        piv = i
                if piv != t:
                    d[t], d[piv] = d[piv], d[t]
                    if track:
                        u[t], u[piv] = u[piv], u[t]
                p = d[t][t]
                done = True
                for i in range(t + 1, m):
                    x = d[i][t]
                    if x:
                        q = x // p
                        row_axpy(d, i, t, -q)
                        if track:
                            row_axpy(u, i, t, -q)
                        if d[i][t]:
                            done = False
                if done:
                    break
            # column t is now zero below the pivot, so clearing row t only
            # touches row t of D
            p = d[t][t]
            rt = d[t]
            left = False
            for j in range(t + 1, n):
                x = rt[j]
                if x:
                    q = x // p
                    rt[j] = x - q * p
                    if track:
                        row_axpy(vt, j, t, -q)
                    if rt[j]:
                        left = True
            if not left:
                break
            j = min((j for j in range(t + 1, n) if rt[j]), key=lambda j: (abs(rt[j]), j))
            swap_cols(j, t)
        if d[t][t] < 0:
            d[t][t] = -d[t][t]
            if track:
                u[t] = [-x for x in u[t]]
        rank += 1
        col = rank

    for i in range(rank):
        for j in range(i + 1, rank):
            a_, b_ = d[i][i], d[j][j]
            if b_ % a_ == 0:
                continue
            g, s, tt = _xgcd(a_, b_)
            # rows i += j; columns (i, j) -> (s i + t j, -(b/g) i + (a/g) j);
            # rows j -= (t b / g) i.  Leaves diag(g, lcm).
            if track:
                row_axpy(u, i, j, 1)
                ci, cj = vt[i], vt[j]
                vt[i] = [s * x + tt * y for x, y in zip(ci, cj)]
                vt[j] = [-(b_ // g) * x + (a_ // g) * y for x, y in zip(ci, cj)]
                row_axpy(u, j, i, -(tt * b_ // g))
            d[i][i], d[j][j] = g, a_ // g * b_
    v = [list(r) for r in zip(*vt)] if track else None
    return u, d, v


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return unimodular U, V and diagonal D with U @ m @ V == D."""
    u, d, v = snf_rows(m.to_rows(), m.cols)
    return (IntMatrix.from_rows(u, m.rows), IntMatrix.from_rows(d, m.cols),
            IntMatrix.from_rows(v, m.cols))


def diagonal(d: Rows) -> list[int]:
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i]]


# below this size the plain elimination is faster than paying for a determinant
MODULAR_MIN = 40


def _modular_factors(rows: Rows, det: int) -> list[int]:
    """Invariant factors of a nonsingular square matrix, working mod det.

    det * Z^n lies in the row lattice, so reducing entries mod det does not
    change it.  The diagonal is put into a divisibility chain at the end.
    """
    n, D = len(rows), det
    a = [[x % D for x in r] for r in rows]
    out = []
    for t in range(n):
        while True:
            for i in range(t + 1, n):
                x = a[i][t]
                if not x:
                    continue
                p, rt = a[t][t], a[t]
                if p and x % p == 0:
                    q = x // p
                    a[i] = [(z - q * y) % D for y, z in zip(rt, a[i])]
                    continue
                g, s, u = _xgcd(p, x)
                pg, xg = p // g, x // g
                ri = a[i]
                a[t] = [(s * y + u * z) % D for y, z in zip(rt, ri)]
                a[i] = [(pg * z - xg * y) % D for y, z in zip(rt, ri)]
            rt = a[t]
            p = rt[t]
            # column t is clear below the pivot, so if p divides row t the
            # column operations only touch row t itself
            if p and all(x % p == 0 for x in rt[t + 1:]):
                break
            for j in range(t + 1, n):
                x = rt[j]
                if not x:
                    continue
                p = rt[t]
                if p and x % p == 0:
                    q = x // p
                    for r in a[t:]:
                        r[j] = (r[j] - q * r[t]) % D
                    continue
                g, s, u = _xgcd(p, x)
                pg, xg = p // g, x // g
                for r in a[t:]:
                    y, z = r[t], r[j]
                    r[t], r[j] = (s * y + u * z) % D, (pg * z - xg * y) % D
            if not any(a[i][t] for i in range(t + 1, n)):
                break
        out.append(gcd(a[t][t], D))
    for i in range(n):
        for j in range(i + 1, n):
            x, y = out[i], out[j]
            if y % x:
                g = gcd(x, y)
                out[i], out[j] = g, x // g * y
    return out


def invariant_factors(rows: Rows, ncols: int) -> list[int]:
    if len(rows) == ncols >= MODULAR_MIN:
        det = bareiss_det(rows)
        if det:
            return _modular_factors(rows, abs(det))
    _, d, _ = snf_rows(rows, ncols, track=False)
    return diagonal(d)


# --------------------------------------------------------------------------
# finitely generated abelian groups

@dataclass(frozen=True)
class FinAbGroup:
    """Z^free_rank + Z/d1 + ... + Z/dk with d1 | d2 | ... and each di >= 2."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(x) for x in self.torsion))
        if self.free_rank < 0:
            raise StructuralError("free rank must be nonnegative")
        for i, t in enumerate(self.torsion):
            if t < 2:
                raise StructuralError(f"invariant factor {t} < 2")
            if i and t % self.torsion[i - 1]:
                raise StructuralError(f"divisibility chain broken at {self.torsion}")

    @classmethod
    def from_orders(cls, free_rank: int = 0, orders: Iterable[int] = ()) -> FinAbGroup:
        """Canonical form of Z^free_rank plus cyclic groups of arbitrary orders (0 = Z)."""
        orders = list(orders)
        free_rank += sum(1 for o in orders if o == 0)
        finite = [abs(o) for o in orders if o not in (0, 1, -1)]
        if not finite:
            return cls(free_rank, ())
        rows = [[o if i == j else 0 for j in range(len(finite))] for i, o in enumerate(finite)]
        return cls(free_rank, tuple(x for x in invariant_factors(rows, len(finite)) if x > 1))

    @classmethod
    def from_json(cls, obj: dict) -> FinAbGroup:
        return cls(int(obj["free_rank"]), tuple(obj["torsion"]))

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_free(self) -> bool:
        return not self.torsion

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for t in self.torsion:
            out *= t
        return out

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    def orders(self) -> list[int]:
        """Orders of the canonical generators, free ones first (0 = infinite)."""
        return [0] * self.free_rank + list(self.torsion)

    def two_rank(self) -> int:
        return sum(1 for t in self.torsion if t % 2 == 0)

    def has_two_torsion(self) -> bool:
        return self.two_rank() > 0

    def __add__(self, other: FinAbGroup) -> FinAbGroup:
        return FinAbGroup.from_orders(self.free_rank + other.free_rank,
                                      list(self.torsion) + list(other.torsion))

    def tensor(self, other: FinAbGroup) -> FinAbGroup:
        orders = []
        for a in self.orders():
            for b in other.orders():
                orders.append(gcd(a, b))
        return FinAbGroup.from_orders(0, orders)

    def mod(self, m: int) -> FinAbGroup:
        """self / m self."""
        return self.tensor(FinAbGroup(0, (m,)) if m > 1 else FinAbGroup())

    def presentation(self) -> Presentation:
        k = self.ngens
        rels = [[t if j == self.free_rank + i else 0 for j in range(k)]
                for i, t in enumerate(self.torsion)]
        return Presentation(k, IntMatrix.from_rows(rels, k))

    def __str__(self) -> str:
        if self.is_trivial:
            return "0"
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        i = 0
        tors = list(self.torsion)
        while i < len(tors):
            j = i
            while j < len(tors) and tors[j] == tors[i]:
                j += 1
            parts.append(f"Z_{tors[i]}" + (f"^{j - i}" if j - i > 1 else ""))
            i = j
        return " + ".join(parts)


ZERO = FinAbGroup()
Z = FinAbGroup(1)


def quotient_presentation(gens: int, rels: IntMatrix | Sequence[Sequence[int]]) -> FinAbGroup:
    """Canonical form of Z^gens / rowspan(rels)."""
    rows, cols = _as_rows(rels)
    if rows and cols != gens:
        raise StructuralError(f"relations have {cols} columns, expected {gens}")
    d = invariant_factors(rows, gens) if rows else []
    return FinAbGroup(gens - len(d), tuple(x for x in d if x > 1))


# --------------------------------------------------------------------------
# lattices

def solve_int(a: Rows, ncols: int, b: Sequence[int]) -> list[int] | None:
    """Integer solution x of a x = b (a given by rows), or None."""
    m = len(a)
    if len(b) != m:
        raise StructuralError("right-hand side length mismatch")
    if m == 0:
        return [0] * ncols
    u, d, v = snf_rows(a, ncols)
    ub = [sum(x * y for x, y in zip(row, b)) for row in u]
    y = [0] * ncols
    for i in range(m):
        di = d[i][i] if i < ncols else 0
        if di:
            if ub[i] % di:
                return None
            y[i] = ub[i] // di
        elif ub[i]:
            return None
    return [sum(v[i][j] * y[j] for j in range(ncols)) for i in range(ncols)]


def in_rowspan(rows: Rows, ncols: int, vec: Sequence[int]) -> bool:
    if not any(vec):
        return True
    if not rows:
        return False
    return solve_int([list(c) for c in zip(*rows)], len(rows), list(vec)) is not None


def column_kernel(a: Rows, ncols: int) -> Rows:
    """Basis (as rows) of {x in Z^ncols : a x = 0}."""
    if not a:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    _, d, v = snf_rows(a, ncols)
    r = len(diagonal(d))
    return [[v[i][j] for i in range(ncols)] for j in range(r, ncols)]


def lattice_basis(gens: Rows, ncols: int) -> Rows:
    """A Z-basis (rows) of the lattice spanned by the given rows."""
    gens = [g for g in gens if any(g)]
    if not gens:
        return []
    _, d, v = snf_rows(gens, ncols)
    diag = diagonal(d)
    vinv = _unimodular_inverse(v)
    return [[diag[i] * x for x in vinv[i]] for i in range(len(diag))]


def _unimodular_inverse(v: Rows) -> Rows:
    n = len(v)
    # solve v X = I column by column via SNF of v (v is unimodular so this is exact)
    u, d, w = snf_rows(v, n)
    # u v w = d (diagonal of units) => v^{-1} = w d^{-1} u
    dinv = [[(d[i][i] if i == j else 0) for j in range(n)] for i in range(n)]  # d^{-1} = d for +-1
    return matmul(matmul(w, dinv, n), u, n)


def coordinates_in_basis(basis: Rows, vec: Sequence[int]) -> list[int] | None:
    """Integer coefficients c with sum c_i basis_i = vec, or None."""
    if not basis:
        return [] if not any(vec) else None
    return solve_int([list(c) for c in zip(*basis)], len(basis), list(vec))


def subquotient(numer: Rows, denom: Rows, ncols: int) -> FinAbGroup:
    """numer-lattice / denom-lattice, both given by spanning rows; denom must lie in numer."""
    basis = lattice_basis(numer, ncols)
    coords = []
    for g in denom:
        if not any(g):
            continue
        c = coordinates_in_basis(basis, g)
        if c is None:
            raise StructuralError("denominator lattice is not contained in numerator")
        coords.append(c)
    return quotient_presentation(len(basis), IntMatrix.from_rows(coords, len(basis)))


# --------------------------------------------------------------------------
# presentations and maps

@dataclass(frozen=True)
class Presentation:
    """Z^gens / rowspan(relations)."""

    gens: int
    relations: IntMatrix = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.relations is None:
            object.__setattr__(self, "relations", IntMatrix.zeros(0, self.gens))
        if self.relations.cols != self.gens and self.relations.rows:
            raise StructuralError("relation width differs from generator count")

    @classmethod
    def free(cls, n: int) -> Presentation:
        return cls(n, IntMatrix.zeros(0, n))

    def rel_rows(self) -> Rows:
        return [r for r in self.relations.to_rows() if any(r)]

    def group(self) -> FinAbGroup:
        return quotient_presentation(self.gens, self.rel_rows())

    def decomposition(self) -> Decomposition:
        return Decomposition.of(self)

    def is_zero(self, vec: Sequence[int]) -> bool:
        return in_rowspan(self.rel_rows(), self.gens, vec)


@dataclass(frozen=True)
class Decomposition:
    """Explicit isomorphism Z^gens/R -> canonical group, via the SNF column transform.

    The coordinate of v is (v V) read off per diagonal slot: slots with d=1 are
    dropped, slots with d>1 are taken mod d, slots beyond the rank are free.
    """

    presentation: Presentation
    group: FinAbGroup
    v: tuple[tuple[int, ...], ...]
    vinv: tuple[tuple[int, ...], ...]
    slots: tuple[tuple[int, int], ...]  # (column index in vV, modulus or 0)

    @classmethod
    def of(cls, p: Presentation) -> Decomposition:
        n = p.gens
        rows = p.rel_rows()
        if rows:
            _, d, v = snf_rows(rows, n)
            diag = diagonal(d)
        else:
            v = [[int(i == j) for j in range(n)] for i in range(n)]
            diag = []
        tors = [(i, x) for i, x in enumerate(diag) if x > 1]
        free = [(i, 0) for i in range(len(diag), n)]
        slots = tuple(free + tors)
        group = FinAbGroup(len(free), tuple(x for _, x in tors))
        vinv = _unimodular_inverse(v) if n else []
        return cls(p, group, tuple(map(tuple, v)), tuple(map(tuple, vinv)), slots)

    def coords(self, vec: Sequence[int]) -> tuple[int, ...]:
        n = self.presentation.gens
        if len(vec) != n:
            raise StructuralError("vector length mismatch")
        w = [sum(vec[i] * self.v[i][j] for i in range(n)) for j in range(n)]
        return tuple(w[j] % mod if mod else w[j] for j, mod in self.slots)

    def generator(self, k: int) -> list[int]:
        """Representative in Z^gens of the k-th canonical generator."""
        j, _ = self.slots[k]
        return list(self.vinv[j])

    def from_coords(self, coords: Sequence[int]) -> list[int]:
        n = self.presentation.gens
        out = [0] * n
        for k, c in enumerate(coords):
            if c:
                g = self.generator(k)
                for i in range(n):
                    out[i] += c * g[i]
        return out


@dataclass(frozen=True)
class GroupMap:
    """Homomorphism given on generators; column j of ``matrix`` is the image of source generator j."""

    source: Presentation
    target: Presentation
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.rows != self.target.gens or self.matrix.cols != self.source.gens:
            raise StructuralError(
                f"map matrix {self.matrix.rows}x{self.matrix.cols} does not fit "
                f"{self.source.gens} -> {self.target.gens}")

    def check(self) -> None:
        trows = self.target.rel_rows()
        for r in self.source.rel_rows():
            img = self.matrix.apply(r)
            if not in_rowspan(trows, self.target.gens, img):
                raise StructuralError(f"relation {r} is not mapped into target relations")

    def well_formed(self) -> bool:
        try:
            self.check()
        except StructuralError:
            return False
        return True

    def apply(self, vec: Sequence[int]) -> list[int]:
        return self.matrix.apply(vec)

    def compose(self, after: GroupMap) -> GroupMap:
        """after ∘ self."""
        if after.source.gens != self.target.gens:
            raise StructuralError("maps are not composable")
        return GroupMap(self.source, after.target, after.matrix @ self.matrix)

    def preimage_of_relations(self) -> Rows:
        """Generators of {x in Z^n : f(x) in target relations} (contains source relations)."""
        n = self.source.gens
        m = self.target.gens
        trows = self.target.rel_rows()
        if m == 0:
            return [[int(i == j) for j in range(n)] for i in range(n)]
        mrows = self.matrix.to_rows()
        a = [mrows[i] + [-r[i] for r in trows] for i in range(m)]
        ker = column_kernel(a, n + len(trows))
        return [k[:n] for k in ker if any(k[:n])]

    def kernel(self) -> FinAbGroup:
        self.check()
        n = self.source.gens
        return subquotient(self.preimage_of_relations() + self.source.rel_rows(),
                           self.source.rel_rows(), n)

    def image(self) -> FinAbGroup:
        self.check()
        n = self.source.gens
        return quotient_presentation(n, self.preimage_of_relations())

    def cokernel(self) -> FinAbGroup:
        self.check()
        m = self.target.gens
        cols = self.matrix.transpose().to_rows()
        return quotient_presentation(m, self.target.rel_rows() + [c for c in cols if any(c)])

    def is_injective(self) -> bool:
        return self.kernel().is_trivial

    def is_surjective(self) -> bool:
        return self.cokernel().is_trivial

    def is_zero(self) -> bool:
        return all(self.target.is_zero(c) for c in self.matrix.transpose().to_rows())

    def is_iso(self) -> bool:
        return self.is_injective() and self.is_surjective()


def cokernel(f: GroupMap) -> FinAbGroup:
    return f.cokernel()


def kernel(f: GroupMap) -> FinAbGroup:
    return f.kernel()


def image(f: GroupMap) -> FinAbGroup:
    return f.image()


def group_map(source: FinAbGroup | Presentation, target: FinAbGroup | Presentation,
              rows: Sequence[Sequence[int]]) -> GroupMap:
    """Convenience constructor; groups are replaced by their canonical presentations."""
    s = source.presentation() if isinstance(source, FinAbGroup) else source
    t = target.presentation() if isinstance(target, FinAbGroup) else target
    return GroupMap(s, t, IntMatrix.from_rows(rows, s.gens) if rows else IntMatrix.zeros(t.gens, s.gens))

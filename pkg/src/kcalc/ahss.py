"""Atiyah-Hirzebruch E2/E3 pages for K and KO from cohomology data.

Entries are kept as presentations on named cohomology generators so that the
d2 differentials and the comparison maps t2, c2, r2 are honest group maps.
Higher differentials are never computed; callers assert their vanishing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from math import gcd
from typing import Iterable, Mapping, Sequence

from .charclass import TruncGradedRing, _Undetermined
from .errors import IncompleteError, OutOfScopeError, PreconditionError, StructuralError
from .exactlin import (FinAbGroup, GroupMap, IntMatrix, Presentation, quotient_presentation,
                       subquotient)

K = "K"
KO = "KO"

# KO^q(pt) for q = 0, -1, ..., -7
KO_ROW = (FinAbGroup(1), FinAbGroup(0, (2,)), FinAbGroup(0, (2,)), FinAbGroup(),
          FinAbGroup(1), FinAbGroup(), FinAbGroup(), FinAbGroup())
K_ROW = (FinAbGroup(1), FinAbGroup())


def coefficient(theory: str, q: int) -> FinAbGroup:
    if theory == K:
        return K_ROW[q % 2]
    if theory == KO:
        return KO_ROW[(-q) % 8]
    raise StructuralError(f"unknown theory {theory!r}")


def _diag(orders: Sequence[int]) -> Presentation:
    k = len(orders)
    rows = [[o if i == j else 0 for j in range(k)] for i, o in enumerate(orders) if o]
    return Presentation(k, IntMatrix.from_rows(rows, k))


@dataclass(frozen=True)
class CohomologyTable:
    """H^p(M; Z) on generators with orders, H^p(M; Z_2) dimensions, red and Sq^2 matrices.

    ``reduction[p]`` has one row per mod-2 generator and one column per integral
    generator; ``sq2[p]`` maps H^p(Z_2) to H^{p+2}(Z_2). Missing Sq^2 data means
    "unknown" and blocks d2.
    """

    name: str
    dimension: int
    integral: Mapping[int, tuple[int, ...]]
    mod2: Mapping[int, int]
    reduction: Mapping[int, tuple[tuple[int, ...], ...]]
    sq2: Mapping[int, tuple[tuple[int, ...], ...]] | None = None
    integral_names: Mapping[int, tuple[str, ...]] = field(default_factory=dict)
    mod2_names: Mapping[int, tuple[str, ...]] = field(default_factory=dict)
    # free cohomology with red = identity and Sq^2 = 0, stored by ranks only
    free_trivial: bool = False

    def __post_init__(self):
        if self.free_trivial:
            if self.integral or self.reduction:
                raise StructuralError("free_trivial tables carry ranks in ``mod2`` only")
            return
        for p, orders in self.integral.items():
            if not 0 <= p <= self.dimension:
                raise StructuralError(f"degree {p} outside 0..{self.dimension}")
            pres = _diag(orders)
            red = self.reduction.get(p, ())
            h = self.mod2.get(p, 0)
            if red and (len(red) != h or any(len(r) != len(orders) for r in red)):
                raise StructuralError(f"reduction matrix in degree {p} has the wrong shape")
            if red:
                # red must kill odd torsion: a generator of order o maps to an element of order | gcd(o, 2)
                for j, o in enumerate(orders):
                    if o and o % 2 and any(r[j] % 2 for r in red):
                        raise StructuralError(f"reduction sends odd torsion to a nonzero class in degree {p}")
            del pres
        if self.sq2 is not None:
            for p, m in self.sq2.items():
                if m and (len(m) != self.mod2.get(p + 2, 0) or any(len(r) != self.mod2.get(p, 0) for r in m)):
                    raise StructuralError(f"Sq^2 matrix in degree {p} has the wrong shape")

    def H(self, p: int) -> Presentation:
        if self.free_trivial:
            return Presentation.free(self.mod2.get(p, 0))
        return _diag(self.integral.get(p, ()))

    def h(self, p: int) -> Presentation:
        k = self.mod2.get(p, 0)
        return _diag([2] * k)

    def red(self, p: int) -> IntMatrix:
        rows = self.reduction.get(p)
        if self.free_trivial:
            return IntMatrix.identity(self.mod2.get(p, 0))
        h, n = self.mod2.get(p, 0), len(self.integral.get(p, ()))
        if not rows:
            return IntMatrix.zeros(h, n)
        return IntMatrix.from_rows(rows, n)

    def sq2_matrix(self, p: int) -> IntMatrix:
        src, dst = self.mod2.get(p, 0), self.mod2.get(p + 2, 0)
        if src == 0 or dst == 0 or self.free_trivial:
            return IntMatrix.zeros(dst, src)
        if self.sq2 is None or p not in self.sq2:
            raise PreconditionError(f"Sq^2 on H^{p}({self.name}; Z_2) is not supplied")
        return IntMatrix.from_rows(self.sq2[p], src)

    def group(self, p: int) -> FinAbGroup:
        if self.free_trivial:
            return FinAbGroup(self.mod2.get(p, 0))
        return FinAbGroup.from_orders(0, self.integral.get(p, ()))

    @classmethod
    def from_ring(cls, ring: TruncGradedRing) -> CohomologyTable:
        integral, mod2, red, sq2, inames, mnames = {}, {}, {}, {}, {}, {}
        for p in range(ring.top + 1):
            ib = ring.basis_in_degree(p)
            mb = ring.mod2_in_degree(p)
            if ib:
                integral[p] = tuple(ring.basis[m] for m in ib)
                inames[p] = tuple(ring.fmt(m) for m in ib)
            if mb:
                mod2[p] = len(mb)
                mnames[p] = tuple(ring.fmt(m) for m in mb)
            if ib and mb:
                red[p] = tuple(tuple(int(x == m and ring.basis[m] % 2 == 0) for m in ib) for x in mb)
        for p in range(ring.top + 1):
            mb, tb = ring.mod2_in_degree(p), ring.mod2_in_degree(p + 2)
            if not mb or not tb:
                continue
            try:
                imgs = [ring.sq(2, m) for m in mb]
            except _Undetermined:
                continue
            sq2[p] = tuple(tuple(int(t in img) for img in imgs) for t in tb)
        return cls(ring.name, ring.top, integral, mod2, red, sq2, inames, mnames)

    @classmethod
    def from_groups(cls, name: str, dimension: int, groups: Mapping[int, FinAbGroup],
                    sq2_zero: bool = False) -> CohomologyTable:
        """Table from integral groups only; mod-2 data by universal coefficients.

        H^p(Z_2) = H^p (x) Z_2 + Tor(H^{p+1}, Z_2); reduction hits the first summand.
        """
        integral, mod2, red = {}, {}, {}
        for p in range(dimension + 1):
            g = groups.get(p, FinAbGroup())
            orders = tuple(g.orders())
            if orders:
                integral[p] = orders
            even = [j for j, o in enumerate(orders) if o % 2 == 0]
            tor = groups.get(p + 1, FinAbGroup()).two_rank()
            if even or tor:
                mod2[p] = len(even) + tor
                red[p] = tuple(tuple(int(j == e) for j in range(len(orders))) for e in even) + \
                    tuple(tuple(0 for _ in orders) for _ in range(tor))
        sq2 = {} if sq2_zero else None
        if sq2_zero:
            for p in mod2:
                if mod2.get(p + 2):
                    sq2[p] = tuple(tuple(0 for _ in range(mod2[p])) for _ in range(mod2[p + 2]))
        return cls(name, dimension, integral, mod2, red, sq2)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "dimension": self.dimension,
            "integral": {str(p): list(v) for p, v in sorted(self.integral.items())},
            "mod2": {str(p): v for p, v in sorted(self.mod2.items())},
        }


def point_table() -> CohomologyTable:
    return CohomologyTable("pt", 0, {0: (0,)}, {0: 1}, {0: ((1,),)}, {})


def sphere_product_table(dims: Sequence[int]) -> CohomologyTable:
    """Kunneth table of a product of spheres: ranks from prod (1 + t^n_i), red = id, Sq^2 = 0."""
    if any(d < 1 for d in dims):
        raise PreconditionError("sphere dimensions must be >= 1")
    n = sum(dims)
    poly = [1] + [0] * n
    for d in dims:
        poly = [poly[k] + (poly[k - d] if k >= d else 0) for k in range(n + 1)]
    mod2 = {p: c for p, c in enumerate(poly) if c}
    name = "x".join(f"S{d}" for d in dims) or "pt"
    return CohomologyTable(name, n, {}, mod2, {}, {}, free_trivial=True)


# ---------------------------------------------------------------------------
# pages

def _kind(theory: str, q: int) -> str:
    """'Z' (integral row), '2' (mod-2 row) or '0'."""
    if theory == K:
        return "Z" if q % 2 == 0 else "0"
    r = (-q) % 8
    if r in (0, 4):
        return "Z"
    if r in (1, 2):
        return "2"
    return "0"


@dataclass(frozen=True)
class E3Entry:
    group: FinAbGroup
    e2: FinAbGroup
    cycle_index: int | None  # index of the d2-cycles in the E2 entry (None: infinite)

    @property
    def vanished(self) -> bool:
        return not self.e2.is_trivial and self.group.is_trivial

    @property
    def changed(self) -> bool:
        return self.group != self.e2 or self.cycle_index != 1


@dataclass(frozen=True, eq=False)
class E2Page:
    theory: str
    table: CohomologyTable
    _e3: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.theory not in (K, KO):
            raise StructuralError(f"unknown theory {self.theory!r}")

    def entry(self, p: int, q: int) -> Presentation:
        if not 0 <= p <= self.table.dimension:
            return Presentation.free(0)
        k = _kind(self.theory, q)
        if k == "Z":
            return self.table.H(p)
        if k == "2":
            return self.table.h(p)
        return Presentation.free(0)

    def vanishes(self, p: int, q: int, page: int = 3) -> bool:
        """Is E_page^{p,q} zero (page 2 or 3)?"""
        if self.table.free_trivial:
            c = self.table.mod2.get(p, 0) if 0 <= p <= self.table.dimension else 0
            return c == 0 or _kind(self.theory, q) == "0"
        return (self.group(p, q) if page == 2 else self.e3(p, q).group).is_trivial

    def group(self, p: int, q: int) -> FinAbGroup:
        if self.table.free_trivial:
            c = self.table.mod2.get(p, 0) if 0 <= p <= self.table.dimension else 0
            k = _kind(self.theory, q)
            return FinAbGroup(c) if k == "Z" else FinAbGroup(0, (2,) * c) if k == "2" else FinAbGroup()
        return self.entry(p, q).group()

    def d2(self, p: int, q: int) -> GroupMap:
        """d2: E2^{p,q} -> E2^{p+2,q-1}."""
        src, dst = self.entry(p, q), self.entry(p + 2, q - 1)
        zero = GroupMap(src, dst, IntMatrix.zeros(dst.gens, src.gens))
        if self.theory == K or src.gens == 0 or dst.gens == 0:
            return zero
        r = (-q) % 8
        if r == 0:
            m = self.table.sq2_matrix(p) @ self.table.red(p)
        elif r == 1:
            m = self.table.sq2_matrix(p)
        else:
            return zero
        f = GroupMap(src, dst, m)
        f.check()
        return f

    def e3(self, p: int, q: int) -> E3Entry:
        if (p, q) not in self._e3:
            self._e3[(p, q)] = self._compute_e3(p, q)
        return self._e3[(p, q)]

    def _compute_e3(self, p: int, q: int) -> E3Entry:
        if self.table.free_trivial:
            g = self.group(p, q)
            return E3Entry(g, g, 1)
        src = self.entry(p, q)
        out = self.d2(p, q)
        inc = self.d2(p - 2, q + 1)
        n = src.gens
        e2 = src.group()
        if n == 0:
            return E3Entry(e2, e2, 1)
        cycles = out.preimage_of_relations() + src.rel_rows()
        bounds = [list(c) for c in inc.matrix.transpose().to_rows()] + src.rel_rows()
        g = subquotient(cycles, bounds, n)
        img = out.image()
        return E3Entry(g, e2, img.order)

    def grid(self, pmax: int | None = None, qmin: int = -13, page: int = 2) -> dict[tuple[int, int], FinAbGroup]:
        pmax = self.table.dimension if pmax is None else pmax
        out = {}
        for p in range(pmax + 1):
            for q in range(0, qmin - 1, -1):
                out[(p, q)] = self.group(p, q) if page == 2 else self.e3(p, q).group
        return out


def build_e2(table: CohomologyTable, theory: str) -> E2Page:
    return E2Page(theory, table)


def d2_ko(page: E2Page) -> E2Page:
    """The KO page with d2 attached; E3 entries are read through ``page.e3``."""
    if page.theory != KO:
        raise PreconditionError("d2_ko needs a KO page")
    return page


def d2_squared_zero(page: E2Page, p: int, q: int) -> bool:
    return page.d2(p, q).compose(page.d2(p + 2, q - 1)).is_zero()


def comparison_e2(kind: str, table: CohomologyTable, p: int, q: int) -> GroupMap:
    """t2 (K -> K), c2 (KO -> K) or r2 (K -> KO) on E2^{p,q}."""
    k, ko = E2Page(K, table), E2Page(KO, table)
    if kind == "t":
        src, dst = k.entry(p, q), k.entry(p, q)
        n = src.gens
        if q % 2:
            scale = 0
        else:
            scale = 1 if q % 4 == 0 else -1
        m = IntMatrix.from_rows([[scale * int(i == j) for j in range(n)] for i in range(n)], n)
    elif kind == "c":
        src, dst = ko.entry(p, q), k.entry(p, q)
        r = (-q) % 8
        scale = {0: 1, 4: 2}.get(r, 0)
        if scale:
            n = src.gens
            m = IntMatrix.from_rows([[scale * int(i == j) for j in range(n)] for i in range(n)], n)
        else:
            m = IntMatrix.zeros(dst.gens, src.gens)
    elif kind == "r":
        src, dst = k.entry(p, q), ko.entry(p, q)
        r = q % 8
        if r in (0, 4):
            n = src.gens
            scale = 2 if r == 0 else 1
            m = IntMatrix.from_rows([[scale * int(i == j) for j in range(n)] for i in range(n)], n)
        elif r == 6:
            m = table.red(p) if 0 <= p <= table.dimension else IntMatrix.zeros(dst.gens, src.gens)
        else:
            m = IntMatrix.zeros(dst.gens, src.gens)
    else:
        raise StructuralError(f"unknown comparison {kind!r}")
    f = GroupMap(src, dst, m)
    f.check()
    return f


# ---------------------------------------------------------------------------
# extensions and assembly

def _element_ranges(a: FinAbGroup, m: int) -> list[int]:
    # coordinates of A/mA in the canonical generators of A
    return [m if o == 0 else gcd(o, m) for o in a.orders()]


def extensions(sub: FinAbGroup, quot: FinAbGroup, limit: int = 200000) -> list[FinAbGroup]:
    """All groups E (up to isomorphism) in some 0 -> sub -> E -> quot -> 0.

    E = (sub + Z^k) / <sub relations, m_j e_j - a_j>, one a_j in sub/m_j sub per
    cyclic factor Z_{m_j} of quot; free factors of quot split off.
    """
    cyc = list(quot.torsion)
    ranges = [_element_ranges(sub, m) for m in cyc]
    size = 1
    for r in ranges:
        for x in r:
            size *= x
    if size > limit:
        raise IncompleteError(f"extension enumeration of {quot} by {sub} needs {size} cases")
    na, k = sub.ngens, len(cyc)
    base = [[o if j == i else 0 for j in range(na + k)]
            for i, o in enumerate(sub.orders()) if o]
    seen = set()
    choices = [list(iproduct(*[range(x) for x in r])) for r in ranges]
    for pick in iproduct(*choices):
        rows = [row[:] for row in base]
        for j, (m, a) in enumerate(zip(cyc, pick)):
            rows.append([-x for x in a] + [m if i == j else 0 for i in range(k)])
        g = quotient_presentation(na + k, rows) if rows else FinAbGroup(na + k)
        seen.add(g + FinAbGroup(quot.free_rank))
    return sorted(seen, key=lambda g: (g.free_rank, g.torsion))


@dataclass
class Assembly:
    degree: int
    pieces: list[tuple[int, FinAbGroup]]  # (p, E_infinity^{p, degree - p}), increasing p
    candidates: list[FinAbGroup]
    resolution: str | None = None

    @property
    def ambiguous(self) -> bool:
        return len(self.candidates) > 1

    @property
    def group(self) -> FinAbGroup | None:
        return self.candidates[0] if len(self.candidates) == 1 else None


def diagonal_assembly(page: E2Page, degree: int, *, higher_differentials_vanish: bool,
                      reduced: bool = False, use_e3: bool | None = None) -> Assembly:
    """Graded pieces of the diagonal p + q = degree and every group they can assemble to.

    The caller must assert that no differential beyond d2 touches the diagonal.
    """
    if not higher_differentials_vanish:
        raise PreconditionError("higher differentials must be asserted to vanish")
    if use_e3 is None:
        use_e3 = page.theory == KO
    pieces = []
    for p in range(1 if reduced else 0, page.table.dimension + 1):
        q = degree - p
        g = page.e3(p, q).group if use_e3 else page.group(p, q)
        if not g.is_trivial:
            pieces.append((p, g))
    cands = [FinAbGroup()]
    for _, g in reversed(pieces):
        nxt = set()
        for c in cands:
            nxt.update(extensions(c, g))
        cands = sorted(nxt, key=lambda x: (x.free_rank, x.torsion))
    return Assembly(degree, pieces, cands)


# --- involution argument for extension problems ---------------------------------

def _elements(g: FinAbGroup) -> list[tuple[int, ...]]:
    if g.free_rank:
        raise OutOfScopeError("element enumeration needs a finite group")
    return list(iproduct(*[range(t) for t in g.torsion]))


def _add(g: FinAbGroup, a, b, k: int = 1):
    return tuple((x + k * y) % t for x, y, t in zip(a, b, g.torsion))


def _scale(g: FinAbGroup, a, k: int):
    return tuple((k * x) % t for x, t in zip(a, g.torsion))


def _order(g: FinAbGroup, a) -> int:
    o = 1
    for x, t in zip(a, g.torsion):
        o = o * (t // gcd(x, t)) // gcd(o, t // gcd(x, t))
    return o


def admits_involution(e: FinAbGroup, sub: FinAbGroup, quot: FinAbGroup,
                      sub_sign: int, quot_sign: int, limit: int = 10 ** 6) -> bool:
    """Is there S <= E with S = sub, E/S = quot and an involution of E acting by
    sub_sign on S and by quot_sign on E/S? E must be finite; sub must be cyclic."""
    if e.free_rank or sub.free_rank or quot.free_rank:
        raise OutOfScopeError("the involution test runs on finite groups")
    if len(sub.torsion) != 1:
        raise OutOfScopeError("the involution test needs a cyclic subgroup")
    elems = _elements(e)
    if len(elems) ** e.ngens > limit:
        raise IncompleteError(f"too many endomorphisms of {e} to scan")
    n = sub.torsion[0]
    gens = [tuple(int(i == j) for j in range(e.ngens)) for i in range(e.ngens)]
    images_ok = [[x for x in elems if _scale(e, x, t) == _scale(e, x, 0)] for t in e.torsion]
    subs = []
    for s in elems:
        if _order(e, s) != n:
            continue
        span = {_scale(e, s, k) for k in range(n)}
        q = quotient_presentation(e.ngens, [[t if i == j else 0 for j in range(e.ngens)]
                                            for i, t in enumerate(e.torsion)] + [list(s)])
        if q == quot:
            subs.append((s, span))
    for imgs in iproduct(*images_ok):
        def T(x):
            out = tuple(0 for _ in e.torsion)
            for c, im in zip(x, imgs):
                out = _add(e, out, im, c)
            return out
        if any(T(T(g)) != g for g in gens):
            continue
        for s, span in subs:
            if T(s) != _scale(e, s, sub_sign):
                continue
            if all(_add(e, T(g), g, -quot_sign) in span for g in gens):
                return True
    return False


def primary_part(g: FinAbGroup, prime: int) -> FinAbGroup:
    orders = []
    for t in g.torsion:
        d = 1
        while t % prime == 0:
            t //= prime
            d *= prime
        orders.append(d)
    return FinAbGroup.from_orders(0, orders)


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def resolve_by_involution(assembly: Assembly, sub_p: int, quot_p: int,
                          sub_sign: int, quot_sign: int, citation: str) -> Assembly:
    """Keep the candidates whose torsion admits the involution forced by naturality of t.

    The signs are those of t2 on the two graded pieces; ``citation`` names the
    external fact that t acts on the filtration compatibly.
    """
    pieces = dict(assembly.pieces)
    sub, quot = pieces[sub_p], pieces[quot_p]
    primes = _prime_factors(sub.order)
    if len(primes) != 1 or _prime_factors(quot.order) != primes:
        raise OutOfScopeError("the involution argument needs two p-primary pieces for one prime p")
    keep = []
    for c in assembly.candidates:
        part = primary_part(c, primes[0])
        if part.order != sub.order * quot.order:
            raise OutOfScopeError(f"{c} has further {primes[0]}-torsion besides the two pieces")
        if admits_involution(part, sub, quot, sub_sign, quot_sign):
            keep.append(c)
    return Assembly(assembly.degree, assembly.pieces, keep, citation)


# ---------------------------------------------------------------------------
# sphere products

_LEMMA_SINGLE = {3, 5, 6, 7}
_LEMMA_PAIRS = {(3, 3), (5, 6), (6, 7), (7, 7)}
_LEMMA_TRIPLES = {(7, 7, 7)}


def sphere_ko_trivial_lemma(dims: Sequence[int]) -> bool:
    r = tuple(sorted(d % 8 for d in dims))
    if len(r) == 0:
        return True
    if len(r) == 1:
        return r[0] in _LEMMA_SINGLE
    if len(r) == 2:
        return r in _LEMMA_PAIRS
    if len(r) == 3:
        return r in _LEMMA_TRIPLES
    return False


def sphere_ko_trivial_oracle(dims: Sequence[int]) -> bool:
    page = E2Page(KO, sphere_product_table(dims))
    return all(page.vanishes(p, -p) for p in range(1, page.table.dimension + 1))


def sphere_ko_trivial(dims: Sequence[int]) -> bool:
    """reduced KO of a product of spheres vanishes; decided by the case list and by the E2 diagonal."""
    if any(d < 1 for d in dims):
        raise PreconditionError("sphere dimensions must be >= 1")
    a = sphere_ko_trivial_lemma(dims)
    b = sphere_ko_trivial_oracle(dims)
    if a != b:
        raise StructuralError(f"case list and spectral sequence disagree on {sorted(dims)}")
    return a


def subset_sum_condition(dims: Sequence[int]) -> bool:
    """Only the empty sum of dimensions is divisible by 8."""
    reach: set[int] = set()  # residues of nonempty subset sums
    for d in dims:
        reach |= {(r + d) % 8 for r in reach} | {d % 8}
    return 0 not in reach


def realification_hypotheses(table: CohomologyTable) -> bool:
    """H^k = 0 for positive k = 0 mod 8, and red onto H^k(Z_2) for k = 2 mod 8."""
    for k in range(1, table.dimension + 1):
        if k % 8 == 0 and not table.group(k).is_trivial:
            return False
        if k % 8 == 2 and not table.free_trivial:
            red = GroupMap(table.H(k), table.h(k), table.red(k))
            if not red.is_surjective():
                return False
    return True


def sphere_realification_surjective(dims: Sequence[int]) -> bool:
    """Surjectivity of r: reduced K -> reduced KO guaranteed by the subset-sum criterion."""
    a = subset_sum_condition(dims)
    b = realification_hypotheses(sphere_product_table(dims))
    if a != b:
        raise StructuralError(f"subset-sum test and cohomological hypotheses disagree on {sorted(dims)}")
    return a


def e2_to_json(page: E2Page, qmin: int = -13, page_index: int = 2) -> dict:
    rows = []
    for (p, q), g in sorted(page.grid(qmin=qmin, page=page_index).items()):
        if not g.is_trivial:
            rows.append({"p": p, "q": q, "group": str(g)})
    return {"theory": page.theory, "page": page_index, "space": page.table.name, "entries": rows}


def iter_multisets(max_total: int, min_dim: int = 1) -> Iterable[tuple[int, ...]]:
    """Nonempty multisets of dimensions >= min_dim with sum <= max_total, nondecreasing."""
    def rec(prefix, start, remaining):
        for d in range(start, remaining + 1):
            t = prefix + (d,)
            yield t
            yield from rec(t, d, remaining - d)
    yield from rec((), min_dim, max_total)

"""The Berger space B^13 = SU(5)/(Sp(2) x_{Z_2} S^1), end to end.

K(B^13) is computed from representation rings; KO(B^13) is taken as input data
and checked for internal consistency against K through c, r, t, q and phi.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .ahss import extensions
from .charclass import (chern_of_laurent, pontryagin_closed_form, pontryagin_of_ko_class,
                        ring_from_json, rp_ring, rp_sw, sw_from_fibre, sw_from_wu, total, wu_classes)
from .charring import Character, circle, conjugate, lambda_series, product, sp, su
from .datafiles import load
from .errors import DataError, StructuralError
from .exactlin import FinAbGroup, quotient_presentation, solve_int
from .quotient import (DEFAULT_WINDOW, AdaptedBasis, LaurentIdealPresentation, RingModel,
                       adapted_basis, additive_structure, augmentation_quotient)

Vec = tuple[int, ...]


# ---------------------------------------------------------------------------
# finite ring models

@dataclass(frozen=True)
class FiniteRingModel:
    """A ring Z^k / (orders) on a named basis with structure constants."""

    name: str
    names: tuple[str, ...]
    orders: tuple[int, ...]  # 0 = infinite cyclic
    mult: tuple[tuple[Vec, ...], ...]
    unit: Vec

    def __post_init__(self):
        k = len(self.names)
        if len(self.orders) != k or len(self.mult) != k or any(len(r) != k for r in self.mult):
            raise StructuralError(f"{self.name}: structure constants have the wrong shape")

    @property
    def rank(self) -> int:
        return len(self.names)

    def reduce(self, v: Sequence[int]) -> Vec:
        return tuple(x % o if o else x for x, o in zip(v, self.orders))

    def basis(self, i: int | str) -> Vec:
        if isinstance(i, str):
            i = self.names.index(i)
        return tuple(int(j == i) for j in range(self.rank))

    def vec(self, **coeffs: int) -> Vec:
        out = [0] * self.rank
        for k, v in coeffs.items():
            out[self.names.index(k)] += v
        return self.reduce(out)

    def zero(self) -> Vec:
        return (0,) * self.rank

    def add(self, a: Sequence[int], b: Sequence[int]) -> Vec:
        return self.reduce([x + y for x, y in zip(a, b)])

    def sub(self, a: Sequence[int], b: Sequence[int]) -> Vec:
        return self.reduce([x - y for x, y in zip(a, b)])

    def scale(self, a: Sequence[int], k: int) -> Vec:
        return self.reduce([k * x for x in a])

    def mul(self, a: Sequence[int], b: Sequence[int]) -> Vec:
        out = [0] * self.rank
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if y:
                    for k, c in enumerate(self.mult[i][j]):
                        out[k] += x * y * c
        return self.reduce(out)

    def power(self, a: Sequence[int], n: int) -> Vec:
        out = self.unit
        for _ in range(n):
            out = self.mul(out, a)
        return out

    def fmt(self, v: Sequence[int]) -> str:
        terms = []
        for c, n in zip(self.reduce(v), self.names):
            if c:
                terms.append(n if (c == 1 and n != "1") else f"{c}" if n == "1" else f"{c}{n}")
        return " + ".join(terms) or "0"

    def check_ring(self) -> list[str]:
        """Exhaustive ring axioms on the basis, plus compatibility with the orders."""
        bad = []
        k = self.rank
        e = [self.basis(i) for i in range(k)]
        for i in range(k):
            if self.mul(self.unit, e[i]) != e[i]:
                bad.append(f"unit law fails on {self.names[i]}")
            if self.orders[i]:
                for j in range(k):
                    if any(self.scale(self.mul(e[i], e[j]), self.orders[i])):
                        bad.append(f"{self.orders[i]}*{self.names[i]}*{self.names[j]} != 0")
            for j in range(k):
                if self.mul(e[i], e[j]) != self.mul(e[j], e[i]):
                    bad.append(f"{self.names[i]}*{self.names[j]} not commutative")
                for m in range(k):
                    if self.mul(self.mul(e[i], e[j]), e[m]) != self.mul(e[i], self.mul(e[j], e[m])):
                        bad.append(f"associativity fails on {self.names[i]},{self.names[j]},{self.names[m]}")
        return bad

    def in_span(self, gens: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
        """Is v in the subgroup generated by ``gens``?"""
        rel_cols = [[o if j == i else 0 for j in range(self.rank)] for i, o in enumerate(self.orders) if o]
        cols = [list(g) for g in gens] + rel_cols
        if not cols:
            return not any(self.reduce(v))
        rows = [[c[i] for c in cols] for i in range(self.rank)]
        return solve_int(rows, len(cols), list(v)) is not None

    def quotient_by(self, gens: Sequence[Sequence[int]]) -> FinAbGroup:
        rels = [[o if j == i else 0 for j in range(self.rank)] for i, o in enumerate(self.orders) if o]
        return quotient_presentation(self.rank, rels + [list(g) for g in gens])

    def group(self) -> FinAbGroup:
        return self.quotient_by([])


@dataclass(frozen=True)
class LinearMap:
    name: str
    source: FiniteRingModel
    target: FiniteRingModel
    cols: tuple[Vec, ...]

    def __post_init__(self):
        if len(self.cols) != self.source.rank:
            raise StructuralError(f"{self.name}: one image per source basis element expected")
        for i, o in enumerate(self.source.orders):
            if o and any(self.target.scale(self.cols[i], o)):
                raise DataError(f"{self.name}: image of {self.source.names[i]} is not killed by {o}")

    def __call__(self, v: Sequence[int]) -> Vec:
        out = [0] * self.target.rank
        for x, col in zip(v, self.cols):
            for k, c in enumerate(col):
                out[k] += x * c
        return self.target.reduce(out)

    def then(self, after: LinearMap) -> LinearMap:
        if after.source is not self.target:
            raise StructuralError(f"cannot compose {self.name} with {after.name}")
        return LinearMap(f"{after.name}.{self.name}", self.source, after.target,
                         tuple(after(c) for c in self.cols))

    def image_gens(self) -> list[Vec]:
        return [c for c in self.cols if any(c)]


# ---------------------------------------------------------------------------
# K(B^13) from the representation rings

K_NAMES = ("1", "u", "y", "u3", "u4")
K_ORDERS = (0, 0, 0, 5, 5)


def _k_relation_polys() -> list[tuple[str, Callable[[Character, Character], Character]]]:
    return [
        ("5u^3", lambda u, y: 5 * u ** 3),
        ("5u^4", lambda u, y: 5 * u ** 4),
        ("u^5", lambda u, y: u ** 5),
        ("y^3", lambda u, y: y ** 3),
        ("uy^2", lambda u, y: u * y * y),
        ("u^3y", lambda u, y: u ** 3 * y),
        ("y^2 - u^4", lambda u, y: y * y - u ** 4),
        ("y - u^2 + u^3 - u^4", lambda u, y: y - u * u + u ** 3 - u ** 4),
        ("uy - u^3 + u^4", lambda u, y: u * y - u ** 3 + u ** 4),
        ("u^2y - u^4", lambda u, y: u * u * y - u ** 4),
    ]


def b13_presentation() -> LaurentIdealPresentation:
    """Z (x)_{R(SU(5))} R(Sp(2) x_{Z_2} S^1).

    R(H) sits in R(Sp(2) x S^1) as the span of u^i x^j with i + j even; it is
    generated by a = u^2, b = x^2, c = x^-2, d = u x, e = lambda^2 u.
    """
    h = product(sp(2), circle("x"))
    mons = ((2, 0, 0), (0, 0, 2), (0, 0, -2), (1, 0, 1), (0, 1, 0))
    a, b, c, d, e = (Character.variable(i, 5) for i in range(5))
    model = RingModel(h, ("a", "b", "c", "d", "e"), mons, (False, True, False, False, False),
                      (b * c - 1, a * b - d * d))
    model.check_relations()
    t1, t2, x = (Character.variable(i, 3) for i in range(3))
    # maximal torus of Sp(2) x S^1 in SU(5): weights of C^4 (x) x, and x^-4 on the last line
    restriction = [t1 * x, t1 ** -1 * x, t2 * x, t2 ** -1 * x]
    elim = [("c", b ** -1), ("d", 5 - c * c), ("e", (10 - d * c * c) * c), ("a", d * d * c)]
    return augmentation_quotient(su(5), model, restriction, elim)


@dataclass
class KModel:
    ring: FiniteRingModel
    basis: AdaptedBasis
    characters: tuple[Character, ...]
    t: LinearMap
    relations: dict[str, Vec]
    basis_change: dict[str, bool]
    presentation_group: FinAbGroup
    presentation_iso: bool

    def character(self, v: Sequence[int]) -> Character:
        return self.basis.element(v)

    def coords(self, c: Character) -> Vec:
        return self.ring.reduce(self.basis.coords(c))

    def lambda2(self, v: Sequence[int]) -> Vec:
        return self.coords(lambda_series(self.character(v), 2)[2])


def build_K_B13(window: int = DEFAULT_WINDOW) -> KModel:
    s = additive_structure(b13_presentation(), window)
    if s.group != FinAbGroup(3, (5, 5)):
        raise StructuralError(f"K(B^13) came out as {s.group}")
    b = Character.variable(0, 1)
    u = b - 1
    y = b + b ** -1 - 2
    chars = (b ** 0, u, y, u ** 3, u ** 4)
    ab = adapted_basis(s, K_NAMES, chars, K_ORDERS)
    mult = tuple(tuple(tuple(ab.coords(ci * cj)) for cj in chars) for ci in chars)
    ring = FiniteRingModel("K(B13)", K_NAMES, K_ORDERS, mult, (1, 0, 0, 0, 0))
    t = LinearMap("t", ring, ring, tuple(ring.reduce(ab.coords(conjugate(ch))) for ch in chars))
    rels = {name: tuple(s.coords(f(u, y))) for name, f in _k_relation_polys()}
    # b' = b - 1, c' = b^-1 - 1
    bp, cp = b - 1, b ** -1 - 1
    change = {
        "u = b'": s.is_zero(u - bp),
        "y = b' + c'": s.is_zero(y - bp - cp),
        "u^3 = 2b'^2 + c'^2 - 3b' - 3c'": s.is_zero(u ** 3 - (2 * bp * bp + cp * cp - 3 * bp - 3 * cp)),
        "u^4 = b'^2 + c'^2 - 2b' - 2c'": s.is_zero(u ** 4 - (bp * bp + cp * cp - 2 * bp - 2 * cp)),
    }
    pgroup, piso = _presentation_route(ring)
    return KModel(ring, ab, chars, t, rels, change, pgroup, piso)


def _presentation_route(ring: FiniteRingModel) -> tuple[FinAbGroup, bool]:
    """Z[u, y]/(displayed relations): same additive basis, mapped isomorphically onto the model."""
    u, y = Character.variable(0, 2), Character.variable(1, 2)
    p = LaurentIdealPresentation(("u", "y"), (False, False), tuple(f(u, y) for _, f in _k_relation_polys()))
    s = additive_structure(p, 4, eliminate=False)
    chars = (u ** 0, u, y, u ** 3, u ** 4)
    adapted_basis(s, K_NAMES, chars, K_ORDERS)  # raises unless these form a basis with these orders
    # the ring map u -> u, y -> y sends this basis to the model basis; it is well defined
    # because every relation vanishes in the model, checked by normal forms there
    uu, yy = ring.basis("u"), ring.basis("y")

    def ev(f):
        return _eval_poly(ring, f, uu, yy)
    ok = all(not any(ev(f)) for _, f in _k_relation_polys())
    return s.group, ok


def _eval_poly(ring: FiniteRingModel, f, u: Vec, y: Vec) -> Vec:
    """Evaluate f(u, y) (a lambda on Characters) in a finite model by expanding in two variables."""
    U, Y = Character.variable(0, 2), Character.variable(1, 2)
    poly = f(U, Y)
    out = ring.zero()
    for (i, j), c in poly.terms.items():
        out = ring.add(out, ring.scale(ring.mul(ring.power(u, i), ring.power(y, j)), c))
    return out


# ---------------------------------------------------------------------------
# KO(B^13) and KSp(B^13)

KO_NAMES = ("1", "y'", "y'2", "w")
KO_ORDERS = (0, 0, 5, 2)


def _ko_ring() -> FiniteRingModel:
    z = (0, 0, 0, 0)
    one, yp, yp2, w = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
    mult = (
        (one, yp, yp2, w),
        (yp, yp2, z, z),
        (yp2, z, z, z),
        (w, z, z, z),
    )
    return FiniteRingModel("KO(B13)", KO_NAMES, KO_ORDERS, mult, one)


@dataclass
class KOModel:
    ring: FiniteRingModel
    c: LinearMap  # KO -> K
    r: LinearMap  # K -> KO
    ksp: FiniteRingModel  # additive only: im(1 + t) in K
    c_prime: LinearMap  # KSp -> K
    q: LinearMap  # K -> KSp
    relations: dict[str, bool]


def build_KO_B13(k: KModel | None = None) -> KOModel:
    k = k or build_K_B13()
    K = k.ring
    ko = _ko_ring()
    y2 = K.mul(K.basis("y"), K.basis("y"))
    c = LinearMap("c", ko, K, (K.unit, K.basis("y"), y2, K.zero()))
    r = LinearMap("r", K, ko, (ko.vec(**{"1": 2}), ko.vec(**{"y'": 1}), ko.vec(**{"y'": 2}),
                               ko.vec(**{"y'2": 3}), ko.vec(**{"y'2": 2})))
    rels = {
        "5y'^2 = 0": not any(ko.scale(ko.basis("y'2"), 5)),
        "2w = 0": not any(ko.scale(ko.basis("w"), 2)),
        "w^2 = 0": not any(ko.mul(ko.basis("w"), ko.basis("w"))),
        "wy' = 0": not any(ko.mul(ko.basis("w"), ko.basis("y'"))),
        "y'^3 = 0": not any(ko.power(ko.basis("y'"), 3)),
    }
    bad = ko.check_ring()
    if bad:
        raise DataError(f"KO(B13) model: {bad[0]}")
    for i in range(ko.rank):
        for j in range(ko.rank):
            if c(ko.mul(ko.basis(i), ko.basis(j))) != K.mul(c(ko.basis(i)), c(ko.basis(j))):
                raise DataError("c is not multiplicative")
    ksp, cp, q = _ksp_model(k)
    return KOModel(ko, c, r, ksp, cp, q, rels)


def _ksp_model(k: KModel) -> tuple[FiniteRingModel, LinearMap, LinearMap]:
    """KSp as the subgroup im(1 + t) of K: c' is the inclusion and q = 1 + t.

    c' is injective (KSp^0 = KO^-4 and the Bott sequence shows c mono there) and
    c'q = 1 + t; so im c' = im(1 + t) once q is onto.
    """
    K = k.ring
    one_t = [K.add(K.basis(i), k.t(K.basis(i))) for i in range(K.rank)]
    # basis of im(1+t): 2, y, y^2 (order 5)
    y2 = K.mul(K.basis("y"), K.basis("y"))
    gens = (K.scale(K.unit, 2), K.basis("y"), y2)
    names = ("H", "qu", "qy2")
    orders = (0, 0, 5)
    for g in one_t:
        if not K.in_span(gens, g):
            raise StructuralError("1 + t leaves the chosen KSp basis")
    for g in gens:
        if not K.in_span(one_t, g):
            raise StructuralError("chosen KSp basis is not in im(1 + t)")
    zero = (0, 0, 0)
    # KSp is not a ring; mult is unused but the container wants one
    ksp = FiniteRingModel("KSp(B13)", names, orders, tuple((zero,) * 3 for _ in range(3)), zero)
    cp = LinearMap("c'", ksp, K, gens)
    q_cols = []
    for g in one_t:
        # coordinates of g in the basis gens
        rows = [[gg[i] for gg in gens] + [o if j == i else 0 for j, o in enumerate(K.orders) if o]
                for i in range(K.rank)]
        sol = solve_int(rows, len(gens) + sum(1 for o in K.orders if o), list(g))
        q_cols.append(ksp.reduce(sol[:len(gens)]))
    q = LinearMap("q", K, ksp, tuple(q_cols))
    return ksp, cp, q


# ---------------------------------------------------------------------------
# identities

@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


def _same(f: LinearMap, g: Callable[[Vec], Vec], model: FiniteRingModel) -> tuple[bool, str]:
    for i in range(f.source.rank):
        e = f.source.basis(i)
        if f(e) != g(e):
            return False, f"{f.source.names[i]}: {model.fmt(f(e))} vs {model.fmt(g(e))}"
    return True, ""


def verify_structure_identities(k: KModel, ko: KOModel) -> list[Check]:
    K, O, P = k.ring, ko.ring, ko.ksp
    t, c, r, cp, q = k.t, ko.c, ko.r, ko.c_prime, ko.q
    ident = [
        ("r.c = 2", c.then(r), lambda v: O.scale(v, 2), O),
        ("c.r = id + t", r.then(c), lambda v: K.add(v, t(v)), K),
        ("q.c' = 2", cp.then(q), lambda v: P.scale(v, 2), P),
        ("c'.q = id + t", q.then(cp), lambda v: K.add(v, t(v)), K),
        ("t.c = c", c.then(t), c, K),
        ("r.t = r", t.then(r), r, O),
        ("t.c' = c'", cp.then(t), cp, K),
        ("q.t = q", t.then(q), q, P),
        ("t^2 = id", t.then(t), lambda v: K.reduce(v), K),
    ]
    out = []
    for name, lhs, rhs, model in ident:
        ok, why = _same(lhs, rhs, model)
        out.append(Check(name, ok, why))
    # t is a ring map
    bad = [(i, j) for i in range(K.rank) for j in range(K.rank)
           if t(K.mul(K.basis(i), K.basis(j))) != K.mul(t(K.basis(i)), t(K.basis(j)))]
    out.append(Check("t multiplicative", not bad, str(bad[:1])))
    # module law r(c'x . y) = x . q(y), checked after c: c(lhs) = c'x . c'q y
    bad = []
    for i in range(P.rank):
        for j in range(K.rank):
            x, yv = P.basis(i), K.basis(j)
            lhs = c(r(K.mul(cp(x), yv)))
            rhs = K.mul(cp(x), cp(q(yv)))
            if lhs != rhs:
                bad.append((P.names[i], K.names[j]))
    out.append(Check("c(r(c'x.y)) = c'x.c'q(y)", not bad, str(bad[:1])))
    return out


# ---------------------------------------------------------------------------
# phi

@dataclass
class PhiMap:
    k: KModel
    ko: KOModel
    generators: Mapping[str, Vec]
    basis_monomials: Mapping[str, Mapping[str, int]] = field(default_factory=lambda: {
        "1": {}, "u": {"u": 1}, "y": {"y": 1}, "u3": {"u": 3}, "u4": {"u": 4}})
    _memo: dict[str, Vec] = field(default_factory=dict, repr=False)

    def on_basis(self, name: str) -> Vec:
        if name not in self._memo:
            O = self.ko.ring
            out = O.unit
            for g, e in self.basis_monomials[name].items():
                out = O.mul(out, O.power(self.generators[g], e))
            self._memo[name] = out
        return self._memo[name]

    def _rtx_y(self, x: Vec, y: Vec) -> Vec:
        K = self.k.ring
        return self.ko.r(K.mul(self.k.t(x), y))

    def _multiple(self, n: int, i: int) -> Vec:
        """phi(n e_i) = n phi(e_i) + C(n, 2) r(e_i t(e_i))."""
        O, K = self.ko.ring, self.k.ring
        e = K.basis(i)
        return O.add(O.scale(self.on_basis(K.names[i]), n), O.scale(self._rtx_y(e, e), n * (n - 1) // 2))

    def __call__(self, x: Sequence[int], order: Sequence[int] | None = None) -> Vec:
        """phi via the addition law, summing basis terms in the given order."""
        K, O = self.k.ring, self.ko.ring
        order = range(K.rank) if order is None else order
        acc_x, acc = K.zero(), O.zero()
        for i in order:
            if not x[i]:
                continue
            z = K.scale(K.basis(i), x[i])
            acc = O.add(O.add(acc, self._multiple(x[i], i)), self._rtx_y(acc_x, z))
            acc_x = K.add(acc_x, z)
        return acc


def phi_extend(k: KModel, ko: KOModel, gens: Mapping[str, Vec] | None = None,
               seed: int = 0, samples: int = 50) -> PhiMap:
    O = ko.ring
    gens = gens or {"u": O.vec(**{"y'": -1}), "y": O.vec(**{"y'2": 1})}
    phi = PhiMap(k, ko, gens)
    K = k.ring
    rng = random.Random(seed)
    # torsion basis elements: phi(order * e) must vanish
    for i, o in enumerate(K.orders):
        if o and any(phi._multiple(o, i)):
            raise StructuralError(f"phi({o}{K.names[i]}) != 0")
    for _ in range(samples):
        x = K.reduce([rng.randint(-6, 6) for _ in range(K.rank)])
        v = phi(x)
        if phi(x, order=list(reversed(range(K.rank)))) != v:
            raise StructuralError(f"phi depends on the summation order at {K.fmt(x)}")
        a = K.reduce([rng.randint(-6, 6) for _ in range(K.rank)])
        b = K.sub(x, a)
        if O.add(O.add(phi(a), phi(b)), phi._rtx_y(a, b)) != v:
            raise StructuralError(f"phi depends on the decomposition of {K.fmt(x)}")
        shifted = [xi + o * rng.randint(-2, 2) for xi, o in zip(x, K.orders)]
        if phi(shifted) != v:
            raise StructuralError(f"phi is not well defined on torsion at {K.fmt(x)}")
    return phi


@dataclass
class PhiLawReport:
    pairs: int
    failures: dict[str, int]
    image_in_r: bool
    w_not_in_image: bool
    examples: dict[str, str]

    @property
    def ok(self) -> bool:
        return not any(self.failures.values()) and self.image_in_r and self.w_not_in_image


def check_phi_laws(phi: PhiMap, pairs: int = 200, seed: int = 1) -> PhiLawReport:
    k, ko = phi.k, phi.ko
    K, O = k.ring, ko.ring
    t, c, r = k.t, ko.c, ko.r
    rng = random.Random(seed)
    fails = {"multiplicative": 0, "additive": 0, "c phi = x t(x)": 0, "phi t = phi": 0, "lambda^2 (after c)": 0}
    r_gens = r.image_gens()
    image_in_r = True
    for _ in range(pairs):
        x = K.reduce([rng.randint(-5, 5) for _ in range(K.rank)])
        y = K.reduce([rng.randint(-5, 5) for _ in range(K.rank)])
        px, py = phi(x), phi(y)
        if phi(K.mul(x, y)) != O.mul(px, py):
            fails["multiplicative"] += 1
        if phi(K.add(x, y)) != O.add(O.add(px, py), r(K.mul(t(x), y))):
            fails["additive"] += 1
        if c(px) != K.mul(x, t(x)):
            fails["c phi = x t(x)"] += 1
        if phi(t(x)) != px:
            fails["phi t = phi"] += 1
        # c(lambda^2(r x)) = lambda^2(c r x) = lambda^2(x + t x)
        lam = K.sub(k.lambda2(K.add(x, t(x))), c(r(k.lambda2(x))))
        if c(px) != lam:
            fails["lambda^2 (after c)"] += 1
        # phi(1) = 1 is not in im r; the inclusion is a statement about reduced K
        xr = (0,) + tuple(x[1:])
        if not O.in_span(r_gens, phi(xr)):
            image_in_r = False
    w = O.basis("w")
    w_out = not O.in_span(r_gens, w)
    u = K.basis("u")
    ex = {
        "phi(u)": O.fmt(phi(u)),
        "phi(y)": O.fmt(phi(K.basis("y"))),
        "c(phi(u))": K.fmt(c(phi(u))),
        "u.t(u)": K.fmt(K.mul(u, t(u))),
        "phi(t(u))": O.fmt(phi(t(u))),
    }
    return PhiLawReport(pairs, fails, image_in_r, w_out and image_in_r, ex)


# ---------------------------------------------------------------------------
# image of alpha_O

@dataclass
class ImageReport:
    generators: list[str]
    index: FinAbGroup
    is_subring: bool
    equals_S: bool
    S_times_w_zero: bool
    products_of_q_in_r: bool
    lambda2_of_q_in_r: bool

    @property
    def ok(self) -> bool:
        return (self.index == FinAbGroup(0, (2,)) and self.is_subring and self.equals_S
                and self.S_times_w_zero and self.products_of_q_in_r and self.lambda2_of_q_in_r)


def image_alpha_O(k: KModel, ko: KOModel, phi: PhiMap) -> ImageReport:
    """im(alpha_O) = <1, im r>: contains it since 1 and im r = r(im alpha) are hit;
    contained in it since RO(H) is generated by 1, u^2, lambda^2 u and im r, and
    u^2, lambda^2 u land in im(q).im(q) and lambda^2(im q)."""
    K, O = k.ring, ko.ring
    r, q, cp = ko.r, ko.q, ko.c_prime
    gens = [O.unit] + r.image_gens()
    S = [O.unit, O.basis("y'"), O.basis("y'2")]
    equal = all(O.in_span(gens, s) for s in S) and all(O.in_span(S, g) for g in gens)
    subring = all(O.in_span(gens, O.mul(a, b)) for a in gens for b in gens)
    index = O.quotient_by(gens)
    s_w = all(not any(O.mul(s, O.basis("w"))) for s in S[1:])
    r_gens = r.image_gens()
    # q x . q y = r(x . c'q y); the right side is in im r by construction, so check
    # the identity after c instead: c(r(x . c'q y)) = c'q x . c'q y
    prods = True
    for i in range(K.rank):
        for j in range(K.rank):
            x, y = K.basis(i), K.basis(j)
            val = r(K.mul(x, cp(q(y))))
            if not O.in_span(r_gens, val) or ko.c(val) != K.mul(cp(q(x)), cp(q(y))):
                prods = False
    # lambda^2(q z) = lambda^2(r z) = r(lambda^2 z) + phi(z): in im r iff phi(z) is
    lam = all(O.in_span(r_gens, phi(K.basis(i))) for i in range(1, K.rank))
    names = ["1"] + [O.fmt(g) for g in r_gens]
    return ImageReport(names, index, subring, equal, s_w, prods, lam)


# ---------------------------------------------------------------------------
# Pontryagin classes and Stiefel-Whitney classes

@dataclass
class PontryaginReport:
    trivial_classes: dict[int, list[tuple[int, int, int]]]  # sign -> nonzero (mu, nu, delta)
    closed_form_agrees: dict[int, bool]
    p_y: dict[int, str]
    p_y2: dict[int, str]
    wu: dict[int, str]
    sw: dict[int, str]

    @property
    def ok(self) -> bool:
        return (all(v == [(0, 0, 1)] for v in self.trivial_classes.values())
                and all(self.closed_form_agrees.values())
                and all(v == "1 + b" for v in self.wu.values())
                and all(v == "1 + b + b^2" for v in self.sw.values()))


def b13_cohomology_ring():
    return ring_from_json(load("b13_cohomology.json"))


def pontryagin_certify(k: KModel | None = None) -> PontryaginReport:
    """Scan mu y' + nu y'^2 + delta w over mu mod 10, nu mod 5, delta mod 2 for both signs of c1(b)."""
    ring = b13_cohomology_ring()
    b = Character.variable(0, 1)
    y = b + b ** -1 - 2
    y2 = y * y
    trivial, agree, py, py2, wu_out, sw_out = {}, {}, {}, {}, {}, {}
    one = ring.one()
    for sign in (1, -1):
        beta = ring.element({"b": sign})
        c_y = chern_of_laurent(ring, y.terms, [beta])
        c_y2 = chern_of_laurent(ring, y2.terms, [beta])
        hits, ok = [], True
        for mu in range(10):
            for nu in range(5):
                for delta in range(2):
                    p = pontryagin_of_ko_class(c_y, c_y2, mu, nu, delta)
                    if p == one and (mu, nu, delta) != (0, 0, 0):
                        hits.append((mu, nu, delta))
                    if p != pontryagin_closed_form(ring, "b", mu, nu):
                        ok = False
        trivial[sign] = hits
        agree[sign] = ok
        py[sign] = str(pontryagin_of_ko_class(c_y, c_y2, 1, 0, 0))
        py2[sign] = str(pontryagin_of_ko_class(c_y, c_y2, 0, 1, 0))
        # Wu and Stiefel-Whitney classes; the sign of c1(b) is invisible mod 2
        fibre = rp_ring(5)
        images = {"b": frozenset({(2,)}), "g": frozenset()}
        low = sw_from_fibre(ring, fibre, images, rp_sw(5), 5)
        wu = wu_classes(ring, low)
        wu_out[sign] = ring.fmt2(total(wu.nu))
        sw_out[sign] = ring.fmt2(total(sw_from_wu(ring, wu.nu)))
    return PontryaginReport(trivial, agree, py, py2, wu_out, sw_out)


# ---------------------------------------------------------------------------
# Bott sequence

def _g(free: int = 0, *torsion: int) -> FinAbGroup:
    return FinAbGroup.from_orders(free, torsion)


# Bott sequence around the circle KO^i -c-> K^i -r-> KO^{i+2} -eta-> KO^{i+1}.
# Each arrow: (kind, image). kind in onto/mono/zero/given/unknown.
BOTT_NODES = (
    ("K~0", _g(2, 5, 5)), ("KO~-6", _g(1, 5)), ("KO~-7", _g(2)), ("K~-1", _g(3)),
    ("KO~-5", _g(1)), ("KO~-6", _g(1, 5)),
    ("K~0", _g(2, 5, 5)), ("KO~-4", _g(1, 5)), ("KO~-5", _g(1)), ("K~-1", _g(3)),
    ("KO~-3", _g(2)), ("KO~-4", _g(1, 5)),
    ("K~0", _g(2, 5, 5)), ("KO~-2", _g(1, 5)), ("KO~-3", _g(2)), ("K~-1", _g(3)),
    ("KO~-1", _g(1, 2)), ("KO~-2", _g(1, 5)),
    ("K~0", _g(2, 5, 5)), ("KO~0", _g(1, 5, 2)), ("KO~-1", _g(1, 2)), ("K~-1", _g(3)),
    ("KO~-7", _g(2)), ("KO~0", _g(1, 5, 2)),
)
# arrow i goes from node i to node i+1 (mod 24)
BOTT_ARROWS = (
    ("r", "onto", None), ("eta", "zero", None), ("c", "mono", None),
    ("r", "onto", None), ("eta", "zero", None), ("c", "mono", None),
    ("r", "onto", None), ("eta", "zero", None), ("c", "mono", None),
    ("r", "onto", None), ("eta", "zero", None), ("c", "mono", None),
    ("r", "onto", None), ("eta", "zero", None), ("c", "mono", None),
    ("r", "onto", None), ("eta", "zero", None), ("c", "mono", None),
    ("r", "unknown", None), ("eta", "given", _g(0, 2)), ("c", "given", _g(1)),
    ("r", "unknown", None), ("eta", "given", _g(0, 2)), ("c", "given", _g(1, 5)),
)


@dataclass
class BottReport:
    verified: list[str]
    consistency_only: list[str]
    failures: list[str]
    model_checks: list[Check]

    @property
    def ok(self) -> bool:
        return not self.failures and all(c.ok for c in self.model_checks)


def bott_segment_check(k: KModel | None = None, ko: KOModel | None = None) -> BottReport:
    n = len(BOTT_NODES)
    images: list[FinAbGroup | None] = []
    for i, (_, kind, img) in enumerate(BOTT_ARROWS):
        src, dst = BOTT_NODES[i][1], BOTT_NODES[(i + 1) % n][1]
        images.append({"onto": dst, "mono": src, "zero": FinAbGroup(), "given": img}.get(kind))
    failures, verified, partial = [], [], []
    for i, (name, kind, _) in enumerate(BOTT_ARROWS):
        if name == "eta" and images[i] is not None:
            if images[i].free_rank or any(o != 2 for o in images[i].torsion):
                failures.append(f"eta image {images[i]} at arrow {i} is not 2-torsion")
    # fill the unknown images from exactness where rank and extensions pin them down
    model_checks: list[Check] = []
    if k is not None and ko is not None:
        K, O = k.ring, ko.ring
        red_r = [ko.r(K.basis(j)) for j in range(1, K.rank)]
        # image of reduced r inside reduced KO is spanned by y' and y'^2
        if all(O.in_span(red_r, v) for v in (O.basis("y'"), O.basis("y'2"))):
            images[18] = quotient_presentation(2, [[0, 5]])
        coker = O.quotient_by([O.unit] + red_r)
        model_checks.append(Check("coker(r: K~0 -> KO~0) = Z_2", coker == FinAbGroup(0, (2,)), str(coker)))
        kernel_hits = [(a, b) for a in range(-5, 6) for b in range(5)
                       if (a, b) != (0, 0) and not any(ko.c(O.vec(**{"y'": a, "y'2": b})))]
        model_checks.append(Check("c: 0 on Z_2, mono on Z + Z_5",
                                  not any(ko.c(O.basis("w"))) and not kernel_hits, str(kernel_hits[:1])))
        ksp_red = ko.ksp.quotient_by([ko.ksp.basis(0)])
        model_checks.append(Check("reduced KSp = KO~-4", ksp_red == BOTT_NODES[7][1], str(ksp_red)))
        model_checks.append(Check("q onto", all(ko.ksp.in_span([ko.q(K.basis(j)) for j in range(K.rank)],
                                                              ko.ksp.basis(i)) for i in range(ko.ksp.rank))))
    for i in range(n):
        a_in, a_out = images[(i - 1) % n], images[i]
        node_name, node = BOTT_NODES[i]
        label = f"{node_name} (node {i})"
        if a_in is not None and a_out is not None:
            if node in extensions(a_in, a_out):
                verified.append(label)
            else:
                failures.append(f"{label}: {node} is not an extension of {a_out} by {a_in}")
        else:
            known = a_in if a_in is not None else a_out
            other_rank = node.free_rank - (known.free_rank if known is not None else 0)
            if other_rank < 0:
                failures.append(f"{label}: rank of the known image exceeds the group")
            else:
                partial.append(label)
    return BottReport(verified, partial, failures, model_checks)


# ---------------------------------------------------------------------------
# everything

@dataclass
class BergerReport:
    sections: dict[str, list[Check]]

    @property
    def mismatches(self) -> list[str]:
        return [f"{s}: {c.name} ({c.detail})" for s, cs in self.sections.items() for c in cs if not c.ok]

    def to_json(self) -> dict:
        return {"sections": {s: [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in cs]
                             for s, cs in self.sections.items()},
                "mismatches": len(self.mismatches)}

    def to_text(self) -> str:
        lines = []
        for s, cs in self.sections.items():
            lines.append(f"[{s}]")
            for c in cs:
                lines.append(f"  {'ok  ' if c.ok else 'FAIL'} {c.name}" + (f"  -- {c.detail}" if c.detail else ""))
        lines.append(f"mismatches: {len(self.mismatches)}")
        return "\n".join(lines)


def run_all(window: int = DEFAULT_WINDOW, seed: int = 0) -> BergerReport:
    k = build_K_B13(window)
    K = k.ring
    secs: dict[str, list[Check]] = {}
    ks = [Check("additive group = Z^3 + Z_5^2", k.basis.structure.group == FinAbGroup(3, (5, 5)),
                str(k.basis.structure.group))]
    ks += [Check(f"relation {n} = 0", not any(v)) for n, v in k.relations.items()]
    ks += [Check(f"basis change {n}", ok) for n, ok in k.basis_change.items()]
    ks.append(Check("displayed presentation has the same additive basis and maps isomorphically",
                    k.presentation_iso and k.presentation_group == FinAbGroup(3, (5, 5)),
                    str(k.presentation_group)))
    ks.append(Check("t(u) = y - u", k.t(K.basis("u")) == K.sub(K.basis("y"), K.basis("u")), K.fmt(k.t(K.basis("u")))))
    ks.append(Check("t(y) = y", k.t(K.basis("y")) == K.basis("y")))
    u3 = K.basis("u3")
    ks.append(Check("u^3 + t(u^3) = 3y^2", K.add(u3, k.t(u3)) == K.scale(K.mul(K.basis("y"), K.basis("y")), 3)))
    ks += [Check(f"ring axiom: {b}", False) for b in K.check_ring()] or [Check("ring axioms", True)]
    secs["K(B13)"] = ks

    ko = build_KO_B13(k)
    O = ko.ring
    os_ = [Check(f"relation {n}", ok) for n, ok in ko.relations.items()]
    os_.append(Check("additive group = Z^2 + Z_5 + Z_2", O.group() == FinAbGroup(2, (10,)), str(O.group())))
    os_.append(Check("r(c(y')) = 2y'", ko.r(ko.c(O.basis("y'"))) == O.scale(O.basis("y'"), 2)))
    os_.append(Check("c(r(u)) = u + t(u)", ko.c(ko.r(K.basis("u"))) == K.add(K.basis("u"), k.t(K.basis("u")))))
    secs["KO(B13)"] = os_
    secs["structure identities"] = verify_structure_identities(k, ko)

    phi = phi_extend(k, ko, seed=seed)
    rep = check_phi_laws(phi, 200, seed + 1)
    ps = [Check(f"law {n} on {rep.pairs} pairs", f == 0, f"{f} failures") for n, f in rep.failures.items()]
    ps.append(Check("im(phi) on reduced K in im(r)", rep.image_in_r))
    ps.append(Check("w not in im(phi)", rep.w_not_in_image))
    ps.append(Check("phi(u) = -y'", rep.examples["phi(u)"] == "-1y'", rep.examples["phi(u)"]))
    ps.append(Check("phi(y) = y'2", rep.examples["phi(y)"] == "y'2", rep.examples["phi(y)"]))
    ps.append(Check("c(phi(u)) = u t(u) = -y", rep.examples["c(phi(u))"] == rep.examples["u.t(u)"]
                    == K.fmt(K.scale(K.basis("y"), -1))))
    secs["phi"] = ps

    im = image_alpha_O(k, ko, phi)
    secs["image of alpha_O"] = [
        Check("index 2", im.index == FinAbGroup(0, (2,)), str(im.index)),
        Check("<1, im r> is a subring", im.is_subring),
        Check("<1, im r> = Z.1 + Z y' + Z_5 y'^2", im.equals_S),
        Check("S.w = 0", im.S_times_w_zero),
        Check("im(q).im(q) in im(r)", im.products_of_q_in_r),
        Check("lambda^2(im q) in im(r)", im.lambda2_of_q_in_r),
    ]

    pr = pontryagin_certify(k)
    pc = []
    for s in (1, -1):
        pc.append(Check(f"sign {s:+d}: only w is Pontryagin-trivial", pr.trivial_classes[s] == [(0, 0, 1)],
                        str(pr.trivial_classes[s])))
        pc.append(Check(f"sign {s:+d}: closed form 1 + mu b^2 + (C(mu,2) - nu) b^4", pr.closed_form_agrees[s]))
        pc.append(Check(f"sign {s:+d}: p(y') = 1 + b^2", pr.p_y[s] == "1 + b^2", pr.p_y[s]))
        pc.append(Check(f"sign {s:+d}: Wu class 1 + b", pr.wu[s] == "1 + b", pr.wu[s]))
        pc.append(Check(f"sign {s:+d}: w = 1 + b + b^2", pr.sw[s] == "1 + b + b^2", pr.sw[s]))
    secs["characteristic classes"] = pc

    bott = bott_segment_check(k, ko)
    bc = [Check(f"exact at {v}", True) for v in bott.verified]
    bc += [Check(f"rank-consistent at {v} (partially specified maps)", True) for v in bott.consistency_only]
    bc += [Check(f, False) for f in bott.failures]
    bc += bott.model_checks
    secs["Bott sequence"] = bc
    return BergerReport(secs)

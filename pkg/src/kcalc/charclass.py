"""Characteristic classes in truncated graded rings.

Rings here are monomial rings: a finite order ideal of monomials in graded
generators, each basis monomial carrying its additive order (0 for Z). Products
of basis monomials are the monomial itself or zero. This covers cohomology
rings such as Z[b, g]/(5b^3, b^5, g^2, g b^3) and exterior algebras.

Mod-2 data (a basis of H*(-; Z_2), Sq^1 and Sq^2 on some classes) sits next to
the integral data and drives the Wu and Stiefel-Whitney computations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from math import comb
from typing import Iterable, Mapping, Sequence

from .errors import DataError, IncompleteError, OutOfScopeError, PreconditionError, StructuralError

Monomial = tuple[int, ...]


def parse_monomial(text: str, names: Sequence[str]) -> Monomial:
    """'g*b^2' -> exponents in the order of ``names``; '1' is the unit."""
    exps = [0] * len(names)
    text = text.strip()
    if text == "1":
        return tuple(exps)
    for part in text.split("*"):
        part = part.strip()
        base, _, power = part.partition("^")
        if base not in names:
            raise DataError(f"unknown generator {base!r} in monomial {text!r}")
        exps[names.index(base)] += int(power) if power else 1
    return tuple(exps)


def format_monomial(m: Monomial, names: Sequence[str]) -> str:
    parts = []
    for n, e in zip(names, m):
        if e == 1:
            parts.append(n)
        elif e:
            parts.append(f"{n}^{e}")
    return "*".join(parts) or "1"


class _Undetermined(Exception):
    pass


@dataclass
class TruncGradedRing:
    """Monomial graded ring with optional mod-2 companion."""

    names: tuple[str, ...]
    degrees: tuple[int, ...]
    top: int
    basis: dict[Monomial, int]  # integral basis monomial -> additive order (0 = Z)
    mod2: frozenset[Monomial]  # monomials forming a basis of H*(-; Z_2)
    sq1: dict[Monomial, frozenset[Monomial]] = field(default_factory=dict)
    sq2: dict[Monomial, frozenset[Monomial]] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        k = len(self.names)
        if len(self.degrees) != k or any(d <= 0 for d in self.degrees):
            raise StructuralError("generator degrees must be positive, one per generator")
        for m, o in self.basis.items():
            if len(m) != k:
                raise StructuralError(f"monomial {m} has the wrong length")
            if o < 0 or o == 1:
                raise StructuralError(f"order {o} of {self.fmt(m)} is not 0 or >= 2")
            if self.degree(m) > self.top:
                raise StructuralError(f"{self.fmt(m)} lies above the top degree")
            for i in range(k):
                if m[i]:
                    d = m[:i] + (m[i] - 1,) + m[i + 1:]
                    if d not in self.basis:
                        raise StructuralError(f"basis is not closed under divisors: {self.fmt(m)}")
                    od = self.basis[d]
                    if od and (o == 0 or od % o):
                        raise StructuralError(
                            f"order of {self.fmt(m)} must divide the order of {self.fmt(d)}")
        zero = tuple([0] * k)
        if self.basis and self.basis.get(zero) != 0:
            raise StructuralError("the unit must be a free basis element")
        for m in self.mod2:
            if self.degree(m) > self.top:
                raise StructuralError(f"mod-2 class {self.fmt(m)} lies above the top degree")
        for table in (self.sq1, self.sq2):
            for m, img in table.items():
                if m not in self.mod2 or not img <= self.mod2:
                    raise StructuralError(f"Steenrod data on {self.fmt(m)} leaves the mod-2 basis")
        for i in (1, 2):
            for m, img in (self.sq1 if i == 1 else self.sq2).items():
                for x in img:
                    if self.degree(x) != self.degree(m) + i:
                        raise StructuralError(f"Sq^{i}({self.fmt(m)}) has the wrong degree")

    # -- basics ---------------------------------------------------------------

    @property
    def unit(self) -> Monomial:
        return tuple([0] * len(self.names))

    def degree(self, m: Monomial) -> int:
        return sum(e * d for e, d in zip(m, self.degrees))

    def fmt(self, m: Monomial) -> str:
        return format_monomial(m, self.names)

    def monomial(self, text: str) -> Monomial:
        return parse_monomial(text, self.names)

    def basis_in_degree(self, p: int) -> list[Monomial]:
        return sorted((m for m in self.basis if self.degree(m) == p), reverse=True)

    def mod2_in_degree(self, p: int) -> list[Monomial]:
        return sorted((m for m in self.mod2 if self.degree(m) == p), reverse=True)

    def _sign(self, a: Monomial, b: Monomial) -> int:
        # moving the odd generators of b past those of a
        s = 0
        for j, eb in enumerate(b):
            if eb and self.degrees[j] % 2:
                s += eb * sum(ea for i, ea in enumerate(a) if i > j and self.degrees[i] % 2)
        return -1 if s % 2 else 1

    def mono_mul(self, a: Monomial, b: Monomial) -> tuple[int, Monomial] | None:
        m = tuple(x + y for x, y in zip(a, b))
        if m not in self.basis:
            return None
        return self._sign(a, b), m

    # -- integral elements ------------------------------------------------------

    def element(self, terms: Mapping[Monomial | str, int] | None = None) -> Element:
        out: dict[Monomial, int] = {}
        for m, c in (terms or {}).items():
            if isinstance(m, str):
                m = self.monomial(m)
            if m not in self.basis:
                if c:
                    raise StructuralError(f"{self.fmt(m)} is zero in this ring")
                continue
            out[m] = out.get(m, 0) + c
        return Element(self, out)

    def one(self) -> Element:
        return self.element({self.unit: 1})

    # -- mod 2 -------------------------------------------------------------------

    def mod2_mul(self, a: frozenset[Monomial], b: frozenset[Monomial]) -> frozenset[Monomial]:
        out: set[Monomial] = set()
        for x in a:
            for y in b:
                m = tuple(i + j for i, j in zip(x, y))
                if m in self.mod2:
                    out ^= {m}
        return frozenset(out)

    def _generator_index(self, m: Monomial) -> int | None:
        if sum(m) == 1:
            return m.index(1)
        return None

    def sq(self, i: int, m: Monomial) -> frozenset[Monomial]:
        """Sq^i of a mod-2 basis monomial; raises _Undetermined when the data does not fix it."""
        d = self.degree(m)
        if i == 0:
            return frozenset({m})
        if i > d or d + i > self.top:
            return frozenset()
        if i == d:
            return self.mod2_mul(frozenset({m}), frozenset({m}))
        if i == 1 and m in self.sq1:
            return self.sq1[m]
        if i == 2 and m in self.sq2:
            return self.sq2[m]
        if self._generator_index(m) is not None:
            if i == 1:
                return frozenset()  # Sq^1 vanishes on classes that lift to Z
            if i == 3:
                return self.sq_total(1, self.sq(2, m))
            raise _Undetermined(f"Sq^{i}({self.fmt(m)})")
        # Cartan formula on m = g * rest
        j = next(k for k, e in enumerate(m) if e)
        g = tuple(int(k == j) for k in range(len(m)))
        rest = tuple(e - int(k == j) for k, e in enumerate(m))
        out: set[Monomial] = set()
        for a in range(i + 1):
            left = self._sq_any(a, g)
            if not left:
                continue
            right = self._sq_any(i - a, rest)
            out ^= set(self.mod2_mul(left, right))
        return frozenset(out)

    def _sq_any(self, i: int, m: Monomial) -> frozenset[Monomial]:
        # a monomial outside the mod-2 basis (b^3 when 5b^3 = 0) is the zero class
        return self.sq(i, m) if m in self.mod2 else frozenset()

    def sq_total(self, i: int, x: Iterable[Monomial]) -> frozenset[Monomial]:
        out: set[Monomial] = set()
        for m in x:
            out ^= set(self.sq(i, m))
        return frozenset(out)

    def top_class(self) -> Monomial:
        tops = self.mod2_in_degree(self.top)
        if len(tops) != 1:
            raise DataError("mod-2 cohomology in the top degree is not Z_2")
        return tops[0]

    def fmt2(self, x: Iterable[Monomial]) -> str:
        ms = sorted(x, key=lambda m: (self.degree(m), [-e for e in m]))
        return " + ".join(self.fmt(m) for m in ms) or "0"

    def check_cartan(self) -> list[str]:
        """Compare explicit Sq^2 entries on products with the Cartan formula; returns mismatches."""
        bad = []
        for m, img in self.sq2.items():
            if self._generator_index(m) is not None:
                continue
            saved = self.sq2.pop(m)
            try:
                derived = self.sq(2, m)
            except _Undetermined:
                derived = None
            finally:
                self.sq2[m] = saved
            if derived is not None and derived != img:
                bad.append(self.fmt(m))
        return bad


@dataclass(frozen=True)
class Element:
    """Integral element of a TruncGradedRing, coefficients reduced by the additive orders."""

    ring: TruncGradedRing
    terms: dict[Monomial, int]

    def __post_init__(self):
        clean = {}
        for m, c in self.terms.items():
            o = self.ring.basis[m]
            if o:
                c %= o
            if c:
                clean[m] = c
        object.__setattr__(self, "terms", clean)

    def __add__(self, other: Element) -> Element:
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Element(self.ring, out)

    def __neg__(self) -> Element:
        return Element(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: Element) -> Element:
        return self + (-other)

    def scale(self, k: int) -> Element:
        return Element(self.ring, {m: k * c for m, c in self.terms.items()})

    def __mul__(self, other: Element | int) -> Element:
        if isinstance(other, int):
            return self.scale(other)
        out: dict[Monomial, int] = {}
        for a, x in self.terms.items():
            for b, y in other.terms.items():
                r = self.ring.mono_mul(a, b)
                if r is not None:
                    s, m = r
                    out[m] = out.get(m, 0) + s * x * y
        return Element(self.ring, out)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Element) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.terms.items())))

    def component(self, p: int) -> Element:
        return Element(self.ring, {m: c for m, c in self.terms.items() if self.ring.degree(m) == p})

    def constant(self) -> int:
        return self.terms.get(self.ring.unit, 0)

    def is_zero(self) -> bool:
        return not self.terms

    def __pow__(self, k: int) -> Element:
        if k < 0:
            return series_inverse(self) ** (-k)
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (self.ring.degree(m), [-e for e in m])):
            c = self.terms[m]
            mono = self.ring.fmt(m)
            if mono == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


# total classes ---------------------------------------------------------------

def _check_total(t: Element) -> None:
    if t.constant() != 1 or t.component(0) != t.ring.one():
        raise StructuralError("a total class must have degree-0 part equal to 1")


def series_inverse(t: Element) -> Element:
    """Inverse of 1 + x with x of positive degree (x is nilpotent in the truncated ring)."""
    _check_total(t)
    x = t - t.ring.one()
    out = t.ring.one()
    term = t.ring.one()
    for _ in range(t.ring.top + 1):
        term = term * (-x)
        if term.is_zero():
            break
        out = out + term
    return out


def line_chern(ring: TruncGradedRing, exps: Sequence[int], first_chern: Sequence[Element]) -> Element:
    """Total Chern class 1 + sum k_j x_j of the line bundle L_1^k_1 ... L_r^k_r."""
    out = ring.one()
    for k, x in zip(exps, first_chern):
        out = out + x.scale(k)
    return out


def chern_of_laurent(ring: TruncGradedRing, poly: Mapping[tuple[int, ...], int],
                     first_chern: Sequence[Element]) -> Element:
    """c of an integer combination of line bundles, given as a Laurent polynomial in line classes.

    Sums go to products (Whitney), negative multiplicities to series inverses,
    conjugate lines L^-1 get the dual class 1 - x automatically.
    """
    out = ring.one()
    for exps, n in poly.items():
        if not n or not any(exps):
            continue
        c = line_chern(ring, exps, first_chern)
        out = out * (c ** n)
    return out


def chern_of_combination(data: Mapping[str, Element], expression: Mapping[str, int]) -> Element:
    """Product of supplied total classes with integer exponents."""
    if not data and expression:
        raise OutOfScopeError("no Chern data supplied")
    ring = next(iter(data.values())).ring if data else None
    out = ring.one() if ring else None
    for name, n in expression.items():
        if name not in data:
            raise OutOfScopeError(f"no Chern data for {name!r}")
        _check_total(data[name])
        out = out * (data[name] ** n)
    return out


def conjugate_class(c: Element) -> Element:
    """c_k -> (-1)^k c_k."""
    return Element(c.ring, {m: (-1) ** (c.ring.degree(m) // 2) * v for m, v in c.terms.items()})


def pontryagin_from_chern(cx: Element) -> Element:
    """p_k = (-1)^k c_2k of the complexification."""
    _check_total(cx)
    out = {}
    for m, v in cx.terms.items():
        d = cx.ring.degree(m)
        if d % 4 == 0:
            out[m] = (-1) ** (d // 4) * v
    return Element(cx.ring, out)


# Wu and Stiefel-Whitney classes ---------------------------------------------------

def _solve_gf2(rows: list[list[int]], rhs: list[int]) -> list[int] | None:
    n = len(rows[0]) if rows else 0
    m = [r[:] + [b] for r, b in zip(rows, rhs)]
    piv = []
    r = 0
    for c in range(n):
        k = next((i for i in range(r, len(m)) if m[i][c] % 2), None)
        if k is None:
            continue
        m[r], m[k] = m[k], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] % 2:
                m[i] = [(a + b) % 2 for a, b in zip(m[i], m[r])]
        piv.append(c)
        r += 1
    if any(row[-1] % 2 for row in m[r:]):
        return None
    x = [0] * n
    for i, c in enumerate(piv):
        x[c] = m[i][-1] % 2
    return x


@dataclass
class WuResult:
    nu: dict[int, frozenset[Monomial]]
    source: dict[int, str]  # "pairing" or "sw"


def wu_classes(ring: TruncGradedRing,
               w_known: Mapping[int, frozenset[Monomial]] | None = None) -> WuResult:
    """Wu classes nu_k, from Sq^k x = nu_k x against the top class where the Steenrod data
    determines Sq^k, otherwise from a known w_k through w_k = sum_i Sq^i nu_{k-i}."""
    n = ring.top
    t = ring.top_class()
    nu: dict[int, frozenset[Monomial]] = {0: frozenset({ring.unit})}
    src = {0: "unit"}
    for k in range(1, n // 2 + 1):
        hk = ring.mod2_in_degree(k)
        dual = ring.mod2_in_degree(n - k)
        if len(hk) != len(dual):
            raise DataError(f"pairing H^{k} x H^{n - k} -> Z_2 is degenerate")
        try:
            rhs = [int(t in ring.sq(k, x)) for x in dual]
            mat = [[int(t in ring.mod2_mul(frozenset({y}), frozenset({x}))) for y in hk] for x in dual]
            sol = _solve_gf2(mat, rhs)
            if sol is None:
                raise DataError(f"Sq^{k} data is inconsistent with Poincare duality")
            if hk and _solve_gf2(mat, [0] * len(dual)) != [0] * len(hk):
                raise DataError(f"pairing H^{k} x H^{n - k} -> Z_2 is degenerate")
            nu[k] = frozenset(y for y, s in zip(hk, sol) if s)
            src[k] = "pairing"
        except _Undetermined:
            if w_known is None or k not in w_known:
                raise IncompleteError(f"Sq^{k} on H^{n - k} is not determined and w_{k} is unknown")
            acc = set(w_known[k])
            for i in range(1, k + 1):
                acc ^= set(ring.sq_total(i, nu[k - i]))
            nu[k] = frozenset(acc)
            src[k] = "sw"
    for k in range(n // 2 + 1, n + 1):
        nu[k] = frozenset()
    return WuResult(nu, src)


def total(x: Mapping[int, frozenset[Monomial]]) -> frozenset[Monomial]:
    out: set[Monomial] = set()
    for v in x.values():
        out ^= set(v)
    return frozenset(out)


def sw_from_wu(ring: TruncGradedRing, nu: Mapping[int, frozenset[Monomial]]) -> dict[int, frozenset[Monomial]]:
    """w = Sq(nu), degreewise."""
    w: dict[int, frozenset[Monomial]] = {}
    for k in range(ring.top + 1):
        acc: set[Monomial] = set()
        for i in range(k + 1):
            acc ^= set(ring.sq_total(i, nu.get(k - i, frozenset())))
        w[k] = frozenset(acc)
    return w


def restrict_mod2(source: TruncGradedRing, target: TruncGradedRing,
                  images: Mapping[str, frozenset[Monomial]], x: Iterable[Monomial]) -> frozenset[Monomial]:
    """Image of a mod-2 class under the ring map given on generators."""
    out: set[Monomial] = set()
    for m in x:
        img = frozenset({target.unit})
        for name, e in zip(source.names, m):
            for _ in range(e):
                img = target.mod2_mul(img, images[name])
        out ^= set(img)
    return frozenset(out)


def sw_from_fibre(ring: TruncGradedRing, fibre: TruncGradedRing,
                  images: Mapping[str, frozenset[Monomial]],
                  w_fibre: Mapping[int, frozenset[Monomial]], max_degree: int) -> dict[int, frozenset[Monomial]]:
    """w_k of the total space in degrees where restriction to the fibre is injective, from i*w(E) = w(F)."""
    out = {}
    for k in range(1, max_degree + 1):
        hk = ring.mod2_in_degree(k)
        fk = fibre.mod2_in_degree(k)
        imgs = [restrict_mod2(ring, fibre, images, [m]) for m in hk]
        mat = [[int(f in img) for img in imgs] for f in fk]
        rhs = [int(f in w_fibre.get(k, frozenset())) for f in fk]
        if hk and _solve_gf2(mat, [0] * len(fk)) != [0] * len(hk):
            raise PreconditionError(f"restriction to the fibre is not injective in degree {k}")
        sol = _solve_gf2(mat, rhs) if hk else ([] if not any(rhs) else None)
        if sol is None:
            raise DataError(f"w_{k} of the fibre is not in the image of the restriction")
        out[k] = frozenset(m for m, s in zip(hk, sol) if s)
    return out


def rp_ring(n: int) -> TruncGradedRing:
    """Mod-2 cohomology of RP^n (no integral part)."""
    return TruncGradedRing(("a",), (1,), n, {}, frozenset((k,) for k in range(n + 1)), name=f"RP{n}")


def rp_sw(n: int) -> dict[int, frozenset[Monomial]]:
    """w(RP^n) = (1 + a)^(n+1)."""
    return {k: frozenset({(k,)}) if comb(n + 1, k) % 2 else frozenset() for k in range(n + 1)}


# B13-specific closed form ------------------------------------------------------------

def pontryagin_closed_form(ring: TruncGradedRing, beta: str, mu: int, nu: int) -> Element:
    """1 + mu b^2 + (C(mu, 2) - nu) b^4."""
    b2 = ring.element({f"{beta}^2": 1})
    b4 = ring.element({f"{beta}^4": 1})
    return ring.one() + b2.scale(mu) + b4.scale(mu * (mu - 1) // 2 - nu)


def pontryagin_of_ko_class(c_y: Element, c_y2: Element, mu: int, nu: int, delta: int) -> Element:
    """p(mu y' + nu y'^2 + delta w), computed from the complexification mu y + nu y^2.

    c(y') = y, c(y'^2) = y^2 and c(w) = 0, so delta does not enter.
    """
    del delta
    return pontryagin_from_chern((c_y ** mu) * (c_y2 ** nu))


def ring_from_json(obj: Mapping) -> TruncGradedRing:
    gens = obj["generators"]
    names = tuple(g["name"] for g in gens)
    degrees = tuple(int(g["degree"]) for g in gens)
    basis = {parse_monomial(b["monomial"], names): int(b["order"]) for b in obj.get("basis", [])}
    if "mod2_basis" in obj:
        mod2 = frozenset(parse_monomial(m, names) for m in obj["mod2_basis"])
    else:
        if any(o and o % 2 == 0 for o in basis.values()):
            raise OutOfScopeError("even torsion needs an explicit mod-2 basis")
        mod2 = frozenset(m for m, o in basis.items() if o == 0)

    def table(key):
        out = {}
        for src, img in obj.get(key, {}).items():
            out[parse_monomial(src, names)] = frozenset(parse_monomial(x, names) for x in img)
        return out

    return TruncGradedRing(names, degrees, int(obj["dimension"]), basis, mod2,
                           table("sq1"), table("sq2"), obj.get("name", ""))


def exterior_ring(degrees: Sequence[int], names: Sequence[str] | None = None) -> TruncGradedRing:
    """Exterior algebra on the given generators; odd ones anticommute, squares vanish."""
    names = tuple(names or [f"x{i + 1}" for i in range(len(degrees))])
    basis = {m: 0 for m in iproduct((0, 1), repeat=len(degrees))}
    top = sum(degrees)
    return TruncGradedRing(names, tuple(degrees), top, basis, frozenset(basis), name="exterior")

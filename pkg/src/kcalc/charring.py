"""Characters of compact Lie groups as Laurent polynomials on a maximal torus.

A ``Character`` is a finite Z-linear combination of Laurent monomials.  Group
data (SU(n), Sp(n), Spin(n), circles, products) carries torus coordinates, the
characters of a set of ring generators, and a type table.  Spin groups use
doubled coordinates z_i with x_i = z_i^2 so that half-spin weights stay
integral.

    >>> x = Character.variable(0, 1)
    >>> exterior_power(x + x**-1, 2) == Character.constant(1, 1)
    True
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import IncompleteError, StructuralError, VirtualCharacterError
from .exactlin import solve_int

Mono = tuple[int, ...]


@dataclass(frozen=True)
class CharacterRingSpec:
    names: tuple[str, ...]
    weight_doubling: tuple[bool, ...] = ()
    # variables that may only carry nonnegative exponents (generator-level rings)
    polynomial: tuple[bool, ...] = ()

    def __post_init__(self):
        k = len(self.names)
        if not self.weight_doubling:
            object.__setattr__(self, "weight_doubling", (False,) * k)
        if not self.polynomial:
            object.__setattr__(self, "polynomial", (False,) * k)
        if len(self.weight_doubling) != k or len(self.polynomial) != k:
            raise StructuralError("per-variable flags do not match the variable count")
        if len(set(self.names)) != k:
            raise StructuralError(f"duplicate variable names in {self.names}")

    @property
    def rank(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise StructuralError(f"unknown variable {name!r}") from None

    def __add__(self, other: CharacterRingSpec) -> CharacterRingSpec:
        return CharacterRingSpec(self.names + other.names,
                                 self.weight_doubling + other.weight_doubling,
                                 self.polynomial + other.polynomial)


class Character:
    """Immutable Laurent polynomial with integer coefficients in ``nvars`` variables."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Mono, int] | None = None):
        self.nvars = nvars
        clean = {}
        for m, c in (terms or {}).items():
            if c:
                m = tuple(m)
                if len(m) != nvars:
                    raise StructuralError(f"monomial {m} has length != {nvars}")
                clean[m] = clean.get(m, 0) + c
        self.terms = {m: c for m, c in clean.items() if c}
        self._hash = None

    # constructors
    @classmethod
    def constant(cls, c: int, nvars: int) -> Character:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def zero(cls, nvars: int) -> Character:
        return cls(nvars)

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff: int = 1) -> Character:
        return cls(len(exps), {tuple(exps): coeff})

    @classmethod
    def variable(cls, i: int, nvars: int, power: int = 1) -> Character:
        e = [0] * nvars
        e[i] = power
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def from_monomials(cls, monos: Iterable[Sequence[int]], nvars: int) -> Character:
        out: dict[Mono, int] = {}
        for m in monos:
            out[tuple(m)] = out.get(tuple(m), 0) + 1
        return cls(nvars, out)

    # arithmetic
    def _coerce(self, other) -> Character:
        if isinstance(other, Character):
            if other.nvars != self.nvars:
                raise StructuralError(f"characters live in rings of rank {self.nvars} and {other.nvars}")
            return other
        if isinstance(other, int):
            return Character.constant(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Character(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Character(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Mono, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Character(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Character:
        if k < 0:
            if not self.is_monomial():
                raise StructuralError("only monomials can be inverted")
            (m, c), = self.terms.items()
            if c not in (1, -1):
                raise StructuralError("only unit monomials can be inverted")
            return Character(self.nvars, {tuple(k * e for e in m): c ** -k})
        out = Character.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Character.constant(other, self.nvars)
        if not isinstance(other, Character):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return f"Character({self.nvars}, {self.terms})"

    # queries
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_effective(self) -> bool:
        return all(c > 0 for c in self.terms.values())

    def dimension(self) -> int:
        """Value at the identity of the torus."""
        return sum(self.terms.values())

    def coefficient(self, mono: Sequence[int]) -> int:
        return self.terms.get(tuple(mono), 0)

    def support(self) -> list[Mono]:
        return sorted(self.terms)

    def monomial_list(self) -> list[Mono]:
        """The multiset of weights of an effective character."""
        if not self.is_effective():
            raise VirtualCharacterError("weights are only defined for honest characters")
        out: list[Mono] = []
        for m in sorted(self.terms):
            out.extend([m] * self.terms[m])
        return out

    def format(self, names: Sequence[str] | None = None) -> str:
        names = list(names) if names else [f"t{i + 1}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, reverse=True):
            c = self.terms[m]
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, m) if e)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


# --------------------------------------------------------------------------
# operations

def conjugate(c: Character) -> Character:
    """Dual representation: invert every torus variable."""
    return Character(c.nvars, {tuple(-e for e in m): k for m, k in c.terms.items()})


def exterior_power(c: Character, k: int) -> Character:
    """e_k of the weight multiset of an honest character."""
    if k < 0:
        raise StructuralError("exterior power index must be nonnegative")
    if not all(v > 0 for v in c.terms.values()):
        raise VirtualCharacterError("exterior_power needs nonnegative coefficients; use lambda_series")
    return exterior_powers(c, k)[k]


def exterior_powers(c: Character, k: int) -> list[Character]:
    """[lambda^0 c, ..., lambda^k c] for an honest character."""
    n = c.nvars
    polys = [Character.constant(1, n)] + [Character.zero(n) for _ in range(k)]
    for m, mult in sorted(c.terms.items()):
        if mult < 0:
            raise VirtualCharacterError("negative multiplicity")
        mono = Character.monomial(m)
        for _ in range(mult):
            for j in range(k, 0, -1):
                polys[j] = polys[j] + mono * polys[j - 1]
    return polys


def lambda_series(c: Character, order: int) -> list[Character]:
    """Coefficients of lambda_t(c) up to t^order for a possibly virtual character.

    Uses lambda_t(a - b) = lambda_t(a) / lambda_t(b).
    """
    n = c.nvars
    pos = Character(n, {m: v for m, v in c.terms.items() if v > 0})
    neg = Character(n, {m: -v for m, v in c.terms.items() if v < 0})
    num = exterior_powers(pos, order)
    den = exterior_powers(neg, order)
    # invert den as a power series with constant term 1
    inv = [Character.constant(1, n)] + [Character.zero(n) for _ in range(order)]
    for j in range(1, order + 1):
        acc = Character.zero(n)
        for i in range(1, j + 1):
            acc = acc + den[i] * inv[j - i]
        inv[j] = -acc
    out = []
    for j in range(order + 1):
        acc = Character.zero(n)
        for i in range(j + 1):
            acc = acc + num[i] * inv[j - i]
        out.append(acc)
    return out


def restrict(c: Character, images: Sequence[Character] | Mapping[int, Character],
             source: CharacterRingSpec | None = None,
             target: CharacterRingSpec | None = None) -> Character:
    """Substitute variable i of ``c`` by ``images[i]``: the induced ring homomorphism.

    Negative powers are allowed only for images that are unit monomials.  When
    specs are given, a doubled source variable must map into doubled target
    variables.
    """
    if isinstance(images, Mapping):
        images = [images[i] for i in range(c.nvars)] if all(i in images for i in range(c.nvars)) else None
        if images is None:
            raise StructuralError("restriction is not defined on every variable")
    images = list(images)
    if len(images) != c.nvars:
        raise StructuralError(f"{len(images)} images for {c.nvars} variables")
    if not images:
        return c
    nt = images[0].nvars
    if any(im.nvars != nt for im in images):
        raise StructuralError("images live in different rings")
    if source is not None and source.rank != c.nvars:
        raise StructuralError("source spec rank mismatch")
    if target is not None and target.rank != nt:
        raise StructuralError("target spec rank mismatch")
    if source is not None and target is not None:
        for i, im in enumerate(images):
            if source.weight_doubling[i]:
                for m in im.terms:
                    for j, e in enumerate(m):
                        if e and not target.weight_doubling[j]:
                            raise StructuralError(
                                f"doubled variable {source.names[i]} mapped onto undoubled {target.names[j]}")
    powers: dict[tuple[int, int], Character] = {}

    def power(i: int, e: int) -> Character:
        key = (i, e)
        if key not in powers:
            powers[key] = images[i] ** e
        return powers[key]

    out = Character.zero(nt)
    for m, coeff in c.terms.items():
        term = Character.constant(coeff, nt)
        for i, e in enumerate(m):
            if e:
                term = term * power(i, e)
        out = out + term
    return out


# --------------------------------------------------------------------------
# group data

@dataclass
class GroupData:
    """A compact connected Lie group through its torus and chosen ring generators.

    ``dominance`` describes the semisimple coordinates for rewriting Weyl-invariant
    characters in the generators: (coordinate indices, kind) with kind in
    {"A", "C", "B", "D"}; coordinates in ``central`` are circle factors whose
    generators are the coordinate itself and its inverse.
    """

    name: str
    spec: CharacterRingSpec
    ring_generators: dict[str, Character]
    type_table: dict[str, str]
    blocks: list[tuple[str, tuple[int, ...], tuple[str, ...]]] = field(default_factory=list)
    central: tuple[int, ...] = ()

    def __post_init__(self):
        for k, v in self.type_table.items():
            if v not in ("real", "complex", "quaternionic"):
                raise StructuralError(f"type of {k} must be real/complex/quaternionic, got {v}")
        for k, ch in self.ring_generators.items():
            if ch.nvars != self.spec.rank:
                raise StructuralError(f"generator {k} lives in the wrong ring")

    def generator_names(self) -> list[str]:
        return list(self.ring_generators)

    def generator_spec(self) -> CharacterRingSpec:
        """Ring in which the generators are the variables (circle generators are Laurent)."""
        names = tuple(self.ring_generators)
        central_names = {self.spec.names[i] for i in self.central}
        poly = tuple(n not in central_names for n in names)
        return CharacterRingSpec(names, polynomial=poly)

    def check_types(self) -> list[str]:
        """Names of real/quaternionic generators that fail to be self-conjugate."""
        bad = []
        for k, t in self.type_table.items():
            if t in ("real", "quaternionic") and k in self.ring_generators:
                ch = self.ring_generators[k]
                if conjugate(ch) != ch:
                    bad.append(k)
        return bad

    def from_generators(self, poly: Character) -> Character:
        """Evaluate a polynomial in the generators as a torus character."""
        return restrict(poly, list(self.ring_generators.values()))

    def to_generators(self, c: Character) -> Character:
        return express_in_generators(self, c)

    def conjugate_generators(self, poly: Character) -> Character:
        return self.to_generators(conjugate(self.from_generators(poly)))


def _torus_names(prefix: str, k: int) -> tuple[str, ...]:
    return tuple(f"{prefix}{i + 1}" for i in range(k))


def su(n: int, prefix: str = "z") -> GroupData:
    """SU(n) on coordinates z_1..z_{n-1}, z_n = (z_1...z_{n-1})^{-1}; generators lambda^k v."""
    if n < 2:
        raise StructuralError("SU(n) needs n >= 2")
    r = n - 1
    spec = CharacterRingSpec(_torus_names(prefix, r))
    weights = [tuple(int(i == j) for j in range(r)) for i in range(r)] + [(-1,) * r]
    v = Character.from_monomials(weights, r)
    lam = exterior_powers(v, n - 1)
    gens = {}
    types = {}
    for k in range(1, n):
        name = "v" if k == 1 else f"lambda{k}v"
        gens[name] = lam[k]
        if 2 * k == n:
            types[name] = "real" if k % 2 == 0 else "quaternionic"
        else:
            types[name] = "complex"
    return GroupData(f"SU({n})", spec, gens, types, blocks=[("A", tuple(range(r)), tuple(gens))])


def sp(n: int, prefix: str = "t") -> GroupData:
    """Sp(n) with standard representation u = sum(t_i + t_i^{-1}); generators lambda^k u."""
    spec = CharacterRingSpec(_torus_names(prefix, n))
    weights = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        weights.append(tuple(e))
        e[i] = -1
        weights.append(tuple(e))
    u = Character.from_monomials(weights, n)
    lam = exterior_powers(u, n)
    gens = {}
    types = {}
    for k in range(1, n + 1):
        name = "u" if k == 1 else f"lambda{k}u"
        gens[name] = lam[k]
        types[name] = "quaternionic" if k % 2 else "real"
    return GroupData(f"Sp({n})", spec, gens, types, blocks=[("C", tuple(range(n)), tuple(gens))])


def spin(m: int, prefix: str = "z") -> GroupData:
    """Spin(m), m >= 5, on doubled coordinates (x_i = z_i^2)."""
    if m < 5:
        raise StructuralError("use su/sp for Spin(m) with m < 5")
    n = m // 2
    spec = CharacterRingSpec(_torus_names(prefix, n), (True,) * n)
    weights = []
    for i in range(n):
        e = [0] * n
        e[i] = 2
        weights.append(tuple(e))
        e[i] = -2
        weights.append(tuple(e))
    if m % 2:
        weights.append((0,) * n)
    vec = Character.from_monomials(weights, n)
    half = Character.from_monomials(itertools.product((1, -1), repeat=n), n)
    gens: dict[str, Character] = {}
    types: dict[str, str] = {}
    lam = exterior_powers(vec, n)
    top = n - 1 if m % 2 else n - 2
    for k in range(1, top + 1):
        name = "V" if k == 1 else f"lambda{k}V"
        gens[name] = lam[k]
        types[name] = "real"
    if m % 2:
        gens["Delta"] = half
        types["Delta"] = "real" if n % 4 in (0, 3) else "quaternionic"
        kind = "B"
    else:
        plus = Character(n, {s: 1 for s in half.terms if sum(1 for x in s if x < 0) % 2 == 0})
        minus = Character(n, {s: 1 for s in half.terms if sum(1 for x in s if x < 0) % 2 == 1})
        gens["Delta+"] = plus
        gens["Delta-"] = minus
        if n % 2:
            types["Delta+"] = types["Delta-"] = "complex"
        else:
            types["Delta+"] = types["Delta-"] = "real" if n % 4 == 0 else "quaternionic"
        kind = "D"
    return GroupData(f"Spin({m})", spec, gens, types, blocks=[(kind, tuple(range(n)), tuple(gens))])


def circle(name: str = "x") -> GroupData:
    spec = CharacterRingSpec((name,))
    return GroupData("S1", spec, {name: Character.variable(0, 1)}, {name: "complex"}, central=(0,))


def product(*groups: GroupData) -> GroupData:
    names: tuple[str, ...] = ()
    doubling: tuple[bool, ...] = ()
    for g in groups:
        names += g.spec.names
        doubling += g.spec.weight_doubling
    spec = CharacterRingSpec(names, doubling)
    total = spec.rank
    gens: dict[str, Character] = {}
    types: dict[str, str] = {}
    blocks = []
    central: list[int] = []
    offset = 0
    for g in groups:
        r = g.spec.rank
        for k, ch in g.ring_generators.items():
            if k in gens:
                raise StructuralError(f"duplicate generator name {k} in product")
            gens[k] = Character(total, {(0,) * offset + m + (0,) * (total - offset - r): c
                                        for m, c in ch.terms.items()})
        types.update(g.type_table)
        for kind, idx, gnames in g.blocks:
            blocks.append((kind, tuple(i + offset for i in idx), gnames))
        central.extend(i + offset for i in g.central)
        offset += r
    return GroupData(" x ".join(g.name for g in groups), spec, gens, types, blocks, tuple(central))



_FAMILY = re.compile(r"^(SU|Sp|Spin)\((\d+)\)$")


def _renamed(g: GroupData, suffix: str) -> GroupData:
    ren = {k: k + suffix for k in g.ring_generators}
    return GroupData(g.name, g.spec, {ren[k]: v for k, v in g.ring_generators.items()},
                     {ren[k]: v for k, v in g.type_table.items()},
                     [(kind, idx, tuple(ren[n] for n in names)) for kind, idx, names in g.blocks], g.central)


def group_data_from_json(obj: Mapping) -> GroupData:
    """Build a product of standard groups from ``{"factors": [...]}``.

    A factor is a name such as "SU(5)", "Sp(2)" or "Spin(7)", an object
    ``{"group": name, "prefix": p, "suffix": s}`` (torus coordinate prefix and a
    suffix appended to generator names), or ``{"circle": name}``.
    """
    factors = obj.get("factors")
    if not factors:
        raise StructuralError("a group needs at least one factor")
    built = []
    for i, f in enumerate(factors):
        if isinstance(f, str):
            f = {"group": f}
        if "circle" in f:
            built.append(circle(f["circle"]))
            continue
        m = _FAMILY.match(f.get("group", ""))
        if not m:
            raise StructuralError(f"factor {i}: unknown group {f.get('group')!r}")
        fam, n = m.group(1), int(m.group(2))
        default = {"SU": "z", "Sp": "t", "Spin": "z"}[fam]
        prefix = f.get("prefix", default if i == 0 else f"{default}{i}_")
        g = su(n, prefix) if fam == "SU" else sp(n, prefix) if fam == "Sp" else spin(n, prefix)
        if f.get("suffix"):
            g = _renamed(g, f["suffix"])
        built.append(g)
    return built[0] if len(built) == 1 else product(*built)

# --------------------------------------------------------------------------
# rewriting invariant characters in the generators

def _dominant(kind: str, a: Sequence[int]) -> bool:
    k = len(a)
    if kind in ("A", "B", "C"):
        return all(a[i] >= a[i + 1] for i in range(k - 1)) and (k == 0 or a[-1] >= 0)
    if kind == "D":
        return all(a[i] >= a[i + 1] for i in range(k - 2)) and (k < 2 or a[k - 2] >= abs(a[k - 1]))
    raise StructuralError(f"unknown block kind {kind}")


def _height(a: Sequence[int]) -> tuple:
    k = len(a)
    return (sum((k - i) * x for i, x in enumerate(a)),) + tuple(a)


def express_in_generators(g: GroupData, c: Character, max_steps: int = 100000) -> Character:
    """Rewrite a Weyl-invariant torus character as a polynomial in g's generators.

    Repeatedly strips the term of highest dominant weight (per simple block)
    using products of generators whose leading weights are the fundamental
    weights.  Circle coordinates are carried along as Laurent monomials.
    """
    gspec = g.generator_spec()
    gnames = list(g.ring_generators)
    out: dict[Mono, int] = {}
    if not g.blocks:
        # pure torus: generators are the coordinates
        for m, v in c.terms.items():
            e = [0] * len(gnames)
            for i, x in zip(g.central, m):
                e[gnames.index(g.spec.names[i])] = x
            out[tuple(e)] = out.get(tuple(e), 0) + v
        return Character(gspec.rank, out)
    # leading weights of the generators per block
    lead: dict[str, tuple[int, ...]] = {}
    for kind, idx, names in g.blocks:
        for name in names:
            ch = g.ring_generators[name]
            doms = [tuple(m[i] for i in idx) for m in ch.terms
                    if _dominant(kind, [m[i] for i in idx])]
            lead[name] = max(doms, key=_height)
    cache: dict[Mono, Character] = {}

    def gen_monomial(e: Mono) -> Character:
        if e not in cache:
            cache[e] = restrict(Character.monomial(e), list(g.ring_generators.values()))
        return cache[e]

    rest = c
    steps = 0
    while rest:
        steps += 1
        if steps > max_steps:
            raise IncompleteError("generator rewriting did not terminate")
        best = None
        for m, v in rest.terms.items():
            if all(_dominant(kind, [m[i] for i in idx]) for kind, idx, _ in g.blocks):
                key = tuple(_height([m[i] for i in idx]) for _, idx, _ in g.blocks)
                if best is None or key > best[0]:
                    best = (key, m, v)
        if best is None:
            raise StructuralError("character is not Weyl invariant (no dominant term left)")
        _, m, v = best
        e = [0] * len(gnames)
        for kind, idx, names in g.blocks:
            target = [m[i] for i in idx]
            cols = [lead[n] for n in names]
            rows = [[cols[j][i] for j in range(len(names))] for i in range(len(idx))]
            sol = solve_int(rows, len(names), target)
            if sol is None or any(s < 0 for s in sol):
                raise StructuralError(f"weight {target} is not a nonnegative sum of fundamental weights")
            for n, s in zip(names, sol):
                e[gnames.index(n)] = s
        for i in g.central:
            e[gnames.index(g.spec.names[i])] = m[i]
        e = tuple(e)
        out[e] = out.get(e, 0) + v
        rest = rest - v * gen_monomial(e)
    return Character(gspec.rank, out)


# --------------------------------------------------------------------------
# fixed subrings under a central Z/2

@dataclass(frozen=True)
class FixedSubring:
    """Monomials m with sum of exponents over the sign-(-1) variables even."""

    spec: CharacterRingSpec
    odd_variables: tuple[int, ...]
    generators: tuple[Mono, ...]
    complete: bool
    degree_bound: int

    def contains(self, mono: Sequence[int]) -> bool:
        return sum(mono[i] for i in self.odd_variables) % 2 == 0

    def contains_character(self, c: Character) -> bool:
        return all(self.contains(m) for m in c.terms)

    def generator_characters(self) -> list[Character]:
        return [Character.monomial(m) for m in self.generators]


def central_fixed_subring(spec: CharacterRingSpec | GroupData, action: Mapping[str, int],
                          degree_bound: int = 4) -> FixedSubring:
    """Monomial generators of the subring fixed by a sign action on the variables.

    ``spec`` is a generator-level ring (GroupData is converted via
    ``generator_spec``).  Generators are the indecomposable fixed monomials in
    each orthant, found by enumeration up to ``degree_bound`` (total absolute
    degree).  For a Z/2 sign action every indecomposable has degree <= 2, so the
    list is certified complete iff degree_bound >= 2.
    """
    if isinstance(spec, GroupData):
        spec = spec.generator_spec()
    for k, s in action.items():
        spec.index(k)
        if s not in (1, -1):
            raise StructuralError(f"action on {k} must be +1 or -1")
    odd = tuple(i for i, n in enumerate(spec.names) if action.get(n, 1) == -1)
    k = spec.rank
    ranges = [range(0, degree_bound + 1) if spec.polynomial[i] else range(-degree_bound, degree_bound + 1)
              for i in range(k)]

    def fixed(m):
        return sum(m[i] for i in odd) % 2 == 0

    cands = [m for m in itertools.product(*ranges)
             if any(m) and sum(abs(x) for x in m) <= degree_bound and fixed(m)]
    cands.sort(key=lambda m: (sum(abs(x) for x in m), [-x for x in m]))
    gens: list[Mono] = []
    fixed_set = set(cands)
    for m in cands:
        decomposable = False
        for a in fixed_set:
            if a == m:
                continue
            b = tuple(x - y for x, y in zip(m, a))
            if not any(b) or b not in fixed_set:
                continue
            # sign-coherent split inside the orthant of m
            if all((x == 0 or (x > 0) == (mx > 0)) and abs(x) <= abs(mx)
                   for x, mx in zip(a, m)) and \
               all((x == 0 or (x > 0) == (mx > 0)) and abs(x) <= abs(mx)
                   for x, mx in zip(b, m)):
                decomposable = True
                break
        if not decomposable:
            gens.append(m)
    return FixedSubring(spec, odd, tuple(gens), degree_bound >= 2, degree_bound)

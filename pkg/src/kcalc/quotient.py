"""Additive structure of quotients of Laurent polynomial rings over Z.

The ring Z[vars^{±}]/(relations) is truncated to an exponent window: relations
are multiplied by every monomial keeping them inside the window, and the
resulting lattice is diagonalized.  The answer is certified by checking that
the inclusion of the window-w quotient into the window-(w+1) quotient is an
isomorphism.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .charring import Character, GroupData, restrict
from .errors import IncompleteError, StructuralError, WindowTooSmallError
from .exactlin import (Decomposition, FinAbGroup, GroupMap, IntMatrix, Presentation,
                       quotient_presentation, solve_int)

DEFAULT_WINDOW = 12


@dataclass(frozen=True)
class LaurentIdealPresentation:
    names: tuple[str, ...]
    invertible: tuple[bool, ...]
    relations: tuple[Character, ...]
    eliminable: tuple[tuple[str, Character], ...] = ()

    def __post_init__(self):
        k = len(self.names)
        if len(self.invertible) != k:
            raise StructuralError("invertibility flags do not match variables")
        for r in self.relations:
            self._check(r, "relation")
        for g, e in self.eliminable:
            self.index(g)
            self._check(e, f"expression for {g}")

    def _check(self, c: Character, what: str) -> None:
        if c.nvars != len(self.names):
            raise StructuralError(f"{what} lives in a ring of rank {c.nvars}, expected {len(self.names)}")
        for m in c.terms:
            for i, e in enumerate(m):
                if e < 0 and not self.invertible[i]:
                    raise StructuralError(f"{what} has a negative power of non-invertible {self.names[i]}")

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise StructuralError(f"unknown variable {name!r}") from None

    def var(self, name: str) -> Character:
        return Character.variable(self.index(name), len(self.names))

    def format(self, c: Character) -> str:
        return c.format(self.names)


def _substitute(c: Character, i: int, expr: Character) -> Character:
    images = [Character.variable(j, c.nvars) for j in range(c.nvars)]
    images[i] = expr
    return restrict(c, images)


def _elimination_order(p: LaurentIdealPresentation) -> list[tuple[str, Character]]:
    names = [g for g, _ in p.eliminable]
    if len(set(names)) != len(names):
        raise StructuralError("a variable is eliminated twice")
    deps = {}
    for g, e in p.eliminable:
        used = {p.names[j] for m in e.terms for j, x in enumerate(m) if x}
        if g in used:
            raise StructuralError(f"cyclic substitution: {g} appears in its own expression")
        deps[g] = used & set(names)
    order: list[str] = []
    state: dict[str, int] = {}

    def visit(g, stack):
        if state.get(g) == 2:
            return
        if state.get(g) == 1:
            raise StructuralError(f"cyclic substitution through {' -> '.join(stack + [g])}")
        state[g] = 1
        for h in sorted(deps[g], key=names.index):
            visit(h, stack + [g])
        state[g] = 2
        order.append(g)

    for g in names:
        visit(g, [])
    exprs = dict(p.eliminable)
    return [(g, exprs[g]) for g in order]


def eliminate_units(p: LaurentIdealPresentation) -> LaurentIdealPresentation:
    """Substitute each eliminable variable by its expression.

    Each substitution g := expr must be witnessed by a relation equal to a unit
    monomial times (g - expr); that relation is consumed, so the new
    presentation defines the same ring.
    """
    if not p.eliminable:
        return p
    rels = list(p.relations)
    done: dict[int, Character] = {}
    n = len(p.names)
    for g, expr in _elimination_order(p):
        i = p.index(g)
        for j, e in done.items():
            expr = _substitute(expr, j, e)
        if any(m[i] for m in expr.terms):
            raise StructuralError(f"cyclic substitution: {g} reappears after substitution")
        gvar = Character.variable(i, n)
        witness = None
        for k, r in enumerate(rels):
            lin = {m: c for m, c in r.terms.items() if m[i]}
            if len(lin) != 1:
                continue
            (m, c), = lin.items()
            if m[i] != 1 or c not in (1, -1):
                continue
            unit_exp = list(m)
            unit_exp[i] = 0
            if any(x and not p.invertible[j] for j, x in enumerate(unit_exp) if x < 0):
                continue
            unit = Character(n, {tuple(unit_exp): c})
            if r == unit * (gvar - expr):
                witness = k
                break
        if witness is None:
            raise StructuralError(f"no relation of the form unit*({g} - expr) for {g}")
        rels.pop(witness)
        rels = [_substitute(r, i, expr) for r in rels]
        rels = [r for r in rels if r]
        done[i] = expr
    keep = [j for j in range(n) if j not in done]
    proj = []
    for r in rels:
        terms = {}
        for m, c in r.terms.items():
            if any(m[j] for j in done):
                raise StructuralError("eliminated variable survives substitution")
            terms[tuple(m[j] for j in keep)] = c
        proj.append(Character(len(keep), terms))
    return LaurentIdealPresentation(tuple(p.names[j] for j in keep),
                                    tuple(p.invertible[j] for j in keep), tuple(proj))


# --------------------------------------------------------------------------
# windowed additive structure

def _window_monomials(p: LaurentIdealPresentation, w: int) -> list[tuple[int, ...]]:
    ranges = [range(-w, w + 1) if inv else range(0, w + 1) for inv in p.invertible]
    mons = list(itertools.product(*ranges))
    mons.sort(key=lambda m: (sum(abs(x) for x in m), [-x for x in m]))
    return mons


def _window_lattice(p: LaurentIdealPresentation, w: int):
    mons = _window_monomials(p, w)
    index = {m: i for i, m in enumerate(mons)}
    rows = []
    seen = set()
    for r in p.relations:
        sup = list(r.terms)
        lo = [min(m[j] for m in sup) for j in range(len(p.names))]
        hi = [max(m[j] for m in sup) for j in range(len(p.names))]
        shift_ranges = [range(-w - lo[j] if inv else 0, w - hi[j] + 1)
                        for j, inv in enumerate(p.invertible)]
        for s in itertools.product(*shift_ranges):
            row = [0] * len(mons)
            for m, c in r.terms.items():
                row[index[tuple(a + b for a, b in zip(m, s))]] = c
            key = tuple(row)
            if key not in seen:
                seen.add(key)
                rows.append(row)
    return mons, index, rows


@dataclass
class AdditiveStructure:
    presentation: LaurentIdealPresentation
    group: FinAbGroup
    basis_reps: list[tuple[int, ...]]
    window: int
    certificate: FinAbGroup
    monomials: list[tuple[int, ...]] = field(repr=False)
    decomposition: Decomposition = field(repr=False)

    def vector(self, elem: Character) -> list[int]:
        if elem.nvars != len(self.presentation.names):
            raise StructuralError("element lives in a different ring")
        index = {m: i for i, m in enumerate(self.monomials)}
        v = [0] * len(self.monomials)
        for m, c in elem.terms.items():
            if m not in index:
                raise WindowTooSmallError(f"monomial {m} lies outside the window {self.window}")
            v[index[m]] += c
        return v

    def coords(self, elem: Character) -> tuple[int, ...]:
        return self.decomposition.coords(self.vector(elem))

    def is_zero(self, elem: Character) -> bool:
        return not any(self.coords(elem))

    def basis_characters(self) -> list[Character]:
        return [Character.monomial(m) for m in self.basis_reps]


def additive_structure(p: LaurentIdealPresentation, window: int = DEFAULT_WINDOW,
                       eliminate: bool = True) -> AdditiveStructure:
    """Quotient ring as an abelian group, with a window-stability certificate."""
    if eliminate:
        p = eliminate_units(p)
    if window < 1:
        raise StructuralError("window must be positive")
    mons, index, rows = _window_lattice(p, window)
    pres = Presentation(len(mons), IntMatrix.from_rows(rows, len(mons)))
    dec = pres.decomposition()
    mons1, index1, rows1 = _window_lattice(p, window + 1)
    pres1 = Presentation(len(mons1), IntMatrix.from_rows(rows1, len(mons1)))
    incl = [[0] * len(mons) for _ in mons1]
    for m, i in index.items():
        incl[index1[m]][i] = 1
    f = GroupMap(pres, pres1, IntMatrix.from_rows(incl, len(mons)))
    if not f.is_iso():
        raise IncompleteError(f"quotient not stable between windows {window} and {window + 1}",
                              dec.group, pres1.group())
    group = dec.group
    reps = _monomial_basis(dec, mons)
    return AdditiveStructure(p, group, reps, window, pres1.group(), mons, dec)


def _monomial_basis(dec: Decomposition, mons) -> list[tuple[int, ...]]:
    """Monomials nearest the origin whose classes generate the quotient."""
    g = dec.group
    orders = g.orders()
    base_rels = [[t if j == i else 0 for j in range(len(orders))]
                 for i, t in enumerate(orders) if t]
    chosen: list[tuple[int, ...]] = []
    vecs: list[list[int]] = []
    current = g
    for i, m in enumerate(mons):
        if current.is_trivial:
            break
        e = [0] * len(mons)
        e[i] = 1
        c = list(dec.coords(e))
        if not any(c):
            continue
        trial = quotient_presentation(len(orders), base_rels + vecs + [c])
        if (trial.free_rank, trial.order or 0) != (current.free_rank, current.order or 0):
            chosen.append(m)
            vecs.append(c)
            current = trial
    return chosen


def element_normal_form(s: AdditiveStructure, elem: Character) -> tuple[int, ...]:
    return s.coords(elem)


@dataclass
class AdaptedBasis:
    """A basis of the quotient given by chosen elements with declared orders."""

    structure: AdditiveStructure
    names: tuple[str, ...]
    elements: tuple[Character, ...]
    orders: tuple[int, ...]
    _map: GroupMap = field(repr=False)

    def coords(self, elem: Character) -> tuple[int, ...]:
        target = list(self.structure.coords(elem))
        g = self.structure.group
        m = self._map.matrix.to_rows()
        k = len(self.elements)
        rel_cols = [[t if j == i else 0 for j in range(g.ngens)] for i, t in enumerate(g.orders()) if t]
        rows = [m[i] + [rc[i] for rc in rel_cols] for i in range(g.ngens)]
        sol = solve_int(rows, k + len(rel_cols), target)
        if sol is None:
            raise StructuralError("element is not in the span of the basis")
        return tuple(x % o if o else x for x, o in zip(sol[:k], self.orders))

    def element(self, coords: Sequence[int]) -> Character:
        out = Character.zero(len(self.structure.presentation.names))
        for c, e in zip(coords, self.elements):
            out = out + c * e
        return out


def adapted_basis(s: AdditiveStructure, names: Sequence[str], elements: Sequence[Character],
                  orders: Sequence[int]) -> AdaptedBasis:
    """Verify that ``elements`` with ``orders`` (0 = infinite) form a basis and return it."""
    k = len(elements)
    if len(names) != k or len(orders) != k:
        raise StructuralError("names, elements and orders must have equal length")
    rels = [[o if j == i else 0 for j in range(k)] for i, o in enumerate(orders) if o]
    source = Presentation(k, IntMatrix.from_rows(rels, k))
    cols = [list(s.coords(e)) for e in elements]
    mat = IntMatrix.from_rows([[cols[j][i] for j in range(k)] for i in range(s.group.ngens)], k)
    f = GroupMap(source, s.group.presentation(), mat)
    if not f.well_formed():
        raise StructuralError("declared orders do not annihilate the elements")
    if not f.is_iso():
        raise StructuralError(f"elements do not form a basis: kernel {f.kernel()}, cokernel {f.cokernel()}")
    return AdaptedBasis(s, tuple(names), tuple(elements), tuple(orders), f)


# --------------------------------------------------------------------------
# augmentation quotients

@dataclass
class RingModel:
    """R(H) presented as Z[names]/(relations) inside a generator-level ring.

    ``group`` is a group whose generator ring contains R(H) (for a quotient by a
    central subgroup this is the cover); each name is a monomial in that
    group's generator coordinates.
    """

    group: GroupData
    names: tuple[str, ...]
    monomials: tuple[tuple[int, ...], ...]
    invertible: tuple[bool, ...]
    relations: tuple[Character, ...] = ()

    @classmethod
    def of_group(cls, g: GroupData) -> RingModel:
        spec = g.generator_spec()
        k = spec.rank
        mons = tuple(tuple(int(i == j) for j in range(k)) for i in range(k))
        return cls(g, spec.names, mons, tuple(not p for p in spec.polynomial))

    def check_relations(self) -> None:
        k = self.group.generator_spec().rank
        images = [Character.monomial(m) for m in self.monomials]
        for r in self.relations:
            if restrict(r, images) != Character.zero(k):
                raise StructuralError(f"ring relation {r.format(self.names)} does not hold")

    def rewrite_monomial(self, target: Sequence[int]) -> tuple[int, ...]:
        """Exponents in ``names`` realizing a generator-level monomial, cheapest first."""
        target = list(target)
        n = len(self.names)
        inv = [i for i in range(n) if self.invertible[i]]
        pos = [i for i in range(n) if not self.invertible[i]]
        bound = sum(abs(x) for x in target) + 2
        best = None
        for total in range(bound + 1):
            for combo in itertools.combinations_with_replacement(pos, total):
                e = [0] * n
                for i in combo:
                    e[i] += 1
                rest = [t - sum(e[i] * self.monomials[i][j] for i in pos) for j, t in enumerate(target)]
                if inv:
                    rows = [[self.monomials[i][j] for i in inv] for j in range(len(target))]
                    sol = solve_int(rows, len(inv), rest)
                    if sol is None:
                        continue
                    for i, x in zip(inv, sol):
                        e[i] = x
                elif any(rest):
                    continue
                cost = (sum(abs(x) for x in e), sum(1 for x in e if x < 0), [-x for x in e])
                if best is None or cost < best[0]:
                    best = (cost, tuple(e))
            if best is not None and best[0][0] <= total:
                break
        if best is None:
            raise StructuralError(f"monomial {target} is not in the subring")
        return best[1]

    def rewrite(self, c: Character) -> Character:
        """A generator-level character as a polynomial in ``names``."""
        out: dict[tuple[int, ...], int] = {}
        for m, v in c.terms.items():
            e = self.rewrite_monomial(m)
            out[e] = out.get(e, 0) + v
        return Character(len(self.names), out)


def augmentation_quotient(g: GroupData, h: GroupData | RingModel,
                          restriction: Sequence[Character] | Mapping[str, Character],
                          eliminable: Sequence[tuple[str, Character]] = ()) -> LaurentIdealPresentation:
    """Presentation of Z ⊗_{R(G)} R(H) = R(H)/(res(gen) - dim(gen)).

    ``restriction`` gives, for each torus coordinate of G, its image as a torus
    character of H (or, as a mapping, the image of each named generator of G).
    """
    model = h if isinstance(h, RingModel) else RingModel.of_group(h)
    hg = model.group
    if isinstance(restriction, Mapping):
        missing = [k for k in g.ring_generators if k not in restriction]
        if missing:
            raise StructuralError(f"restriction not defined on generators {missing}")
        images = {k: restriction[k] for k in g.ring_generators}
    else:
        restriction = list(restriction)
        if len(restriction) != g.spec.rank:
            raise StructuralError(f"restriction gives {len(restriction)} images for rank {g.spec.rank}")
        images = {k: restrict(ch, restriction) for k, ch in g.ring_generators.items()}
    rels = list(model.relations)
    for k, ch in g.ring_generators.items():
        rgen = hg.to_generators(images[k])
        rels.append(model.rewrite(rgen) - ch.dimension())
    return LaurentIdealPresentation(model.names, model.invertible, tuple(rels), tuple(eliminable))

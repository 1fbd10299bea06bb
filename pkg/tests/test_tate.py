import itertools
import random

import pytest
from hypothesis import given, strategies as st

from kcalc.charring import Character, conjugate
from kcalc.errors import PreconditionError, StructuralError
from kcalc.exactlin import FinAbGroup, IntMatrix
from kcalc.tate import (BousfieldCounts, InvolutiveModule, InvolutiveRing, bousfield_decompose, h_minus, h_plus,
                        kunneth_check, permutation_module, tensor_involutive)

Z2 = FinAbGroup(0, (2,))
ZERO = FinAbGroup()


def free(T):
    return InvolutiveModule.free(T)


def _unimodular(n, rng, steps=12):
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        k = rng.randint(-2, 2)
        m[i] = [x + k * y for x, y in zip(m[i], m[j])]
    return m


def _inverse_unimodular(m):
    from kcalc.exactlin import solve_int
    n = len(m)
    cols = [solve_int(m, n, [int(i == j) for i in range(n)]) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def _conjugated(module, rng):
    n = module.rank
    p = _unimodular(n, rng)
    pi = _inverse_unimodular(p)
    P, Pi = IntMatrix.from_rows(p), IntMatrix.from_rows(pi)
    return free((P @ module.T @ Pi).to_rows())


def _built(np_, nm, ns):
    """Direct sum Z_+^np + Z_-^nm + (Z^2, swap)^ns."""
    n = np_ + nm + 2 * ns
    T = [[0] * n for _ in range(n)]
    for i in range(np_):
        T[i][i] = 1
    for i in range(np_, np_ + nm):
        T[i][i] = -1
    for k in range(ns):
        i = np_ + nm + 2 * k
        T[i][i + 1] = T[i + 1][i] = 1
    return free(T)


# ---------------------------------------------------------------- h±

def test_h_examples():
    assert h_plus(free([[1]])) == Z2 and h_minus(free([[1]])) == ZERO
    assert h_plus(free([[0, 1], [1, 0]])) == ZERO and h_minus(free([[0, 1], [1, 0]])) == ZERO
    assert h_plus(free([[-1]])) == ZERO and h_minus(free([[-1]])) == Z2


def test_not_involution():
    with pytest.raises(StructuralError):
        free([[1, 1], [0, 1]])


def test_torsion_module():
    # (Z_4, -1): ker(1-t) = {0,2}, im(1+t) = 0
    m = InvolutiveModule.of(FinAbGroup(0, (4,)), [[-1]])
    assert h_plus(m) == Z2 and h_minus(m) == FinAbGroup(0, (4,)).mod(2)


def test_h_on_built_modules():
    rng = random.Random(2)
    for _ in range(40):
        a, b, c = rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 2)
        if a + b + c == 0:
            continue
        m = _conjugated(_built(a, b, c), rng)
        assert h_plus(m) == FinAbGroup(0, (2,) * a)
        assert h_minus(m) == FinAbGroup(0, (2,) * b)
        assert m.trace() == a - b


def test_unimodular_invariance():
    rng = random.Random(7)
    for _ in range(30):
        n = rng.randint(1, 5)
        base = free([[rng.choice([-1, 1]) if i == j else 0 for j in range(n)] for i in range(n)])
        m = _conjugated(base, rng)
        assert h_plus(m).order == h_plus(base).order
        assert h_minus(m).order == h_minus(base).order


def test_h_minus_vanishes_on_representation_ring_models():
    # monomial basis of R(T^r) in a box closed under w -> -w, t = conjugation
    for r, radius in ((1, 3), (2, 2), (3, 1)):
        box = list(itertools.product(range(-radius, radius + 1), repeat=r))
        index = {w: i for i, w in enumerate(box)}
        n = len(box)
        T = [[0] * n for _ in range(n)]
        for w in box:
            (img, c), = conjugate(Character.monomial(w)).terms.items()
            T[index[img]][index[w]] = c
        m = free(T)
        assert h_minus(m) == ZERO
        assert h_plus(m) == Z2
    for fixed, pairs in ((1, 0), (3, 2), (0, 4), (2, 5)):
        assert h_minus(permutation_module(fixed, pairs)) == ZERO


# ---------------------------------------------------------------- tensor and Künneth

def test_tensor_examples():
    t = tensor_involutive(free([[1]]), free([[-1]]))
    assert t.T.to_rows() == [[-1]]
    t = tensor_involutive(free([[0, 1], [1, 0]]), free([[1]]))
    assert t.T.to_rows() == [[0, 1], [1, 0]]
    t = tensor_involutive(free([[0, 1], [1, 0]]), free([[0, 1], [1, 0]]))
    assert t.rank == 4
    # direct computation: t swaps e11<->e22 and e12<->e21, so h+ of a swap pair pair is 0
    assert h_plus(t) == ZERO


def test_kunneth_examples():
    rep = kunneth_check(free([[1]]), free([[1]]))
    assert rep.ok and rep.plus_lhs == Z2 and rep.minus_lhs == ZERO
    rep = kunneth_check(free([[0, 1], [1, 0]]), free([[1]]))
    assert rep.ok and rep.plus_lhs == ZERO and rep.minus_lhs == ZERO


def test_kunneth_minus_minus_summand():
    # h- a ⊗ h- b feeds h+ of the product
    rep = kunneth_check(free([[-1]]), free([[-1]]))
    assert rep.ok and rep.plus_lhs == Z2


def test_kunneth_needs_free_first_factor():
    tors = InvolutiveModule.of(FinAbGroup(0, (2,)), [[1]])
    with pytest.raises(PreconditionError):
        kunneth_check(tors, free([[1]]))
    # torsion is fine in the second factor
    assert kunneth_check(free([[1]]), tors).ok


def _ring(T, mult, unit):
    return InvolutiveRing(free(T), tuple(tuple(tuple(c) for c in r) for r in mult), tuple(unit))


# small commutative rings with involution: (T, mult, unit)
_FACTORS = [
    ([[1]], [[[1]]], [1]),                                        # Z
    ([[0, 1], [1, 0]], [[[1, 0], [0, 0]], [[0, 0], [0, 1]]], [1, 1]),  # Z x Z, swap
    ([[1, 0], [0, -1]], [[[1, 0], [0, 1]], [[0, 1], [-1, 0]]], [1, 0]),  # Z[i], conjugation
    ([[1, 0], [0, -1]], [[[1, 0], [0, 1]], [[0, 1], [1, 0]]], [1, 0]),   # Z[x]/(x^2-1), x -> -x
    ([[1, 0], [0, -1]], [[[1, 0], [0, 1]], [[0, 1], [0, 0]]], [1, 0]),   # Z[x]/(x^2), x -> -x
    ([[1, 0, 0], [0, 0, 1], [0, 1, 0]],                           # Z[C3], x -> x^-1
     [[[1, 0, 0], [0, 1, 0], [0, 0, 1]], [[0, 1, 0], [0, 0, 1], [1, 0, 0]],
      [[0, 0, 1], [1, 0, 0], [0, 1, 0]]], [1, 0, 0]),
]


def _product_ring(parts):
    n = sum(len(p[2]) for p in parts)
    T = [[0] * n for _ in range(n)]
    mult = [[[0] * n for _ in range(n)] for _ in range(n)]
    unit = []
    off = 0
    for t, m, u in parts:
        k = len(u)
        for i in range(k):
            for j in range(k):
                T[off + i][off + j] = t[i][j]
                for c in range(k):
                    mult[off + i][off + j][off + c] = m[i][j][c]
        unit += u
        off += k
    return _ring(T, mult, unit)


def _random_ring(rng, max_rank=6):
    parts = []
    rank = 0
    while True:
        f = rng.choice(_FACTORS)
        if rank + len(f[2]) > max_rank:
            break
        parts.append(f)
        rank += len(f[2])
        if rng.random() < 0.35:
            break
    return _product_ring(parts)


def test_factor_rings_validate():
    for f in _FACTORS:
        _ring(*f)


def test_kunneth_50_random_rings():
    rng = random.Random(50)
    for _ in range(50):
        a, b = _random_ring(rng), _random_ring(rng)
        rep = kunneth_check(a, b)
        assert rep.ok, rep


def test_bad_ring_rejected():
    with pytest.raises(StructuralError):
        # x -> -x is not a ring map on Z[x]/(x^2 - x)
        _ring([[1, 0], [0, -1]], [[[1, 0], [0, 1]], [[0, 1], [0, 1]]], [1, 0])


# ---------------------------------------------------------------- Bousfield

def test_bousfield_examples():
    assert bousfield_decompose(free([[1, 0, 0], [0, 1, 0], [0, 0, -1]])) == BousfieldCounts(2, 1, 0)
    assert bousfield_decompose(free([[0, 1], [1, 0]])) == BousfieldCounts(0, 0, 1)


def test_bousfield_t_u_y_minus_u():
    # t(u) = y - u, t(y) = y: trace 0 and the eigenlattices have index 2
    m = free([[-1, 0], [1, 1]])
    assert bousfield_decompose(m) == BousfieldCounts(0, 0, 1)


def test_bousfield_rejects_torsion():
    with pytest.raises(PreconditionError):
        bousfield_decompose(InvolutiveModule.of(FinAbGroup(0, (2,)), [[1]]))


@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 2), st.integers(0, 10 ** 6))
def test_bousfield_recovers_counts(a, b, c, seed):
    if a + b + c == 0:
        return
    m = _conjugated(_built(a, b, c), random.Random(seed))
    assert bousfield_decompose(m) == BousfieldCounts(a, b, c)


@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 2), st.integers(0, 10 ** 6))
def test_tate_groups_killed_by_two(a, b, c, seed):
    if a + b + c == 0:
        return
    m = _conjugated(_built(a, b, c), random.Random(seed))
    for h in (h_plus(m), h_minus(m)):
        assert h.free_rank == 0 and all(x == 2 for x in h.torsion)

import random
from itertools import product as iproduct

import pytest
from hypothesis import given, strategies as st

from kcalc.errors import StructuralError
from kcalc.exactlin import (FinAbGroup, IntMatrix, Presentation, cokernel, group_map, image,
                            invariant_factors, kernel, quotient_presentation, smith_normal_form, solve_int)


def _det_oracle(rows):
    # Leibniz expansion, independent of the Bareiss routine
    from itertools import permutations
    n = len(rows)
    total = 0
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        p = sign
        for i in range(n):
            p *= rows[i][perm[i]]
        total += p
    return total


def _minor_gcds(rows, k):
    # d_1 ... d_k = gcd of all k x k minors: oracle for invariant factors
    from itertools import combinations
    from math import gcd
    g = 0
    for rs in combinations(range(len(rows)), k):
        for cs in combinations(range(len(rows[0])), k):
            g = gcd(g, _det_oracle([[rows[r][c] for c in cs] for r in rs]))
    return g


def _oracle_factors(rows):
    if not rows or not rows[0]:
        return []
    out, prev = [], 1
    for k in range(1, min(len(rows), len(rows[0])) + 1):
        g = _minor_gcds(rows, k)
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def _check_snf(m: IntMatrix):
    u, d, v = smith_normal_form(m)
    assert u @ m @ v == d
    assert abs(u.det()) == 1 and abs(v.det()) == 1
    diag = [d[i, i] for i in range(min(m.rows, m.cols))]
    assert all(d[i, j] == 0 for i in range(m.rows) for j in range(m.cols) if i != j)
    nz = [x for x in diag if x]
    assert diag[:len(nz)] == nz and all(x > 0 for x in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    return nz


def test_snf_identity():
    i = IntMatrix.identity(2)
    assert smith_normal_form(i) == (i, i, i)


def test_snf_diag_2_3():
    assert _check_snf(IntMatrix.from_rows([[2, 0], [0, 3]])) == [1, 6]


def test_snf_2468():
    assert _check_snf(IntMatrix.from_rows([[2, 4], [6, 8]])) == [2, 4]


def test_snf_brute_force_2x2():
    # every 2x2 matrix with small entries against the minor-gcd oracle
    for a, b, c, d in iproduct(range(-3, 4), repeat=4):
        rows = [[a, b], [c, d]]
        assert _check_snf(IntMatrix.from_rows(rows)) == _oracle_factors(rows)


def test_snf_500_random():
    rng = random.Random(12)
    for _ in range(500):
        r, c = rng.randint(0, 6), rng.randint(0, 6)
        rows = [[rng.randint(-6, 6) for _ in range(c)] for _ in range(r)]
        nz = _check_snf(IntMatrix.from_rows(rows, c))
        if r <= 4 and c <= 4:
            assert nz == _oracle_factors(rows)


def test_snf_deterministic():
    m = IntMatrix.from_rows([[3, 5, 7], [2, 4, 8], [1, 1, 9]])
    assert smith_normal_form(m) == smith_normal_form(m)


small = st.integers(-8, 8)


@given(st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r))))
def test_snf_property(rows):
    _check_snf(IntMatrix.from_rows(rows))


def test_cokernel_examples():
    z = FinAbGroup(1)
    assert cokernel(group_map(z, z, [[2]])) == FinAbGroup(0, (2,))
    assert cokernel(group_map(z, FinAbGroup(0, (5,)), [[0]])) == FinAbGroup(0, (5,))
    z2 = FinAbGroup(2)
    assert cokernel(group_map(z2, z2, [[1, 1], [1, 1]])) == FinAbGroup(1)


def test_malformed_map():
    with pytest.raises(StructuralError):
        cokernel(group_map(FinAbGroup(0, (2,)), FinAbGroup(1), [[1]]))


def test_quotient_presentation_examples():
    assert quotient_presentation(1, [[5]]) == FinAbGroup(0, (5,))
    assert quotient_presentation(2, [[5, 0], [0, 5]]) == FinAbGroup(0, (5, 5))
    assert quotient_presentation(2, [[2, 0], [0, 3]]) == FinAbGroup(0, (6,))
    assert quotient_presentation(3, []) == FinAbGroup(3)


def test_from_orders_canonical():
    assert FinAbGroup.from_orders(1, [2, 5, 0]) == FinAbGroup(2, (10,))
    assert str(FinAbGroup(2, (5, 5))) == "Z^2 + Z_5^2"
    with pytest.raises(StructuralError):
        FinAbGroup(0, (2, 3))


@given(st.integers(0, 3), st.lists(st.integers(2, 12), max_size=4))
def test_canonical_idempotent(free, orders):
    g = FinAbGroup.from_orders(free, orders)
    assert quotient_presentation(g.ngens, g.presentation().rel_rows()) == g
    assert FinAbGroup.from_json(g.to_json()) == g


def _rand_map(rng, n, m):
    return [[rng.randint(-4, 4) for _ in range(n)] for _ in range(m)]


def test_rank_nullity_and_composition():
    rng = random.Random(5)
    for _ in range(100):
        n, m, k = rng.randint(1, 4), rng.randint(1, 4), rng.randint(1, 4)
        f = group_map(FinAbGroup(n), FinAbGroup(m), _rand_map(rng, n, m))
        assert kernel(f).free_rank + image(f).free_rank == n
        g = group_map(FinAbGroup(m), FinAbGroup(k), _rand_map(rng, m, k))
        gf = f.compose(g)
        # coker(g f) by sequential quotienting: Z^k / (im g f)
        cols = [list(c) for c in gf.matrix.transpose().to_rows()]
        assert cokernel(gf) == quotient_presentation(k, [c for c in cols if any(c)])


def test_solve_int():
    assert solve_int([[2, 0], [0, 3]], 2, [4, 9]) == [2, 3]
    assert solve_int([[2]], 1, [3]) is None


def test_presentation_group():
    p = Presentation(2, IntMatrix.from_rows([[2, 4]]))
    assert p.group() == FinAbGroup(1, (2,))
    assert invariant_factors([[0, 0]], 2) == []


def test_modular_route_matches_tracked_snf():
    from kcalc.exactlin import MODULAR_MIN, diagonal, snf_rows
    rng = random.Random(11)
    n = MODULAR_MIN + 2
    for k in range(6):
        rows = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        if k % 2:
            # force some nontrivial torsion
            rows = [[x * (2 if i < 3 else 1) for x in r] for i, r in enumerate(rows)]
        u, d, v = snf_rows(rows, n)
        assert invariant_factors(rows, n) == diagonal(d)

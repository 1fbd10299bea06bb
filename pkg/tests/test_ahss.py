import pytest

from kcalc.ahss import (K, KO, CohomologyTable, build_e2, coefficient, comparison_e2, d2_ko,
                        d2_squared_zero, diagonal_assembly, e2_to_json, extensions, iter_multisets, point_table,
                        resolve_by_involution, sphere_ko_trivial, sphere_ko_trivial_lemma, sphere_ko_trivial_oracle,
                        sphere_product_table, sphere_realification_surjective, subset_sum_condition)
from kcalc.charclass import ring_from_json
from kcalc.datafiles import load
from kcalc.errors import PreconditionError
from kcalc.exactlin import FinAbGroup

Z, Z2, Z5, ZERO = FinAbGroup(1), FinAbGroup(0, (2,)), FinAbGroup(0, (5,)), FinAbGroup()

# Figure oracle for the KO spectral sequence of B^13 (rows q = 0..-13)
FREE_P = (0, 2, 4, 9, 11, 13)
CIRCLED = {(2, -1), (4, -1), (11, -1), (13, -1), (4, -2), (13, -2),
           (2, -9), (4, -9), (11, -9), (13, -9), (4, -10), (13, -10)}
INDEX_TWO = {(2, 0), (11, 0), (2, -8), (11, -8)}


def figure_e2(p, q):
    r = (-q) % 8
    if r in (0, 4):
        return Z if p in FREE_P else Z5 if p in (6, 8) else ZERO
    if r in (1, 2):
        return Z2 if p in FREE_P else ZERO
    return ZERO


@pytest.fixture(scope="module")
def b13():
    return CohomologyTable.from_ring(ring_from_json(load("b13_cohomology.json")))


@pytest.fixture(scope="module")
def ko(b13):
    return d2_ko(build_e2(b13, KO))


def test_coefficients():
    assert [coefficient(KO, -q) for q in range(8)] == [Z, Z2, Z2, ZERO, Z, ZERO, ZERO, ZERO]
    assert coefficient(KO, -8) == Z and coefficient(K, -3) == ZERO and coefficient(K, 2) == Z


def test_point_row():
    page = build_e2(point_table(), KO)
    assert [page.group(0, q) for q in range(0, -8, -1)] == [coefficient(KO, q) for q in range(0, -8, -1)]


def test_b13_e2_matches_figure(ko):
    for p in range(14):
        for q in range(0, -14, -1):
            assert ko.group(p, q) == figure_e2(p, q), (p, q)
    assert ko.group(6, 0) == Z5 and ko.group(2, -1) == Z2


def test_b13_e3_matches_figure(ko):
    vanished, index_two = set(), set()
    for p in range(14):
        for q in range(0, -14, -1):
            e = ko.e3(p, q)
            if e.vanished:
                vanished.add((p, q))
            elif e.cycle_index not in (1, None):
                assert e.cycle_index == 2 and e.group == e.e2 == Z
                index_two.add((p, q))
    assert vanished == CIRCLED
    assert index_two == INDEX_TWO


def test_d2_squared_zero(ko):
    for p in range(14):
        for q in range(0, -14, -1):
            assert d2_squared_zero(ko, p, q)


def test_k_page_has_no_d2(b13):
    k = build_e2(b13, K)
    for p in range(14):
        for q in range(0, -6, -1):
            assert k.d2(p, q).is_zero()
            assert not k.e3(p, q).changed


def test_d2_ko_needs_ko(b13):
    with pytest.raises(PreconditionError):
        d2_ko(build_e2(b13, K))


def test_s4_diagonal():
    page = build_e2(sphere_product_table([4]), KO)
    nonzero = [p for p in range(5) if not page.group(p, -p).is_trivial]
    assert nonzero == [0, 4]


def test_sq2_zero_means_e3_is_e2():
    for dims in ([2], [2, 4], [3, 5, 6]):
        page = build_e2(sphere_product_table(dims), KO)
        for p in range(sum(dims) + 1):
            for q in range(0, -9, -1):
                assert page.e3(p, q).group == page.group(p, q)
    t = CohomologyTable.from_groups("CP1xS4", 6, {0: Z, 2: Z, 4: Z, 6: Z}, sq2_zero=True)
    page = build_e2(t, KO)
    assert all(not page.e3(p, q).changed for p in range(7) for q in range(0, -9, -1))


def test_comparison_maps(b13):
    assert comparison_e2("r", b13, 2, -4).matrix.to_rows() == [[1]]
    assert comparison_e2("c", b13, 2, -4).matrix.to_rows() == [[2]]
    assert comparison_e2("t", b13, 2, -2).matrix.to_rows() == [[-1]]
    assert comparison_e2("t", b13, 2, 0).matrix.to_rows() == [[1]]
    assert comparison_e2("r", b13, 2, 0).matrix.to_rows() == [[2]]


@pytest.mark.parametrize("name", ["b13", "spheres"])
def test_comparison_commutes_with_d2(name, b13):
    table = b13 if name == "b13" else sphere_product_table([2, 3, 6])
    ko = build_e2(table, KO)
    for p in range(table.dimension + 1):
        for q in (0, -2, -4, -6, -8):
            r = comparison_e2("r", table, p, q)
            assert r.compose(ko.d2(p, q)).is_zero(), (p, q)


def test_k_assembly_and_involution(b13):
    a = diagonal_assembly(build_e2(b13, K), 0, higher_differentials_vanish=True)
    assert [g for _, g in a.pieces] == [Z, Z, Z, Z5, Z5]
    assert set(a.candidates) == {FinAbGroup(3, (5, 5)), FinAbGroup(3, (25,))}
    assert a.ambiguous
    # t2 acts by +1 on the p = 8 piece and by -1 on the p = 6 piece
    res = resolve_by_involution(a, 8, 6, 1, -1, "t acts compatibly with the filtration")
    assert res.candidates == [FinAbGroup(3, (5, 5))] and res.resolution


def test_ko_assembly(ko):
    a = diagonal_assembly(ko, 0, higher_differentials_vanish=True, reduced=True)
    expected = {Z + Z5 + x for x in (Z2, FinAbGroup(0, (2, 2)), FinAbGroup(0, (4,)))}
    assert set(a.candidates) == expected


def test_assembly_requires_flag(ko):
    with pytest.raises(PreconditionError):
        diagonal_assembly(ko, 0, higher_differentials_vanish=False)


def test_free_assembly_unique():
    page = build_e2(sphere_product_table([2, 4]), K)
    a = diagonal_assembly(page, 0, higher_differentials_vanish=True)
    assert a.candidates == [FinAbGroup(4)]


def test_extensions():
    assert set(extensions(Z2, Z2)) == {FinAbGroup(0, (2, 2)), FinAbGroup(0, (4,))}
    assert extensions(Z, Z) == [FinAbGroup(2)]
    assert set(extensions(Z2, Z)) == {Z + Z2}
    assert set(extensions(Z, Z2)) == {Z, Z + Z2}


def test_e2_json(ko):
    js = e2_to_json(ko, -1)
    assert js["theory"] == "KO" and {"p": 6, "q": 0, "group": "Z_5"} in js["entries"]


# ------------------------------------------------------------------ spheres

@pytest.mark.parametrize("dims", [[3, 3], [7, 7, 7], [5, 6], [3], [11], [14], [15]])
def test_lemma_cases_trivial(dims):
    assert sphere_ko_trivial(dims)


@pytest.mark.parametrize("dims", [[1], [2], [4], [8], [3, 5], [2, 6], [3, 3, 3], [7, 7, 7, 7]])
def test_not_trivial(dims):
    assert not sphere_ko_trivial(dims)


def test_realification_examples():
    assert not sphere_realification_surjective([2, 6])
    assert sphere_realification_surjective([5, 6])
    assert not subset_sum_condition([8])
    assert subset_sum_condition([3, 3])


def test_sphere_dims_positive():
    with pytest.raises(PreconditionError):
        sphere_ko_trivial([0, 3])


def test_paths_agree_up_to_24():
    n = 0
    for dims in iter_multisets(24):
        assert sphere_ko_trivial_lemma(dims) == sphere_ko_trivial_oracle(dims), dims
        assert sphere_realification_surjective(dims) == subset_sum_condition(dims)
        n += 1
    assert n == 7337


def test_shift_and_permutation_invariance():
    for dims in iter_multisets(10):
        base = sphere_ko_trivial(dims)
        assert sphere_ko_trivial(list(reversed(dims))) == base
        assert sphere_ko_trivial([d + 8 for d in dims]) == base
